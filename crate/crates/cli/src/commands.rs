use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use qspeed::bounds::{
    asep_bound, bhatia_davis_bound, heisenberg_limit, ksep_bound, local_generator_sep_bound,
    nonhermitian_speed_bound, witness, NormSearch, SeparabilityBound,
};
use qspeed::estimation::{
    discrimination_game, discrimination_probability, helstrom_povm, median_check,
    median_dispersion_vs_bound, median_normality_test, quantum_median_chain, sample_median,
    cramer_rao_check, LocationKind, LocationModel,
};
use qspeed::json::{parse_document, validate, Document};
use qspeed::oracle::{brute_force_max, gen_fisher_quantum, Objective, SearchConfig, MAX_DIM};
use qspeed::quantum::{
    bures_distance, fidelity, optimal_povm, qfi, schatten_distance, schatten_speed, trace_distance,
    trace_speed, PovmTarget,
};
use qspeed::{Density, Error, Family, Povm, Result, Superop};

use crate::report::{matrix, num};
use crate::{
    BoundArgs, BoundKind, Cli, Command, DistanceArgs, EstimateArgs, EstimateTask, EstimatorArg,
    ObjectiveArg, OracleArgs, PovmTargetArg, SpeedArgs, WitnessArgs, WitnessKind,
};

pub struct Outcome {
    pub report: Value,
    pub status: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, status: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    let (name, out) = match &cli.command {
        Command::Speed(a) => ("speed", Outcome::ok(speed(a, seed)?)),
        Command::Distance(a) => ("distance", Outcome::ok(distance(a)?)),
        Command::Witness(a) => ("witness", Outcome::ok(witness_cmd(a)?)),
        Command::Bound(a) => ("bound", Outcome::ok(bound(a)?)),
        Command::Estimate(a) => ("estimate", Outcome::ok(estimate(a, seed)?)),
        Command::Oracle(a) => ("oracle", Outcome::ok(oracle(a, seed)?)),
        Command::Validate { path } => ("validate", validate_cmd(path)?),
    };
    let mut report = Map::new();
    report.insert(REPORT_KEY.into(), json!(name));
    if let Value::Object(o) = out.report {
        report.extend(o);
    }
    Ok(Outcome { report: Value::Object(report), status: out.status })
}

/// Marks a document as output of this tool.
const REPORT_KEY: &str = "report";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document> {
    parse_document(&read(path)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::InvalidInput(format!("--{flag} is required here")))
}

fn family(path: &Path) -> Result<Family> {
    load(path)?.family()
}

fn density(path: &Path) -> Result<Density> {
    load(path)?.density()
}

fn generators(paths: &[impl AsRef<Path>], copies: usize) -> Result<Vec<Superop>> {
    if paths.is_empty() {
        return Err(Error::InvalidInput("at least one --generator is required".into()));
    }
    let mut out = Vec::new();
    for p in paths {
        let g = load(p.as_ref())?.generator()?;
        out.extend(std::iter::repeat_n(g, copies.max(1)));
    }
    Ok(out)
}

fn search_config(restarts: usize, seed: u64) -> SearchConfig {
    SearchConfig { restarts, seed, ..SearchConfig::default() }
}

fn povm_json(p: &Povm) -> Value {
    Value::Array(p.elements().iter().map(|e| matrix(e.matrix())).collect())
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

fn speed(a: &SpeedArgs, seed: u64) -> Result<Value> {
    let fam = family(&a.family)?;
    let f1 = trace_speed(&fam, a.theta)?;
    // a derivative leaving the support makes F2 infinite
    let f2 = match qfi(&fam, a.theta) {
        Ok(v) => v,
        Err(Error::RankDeficient) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    let sch = schatten_speed(&fam, a.theta, a.alpha)?;
    let (f_alpha, estimate) = if a.alpha == 1.0 || a.alpha == 2.0 || fam.dim() <= MAX_DIM {
        let g = gen_fisher_quantum(&fam, a.theta, a.alpha, &search_config(a.restarts, seed))?;
        (num(g.value), g.estimate)
    } else {
        (Value::Null, true)
    };
    let mut out = obj(vec![
        ("theta", num(a.theta)),
        ("alpha", num(a.alpha)),
        ("F1", num(f1)),
        ("F2", num(f2)),
        ("F_alpha", f_alpha),
        ("F_alpha_estimate", Value::Bool(estimate)),
        ("schatten_F_alpha", num(sch.fisher)),
        ("S_trace", num(0.5 * f1)),
        ("S_bures", num((f2 / 8.0).sqrt())),
        ("schatten_S_alpha", num(sch.speed)),
    ]);
    if a.povm {
        let target = match a.povm_target {
            PovmTargetArg::Trace => PovmTarget::TraceSpeed,
            PovmTargetArg::Schatten => PovmTarget::Schatten,
            PovmTargetArg::Qfi => PovmTarget::Qfi,
        };
        out["povm"] = povm_json(&optimal_povm(&fam, a.theta, target)?);
    }
    Ok(out)
}

fn distance(a: &DistanceArgs) -> Result<Value> {
    let rho = density(&a.rho)?;
    let sigma = density(&a.sigma)?;
    Ok(obj(vec![
        ("alpha", num(a.alpha)),
        ("D1", num(trace_distance(&rho, &sigma)?)),
        ("D2", num(bures_distance(&rho, &sigma)?)),
        ("schatten_D_alpha", num(schatten_distance(&rho, &sigma, a.alpha)?)),
        ("fidelity", num(fidelity(&rho, &sigma)?)),
    ]))
}

fn witness_cmd(a: &WitnessArgs) -> Result<Value> {
    let fam = family(&a.family)?;
    let bound = match a.bound {
        WitnessKind::Ksep => SeparabilityBound::KSep { k: *required(&a.k, "k")? },
        WitnessKind::Asep => SeparabilityBound::ASep(load(required(&a.partition, "partition")?)?.partition()?),
        WitnessKind::Local => SeparabilityBound::Local(generators(&a.generators, 1)?),
    };
    let r = witness(&fam, a.theta, &bound, a.alpha)?;
    Ok(obj(vec![
        ("kind", json!(r.kind)),
        ("alpha", num(r.alpha)),
        ("speed", num(r.speed)),
        ("bound", num(r.bound)),
        ("verdict", json!(r.verdict.as_str())),
    ]))
}

fn bound(a: &BoundArgs) -> Result<Value> {
    let hamiltonian = || load(required(&a.hamiltonian, "hamiltonian")?)?.hermitian::<f64>();
    let state = || density(required(&a.state, "state")?);
    Ok(match a.kind {
        BoundKind::Heisenberg => {
            let l = heisenberg_limit(&hamiltonian()?);
            obj(vec![("kind", json!("heisenberg")), ("F1", num(l.f1)), ("F2", num(l.f2))])
        }
        BoundKind::Ksep => {
            let n = *required(&a.n, "n")?;
            let k = *required(&a.k, "k")?;
            obj(vec![
                ("kind", json!("ksep")),
                ("n", json!(n)),
                ("k", json!(k)),
                ("alpha", num(a.alpha)),
                ("value", num(ksep_bound(n, k, a.alpha)?)),
            ])
        }
        BoundKind::Asep => {
            let part = load(required(&a.partition, "partition")?)?.partition()?;
            obj(vec![
                ("kind", json!("asep")),
                ("alpha", num(a.alpha)),
                ("value", num(asep_bound(&state()?, &part, a.alpha)?)),
            ])
        }
        BoundKind::Nonhermitian => {
            let gamma = load(required(&a.gamma, "gamma")?)?.hermitian::<f64>()?;
            let b = nonhermitian_speed_bound(&hamiltonian()?, &gamma)?;
            obj(vec![
                ("kind", json!("nonhermitian")),
                ("min_norm", num(b.min_norm)),
                ("r_opt", num(b.r_opt)),
                ("F1", num(b.f1)),
                ("F2", num(b.f2)),
            ])
        }
        BoundKind::Local => {
            let b = local_generator_sep_bound(&generators(&a.generators, a.copies)?, &NormSearch::default())?;
            obj(vec![
                ("kind", json!("local")),
                ("value", num(b.value)),
                ("converged", Value::Bool(b.converged)),
            ])
        }
        BoundKind::BhatiaDavis => obj(vec![
            ("kind", json!("bhatia_davis")),
            ("value", num(bhatia_davis_bound(&hamiltonian()?, &state()?)?)),
        ]),
    })
}

fn mean_estimator(xs: &mut [f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median_estimator(xs: &mut [f64]) -> f64 {
    sample_median(xs)
}

fn to_value<S: serde::Serialize>(s: &S) -> Value {
    round_tree(serde_json::to_value(s).expect("report serialises"))
}

/// Apply the output rounding to every number of a serialised report.
fn round_tree(v: Value) -> Value {
    match v {
        Value::Number(n) => n.as_f64().filter(|_| !n.is_u64() && !n.is_i64()).map_or(Value::Number(n), num),
        Value::Array(a) => Value::Array(a.into_iter().map(round_tree).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, round_tree(x))).collect()),
        other => other,
    }
}

fn estimate(a: &EstimateArgs, seed: u64) -> Result<Value> {
    let model = || -> Result<LocationModel> { LocationModel::new(a.model.parse::<LocationKind>()?, a.scale) };
    let estimator: qspeed::estimation::Estimator = match a.estimator {
        EstimatorArg::Mean => &mean_estimator,
        EstimatorArg::Median => &median_estimator,
    };
    let (task, body) = match a.task {
        EstimateTask::Discrimination => {
            let rho = density(required(&a.rho, "rho")?)?;
            let sigma = density(required(&a.sigma, "sigma")?)?;
            let povm = match &a.povm {
                Some(p) => load(p)?.povm()?,
                None => helstrom_povm(&rho, &sigma)?,
            };
            let r = discrimination_game(&rho, &sigma, &povm, a.trials, seed)?;
            let mut v = to_value(&r);
            v["optimum"] = num(discrimination_probability(&rho, &sigma)?);
            ("discrimination", v)
        }
        EstimateTask::Median => ("median", to_value(&median_dispersion_vs_bound(&model()?, a.theta, a.m, a.trials, seed)?)),
        EstimateTask::MedianCheck => (
            "median_check",
            to_value(&median_check(&model()?, estimator, a.theta, a.trials, a.m, seed)?),
        ),
        EstimateTask::Normality => (
            "normality",
            to_value(&median_normality_test(&model()?, a.theta, a.m, a.trials, seed)?),
        ),
        EstimateTask::CramerRao => (
            "cramer_rao",
            to_value(&cramer_rao_check(&model()?, a.theta, estimator, a.m, a.trials, seed)?),
        ),
        EstimateTask::QuantumMedian => {
            let fam = family(required(&a.family, "family")?)?;
            ("quantum_median", to_value(&quantum_median_chain(&fam, a.theta, a.m, a.trials, seed)?))
        }
    };
    let mut out = obj(vec![("task", json!(task)), ("seed", json!(seed))]);
    if let Value::Object(o) = body {
        out.as_object_mut().expect("object").extend(o);
    }
    Ok(out)
}

fn oracle(a: &OracleArgs, seed: u64) -> Result<Value> {
    let fam = family(&a.family)?;
    let partner = match a.objective {
        ObjectiveArg::Dist | ObjectiveArg::SchattenDist => Some(density(required(&a.partner, "partner")?)?),
        _ => None,
    };
    let (objective, name) = match (a.objective, &partner) {
        (ObjectiveArg::Fisher, _) => (Objective::GenFisher, "fisher"),
        (ObjectiveArg::SchattenFisher, _) => (Objective::SchattenFisher, "schatten_fisher"),
        (ObjectiveArg::Dist, Some(p)) => (Objective::Dist(p), "dist"),
        (ObjectiveArg::SchattenDist, Some(p)) => (Objective::SchattenDist(p), "schatten_dist"),
        _ => unreachable!("partner loaded for distance objectives"),
    };
    let res = brute_force_max(&fam, a.theta, objective, a.alpha, &search_config(a.restarts, seed))?;
    let closed = match objective {
        Objective::GenFisher if a.alpha == 1.0 => Some(trace_speed(&fam, a.theta)?),
        Objective::GenFisher if a.alpha == 2.0 => Some(qfi(&fam, a.theta)?),
        Objective::GenFisher => None,
        Objective::SchattenFisher => Some(schatten_speed(&fam, a.theta, a.alpha)?.fisher),
        Objective::Dist(p) if a.alpha == 1.0 => Some(trace_distance(&fam.density_at(a.theta)?, p)?),
        Objective::Dist(p) if a.alpha == 2.0 => Some(bures_distance(&fam.density_at(a.theta)?, p)?),
        Objective::Dist(_) => None,
        Objective::SchattenDist(p) => Some(schatten_distance(&fam.density_at(a.theta)?, p, a.alpha)?),
    };
    Ok(obj(vec![
        ("objective", json!(name)),
        ("theta", num(a.theta)),
        ("alpha", num(a.alpha)),
        ("brute_force", num(res.value)),
        ("closed_form", closed.map_or(Value::Null, num)),
        ("discrepancy", closed.map_or(Value::Null, |c| num((res.value - c).abs()))),
        ("converged", Value::Bool(res.converged)),
        ("restarts", json!(a.restarts)),
    ]))
}

fn validate_cmd(path: &Path) -> Result<Outcome> {
    let text = read(path)?;
    // reports written by this tool are accepted as they are
    if let Ok(Value::Object(o)) = serde_json::from_str::<Value>(&text) {
        if o.contains_key(REPORT_KEY) {
            return Ok(Outcome::ok(obj(vec![
                ("type", json!("report")),
                ("valid", Value::Bool(true)),
                ("diagnostics", Value::Array(vec![])),
            ])));
        }
    }
    let doc = parse_document(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let diags = validate(&doc);
    let list = diags
        .iter()
        .map(|d| {
            obj(vec![
                ("path", json!(d.path)),
                ("check", json!(d.check)),
                ("magnitude", num(d.magnitude)),
                ("message", json!(d.message)),
            ])
        })
        .collect();
    Ok(Outcome {
        status: if diags.is_empty() { 0 } else { 2 },
        report: obj(vec![
            ("type", json!(doc.type_name())),
            ("valid", Value::Bool(diags.is_empty())),
            ("diagnostics", Value::Array(list)),
        ]),
    })
}

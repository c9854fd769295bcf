use serde::Serialize;

use crate::classical::gen_fisher;
use crate::error::{Error, Result};
use crate::quantum::{induced_parametric, qfi, ParametricFamily, Povm};

use super::median::{replicas, Estimator};
use super::model::{model_fisher, ContinuousModel};
use super::stats::{mean, variance};

/// Fewest trials accepted; batches of this size / [`BATCHES`] keep the convergence test meaningful.
pub const MIN_CR_TRIALS: usize = 1000;
/// Number of batches used to judge whether the variance estimate settles.
pub const BATCHES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CramerRaoReport {
    pub mean: f64,
    pub variance: f64,
    /// Standard error of `variance` from the fourth central moment.
    pub stderr: f64,
    /// `1/(m f₂)`
    pub bound: f64,
    /// `1/(m F₂)` for quantum families.
    pub quantum_bound: Option<f64>,
    pub m: usize,
    pub trials: usize,
    /// Mean differs from `θ` by more than three standard errors.
    pub biased: bool,
    /// Batch variances agree with each other.
    pub converged: bool,
    /// `variance ≥ bound − 3·stderr`; absent when nothing is asserted.
    pub satisfied: Option<bool>,
}

/// Summary of estimates `reps` of `θ` against `1/(m f₂)`.
pub fn cramer_rao_from_replicas(reps: &[f64], theta: f64, m: usize, f2: f64) -> Result<CramerRaoReport> {
    let trials = reps.len();
    if trials < MIN_CR_TRIALS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_CR_TRIALS} trials, got {trials}")));
    }
    let mu = mean(reps);
    let var = variance(reps);
    let n = trials as f64;
    let m4 = reps.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / n;
    let stderr = ((m4 - var * var).max(0.0) / n).sqrt().max(f64::MIN_POSITIVE);
    let biased = (mu - theta).abs() > 3.0 * (var / n).sqrt();

    let b = trials / BATCHES;
    let batch_vars: Vec<f64> = reps.chunks_exact(b).map(variance).collect();
    let bm = mean(&batch_vars);
    let cv = variance(&batch_vars).sqrt() / bm;
    // chi-square spread of a Gaussian batch variance is √(2/(b−1)); allow four times that
    let converged = bm.is_finite() && cv <= 4.0 * (2.0 / (b as f64 - 1.0)).sqrt();

    let bound = if f2 > 0.0 { 1.0 / (m as f64 * f2) } else { f64::INFINITY };
    let satisfied = (!biased && converged && bound.is_finite()).then_some(var >= bound - 3.0 * stderr);
    Ok(CramerRaoReport {
        mean: mu,
        variance: var,
        stderr,
        bound,
        quantum_bound: None,
        m,
        trials,
        biased,
        converged,
        satisfied,
    })
}

/// Monte Carlo variance of `estimator` on `m` draws from `model` against `1/(m f₂)`.
pub fn cramer_rao_check(
    model: &dyn ContinuousModel,
    theta: f64,
    estimator: Estimator,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<CramerRaoReport> {
    let f2 = model_fisher(model, theta, 2.0)?;
    cramer_rao_from_replicas(&replicas(model, estimator, theta, m, trials, seed)?, theta, m, f2)
}

/// Quantum variant: outcomes of `povm` on `ρ(θ)`, estimator applied to outcome indices.
pub fn cramer_rao_check_family(
    fam: &ParametricFamily<f64>,
    povm: &Povm<f64>,
    theta: f64,
    estimator: Estimator,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<CramerRaoReport> {
    let d = induced_parametric(fam, theta, povm)?;
    let f2 = gen_fisher(&d, 2.0)?;
    let cdf: Vec<f64> = d
        .weights()
        .iter()
        .scan(0.0, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let outcomes = OutcomeModel { cdf };
    let reps = replicas(&outcomes, estimator, theta, m, trials, seed)?;
    let mut report = cramer_rao_from_replicas(&reps, theta, m, f2)?;
    let big_f = qfi(fam, theta)?;
    report.quantum_bound = Some(if big_f > 0.0 { 1.0 / (m as f64 * big_f) } else { f64::INFINITY });
    Ok(report)
}

/// Draws outcome indices at a fixed `θ`; only sampling is meaningful.
struct OutcomeModel {
    cdf: Vec<f64>,
}

impl ContinuousModel for OutcomeModel {
    fn density(&self, _x: f64, _theta: f64) -> f64 {
        0.0
    }

    fn sample(&self, _theta: f64, rng: &mut dyn rand::RngCore) -> f64 {
        let u: f64 = rand::Rng::random(rng);
        self.cdf.iter().position(|&c| u < c).unwrap_or(self.cdf.len() - 1) as f64
    }
}

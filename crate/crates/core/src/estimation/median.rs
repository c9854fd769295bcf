use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::classical::gen_fisher;
use crate::error::{Error, Result};
use crate::numeric::stream_rng;
use crate::quantum::{induced_parametric, optimal_povm, trace_speed, ParametricFamily, Povm, PovmTarget};

use super::model::{model_fisher, ContinuousModel};
use super::stats::{kde_at, ks_p_value, ks_statistic, sample_median, silverman_bandwidth, variance};

/// Maps one sample of size `m` to an estimate; the slice may be reordered.
pub type Estimator<'a> = &'a (dyn Fn(&mut [f64]) -> f64 + Sync);

/// Fewest trials for which a 3σ binomial band is narrower than ±¼.
pub const MIN_TRIALS: usize = 36;

/// One estimate per trial, trial `t` drawing from stream `t` of `seed`.
pub fn replicas(
    model: &dyn ContinuousModel,
    estimator: Estimator,
    theta: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if m == 0 || trials == 0 {
        return Err(Error::InvalidParameter("need m >= 1 and trials >= 1".into()));
    }
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let mut xs: Vec<f64> = (0..m).map(|_| model.sample(theta, &mut rng)).collect();
            estimator(&mut xs)
        })
        .collect())
}

/// Dispersion measured against its lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimationResult {
    pub dispersion: f64,
    pub bound: f64,
    pub stderr: f64,
    pub m: usize,
    pub trials: usize,
    /// `dispersion ≥ bound − 3·stderr`
    pub satisfied: bool,
}

impl EstimationResult {
    fn new(dispersion: f64, bound: f64, stderr: f64, m: usize, trials: usize) -> Self {
        Self {
            dispersion,
            bound,
            stderr,
            m,
            trials,
            satisfied: dispersion >= bound - 3.0 * stderr,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MedianCheck {
    /// Fraction of estimates below `θ`, ties counted ½.
    pub fraction: f64,
    /// `½/√trials`, the binomial standard error under median-unbiasedness.
    pub stderr: f64,
    pub z: f64,
    /// `|fraction − ½| ≤ 3·stderr`
    pub balanced: bool,
    pub m: usize,
    pub trials: usize,
}

/// Tally of `θ_est < θ` (ties ½) over `estimates`.
pub fn median_balance(estimates: &[f64], theta: f64, m: usize) -> Result<MedianCheck> {
    let trials = estimates.len();
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "{trials} trials cannot resolve a 3 sigma band; need at least {MIN_TRIALS}"
        )));
    }
    let score: f64 = estimates
        .iter()
        .map(|&e| if e < theta { 1.0 } else if e == theta { 0.5 } else { 0.0 })
        .sum();
    let fraction = score / trials as f64;
    let stderr = 0.5 / (trials as f64).sqrt();
    let z = (fraction - 0.5) / stderr;
    Ok(MedianCheck {
        fraction,
        stderr,
        z,
        balanced: z.abs() <= 3.0,
        m,
        trials,
    })
}

/// Empirical check that `θ` is the median of the estimator's distribution.
pub fn median_check(
    model: &dyn ContinuousModel,
    estimator: Estimator,
    theta: f64,
    trials: usize,
    m: usize,
    seed: u64,
) -> Result<MedianCheck> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "{trials} trials cannot resolve a 3 sigma band; need at least {MIN_TRIALS}"
        )));
    }
    median_balance(&replicas(model, estimator, theta, m, trials, seed)?, theta, m)
}

fn median_estimator(xs: &mut [f64]) -> f64 {
    sample_median(xs)
}

/// Sample-median dispersion `1/(2g(θ|θ))` against `1/f₁`.
///
/// `g` is a Gaussian kernel density of the median replicas. For `m > 1` the replicas are
/// asymptotically normal, and the per-event dispersion is `√m·σ_rep = √m/(√(2π) g)`.
pub fn median_dispersion_vs_bound(
    model: &dyn ContinuousModel,
    theta: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<EstimationResult> {
    let f1 = model_fisher(model, theta, 1.0)?;
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_TRIALS} trials")));
    }
    let reps = replicas(model, &median_estimator, theta, m, trials, seed)?;
    let h = silverman_bandwidth(&reps);
    let g = kde_at(&reps, theta, h);
    if !(g > 0.0) {
        return Err(Error::NumericalConsistency("kernel density vanished at theta".into()));
    }
    let dispersion = if m == 1 {
        0.5 / g
    } else {
        (m as f64).sqrt() / ((2.0 * PI).sqrt() * g)
    };
    // Var ĝ ≈ g R(K)/(n h), R(K) = 1/(2√π) for the Gaussian kernel
    let se_g = (g / (2.0 * PI.sqrt() * trials as f64 * h)).sqrt();
    let bound = if f1 > 0.0 { 1.0 / f1 } else { f64::INFINITY };
    Ok(EstimationResult::new(dispersion, bound, dispersion * se_g / g, m, trials))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub p_value: f64,
    /// `p_value > 0.01`
    pub passed: bool,
}

/// Kolmogorov–Smirnov test of sample-median replicas against `N(θ, 1/(4m p(θ|θ)²))`.
pub fn median_normality_test(
    model: &dyn ContinuousModel,
    theta: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<KsReport> {
    let p = model.density(theta, theta);
    if !(p > 0.0) {
        return Err(Error::Undefined("density vanishes at the median".into()));
    }
    let sd = 0.5 / (p * (m as f64).sqrt());
    let normal = Normal::new(theta, sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let reps = replicas(model, &median_estimator, theta, m, trials, seed)?;
    let statistic = ks_statistic(&reps, |x| normal.cdf(x));
    let p_value = ks_p_value(statistic, reps.len());
    Ok(KsReport {
        statistic,
        p_value,
        passed: p_value > 0.01,
    })
}

/// `1/F₁` with `F₁` the trace speed; `+∞` when the family is stationary at `θ`.
pub fn quantum_median_bound(fam: &ParametricFamily<f64>, theta: f64) -> Result<f64> {
    let f1 = trace_speed(fam, theta)?;
    Ok(if f1 > 0.0 { 1.0 / f1 } else { f64::INFINITY })
}

/// [`quantum_median_bound`] together with the measurement attaining it.
pub fn quantum_median_povm(fam: &ParametricFamily<f64>, theta: f64) -> Result<(f64, Povm<f64>)> {
    Ok((quantum_median_bound(fam, theta)?, optimal_povm(fam, theta, PovmTarget::TraceSpeed)?))
}

/// `1/f₁` of the outcome distribution of `povm`; never below [`quantum_median_bound`].
pub fn classical_median_bound(fam: &ParametricFamily<f64>, theta: f64, povm: &Povm<f64>) -> Result<f64> {
    let f1 = gen_fisher(&induced_parametric(fam, theta, povm)?, 1.0)?;
    Ok(if f1 > 0.0 { 1.0 / f1 } else { f64::INFINITY })
}

/// Median chain for a quantum family: measure with the trace-speed optimal POVM, merge the
/// outcomes with `p'_x > 0`, and invert the linearised frequency of that event.
///
/// The replicas live on a lattice, so the dispersion is `√m` times their standard deviation.
/// It reaches `1/F₁` when the merged event has probability ½, as for pure states.
pub fn quantum_median_chain(
    fam: &ParametricFamily<f64>,
    theta: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<EstimationResult> {
    if m == 0 || trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!("need m >= 1 and at least {MIN_TRIALS} trials")));
    }
    let (bound, povm) = quantum_median_povm(fam, theta)?;
    let d = induced_parametric(fam, theta, &povm)?;
    let (mut p, mut slope) = (0.0, 0.0);
    for (&w, &dw) in d.weights().iter().zip(d.derivative()) {
        if dw > 0.0 {
            p += w;
            slope += dw;
        }
    }
    if !(slope > 0.0) {
        return Err(Error::Undefined("family is stationary at theta".into()));
    }
    let reps: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let k = (0..m).filter(|_| rng.random::<f64>() < p).count();
            theta + (k as f64 / m as f64 - p) / slope
        })
        .collect();
    let dispersion = ((m as f64) * variance(&reps)).sqrt();
    let stderr = dispersion / (2.0 * (trials as f64 - 1.0)).sqrt();
    Ok(EstimationResult::new(dispersion, bound, stderr, m, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::LocationModel;
    use crate::estimation::stats::mean;

    #[test]
    fn constant_estimator_is_exactly_balanced() {
        let g = LocationModel::gaussian(1.0).unwrap();
        let c = median_check(&g, &|_: &mut [f64]| 0.3, 0.3, 100, 5, 1).unwrap();
        assert_eq!(c.fraction, 0.5);
        assert!(c.balanced);
        assert!(median_check(&g, &|_: &mut [f64]| 0.3, 0.3, 10, 5, 1).is_err());
    }

    #[test]
    fn cauchy_median_is_unbiased() {
        let c = LocationModel::cauchy(1.0).unwrap();
        let r = median_check(&c, &median_estimator, 0.0, 4000, 11, 3).unwrap();
        assert!(r.balanced, "{r:?}");
    }

    #[test]
    fn skewed_mean_is_median_biased() {
        let e = LocationModel::shifted_exponential(1.0).unwrap();
        // the mean of θ + Exp(1) draws has median θ + m⁻¹·(Gamma median) < θ + 1
        let est = |xs: &mut [f64]| mean(xs) - 1.0;
        let r = median_check(&e, &est, 0.0, 4000, 3, 9).unwrap();
        assert!(!r.balanced, "{r:?}");
    }

    #[test]
    fn single_sample_dispersion() {
        let g = LocationModel::gaussian(1.0).unwrap();
        let r = median_dispersion_vs_bound(&g, 0.0, 1, 40_000, 2).unwrap();
        let exact = 0.5 * (2.0 * PI).sqrt();
        assert!((r.dispersion - exact).abs() < 0.05 * exact, "{r:?}");
        assert!(r.satisfied && r.stderr > 0.0);
    }
}

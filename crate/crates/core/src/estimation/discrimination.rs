use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{jordan_hahn, DensityMatrix, HermitianOperator};
use crate::numeric::stream_rng;
use crate::quantum::{induced_dist, trace_distance, Povm};

/// `(1 + D₁(ρ, σ))/2`, the best single-shot success probability for equal priors.
pub fn discrimination_probability(rho: &DensityMatrix<f64>, sigma: &DensityMatrix<f64>) -> Result<f64> {
    Ok(0.5 * (1.0 + trace_distance(rho, sigma)?))
}

/// Two-outcome measurement `{E₊, 𝕀 − E₊}` with `E₊` the projector onto the positive part of `ρ − σ`.
pub fn helstrom_povm(rho: &DensityMatrix<f64>, sigma: &DensityMatrix<f64>) -> Result<Povm<f64>> {
    rho.matrix().ensure_same_dim(sigma.matrix())?;
    let diff = rho.hermitian().sub(sigma.hermitian());
    let plus = jordan_hahn(&diff).positive_projector;
    let minus = HermitianOperator::identity(rho.dim()).sub(&plus);
    Povm::new(vec![plus, minus])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscriminationReport {
    pub rate: f64,
    /// Binomial standard error of `rate`.
    pub stderr: f64,
    pub trials: usize,
}

fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

/// Monte Carlo guessing game with equal priors: outcome `x` is assigned to `ρ` when
/// `p_ρ(x) ≥ p_σ(x)` and to `σ` otherwise.
pub fn discrimination_game(
    rho: &DensityMatrix<f64>,
    sigma: &DensityMatrix<f64>,
    povm: &Povm<f64>,
    trials: usize,
    seed: u64,
) -> Result<DiscriminationReport> {
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let p = induced_dist(rho, povm)?;
    let q = induced_dist(sigma, povm)?;
    let guess_rho: Vec<bool> = p.weights().iter().zip(q.weights()).map(|(a, b)| a >= b).collect();
    let cumulative = |w: &[f64]| {
        w.iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect::<Vec<_>>()
    };
    let (cp, cq) = (cumulative(p.weights()), cumulative(q.weights()));
    let wins: usize = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let first: bool = rng.random();
            let u: f64 = rng.random();
            let x = if first { draw(&cp, u) } else { draw(&cq, u) };
            usize::from(guess_rho[x] == first)
        })
        .sum();
    let rate = wins as f64 / trials as f64;
    Ok(DiscriminationReport {
        rate,
        stderr: (rate * (1.0 - rate) / trials as f64).sqrt().max(0.5 / trials as f64),
        trials,
    })
}

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::classical::p_floor;
use crate::error::{Error, Result};
use crate::matcore::{check_order, ComplexMatrix, DensityMatrix};
use crate::numeric::{golden_section_min, stream_rng};
use crate::quantum::{ParametricFamily, Povm};
use crate::scalar::C;

use super::random::random_unitary;

/// Largest Hilbert-space dimension the search accepts.
pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Sweeps over all coordinate pairs per restart.
    pub max_iter: usize,
    /// Relative improvement per sweep below which a restart stops.
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iter: 2000,
            step_tol: 1e-13,
            seed: 0x0bad_5eed,
        }
    }
}

/// Classical quantity maximised over measurements.
#[derive(Clone, Copy, Debug)]
pub enum Objective<'a> {
    /// `f_α` of the outcome distribution of `ρ(θ)`.
    GenFisher,
    /// `𝖿_α`
    SchattenFisher,
    /// `d_α` between the outcome distributions of `ρ(θ)` and a partner state.
    Dist(&'a DensityMatrix<f64>),
    /// `𝖽_α` against a partner state.
    SchattenDist(&'a DensityMatrix<f64>),
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: f64,
    pub povm: Povm<f64>,
    /// The winning restart stopped on the improvement criterion.
    pub converged: bool,
}

#[derive(Clone, Copy)]
enum Score {
    Fisher(f64),
    Schatten(f64),
    Dist(f64),
    SchattenDist(f64),
}

impl Score {
    /// `x_k = ⟨u_k|A|u_k⟩`, `y_k = ⟨u_k|B|u_k⟩`; outcomes with `x_k` below the floor are dropped
    /// from `f_α`.
    fn eval(self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Score::Fisher(a) => {
                let floor = p_floor::<f64>();
                x.iter()
                    .zip(y)
                    .filter(|(p, _)| **p > floor)
                    .map(|(p, d)| if a == 1.0 { d.abs() } else { p * (d.abs() / p).powf(a) })
                    .sum()
            }
            Score::Schatten(a) => power_sum(y.iter().copied(), a, 1.0),
            Score::Dist(a) => {
                let r = 1.0 / a;
                let diffs = x.iter().zip(y).map(|(p, q)| p.max(0.0).powf(r) - q.max(0.0).powf(r));
                power_sum(diffs, a, 0.5).min(1.0)
            }
            Score::SchattenDist(a) => power_sum(x.iter().zip(y).map(|(p, q)| p - q), a, 0.5).min(1.0),
        }
    }
}

/// `(w Σ|v|^α)^{1/α}`, the maximum of `|v|` at `α = ∞`.
fn power_sum(v: impl Iterator<Item = f64>, alpha: f64, w: f64) -> f64 {
    if alpha.is_infinite() {
        return v.fold(0.0, |m, d| m.max(d.abs()));
    }
    (w * v.map(|d| d.abs().powf(alpha)).sum::<f64>()).powf(1.0 / alpha)
}

fn diag_in(u: &ComplexMatrix<f64>, a: &ComplexMatrix<f64>) -> Vec<f64> {
    (0..u.dim()).map(|k| a.expectation(&u.column(k)).re).collect()
}

/// Compression of `A` to columns `p, q` of `U`: `(⟨p|A|p⟩, ⟨q|A|q⟩, ⟨p|A|q⟩)`.
fn compress(u: &ComplexMatrix<f64>, a: &ComplexMatrix<f64>, p: usize, q: usize) -> (f64, f64, C<f64>) {
    let up = u.column(p);
    let uq = u.column(q);
    let aq = a.mul_vec(&uq);
    let pq = crate::matcore::inner(&up, &aq);
    (a.expectation(&up).re, crate::matcore::inner(&uq, &aq).re, pq)
}

/// Diagonal entries after `u_p ← c u_p + s e^{iχ} u_q`, `u_q ← −s e^{−iχ} u_p + c u_q`.
fn rotated((r00, r11, r01): (f64, f64, C<f64>), phi: f64, chi: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    let t = (C::from_polar(1.0, chi) * r01).re;
    let xp = c * c * r00 + s * s * r11 + 2.0 * c * s * t;
    (xp, r00 + r11 - xp)
}

fn apply_rotation(u: &mut ComplexMatrix<f64>, p: usize, q: usize, phi: f64, chi: f64) {
    let (s, c) = phi.sin_cos();
    let e = C::from_polar(1.0, chi);
    for i in 0..u.dim() {
        let a = u[(i, p)];
        let b = u[(i, q)];
        u[(i, p)] = a * c + b * e * s;
        u[(i, q)] = -(a * e.conj() * s) + b * c;
    }
}

const PHI_GRID: usize = 24;
const CHI_GRID: usize = 12;
const ANGLE_TOL: f64 = 1e-10;

/// Best rotation of the `(p, q)` pair: 2-D grid, then alternating golden-section refinement.
fn optimise_pair(
    score: Score,
    x: &mut [f64],
    y: &mut [f64],
    ra: (f64, f64, C<f64>),
    rb: (f64, f64, C<f64>),
    p: usize,
    q: usize,
) -> (f64, f64, f64) {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    let mut value = |phi: f64, chi: f64| {
        let (a0, a1) = rotated(ra, phi, chi);
        let (b0, b1) = rotated(rb, phi, chi);
        xs[p] = a0;
        xs[q] = a1;
        ys[p] = b0;
        ys[q] = b1;
        score.eval(&xs, &ys)
    };
    let mut best = (value(0.0, 0.0), 0.0, 0.0);
    for i in 0..PHI_GRID {
        let phi = -PI / 2.0 + PI * i as f64 / PHI_GRID as f64;
        for j in 0..CHI_GRID {
            let chi = -PI + 2.0 * PI * j as f64 / CHI_GRID as f64;
            let v = value(phi, chi);
            if v > best.0 {
                best = (v, phi, chi);
            }
        }
    }
    let (mut dphi, mut dchi) = (PI / PHI_GRID as f64, 2.0 * PI / CHI_GRID as f64);
    for _ in 0..3 {
        let (v0, phi0, chi0) = best;
        let (phi, v) = golden_section_min(&mut |t| -value(t, chi0), phi0 - dphi, phi0 + dphi, ANGLE_TOL);
        if -v > best.0 {
            best = (-v, phi, chi0);
        }
        let phi1 = best.1;
        let (chi, v) = golden_section_min(&mut |t| -value(phi1, t), chi0 - dchi, chi0 + dchi, ANGLE_TOL);
        if -v > best.0 {
            best = (-v, phi1, chi);
        }
        if best.0 - v0 <= f64::EPSILON * best.0.abs() {
            break;
        }
        dphi *= 0.5;
        dchi *= 0.5;
    }
    let (v, phi, chi) = best;
    let (a0, a1) = rotated(ra, phi, chi);
    let (b0, b1) = rotated(rb, phi, chi);
    x[p] = a0;
    x[q] = a1;
    y[p] = b0;
    y[q] = b1;
    (v, phi, chi)
}

fn ascend(
    score: Score,
    a: &ComplexMatrix<f64>,
    b: &ComplexMatrix<f64>,
    mut u: ComplexMatrix<f64>,
    cfg: &SearchConfig,
) -> (f64, ComplexMatrix<f64>, bool) {
    let n = u.dim();
    let mut x = diag_in(&u, a);
    let mut y = diag_in(&u, b);
    let mut value = score.eval(&x, &y);
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let before = value;
        for p in 0..n {
            for q in (p + 1)..n {
                let ra = compress(&u, a, p, q);
                let rb = compress(&u, b, p, q);
                let (v, phi, chi) = optimise_pair(score, &mut x, &mut y, ra, rb, p, q);
                if v > value {
                    apply_rotation(&mut u, p, q, phi, chi);
                    value = v;
                }
            }
        }
        // refresh against accumulated rounding
        x = diag_in(&u, a);
        y = diag_in(&u, b);
        value = score.eval(&x, &y);
        if value - before <= cfg.step_tol * value.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    (value, u, converged)
}

/// Maximise a classical quantity over rank-one projective measurements on `ρ(θ)`.
///
/// Restarts begin from Haar-random bases and are refined by Givens-rotation coordinate
/// ascent; the best restart (lowest index on ties) is returned.
pub fn brute_force_max(
    fam: &ParametricFamily<f64>,
    theta: f64,
    objective: Objective,
    alpha: f64,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    check_order(alpha)?;
    let dim = fam.dim();
    if dim > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "brute-force search is limited to dimension {MAX_DIM}, got {dim}"
        )));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let point = fam.at(theta)?;
    let (score, b) = match objective {
        Objective::GenFisher => {
            if alpha.is_infinite() {
                return Err(Error::InvalidParameter("f_alpha needs finite alpha".into()));
            }
            (Score::Fisher(alpha), point.derivative.matrix().clone())
        }
        Objective::SchattenFisher => (Score::Schatten(alpha), point.derivative.matrix().clone()),
        Objective::Dist(sigma) | Objective::SchattenDist(sigma) => {
            point.state.matrix().ensure_same_dim(sigma.matrix())?;
            if alpha.is_infinite() && matches!(objective, Objective::Dist(_)) {
                return Err(Error::InvalidParameter("d_alpha needs finite alpha".into()));
            }
            let s = match objective {
                Objective::Dist(_) => Score::Dist(alpha),
                _ => Score::SchattenDist(alpha),
            };
            (s, sigma.matrix().clone())
        }
    };
    let a = point.state.matrix().clone();
    let runs: Vec<(f64, ComplexMatrix<f64>, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(cfg.seed, r as u64);
            ascend(score, &a, &b, random_unitary(dim, &mut rng), cfg)
        })
        .collect();
    let (value, u, converged) = runs
        .into_iter()
        .reduce(|best, run| if run.0 > best.0 { run } else { best })
        .expect("at least one restart");
    Ok(SearchResult {
        value,
        povm: Povm::from_basis(&u)?,
        converged,
    })
}

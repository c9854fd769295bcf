//! Classical distances, generalized Fisher information and statistical speeds.

use crate::error::{Error, Result};
use crate::matcore::check_order;
use crate::scalar::Real;

/// Probabilities below this are treated as zero in Fisher-type sums.
pub fn p_floor<T: Real>() -> T {
    T::psd_rel()
}

/// Probability vector: nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbDist<T: Real> {
    weights: Vec<T>,
}

impl<T: Real> ProbDist<T> {
    /// Validates normalisation; entries in `[-p_floor, 0)` are clipped to zero.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("probability vector is empty".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("probability vector has non-finite entries".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, &w)| w < -p_floor::<T>()) {
            return Err(Error::InvalidInput(format!("negative probability {w} at index {i}")));
        }
        let total: T = weights.iter().copied().sum();
        let dev = (total - T::one()).abs();
        if !(dev <= T::herm_tol()) {
            return Err(Error::TraceDeviation { deviation: dev.as_f64() });
        }
        Ok(Self {
            weights: weights.into_iter().map(|w| w.max(T::zero())).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![T::one() / T::from_usize_lossy(n); n],
        }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Distribution together with its derivative `dp/dθ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricDist<T: Real> {
    dist: ProbDist<T>,
    derivative: Vec<T>,
}

impl<T: Real> ParametricDist<T> {
    pub fn new(dist: ProbDist<T>, derivative: Vec<T>) -> Result<Self> {
        if derivative.len() != dist.len() {
            return Err(Error::DimensionMismatch {
                expected: dist.len(),
                found: derivative.len(),
            });
        }
        if derivative.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidInput("derivative has non-finite entries".into()));
        }
        let drift: T = derivative.iter().copied().sum();
        if !(drift.abs() <= T::herm_tol()) {
            return Err(Error::InvalidInput(format!(
                "derivative must sum to zero, sums to {drift:e}"
            )));
        }
        Ok(Self { dist, derivative })
    }

    pub fn from_vecs(weights: Vec<T>, derivative: Vec<T>) -> Result<Self> {
        Self::new(ProbDist::new(weights)?, derivative)
    }

    pub fn dist(&self) -> &ProbDist<T> {
        &self.dist
    }

    pub fn weights(&self) -> &[T] {
        self.dist.weights()
    }

    pub fn derivative(&self) -> &[T] {
        &self.derivative
    }

    /// Joint distribution of two independent outcomes sharing the parameter.
    pub fn product(&self, other: &Self) -> Self {
        let (p, dp) = (self.weights(), self.derivative());
        let (q, dq) = (other.weights(), other.derivative());
        let mut w = Vec::with_capacity(p.len() * q.len());
        let mut d = Vec::with_capacity(p.len() * q.len());
        for i in 0..p.len() {
            for j in 0..q.len() {
                w.push(p[i] * q[j]);
                d.push(dp[i] * q[j] + p[i] * dq[j]);
            }
        }
        Self {
            dist: ProbDist { weights: w },
            derivative: d,
        }
    }

    /// `t·self + (1−t)·other`
    pub fn mix(&self, other: &Self, t: T) -> Result<Self> {
        if self.weights().len() != other.weights().len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights().len(),
                found: other.weights().len(),
            });
        }
        let s = T::one() - t;
        let w = self.weights().iter().zip(other.weights()).map(|(a, b)| t * *a + s * *b).collect();
        let d = self.derivative().iter().zip(other.derivative()).map(|(a, b)| t * *a + s * *b).collect();
        Ok(Self {
            dist: ProbDist { weights: w },
            derivative: d,
        })
    }
}

/// Which family of distances (and induced speeds) to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceFamily {
    /// `d_α` built from `p^{1/α}`
    Power,
    /// `𝖽_α` built from `p` directly
    Schatten,
}

impl std::str::FromStr for DistanceFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Self::Power),
            "schatten" => Ok(Self::Schatten),
            other => Err(Error::InvalidParameter(format!(
                "unknown distance family {other:?} (expected power or schatten)"
            ))),
        }
    }
}

fn same_len<T: Real>(p: &ProbDist<T>, q: &ProbDist<T>) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(())
}

fn half_power_mean<T: Real>(diffs: impl Iterator<Item = T>, alpha: T) -> T {
    if alpha.is_infinite() {
        return diffs.fold(T::zero(), |m, d| m.max(d.abs()));
    }
    let s: T = diffs.map(|d| d.abs().powf(alpha)).sum();
    (T::lit(0.5) * s).powf(T::one() / alpha)
}

/// `d_α(p, q) = (½ Σ |p^{1/α} − q^{1/α}|^α)^{1/α}`
pub fn dist_alpha<T: Real>(p: &ProbDist<T>, q: &ProbDist<T>, alpha: T) -> Result<T> {
    same_len(p, q)?;
    check_order(alpha)?;
    if alpha.is_infinite() {
        return Err(Error::InvalidParameter("dist_alpha needs a finite order".into()));
    }
    let r = T::one() / alpha;
    let v = half_power_mean(
        p.weights().iter().zip(q.weights()).map(|(a, b)| a.powf(r) - b.powf(r)),
        alpha,
    );
    Ok(v.min(T::one()))
}

/// `𝖽_α(p, q) = (½ Σ |p − q|^α)^{1/α}`
pub fn dist_schatten_alpha<T: Real>(p: &ProbDist<T>, q: &ProbDist<T>, alpha: T) -> Result<T> {
    same_len(p, q)?;
    check_order(alpha)?;
    let v = half_power_mean(p.weights().iter().zip(q.weights()).map(|(a, b)| *a - *b), alpha);
    Ok(v.min(T::one()))
}

pub fn distance<T: Real>(p: &ProbDist<T>, q: &ProbDist<T>, alpha: T, family: DistanceFamily) -> Result<T> {
    match family {
        DistanceFamily::Power => dist_alpha(p, q, alpha),
        DistanceFamily::Schatten => dist_schatten_alpha(p, q, alpha),
    }
}

/// `f_α = Σ p |p'/p|^α`, possibly `+∞` when probability mass leaves a null outcome.
pub fn gen_fisher<T: Real>(d: &ParametricDist<T>, alpha: T) -> Result<T> {
    check_order(alpha)?;
    if alpha.is_infinite() {
        return Err(Error::InvalidParameter("generalized Fisher information needs a finite order".into()));
    }
    let floor = p_floor::<T>();
    let mut total = T::zero();
    for (&p, &dp) in d.weights().iter().zip(d.derivative()) {
        let a = dp.abs();
        if p <= floor {
            if a <= floor {
                continue;
            }
            if alpha > T::one() {
                return Ok(T::infinity());
            }
            total += a;
            continue;
        }
        total += p * (a / p).powf(alpha);
    }
    Ok(total)
}

/// `𝖿_α = ‖p'‖_α`
pub fn schatten_fisher<T: Real>(d: &ParametricDist<T>, alpha: T) -> Result<T> {
    check_order(alpha)?;
    crate::matcore::schatten_from_values(d.derivative(), alpha)
}

/// Speed induced by the chosen distance family.
///
/// `Power`: `s_α = (1/α)(f_α/2)^{1/α}`; `Schatten`: `𝗌_α = 2^{−1/α}𝖿_α`.
pub fn classical_speed<T: Real>(d: &ParametricDist<T>, alpha: T, family: DistanceFamily) -> Result<T> {
    match family {
        DistanceFamily::Power => {
            let f = gen_fisher(d, alpha)?;
            Ok((f * T::lit(0.5)).powf(T::one() / alpha) / alpha)
        }
        DistanceFamily::Schatten => {
            let f = schatten_fisher(d, alpha)?;
            Ok(schatten_prefactor(alpha) * f)
        }
    }
}

/// `2^{−1/α}`, equal to one at `α = ∞`.
pub fn schatten_prefactor<T: Real>(alpha: T) -> T {
    if alpha.is_infinite() {
        T::one()
    } else {
        T::lit(2.0).powf(-T::one() / alpha)
    }
}

/// Hölder lower bound `|d⟨M⟩/dθ| / ⟨|M − g|^β⟩^{1/β}` on `f_α^{1/α}`, `β = α/(α−1)`.
pub fn moment_lower_bound<T: Real>(d: &ParametricDist<T>, outcomes: &[T], alpha: T, g: T) -> Result<T> {
    if !(alpha > T::one()) || alpha.is_infinite() {
        return Err(Error::InvalidParameter(format!("moment bound needs 1 < alpha < inf, got {alpha}")));
    }
    if outcomes.len() != d.weights().len() {
        return Err(Error::DimensionMismatch {
            expected: d.weights().len(),
            found: outcomes.len(),
        });
    }
    if outcomes.iter().any(|m| !m.is_finite()) || !g.is_finite() {
        return Err(Error::InvalidInput("outcome values must be finite".into()));
    }
    let beta = alpha / (alpha - T::one());
    let slope: T = d.derivative().iter().zip(outcomes).map(|(dp, m)| *dp * *m).sum();
    let moment: T = d
        .weights()
        .iter()
        .zip(outcomes)
        .map(|(p, m)| *p * (*m - g).abs().powf(beta))
        .sum();
    let denom = moment.powf(T::one() / beta);
    if !(denom > T::zero()) {
        return Err(Error::Undefined(
            "all probability sits at the reference value; the moment vanishes".into(),
        ));
    }
    Ok(slope.abs() / denom)
}

/// `1/f_α^{1/α}` with `α = β/(β−1)`: lower bound on the β-th absolute moment of unbiased estimators.
pub fn barankin_bound<T: Real>(d: &ParametricDist<T>, beta: T) -> Result<T> {
    if !(beta > T::one()) || beta.is_infinite() {
        return Err(Error::InvalidParameter(format!("beta must satisfy 1 < beta < inf, got {beta}")));
    }
    let alpha = beta / (beta - T::one());
    let f = gen_fisher(d, alpha)?;
    if f == T::zero() {
        return Ok(T::infinity());
    }
    if f.is_infinite() {
        return Ok(T::zero());
    }
    Ok(T::one() / f.powf(T::one() / alpha))
}

/// Result of fitting `distance = speed·(θ − θ₀)` to snapshot data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedFit<T> {
    pub speed: T,
    /// Root-mean-square residual of the fit.
    pub residual: T,
    /// Number of snapshots (besides the reference) inside the fit window.
    pub points: usize,
}

/// Distances beyond this leave the linear regime and are excluded from the fit.
pub const FIT_WINDOW: f64 = 0.2;

/// Least-squares speed through the origin from distributions recorded along `θ`.
pub fn speed_from_samples<T: Real>(
    snapshots: &[(T, ProbDist<T>)],
    alpha: T,
    family: DistanceFamily,
) -> Result<SpeedFit<T>> {
    if snapshots.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 snapshots, got {}",
            snapshots.len()
        )));
    }
    if snapshots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidInput("snapshot angles must be strictly increasing".into()));
    }
    let (theta0, ref p0) = snapshots[0];
    let mut pts = Vec::new();
    for (theta, p) in &snapshots[1..] {
        let d = distance(p, p0, alpha, family)?;
        if d >= T::lit(FIT_WINDOW) {
            break;
        }
        pts.push((*theta - theta0, d));
    }
    if pts.is_empty() {
        return Err(Error::InvalidInput(
            "no snapshot lies inside the linear window; sample closer to the reference".into(),
        ));
    }
    let sxy: T = pts.iter().map(|(x, y)| *x * *y).sum();
    let sxx: T = pts.iter().map(|(x, _)| *x * *x).sum();
    let speed = sxy / sxx;
    let rss: T = pts.iter().map(|(x, y)| (*y - speed * *x).powi(2)).sum();
    Ok(SpeedFit {
        speed,
        residual: (rss / T::from_usize_lossy(pts.len())).sqrt(),
        points: pts.len(),
    })
}

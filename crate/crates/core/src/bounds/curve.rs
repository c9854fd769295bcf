use crate::error::{Error, Result};
use crate::numeric::adaptive_simpson;
use crate::quantum::{quantum_speed, ParametricFamily, SpeedKind};
use crate::scalar::Real;

/// Absolute tolerance of the length quadrature.
pub const LENGTH_TOL: f64 = 1e-8;

/// `∫ S[ρ(t)] dt` over `[θ_start, θ_end]` by adaptive Simpson quadrature.
pub fn curve_length<T: Real>(
    fam: &ParametricFamily<T>,
    theta_start: T,
    theta_end: T,
    kind: SpeedKind,
    alpha: T,
) -> Result<T> {
    if !(theta_start <= theta_end) {
        return Err(Error::InvalidParameter("need theta_start <= theta_end".into()));
    }
    if theta_start == theta_end {
        return Ok(T::zero());
    }
    let mut failure = None;
    let mut f = |t: f64| match quantum_speed(fam, T::lit(t), kind, alpha) {
        Ok(v) => v.as_f64(),
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let v = adaptive_simpson(&mut f, theta_start.as_f64(), theta_end.as_f64(), LENGTH_TOL);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(T::lit(v?))
}

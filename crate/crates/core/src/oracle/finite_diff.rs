use crate::error::{Error, Result};
use crate::quantum::{bures_distance, schatten_distance, trace_distance, ParametricFamily, SpeedKind};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdSpeed {
    /// Plain forward difference `D(ρ(θ+h), ρ(θ))/h`.
    pub forward: f64,
    /// Richardson combination `2 d(h/4) − d(h/2)`.
    pub value: f64,
    /// `|d(h/4) − d(h/2)|` plus the change of the Richardson value between the two finest
    /// levels, plus a rounding allowance.
    pub error: f64,
}

/// Speed as the derivative of a distance, estimated from forward differences.
pub fn finite_diff_speed(
    fam: &ParametricFamily<f64>,
    theta: f64,
    kind: SpeedKind,
    alpha: f64,
    h: f64,
) -> Result<FdSpeed> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::InvalidParameter(format!("step h must lie in [1e-6, 1e-2], got {h}")));
    }
    let base = fam.density_at(theta)?;
    let d = |step: f64| -> Result<f64> {
        let moved = fam.density_at(theta + step)?;
        let dist = match kind {
            SpeedKind::Bures => bures_distance(&moved, &base)?,
            SpeedKind::Trace => trace_distance(&moved, &base)?,
            SpeedKind::Schatten => schatten_distance(&moved, &base, alpha)?,
        };
        Ok(dist / step)
    };
    let full = d(h)?;
    let half = d(0.5 * h)?;
    let quarter = d(0.25 * h)?;
    let coarse = 2.0 * half - full;
    let fine = 2.0 * quarter - half;
    // the second term is large when h is not small against the structure of ρ(θ),
    // e.g. eigenvalues of order h
    let step = 0.25 * h;
    let noise = 8.0 * base.dim() as f64 * f64::EPSILON;
    // the Bures distance comes from 1 − √F, which loses digits as O(step²)
    let rounding = match kind {
        SpeedKind::Bures => noise / (step * step * quarter.max(f64::EPSILON)),
        _ => noise / step,
    };
    Ok(FdSpeed {
        forward: full,
        value: fine,
        error: (quarter - half).abs() + (fine - coarse).abs() + rounding,
    })
}

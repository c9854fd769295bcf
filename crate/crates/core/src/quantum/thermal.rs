use crate::error::{Error, Result};
use crate::matcore::{check_order, HermitianOperator};
use crate::scalar::Real;

use super::family::{boltzmann, ParametricFamily};

/// Gibbs family `ρ(β) = e^{−βH}/Tr e^{−βH}`.
pub fn thermal_family<T: Real>(h: HermitianOperator<T>) -> ParametricFamily<T> {
    ParametricFamily::thermal(h)
}

/// `f_α = Σ_m p_m |ε_m − ⟨H⟩|^α` for the energy measurement on a Gibbs state.
pub fn thermal_gen_fisher<T: Real>(h: &HermitianOperator<T>, beta: T, alpha: T) -> Result<T> {
    check_order(alpha)?;
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
    }
    let e = h.eig();
    let p = boltzmann(&e.values, beta);
    let mean: T = p.iter().zip(&e.values).map(|(p, l)| *p * *l).sum();
    let dev = e.values.iter().map(|l| (*l - mean).abs());
    if alpha.is_infinite() {
        return Ok(dev.zip(&p).filter(|(_, p)| **p > T::zero()).map(|(d, _)| d).fold(T::zero(), T::max));
    }
    Ok(dev.zip(&p).map(|(d, p)| *p * d.powf(alpha)).sum())
}

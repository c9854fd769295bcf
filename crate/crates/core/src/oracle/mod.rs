//! Brute-force verifiers: measurement search, finite-difference speeds and random instances.

mod finite_diff;
mod random;
mod search;

pub use finite_diff::{finite_diff_speed, FdSpeed};
pub use random::{
    random_density, random_hermitian, random_instance, random_povm, random_product_state, random_pure,
    random_unitary, Instance, InstanceKind,
};
pub use search::{brute_force_max, Objective, SearchConfig, SearchResult, MAX_DIM};

use crate::error::Result;
use crate::quantum::{qfi, trace_speed, ParametricFamily};

/// Generalized Fisher information `F_α` of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenFisherValue {
    pub value: f64,
    /// True when `value` comes from the measurement search and is only a lower bound.
    pub estimate: bool,
}

/// `F_α`: closed forms at `α ∈ {1, 2}`, otherwise the brute-force maximum over projective measurements.
pub fn gen_fisher_quantum(
    fam: &ParametricFamily<f64>,
    theta: f64,
    alpha: f64,
    cfg: &SearchConfig,
) -> Result<GenFisherValue> {
    crate::matcore::check_order(alpha)?;
    if alpha == 1.0 {
        return Ok(GenFisherValue { value: trace_speed(fam, theta)?, estimate: false });
    }
    if alpha == 2.0 {
        return Ok(GenFisherValue { value: qfi(fam, theta)?, estimate: false });
    }
    let res = brute_force_max(fam, theta, Objective::GenFisher, alpha, cfg)?;
    Ok(GenFisherValue { value: res.value, estimate: true })
}

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{
    check_order, schatten_from_values, singular_values, ComplexMatrix, DensityMatrix, HermitianOperator,
    PureState, Superoperator,
};
use crate::numeric::{grid_golden_min, stream_rng};
use crate::scalar::{ci, cr, Real, C};

/// Largest attainable trace speed and quantum Fisher information under `H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeisenbergLimit<T> {
    /// `λ_max − λ_min`
    pub f1: T,
    /// `(λ_max − λ_min)²`
    pub f2: T,
}

pub fn heisenberg_limit<T: Real>(h: &HermitianOperator<T>) -> HeisenbergLimit<T> {
    let e = h.eig();
    let gap = e.max() - e.min();
    HeisenbergLimit { f1: gap, f2: gap * gap }
}

/// `4(λ_max − ⟨H⟩)(⟨H⟩ − λ_min)`, an upper bound on `F₂` given the mean energy.
pub fn bhatia_davis_bound<T: Real>(h: &HermitianOperator<T>, rho: &DensityMatrix<T>) -> Result<T> {
    h.matrix().ensure_same_dim(rho.matrix())?;
    let e = h.eig();
    let mean = h.expectation_in(rho.matrix());
    Ok((T::lit(4.0) * (e.max() - mean) * (mean - e.min())).max(T::zero()))
}

/// Collective-spin form `N² − 4⟨J_n⟩²`.
pub fn collective_bhatia_davis<T: Real>(n: usize, mean_jn: T) -> T {
    let n = T::from_usize_lossy(n);
    n * n - T::lit(4.0) * mean_jn * mean_jn
}

/// Settings of the multi-start optimiser for superoperator norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormSearch {
    pub starts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for NormSearch {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iter: 4000,
            seed: 0x5eed_0001,
        }
    }
}

/// Result of a supremum search over pure states.
#[derive(Clone, Debug)]
pub struct SuperopNorm<T: Real> {
    /// Best value found; a certified lower bound on the supremum.
    pub value: T,
    pub state: PureState<T>,
    /// False when no start met the stopping criterion within `max_iter`.
    pub converged: bool,
}

/// Accepted steps improving by less than this end a local ascent.
const STEP_TOL: f64 = 1e-12;

fn normalize<T: Real>(v: &mut [C<T>]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    for z in v.iter_mut() {
        *z = z.unscale(n);
    }
}

fn objective<T: Real>(l: &Superoperator<T>, psi: &[C<T>], alpha: T) -> T {
    let out = l.apply(&ComplexMatrix::outer(psi, psi));
    let h = HermitianOperator::from_hermitian_part(&out);
    schatten_from_values(&h.eig().values, alpha).unwrap_or(T::nan())
}

fn ascend<T: Real>(l: &Superoperator<T>, mut psi: Vec<C<T>>, alpha: T, max_iter: usize) -> (T, Vec<C<T>>, bool) {
    let n = psi.len();
    let mut value = objective(l, &psi, alpha);
    let fd = T::lit(1e-6);
    let mut eta = T::lit(0.1);
    for _ in 0..max_iter {
        // central-difference gradient in the 2n real coordinates
        let mut grad = vec![cr(T::zero()); n];
        for k in 0..n {
            for (part, unit) in [(0, cr(T::one())), (1, ci(T::one()))] {
                let mut up = psi.clone();
                up[k] += unit * fd;
                normalize(&mut up);
                let mut dn = psi.clone();
                dn[k] -= unit * fd;
                normalize(&mut dn);
                let g = (objective(l, &up, alpha) - objective(l, &dn, alpha)) / (T::lit(2.0) * fd);
                grad[k] = if part == 0 { cr(g) + grad[k] } else { grad[k] + ci(g) };
            }
        }
        // tangent projection
        let overlap = crate::matcore::inner(&psi, &grad).re;
        for k in 0..n {
            grad[k] -= psi[k] * overlap;
        }
        let gnorm = grad.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(gnorm > T::epsilon()) {
            return (value, psi, true);
        }
        let mut accepted = false;
        while eta > T::lit(1e-14) {
            let mut trial: Vec<C<T>> = psi.iter().zip(&grad).map(|(a, g)| *a + *g * (eta / gnorm)).collect();
            normalize(&mut trial);
            let v = objective(l, &trial, alpha);
            if v > value {
                let gain = v - value;
                psi = trial;
                value = v;
                eta = (eta * T::lit(2.0)).min(T::one());
                accepted = true;
                if gain < T::lit(STEP_TOL) * value.max(T::one()) {
                    return (value, psi, true);
                }
                break;
            }
            eta *= T::lit(0.5);
        }
        if !accepted {
            return (value, psi, true);
        }
    }
    (value, psi, false)
}

/// `sup_Ψ ‖ℒ[|Ψ⟩⟨Ψ|]‖_α` by seeded multi-start projected gradient ascent on the unit sphere.
pub fn superop_norm<T: Real>(l: &Superoperator<T>, alpha: T, cfg: &NormSearch) -> Result<SuperopNorm<T>> {
    check_order(alpha)?;
    if cfg.starts == 0 {
        return Err(Error::InvalidParameter("need at least one start".into()));
    }
    let dev = l.hermiticity_preservation_deviation();
    if !(dev <= T::herm_tol()) {
        return Err(Error::InvalidInput(format!(
            "superoperator does not preserve Hermiticity (deviation {dev:e})"
        )));
    }
    let n = l.dim();
    let runs: Vec<(T, Vec<C<T>>, bool)> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(cfg.seed, s as u64);
            let mut psi: Vec<C<T>> = (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C::new(T::lit(re), T::lit(im))
                })
                .collect();
            normalize(&mut psi);
            ascend(l, psi, alpha, cfg.max_iter)
        })
        .collect();
    let converged = runs.iter().any(|r| r.2);
    let best = runs
        .into_iter()
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
        .expect("at least one start");
    Ok(SuperopNorm {
        value: best.0,
        state: PureState::normalized(best.1)?,
        converged,
    })
}

/// Bounds on speeds under `H_eff = H − iΓ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonHermitianBound<T> {
    /// `min_r ‖H − iΓ − r𝕀‖_∞`
    pub min_norm: T,
    pub r_opt: T,
    /// `2·min_norm`, bound on `F₁`
    pub f1: T,
    /// `4·min_norm²`, bound on `F₂`
    pub f2: T,
}

fn shifted_norm<T: Real>(h: &HermitianOperator<T>, gamma: &HermitianOperator<T>, r: T) -> T {
    let a = &h.shift(r).into_matrix() - &gamma.matrix().scale(ci(T::one()));
    singular_values(&a)[0]
}

/// `2·min_r ‖H − iΓ − r𝕀‖_∞` by grid scan and golden-section refinement.
pub fn nonhermitian_speed_bound<T: Real>(
    h: &HermitianOperator<T>,
    gamma: &HermitianOperator<T>,
) -> Result<NonHermitianBound<T>> {
    h.matrix().ensure_same_dim(gamma.matrix())?;
    let eh = h.eig();
    let g = gamma.eig().max_abs_value();
    let lo = (eh.min() - g).as_f64();
    let hi = (eh.max() + g).as_f64();
    let mut f = |r: f64| shifted_norm(h, gamma, T::lit(r)).as_f64();
    let (r, v) = grid_golden_min(&mut f, lo, hi, 200, 1e-12 * (1.0 + hi.abs().max(lo.abs())));
    let m = T::lit(v);
    Ok(NonHermitianBound {
        min_norm: m,
        r_opt: T::lit(r),
        f1: T::lit(2.0) * m,
        f2: T::lit(4.0) * m * m,
    })
}

/// Closed-form `min_r ‖H − iΓ − r𝕀‖_∞` for commuting qubit operators.
///
/// The eigenvalues of `(H − r)² + Γ²` are two parabolas in `r`; the minimum of their maximum is
/// either the higher vertex or the crossing point.
pub fn nonhermitian_min_norm_qubit<T: Real>(h: &HermitianOperator<T>, gamma: &HermitianOperator<T>) -> Result<T> {
    h.matrix().ensure_same_dim(gamma.matrix())?;
    if h.dim() != 2 {
        return Err(Error::InvalidInput("closed form applies to 2x2 operators".into()));
    }
    let comm = h.matrix().commutator(gamma.matrix()).max_abs();
    if !(comm <= T::herm_tol()) {
        return Err(Error::InvalidInput(format!("H and Gamma do not commute (|[H, Gamma]| = {comm:e})")));
    }
    let eh = h.eig();
    let delta = eh.max() - eh.min();
    let scale = eh.max_abs_value().max(gamma.eig().max_abs_value()).max(T::one());
    if delta <= T::epsilon().sqrt() * scale {
        return Ok(gamma.eig().max_abs_value());
    }
    // pair Γ values with the H eigenvectors
    let g1 = gamma.matrix().expectation(&eh.vector(1)).re;
    let g2 = gamma.matrix().expectation(&eh.vector(0)).re;
    let (a, b) = (g1 * g1, g2 * g2);
    let d2 = delta * delta;
    if a >= d2 + b {
        return Ok(g1.abs());
    }
    if b >= d2 + a {
        return Ok(g2.abs());
    }
    let y0 = d2 / T::lit(4.0) + (a + b) / T::lit(2.0) + (a - b) * (a - b) / (T::lit(4.0) * d2);
    Ok(y0.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::CollectiveSpin;
    use crate::matcore::commutator_map;

    #[test]
    fn heisenberg_examples() {
        for n in 1..=4 {
            let j = CollectiveSpin::<f64>::z(n);
            assert!((heisenberg_limit(j.operator()).f2 - (n * n) as f64).abs() < 1e-10);
        }
        let flat = HermitianOperator::<f64>::identity(3).scale(1.7);
        assert!(heisenberg_limit(&flat).f2.abs() < 1e-20);
        let hz = HermitianOperator::from_real_diagonal(&[0.5, -0.5]);
        assert_eq!(heisenberg_limit(&hz).f2, 1.0);
    }

    #[test]
    fn bhatia_davis_examples() {
        let hz = HermitianOperator::<f64>::from_real_diagonal(&[0.5, -0.5]);
        let top = PureState::basis(2, 0).density();
        assert_eq!(bhatia_davis_bound(&hz, &top).unwrap(), 0.0);
        let mid = DensityMatrix::maximally_mixed(2);
        assert!((bhatia_davis_bound(&hz, &mid).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(collective_bhatia_davis(2, 1.0), 0.0);
    }

    #[test]
    fn superop_norm_examples() {
        let cfg = NormSearch::default();
        let hz = HermitianOperator::<f64>::from_real_diagonal(&[0.5, -0.5]);
        let r = superop_norm(&commutator_map(&hz), 1.0, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
        assert!(r.converged);
        let z = superop_norm(&Superoperator::<f64>::zero(2), 1.0, &cfg).unwrap();
        assert_eq!(z.value, 0.0);
        let j = CollectiveSpin::<f64>::z(2);
        let r = superop_norm(&commutator_map(j.operator()), 1.0, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
        let again = superop_norm(&commutator_map(j.operator()), 1.0, &cfg).unwrap();
        assert_eq!(r.value, again.value);
    }

    #[test]
    fn non_hermitian_bound_examples() {
        let hz = HermitianOperator::<f64>::from_real_diagonal(&[0.5, -0.5]);
        let zero = HermitianOperator::zeros(2);
        let b = nonhermitian_speed_bound(&hz, &zero).unwrap();
        assert!((b.f1 - 1.0).abs() < 1e-9);
        let g = HermitianOperator::from_real_diagonal(&[0.7, 0.2]);
        let b = nonhermitian_speed_bound(&zero, &g).unwrap();
        assert!((b.f1 - 1.4).abs() < 1e-9);
        let gamma = 0.3;
        let g = HermitianOperator::identity(2).scale(gamma);
        let b = nonhermitian_speed_bound(&hz, &g).unwrap();
        let expected = 2.0 * (gamma * gamma + 0.25f64).sqrt();
        assert!((b.f1 - expected).abs() < 1e-9);
        let c = nonhermitian_min_norm_qubit(&hz, &g).unwrap();
        assert!((2.0 * c - expected).abs() < 1e-14);
    }

    #[test]
    fn closed_form_branches() {
        // dominant vertex: large decay on the upper level
        let h = HermitianOperator::<f64>::from_real_diagonal(&[0.1, -0.1]);
        let g = HermitianOperator::from_real_diagonal(&[2.0, 0.1]);
        let c = nonhermitian_min_norm_qubit(&h, &g).unwrap();
        assert!((c - 2.0).abs() < 1e-15);
        let n = nonhermitian_speed_bound(&h, &g).unwrap();
        assert!((n.min_norm - c).abs() < 1e-8);
        let g = HermitianOperator::from_real_diagonal(&[0.1, 2.0]);
        let c = nonhermitian_min_norm_qubit(&h, &g).unwrap();
        assert!((c - 2.0).abs() < 1e-15);
    }
}

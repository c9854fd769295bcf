use crate::classical::schatten_prefactor;
use crate::error::{Error, Result};
use crate::matcore::{check_order, inner, ComplexMatrix, HermitianOperator, PureState};
use crate::scalar::{ci, Real, C};

use super::povm::{unchecked, Povm};
use super::speeds::SchattenSpeed;

fn ensure_dim<T: Real>(psi: &PureState<T>, h: &HermitianOperator<T>) -> Result<()> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Projectors onto `(|Ψ⟩ ± i|Ψ̃⟩)/√2`, `|Ψ̃⟩ = (H − ⟨H⟩)|Ψ⟩/ΔH`, plus the complement when `dim > 2`.
pub fn pure_two_projector_povm<T: Real>(psi: &PureState<T>, h: &HermitianOperator<T>) -> Result<Povm<T>> {
    ensure_dim(psi, h)?;
    let var = psi.variance(h);
    let scale = h.eig().max_abs_value().max(T::one());
    if !(var.sqrt() > T::epsilon().sqrt() * scale) {
        return Err(Error::Degenerate(
            "state is an eigenstate of the generator (zero variance)".into(),
        ));
    }
    let dh = var.sqrt();
    let mean = h.expectation_pure(psi);
    let a = psi.amplitudes();
    let hpsi = h.matrix().mul_vec(a);
    let tilde: Vec<C<T>> = hpsi.iter().zip(a).map(|(x, y)| (*x - *y * mean).unscale(dh)).collect();
    let r = T::lit(0.5).sqrt();
    let phi = |sign: T| -> Vec<C<T>> {
        a.iter().zip(&tilde).map(|(x, y)| (*x + ci(sign) * *y).scale(r)).collect()
    };
    let plus = ComplexMatrix::outer(&phi(T::one()), &phi(T::one()));
    let minus = ComplexMatrix::outer(&phi(-T::one()), &phi(-T::one()));
    let mut elements = vec![
        HermitianOperator::from_hermitian_part(&plus),
        HermitianOperator::from_hermitian_part(&minus),
    ];
    if psi.dim() > 2 {
        let rest = &(&ComplexMatrix::identity(psi.dim()) - &plus) - &minus;
        elements.push(HermitianOperator::from_hermitian_part(&rest));
    }
    Ok(unchecked(elements))
}

/// `v = √(⟨H_eff†H_eff⟩ − ⟨H⟩²)` and `g = ⟨Γ⟩`.
pub fn nonhermitian_moments<T: Real>(
    psi: &PureState<T>,
    h: &HermitianOperator<T>,
    gamma: &HermitianOperator<T>,
) -> Result<(T, T)> {
    ensure_dim(psi, h)?;
    ensure_dim(psi, gamma)?;
    let a = psi.amplitudes();
    let heff = h.matrix() - &gamma.matrix().scale(ci(T::one()));
    let norm2: T = heff.mul_vec(a).iter().map(|z| z.norm_sqr()).sum();
    let mean = h.expectation_pure(psi);
    let rad = norm2 - mean * mean;
    let scale = norm2.max(T::one());
    if rad < -T::lit(1e-10) * scale {
        return Err(Error::NumericalConsistency(format!(
            "negative radicand {rad:e} in the non-Hermitian variance"
        )));
    }
    Ok((rad.max(T::zero()).sqrt(), gamma.expectation_pure(psi)))
}

/// Schatten speed of `|Ψ⟩⟨Ψ|` under `H_eff = H − iΓ`.
///
/// `𝖥_α^α = (v + g)^α + (v − g)^α`; at `α = 1` this is `2v`.
pub fn nonhermitian_pure_speed<T: Real>(
    psi: &PureState<T>,
    h: &HermitianOperator<T>,
    gamma: &HermitianOperator<T>,
    alpha: T,
) -> Result<SchattenSpeed<T>> {
    check_order(alpha)?;
    let (v, g) = nonhermitian_moments(psi, h, gamma)?;
    let a = (v + g).abs();
    let b = (v - g).abs();
    let fisher = if alpha.is_infinite() {
        a.max(b)
    } else if alpha == T::one() {
        a + b
    } else {
        crate::matcore::schatten_from_values(&[a, b], alpha)?
    };
    Ok(SchattenSpeed {
        fisher,
        speed: schatten_prefactor(alpha) * fisher,
    })
}

/// `f_α` of a projective measurement on `e^{−iHθ}|Ψ⟩` at `θ = 0` through weak values:
/// `2^α Σ_x |⟨x|Ψ⟩|² |Im(⟨x|H|Ψ⟩/⟨x|Ψ⟩)|^α`.
pub fn weak_value_fisher<T: Real>(
    psi: &PureState<T>,
    h: &HermitianOperator<T>,
    povm: &Povm<T>,
    alpha: T,
) -> Result<T> {
    ensure_dim(psi, h)?;
    check_order(alpha)?;
    if povm.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: psi.dim(),
        });
    }
    if !povm.is_projective() {
        return Err(Error::InvalidInput("weak-value formula needs a projective measurement".into()));
    }
    let a = psi.amplitudes();
    let hpsi = h.matrix().mul_vec(a);
    let floor = crate::classical::p_floor::<T>();
    let two = T::lit(2.0);
    let mut total = T::zero();
    for e in povm.elements() {
        // rank-1 projectors reduce to |⟨x|Ψ⟩|² and the weak value ⟨x|H|Ψ⟩/⟨x|Ψ⟩
        let pa = e.matrix().mul_vec(a);
        let p = inner(a, &pa).re;
        if p <= floor {
            continue;
        }
        let weak_im = inner(&pa, &hpsi).im / p;
        total += p * (two * weak_im.abs()).powf(alpha);
    }
    Ok(total)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use crate::classical::gen_fisher;
    use crate::quantum::{induced_parametric, trace_speed, ParametricFamily, Povm};

    fn plus() -> PureState<f64> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![cr(r), cr(r)]).unwrap()
    }

    fn hz() -> HermitianOperator<f64> {
        HermitianOperator::from_real_diagonal(&[0.5, -0.5])
    }

    #[test]
    fn two_projector_gives_twice_deviation() {
        let povm = pure_two_projector_povm(&plus(), &hz()).unwrap();
        let fam = ParametricFamily::pure_unitary(&plus(), hz()).unwrap();
        let d = induced_parametric(&fam, 0.0, &povm).unwrap();
        for alpha in [1.0, 1.5, 2.0, 3.0] {
            let f = gen_fisher(&d, alpha).unwrap();
            assert!((f.powf(1.0 / alpha) - 1.0).abs() < 1e-12, "alpha {alpha}");
            let w = weak_value_fisher(&plus(), &hz(), &povm, alpha).unwrap();
            assert!((w - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            pure_two_projector_povm(&PureState::basis(2, 0), &hz()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn two_projector_geometry() {
        let psi = PureState::<f64>::new(vec![cr(0.6), C::new(0.0, 0.48), cr(0.64)]).unwrap();
        let h = HermitianOperator::from_real_diagonal(&[1.0, 0.0, -2.0]);
        let povm = pure_two_projector_povm(&psi, &h).unwrap();
        assert_eq!(povm.len(), 3);
        let total = povm.elements().iter().fold(ComplexMatrix::zeros(3), |acc, e| &acc + e.matrix());
        assert!((&total - &ComplexMatrix::identity(3)).max_abs() < 1e-12);
        for e in &povm.elements()[..2] {
            assert!((e.expectation_pure(&psi) - 0.5).abs() < 1e-12);
        }
        let cross = povm.elements()[0].matrix().trace_product(povm.elements()[1].matrix());
        assert!(cross.norm() < 1e-12);
    }

    #[test]
    fn weak_values_match_induced_distribution() {
        let fam = ParametricFamily::pure_unitary(&plus(), hz()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let y = ComplexMatrix::from_rows(vec![vec![cr(r), cr(r)], vec![ci(r), ci(-r)]]).unwrap();
        let povm = Povm::from_basis(&y).unwrap();
        let d = induced_parametric(&fam, 0.0, &povm).unwrap();
        let w = weak_value_fisher(&plus(), &hz(), &povm, 2.0).unwrap();
        assert!((w - gen_fisher(&d, 2.0).unwrap()).abs() < 1e-10);
        assert!((w - 1.0).abs() < 1e-12);
        // z basis: real weak values
        let z = weak_value_fisher(&plus(), &hz(), &Povm::computational(2), 2.0).unwrap();
        assert!(z.abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_reductions() {
        let zero = HermitianOperator::zeros(2);
        let s = nonhermitian_pure_speed(&plus(), &hz(), &zero, 1.0).unwrap();
        assert!((s.fisher - 1.0).abs() < 1e-14);
        for a in [1.0, 2.0, 3.0] {
            let s = nonhermitian_pure_speed(&plus(), &hz(), &zero, a).unwrap();
            assert!((s.speed - 0.5).abs() < 1e-14);
        }
        let gamma = HermitianOperator::identity(2).scale(0.3);
        let s = nonhermitian_pure_speed(&plus(), &hz(), &gamma, 1.0).unwrap();
        assert!((s.fisher - 2.0 * (0.25f64 + 0.09).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_matches_integrated_family() {
        let gamma = HermitianOperator::new(ComplexMatrix::from_rows(vec![
            vec![cr(0.3), C::new(0.1, -0.05)],
            vec![C::new(0.1, 0.05), cr(0.1)],
        ]).unwrap())
        .unwrap();
        let exact = nonhermitian_pure_speed(&plus(), &hz(), &gamma, 1.0).unwrap().fisher;
        let fam = ParametricFamily::non_hermitian(hz(), gamma, plus().density()).unwrap();
        let table = fam.tabulate(-2e-3, 1e-3, 5).unwrap();
        let fd = trace_speed(&table, 0.0).unwrap();
        assert!((fd - exact).abs() < 1e-6, "{fd} vs {exact}");
    }
}

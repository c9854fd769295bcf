use crate::classical::schatten_prefactor;
use crate::error::{Error, Result};
use crate::matcore::{check_order, psd_tol, schatten_from_values, ComplexMatrix, HermitianOperator};
use crate::scalar::Real;

use super::family::{FamilyPoint, ParametricFamily};
use super::povm::{povm_from_clusters, Povm};

/// Symmetric logarithmic derivative restricted to the support of `ρ`.
#[derive(Clone, Debug)]
pub struct SldResult<T: Real> {
    pub operator: HermitianOperator<T>,
    pub support_dim: usize,
    /// `Tr ρ L²`
    pub qfi: T,
}

/// A Schatten-type speed: `𝖥_α = ‖dρ/dθ‖_α` and `𝖲_α = 2^{−1/α} 𝖥_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchattenSpeed<T> {
    pub fisher: T,
    pub speed: T,
}

/// Which quantum speed to use for measurements and integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeedKind {
    /// `S₂ = √(F₂/8)`, induced by the Bures distance
    Bures,
    /// `S₁ = F₁/2`, induced by the trace distance
    Trace,
    /// `𝖲_α`, induced by the Schatten distance
    Schatten,
}

impl std::str::FromStr for SpeedKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bures" => Ok(Self::Bures),
            "trace" => Ok(Self::Trace),
            "schatten" => Ok(Self::Schatten),
            other => Err(Error::InvalidParameter(format!(
                "unknown speed kind {other:?} (expected bures, trace or schatten)"
            ))),
        }
    }
}

/// Target functional for [`optimal_povm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PovmTarget {
    TraceSpeed,
    Schatten,
    Qfi,
}

pub(crate) fn sld_at<T: Real>(p: &FamilyPoint<T>) -> Result<SldResult<T>> {
    let e = p.state.eig();
    let n = e.values.len();
    let tol = psd_tol(n, e.max_abs_value());
    let v = &e.vectors;
    let d = &(&v.adjoint() * p.derivative.matrix()) * v;
    let two = T::lit(2.0);
    let mut l = ComplexMatrix::zeros(n);
    let mut qfi = T::zero();
    let mut kept = T::zero();
    for i in 0..n {
        for j in 0..n {
            let s = e.values[i] + e.values[j];
            if s > tol {
                l[(i, j)] = d[(i, j)] * (two / s);
                qfi += two * d[(i, j)].norm_sqr() / s;
                kept = kept.max(d[(i, j)].norm());
            }
        }
    }
    let scale = d.max_abs();
    if scale > T::herm_tol() && kept <= T::epsilon() * T::lit(100.0) * scale {
        return Err(Error::RankDeficient);
    }
    let support_dim = e.values.iter().filter(|&&x| x > tol).count();
    let operator = HermitianOperator::from_hermitian_part(&(&(v * &l) * &v.adjoint()));
    Ok(SldResult {
        operator,
        support_dim,
        qfi,
    })
}

/// SLD `L` with `dρ/dθ = ½(Lρ + ρL)` on the support of `ρ(θ)`.
pub fn sld<T: Real>(fam: &ParametricFamily<T>, theta: T) -> Result<SldResult<T>> {
    sld_at(&fam.at(theta)?)
}

/// Quantum Fisher information `F₂ = Tr ρ L²`.
pub fn qfi<T: Real>(fam: &ParametricFamily<T>, theta: T) -> Result<T> {
    Ok(sld(fam, theta)?.qfi)
}

/// Trace speed `F₁ = Tr|dρ/dθ|`; the quantum speed is `F₁/2`.
pub fn trace_speed<T: Real>(fam: &ParametricFamily<T>, theta: T) -> Result<T> {
    let d = fam.derivative_at(theta)?;
    Ok(d.eig().values.iter().map(|l| l.abs()).sum())
}

pub(crate) fn schatten_of<T: Real>(d: &HermitianOperator<T>, alpha: T) -> Result<SchattenSpeed<T>> {
    check_order(alpha)?;
    let fisher = if alpha == T::lit(2.0) {
        // Tr(dρ²) needs no diagonalisation
        d.matrix().trace_product(d.matrix()).re.max(T::zero()).sqrt()
    } else {
        schatten_from_values(&d.eig().values, alpha)?
    };
    Ok(SchattenSpeed {
        fisher,
        speed: schatten_prefactor(alpha) * fisher,
    })
}

/// `𝖥_α = ‖dρ/dθ‖_α`, `𝖲_α = 2^{−1/α}𝖥_α`.
pub fn schatten_speed<T: Real>(fam: &ParametricFamily<T>, theta: T, alpha: T) -> Result<SchattenSpeed<T>> {
    schatten_of(&fam.derivative_at(theta)?, alpha)
}

/// Hilbert–Schmidt speed `𝖲₂ = √(½ Tr (dρ/dθ)²)`.
pub fn hilbert_schmidt_speed<T: Real>(fam: &ParametricFamily<T>, theta: T) -> Result<T> {
    Ok(schatten_speed(fam, theta, T::lit(2.0))?.speed)
}

/// `𝖲₂` of `e^{−iHθ}ρe^{iHθ}`: `√(Tr ρ²H² − Tr (Hρ)²)`.
pub fn unitary_hs_speed<T: Real>(rho: &ComplexMatrix<T>, h: &HermitianOperator<T>) -> Result<T> {
    rho.ensure_same_dim(h.matrix())?;
    let hr = h.matrix() * rho;
    let rr = rho * rho;
    let hh = h.matrix() * h.matrix();
    let v = rr.trace_product(&hh).re - hr.trace_product(&hr).re;
    Ok(v.max(T::zero()).sqrt())
}

/// Quantum speed of the chosen kind.
pub fn quantum_speed<T: Real>(fam: &ParametricFamily<T>, theta: T, kind: SpeedKind, alpha: T) -> Result<T> {
    let p = fam.at(theta)?;
    speed_at(&p, kind, alpha)
}

pub(crate) fn speed_at<T: Real>(p: &FamilyPoint<T>, kind: SpeedKind, alpha: T) -> Result<T> {
    match kind {
        SpeedKind::Bures => Ok((sld_at(p)?.qfi / T::lit(8.0)).sqrt()),
        SpeedKind::Trace => Ok(T::lit(0.5) * p.derivative.eig().values.iter().map(|l| l.abs()).sum::<T>()),
        SpeedKind::Schatten => Ok(schatten_of(&p.derivative, alpha)?.speed),
    }
}

fn cluster_tol<T: Real>(scale: T) -> T {
    T::epsilon().sqrt() * scale.max(T::epsilon())
}

/// Measurement attaining the chosen quantum value: eigenprojectors of `dρ/dθ`
/// (trace and Schatten targets) or of the SLD (QFI target); degenerate clusters share one projector.
pub fn optimal_povm<T: Real>(fam: &ParametricFamily<T>, theta: T, target: PovmTarget) -> Result<Povm<T>> {
    let p = fam.at(theta)?;
    let op = match target {
        PovmTarget::TraceSpeed | PovmTarget::Schatten => p.derivative,
        PovmTarget::Qfi => {
            let l = sld_at(&p)?.operator;
            if l.matrix().max_abs() <= T::epsilon() {
                // no information: any basis works, keep the eigenbasis of ρ
                p.state
            } else {
                l
            }
        }
    };
    let e = op.eig();
    Ok(povm_from_clusters(&e, cluster_tol(e.max_abs_value())))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use crate::classical::{gen_fisher, schatten_fisher};
    use crate::matcore::{DensityMatrix, PureState};
    use crate::quantum::induced_parametric;

    fn plus_sz() -> ParametricFamily<f64> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![cr(r), cr(r)]).unwrap();
        ParametricFamily::pure_unitary(&psi, HermitianOperator::from_real_diagonal(&[0.5, -0.5])).unwrap()
    }

    fn ghz(n: usize) -> (PureState<f64>, HermitianOperator<f64>) {
        let dim = 1 << n;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![cr(0.0); dim];
        v[0] = cr(r);
        v[dim - 1] = cr(r);
        let jz: Vec<f64> = (0..dim)
            .map(|b: usize| 0.5 * (n as f64 - 2.0 * b.count_ones() as f64))
            .collect();
        (PureState::new(v).unwrap(), HermitianOperator::from_real_diagonal(&jz))
    }

    #[test]
    fn plus_state_values() {
        let fam = plus_sz();
        assert!((qfi(&fam, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((trace_speed(&fam, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let s = schatten_speed(&fam, 0.0, 2.0).unwrap();
        assert!((s.fisher - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((s.speed - 0.5).abs() < 1e-14);
        let via_eig = schatten_from_values(&fam.derivative_at(0.0).unwrap().eig().values, 2.0).unwrap();
        assert!((via_eig - s.fisher).abs() < 1e-14);
        let rho = fam.state_at(0.0).unwrap();
        let hs = unitary_hs_speed(rho.matrix(), &HermitianOperator::from_real_diagonal(&[0.5, -0.5])).unwrap();
        assert!((hs - 0.5).abs() < 1e-14);
    }

    #[test]
    fn pure_state_sld_is_twice_derivative() {
        let fam = plus_sz();
        let p = fam.at(0.4).unwrap();
        let l = sld_at(&p).unwrap();
        assert_eq!(l.support_dim, 1);
        let twice = p.derivative.matrix().scale_real(2.0);
        assert!((l.operator.matrix() - &twice).max_abs() < 1e-13);
    }

    #[test]
    fn maximally_mixed_is_stationary() {
        let fam = ParametricFamily::unitary(
            HermitianOperator::from_real_diagonal(&[1.0, -0.3, 0.2]),
            DensityMatrix::maximally_mixed(3),
        )
        .unwrap();
        assert!(qfi(&fam, 0.0).unwrap() < 1e-28);
        assert!(trace_speed(&fam, 0.0).unwrap() < 1e-14);
        for a in [1.0, 2.0, 3.0, f64::INFINITY] {
            assert!(schatten_speed(&fam, 0.0, a).unwrap().fisher < 1e-14);
        }
        assert!(sld(&fam, 0.0).unwrap().operator.matrix().max_abs() < 1e-14);
    }

    #[test]
    fn ghz3_qfi_is_nine() {
        let (psi, jz) = ghz(3);
        let fam = ParametricFamily::pure_unitary(&psi, jz).unwrap();
        assert!((qfi(&fam, 0.0).unwrap() - 9.0).abs() < 1e-12);
        assert!((trace_speed(&fam, 0.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sld_residual_on_support() {
        let rho = DensityMatrix::new(ComplexMatrix::from_rows(vec![
            vec![cr(0.6), crate::scalar::C::new(0.1, 0.2), cr(0.0)],
            vec![crate::scalar::C::new(0.1, -0.2), cr(0.4), cr(0.0)],
            vec![cr(0.0), cr(0.0), cr(0.0)],
        ]).unwrap())
        .unwrap();
        let h = HermitianOperator::new(ComplexMatrix::from_rows(vec![
            vec![cr(0.3), cr(0.5), cr(0.0)],
            vec![cr(0.5), cr(-0.2), crate::scalar::C::new(0.0, 0.4)],
            vec![cr(0.0), crate::scalar::C::new(0.0, -0.4), cr(1.0)],
        ]).unwrap())
        .unwrap();
        let fam = ParametricFamily::unitary(h, rho).unwrap();
        let p = fam.at(0.0).unwrap();
        let l = sld_at(&p).unwrap();
        assert_eq!(l.support_dim, 2);
        let e = p.state.eig();
        let sym = (&(l.operator.matrix() * p.state.matrix()) + &(p.state.matrix() * l.operator.matrix()))
            .scale_real(0.5);
        let diff = &sym - p.derivative.matrix();
        // project onto the support of ρ
        let mut proj = ComplexMatrix::zeros(3);
        for k in 0..3 {
            if e.values[k] > 1e-9 {
                let v = e.vector(k);
                proj += &ComplexMatrix::outer(&v, &v);
            }
        }
        let on_support = &(&proj * &diff) * &proj;
        assert!(on_support.max_abs() < 1e-8);
        let tr: f64 = (&(p.state.matrix() * l.operator.matrix()) * l.operator.matrix()).trace().re;
        assert!((tr - l.qfi).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_detected() {
        // derivative living entirely outside the support
        let pts = vec![
            (0.0, HermitianOperator::from_real_diagonal(&[1.0, 0.0, 0.0])),
            (1.0, HermitianOperator::from_real_diagonal(&[1.0, 0.3, -0.3])),
        ];
        let fam = ParametricFamily::table(pts).unwrap();
        assert!(matches!(sld(&fam, 0.0), Err(Error::RankDeficient)));
    }

    #[test]
    fn optimal_povm_attains_values() {
        let fam = plus_sz();
        let theta = 0.3;
        let t = optimal_povm(&fam, theta, PovmTarget::TraceSpeed).unwrap();
        let d = induced_parametric(&fam, theta, &t).unwrap();
        assert!((gen_fisher(&d, 1.0).unwrap() - trace_speed(&fam, theta).unwrap()).abs() < 1e-8);
        assert!((schatten_fisher(&d, 3.0).unwrap() - schatten_speed(&fam, theta, 3.0).unwrap().fisher).abs() < 1e-8);
        let q = optimal_povm(&fam, theta, PovmTarget::Qfi).unwrap();
        let d = induced_parametric(&fam, theta, &q).unwrap();
        assert!((gen_fisher(&d, 2.0).unwrap() - qfi(&fam, theta).unwrap()).abs() < 1e-8);
        assert_eq!(t.len(), q.len());
        for (a, b) in t.elements().iter().zip(q.elements()) {
            assert!((a.matrix() - b.matrix()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn thermal_povms_coincide_with_energy_basis() {
        let fam = ParametricFamily::thermal(HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.5]));
        let beta = 0.7;
        for target in [PovmTarget::TraceSpeed, PovmTarget::Qfi] {
            let povm = optimal_povm(&fam, beta, target).unwrap();
            assert_eq!(povm.len(), 3);
            for e in povm.elements() {
                let m = e.matrix();
                let off = (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)));
                assert!(off.map(|(i, j)| m[(i, j)].norm()).fold(0.0, f64::max) < 1e-12);
            }
        }
    }
}

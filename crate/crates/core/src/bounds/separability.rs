use crate::error::{Error, Result};
use crate::matcore::{DensityMatrix, HermitianOperator, SuperopKind, Superoperator};
use crate::quantum::{qfi, schatten_speed, ParametricFamily};
use crate::scalar::Real;

use super::limits::{nonhermitian_speed_bound, superop_norm, NormSearch};
use super::spin::{CollectiveSpin, Partition};

/// `2^{(1−α)/α} √(s k² + r²)` with `s = ⌊N/k⌋`, `r = N − s k`: largest `𝖥_α` of k-separable states under `J_n`.
pub fn ksep_bound<T: Real>(n: usize, k: usize, alpha: T) -> Result<T> {
    crate::matcore::check_order(alpha)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k must satisfy 1 <= k <= N, got k = {k}, N = {n}")));
    }
    let s = n / k;
    let r = n - s * k;
    let root = T::from_usize_lossy(s * k * k + r * r).sqrt();
    let pre = if alpha.is_infinite() {
        T::lit(0.5)
    } else {
        T::lit(2.0).powf((T::one() - alpha) / alpha)
    };
    Ok(pre * root)
}

/// `2^{1/α} √(Σ_k (ΔH_k)²_ρ)`, evaluated on the submitted state.
pub fn asep_bound<T: Real>(rho: &DensityMatrix<T>, part: &Partition<T>, alpha: T) -> Result<T> {
    crate::matcore::check_order(alpha)?;
    if part.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: part.dim(),
            found: rho.dim(),
        });
    }
    let total: T = (0..part.blocks().len()).map(|k| variance(&part.embedded(k), rho)).sum();
    Ok(crate::classical::schatten_prefactor(alpha).recip() * total.sqrt())
}

/// `Tr ρH² − (Tr ρH)²`
pub fn variance<T: Real>(h: &HermitianOperator<T>, rho: &DensityMatrix<T>) -> T {
    let mean = h.expectation_in(rho.matrix());
    let sq = (h.matrix() * h.matrix()).trace_product(rho.matrix()).re;
    (sq - mean * mean).max(T::zero())
}

/// Bound on `F₂` of fully separable states under a sum of local generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalBound<T> {
    pub value: T,
    /// False when some norm search did not converge; `value` is then a lower estimate.
    pub converged: bool,
}

/// `Σ_i ‖ℒ_i‖₁²`; non-Hermitian locals contribute `4 min_r ‖H_i,eff − r‖_∞²`.
pub fn local_generator_sep_bound<T: Real>(locals: &[Superoperator<T>], cfg: &NormSearch) -> Result<LocalBound<T>> {
    let mut value = T::zero();
    let mut converged = true;
    for l in locals {
        match l.kind() {
            SuperopKind::NonHermitian { h, gamma } => value += nonhermitian_speed_bound(h, gamma)?.f2,
            _ => {
                let n = superop_norm(l, T::one(), cfg)?;
                converged &= n.converged;
                value += n.value * n.value;
            }
        }
    }
    Ok(LocalBound { value, converged })
}

/// Moment-generalised squeezing coefficient
/// `ξ_β = √N ⟨|J_{n1} − ⟨J_{n1}⟩|^β⟩^{1/β} / |⟨J_{n3}⟩|`.
pub fn spin_squeezing_xi<T: Real>(rho: &DensityMatrix<T>, n: usize, triad: [[T; 3]; 3], beta: T) -> Result<T> {
    if !(beta >= T::lit(2.0)) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be finite and >= 2, got {beta}")));
    }
    for a in 0..3 {
        for b in 0..3 {
            let dot: T = (0..3).map(|c| triad[a][c] * triad[b][c]).sum();
            let target = if a == b { T::one() } else { T::zero() };
            if (dot - target).abs() > T::herm_tol() {
                return Err(Error::InvalidParameter("directions must form an orthonormal triad".into()));
            }
        }
    }
    if rho.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: rho.dim(),
        });
    }
    let j1 = CollectiveSpin::new(n, triad[0])?;
    let j3 = CollectiveSpin::new(n, triad[2])?;
    let m3 = j3.operator().expectation_in(rho.matrix());
    let nn = T::from_usize_lossy(n);
    if m3.abs() <= T::lit(1e-12) * nn {
        return Err(Error::Undefined("mean spin along n3 vanishes".into()));
    }
    let m1 = j1.operator().expectation_in(rho.matrix());
    let moment = |b: T| {
        let op = j1.operator().map_spectrum(|l| (l - m1).abs().powf(b));
        op.expectation_in(rho.matrix()).max(T::zero()).powf(T::one() / b)
    };
    let xi = |b: T| nn.sqrt() * moment(b) / m3.abs();
    let value = xi(beta);
    let base = xi(T::lit(2.0));
    if value < base - T::lit(1e-9) * base.max(T::one()) {
        return Err(Error::NumericalConsistency(format!(
            "moment ordering violated: xi_beta = {value} < xi_2 = {base}"
        )));
    }
    Ok(value)
}

/// Which separability limit a witness compares against.
#[derive(Clone, Debug)]
pub enum SeparabilityBound<T: Real> {
    /// k-separable limit for `𝖥_α` under a collective spin of `N = log₂ dim` qubits.
    KSep { k: usize },
    /// State-dependent limit for a partition; the family should be generated by its total Hamiltonian.
    ASep(Partition<T>),
    /// `F₂` limit for fully separable states under the given local generators.
    Local(Vec<Superoperator<T>>),
}

impl<T: Real> SeparabilityBound<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::KSep { .. } => "ksep",
            Self::ASep(_) => "asep",
            Self::Local(_) => "local",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Entangled,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Entangled => "entangled",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport<T> {
    pub speed: T,
    pub bound: T,
    pub kind: &'static str,
    pub alpha: T,
    pub verdict: Verdict,
}

/// Relative slack a speed must exceed its bound by before entanglement is declared.
pub const WITNESS_SLACK: f64 = 1e-9;

pub fn verdict<T: Real>(speed: T, bound: T) -> Verdict {
    if speed > bound * (T::one() + T::lit(WITNESS_SLACK)) {
        Verdict::Entangled
    } else {
        Verdict::Undecided
    }
}

fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() && dim >= 2 {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::InvalidInput(format!("dimension {dim} is not a qubit register")))
    }
}

/// Compare the speed of `fam` at `θ` with a separability limit.
pub fn witness<T: Real>(
    fam: &ParametricFamily<T>,
    theta: T,
    bound: &SeparabilityBound<T>,
    alpha: T,
) -> Result<WitnessReport<T>> {
    let (speed, limit, alpha) = match bound {
        SeparabilityBound::KSep { k } => {
            let n = qubit_count(fam.dim())?;
            (schatten_speed(fam, theta, alpha)?.fisher, ksep_bound(n, *k, alpha)?, alpha)
        }
        SeparabilityBound::ASep(part) => {
            let rho = fam.density_at(theta)?;
            (schatten_speed(fam, theta, alpha)?.fisher, asep_bound(&rho, part, alpha)?, alpha)
        }
        SeparabilityBound::Local(locals) => {
            let b = local_generator_sep_bound(locals, &NormSearch::default())?;
            (qfi(fam, theta)?, b.value, T::lit(2.0))
        }
    };
    Ok(WitnessReport {
        speed,
        bound: limit,
        kind: bound.name(),
        alpha,
        verdict: verdict(speed, limit),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Block;
    use crate::matcore::{commutator_map, non_hermitian_map, PureState};
    use crate::scalar::cr;

    fn ghz(n: usize) -> PureState<f64> {
        let dim = 1 << n;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![cr(0.0); dim];
        v[0] = cr(r);
        v[dim - 1] = cr(r);
        PureState::new(v).unwrap()
    }

    fn css_x(n: usize) -> PureState<f64> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(vec![cr(r), cr(r)]).unwrap();
        (1..n).fold(plus.clone(), |acc, _| acc.tensor(&plus))
    }

    #[test]
    fn ksep_examples() {
        assert!((ksep_bound(4, 1, 1.0f64).unwrap() - 2.0).abs() < 1e-15);
        assert!((ksep_bound(10, 3, 1.0f64).unwrap() - 28f64.sqrt()).abs() < 1e-14);
        for a in [1.0f64, 1.5, 2.0] {
            let v = ksep_bound(5, 5, a).unwrap();
            assert!((v - 2f64.powf((1.0 - a) / a) * 5.0).abs() < 1e-14);
        }
        assert!(ksep_bound(3, 0, 1.0f64).is_err());
        assert!(ksep_bound(3, 4, 1.0f64).is_err());
    }

    #[test]
    fn bell_state_flagged_by_asep() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(vec![cr(r), cr(0.0), cr(0.0), cr(r)]).unwrap();
        let hz = HermitianOperator::from_real_diagonal(&[0.5, -0.5]);
        let part = Partition::qubits(2, &hz).unwrap();
        let fam = ParametricFamily::pure_unitary(&bell, part.total()).unwrap();
        let rep = witness(&fam, 0.0, &SeparabilityBound::ASep(part.clone()), 1.0).unwrap();
        assert!((rep.speed - 2.0).abs() < 1e-12);
        assert!((rep.bound - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::Entangled);
        let single = Partition::new(
            vec![2, 2],
            vec![Block { sites: vec![0, 1], hamiltonian: part.total() }],
        )
        .unwrap();
        let rep = witness(&fam, 0.0, &SeparabilityBound::ASep(single), 1.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Undecided);
    }

    #[test]
    fn ghz_flagged_by_ksep() {
        let j = CollectiveSpin::<f64>::z(3);
        let fam = ParametricFamily::pure_unitary(&ghz(3), j.operator().clone()).unwrap();
        let rep = witness(&fam, 0.0, &SeparabilityBound::KSep { k: 1 }, 1.0).unwrap();
        assert!((rep.speed - 3.0).abs() < 1e-12);
        assert!((rep.bound - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::Entangled);
    }

    #[test]
    fn boundary_is_undecided() {
        assert_eq!(verdict(2.0, 2.0), Verdict::Undecided);
        assert_eq!(verdict(2.0 + 1e-12, 2.0), Verdict::Undecided);
        assert_eq!(verdict(2.1, 2.0), Verdict::Entangled);
    }

    #[test]
    fn local_bounds() {
        let hz = HermitianOperator::<f64>::from_real_diagonal(&[0.5, -0.5]);
        let cfg = NormSearch::default();
        for n in 2..=4 {
            let locals = vec![commutator_map(&hz); n];
            let b = local_generator_sep_bound(&locals, &cfg).unwrap();
            assert!((b.value - n as f64).abs() < 1e-9, "{}", b.value);
        }
        assert_eq!(local_generator_sep_bound::<f64>(&[], &cfg).unwrap().value, 0.0);
        let g = HermitianOperator::identity(2).scale(0.3);
        let mixed = vec![commutator_map(&hz), non_hermitian_map(&hz, &g).unwrap()];
        let b = local_generator_sep_bound(&mixed, &cfg).unwrap();
        assert!((b.value - (1.0 + 4.0 * (0.09 + 0.25))).abs() < 1e-8);
    }

    #[test]
    fn squeezing_of_coherent_state() {
        let triad = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]];
        for n in 1..=4 {
            let rho = css_x(n).density();
            let xi2 = spin_squeezing_xi(&rho, n, triad, 2.0).unwrap();
            assert!((xi2 - 1.0).abs() < 1e-12, "{xi2}");
            assert!(spin_squeezing_xi(&rho, n, triad, 4.0).unwrap() >= 1.0 - 1e-12);
        }
        let rho = PureState::basis(4, 0).density();
        assert!(matches!(spin_squeezing_xi(&rho, 2, triad, 2.0), Err(Error::Undefined(_))));
    }
}

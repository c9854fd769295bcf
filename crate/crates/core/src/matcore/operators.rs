use super::eig::{jacobi, Eigen};
use super::matrix::{inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Hermitian operator: `max |X - X†| ≤ herm_tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T: Real>(ComplexMatrix<T>);

impl<T: Real> HermitianOperator<T> {
    /// Validates Hermiticity and stores the exact Hermitian part.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let (dev, row, col) = m.hermiticity_deviation();
        if !(dev <= T::herm_tol()) {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
                row,
                col,
            });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Hermitian part of an arbitrary matrix, no validation.
    pub fn from_hermitian_part(m: &ComplexMatrix<T>) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_real_diagonal(d: &[T]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(d))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn eig(&self) -> Eigen<T> {
        jacobi(&self.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale_real(s))
    }

    /// `A - c·I`
    pub fn shift(&self, c: T) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim() {
            m[(i, i)] -= cr(c);
        }
        Self(m)
    }

    /// `f(A)` through the spectral decomposition.
    pub fn map_spectrum(&self, f: impl FnMut(T) -> T) -> Self {
        Self(self.eig().reconstruct_with(f))
    }

    /// `Tr(ρ A)` for Hermitian `ρ`; real up to rounding.
    pub fn expectation_in(&self, rho: &ComplexMatrix<T>) -> T {
        rho.trace_product(&self.0).re
    }

    pub fn expectation_pure(&self, psi: &PureState<T>) -> T {
        self.0.expectation(psi.amplitudes()).re
    }

    /// `dim · ε · ‖A‖_∞`
    pub fn zero_tol(&self) -> T {
        let norm = self.eig().max_abs_value();
        T::from_usize_lossy(self.dim()) * T::epsilon() * norm
    }
}

/// Density matrix: Hermitian, eigenvalues ≥ −psd_tol, |Tr ρ − 1| ≤ trace_tol.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real>(HermitianOperator<T>);

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let h = HermitianOperator::new(m)?;
        Self::from_hermitian(h)
    }

    pub fn from_hermitian(h: HermitianOperator<T>) -> Result<Self> {
        let tr = h.matrix().trace().re;
        let dev = (tr - T::one()).abs();
        if !(dev <= T::herm_tol()) {
            return Err(Error::TraceDeviation {
                deviation: dev.as_f64(),
            });
        }
        let e = h.eig();
        let tol = psd_tol(h.dim(), e.max_abs_value());
        if e.min() < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: e.min().as_f64(),
            });
        }
        Ok(Self(h))
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        let v = psi.amplitudes();
        Self(HermitianOperator(ComplexMatrix::outer(v, v)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::from_usize_lossy(dim);
        Self(HermitianOperator::from_real_diagonal(&vec![w; dim]))
    }

    pub fn hermitian(&self) -> &HermitianOperator<T> {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.0.matrix()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn eig(&self) -> Eigen<T> {
        self.0.eig()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> T {
        self.matrix().trace_product(self.matrix()).re
    }

    /// `Σ_i p_i ρ_i`; weights must be a probability vector.
    pub fn mixture(states: &[&DensityMatrix<T>], weights: &[T]) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::InvalidInput("mixture needs matching states and weights".into()));
        }
        let dim = states[0].dim();
        let mut acc = ComplexMatrix::zeros(dim);
        for (s, &w) in states.iter().zip(weights) {
            s.matrix().ensure_same_dim(&acc)?;
            acc += &s.matrix().scale_real(w);
        }
        Self::new(acc)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self(HermitianOperator(self.matrix().kron(other.matrix())))
    }
}

/// `dim · psd_rel · ‖ρ‖_∞`
pub fn psd_tol<T: Real>(dim: usize, norm: T) -> T {
    T::from_usize_lossy(dim) * T::psd_rel() * norm
}

/// Normalised state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real>(Vec<C<T>>);

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<C<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("empty state vector".into()));
        }
        let n2: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let dev = (n2 - T::one()).abs();
        if !(dev <= T::herm_tol()) {
            return Err(Error::TraceDeviation {
                deviation: dev.as_f64(),
            });
        }
        Ok(Self(amplitudes))
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<C<T>>) -> Result<Self> {
        let n = vec_norm(&amplitudes);
        if !(n > T::zero()) {
            return Err(Error::InvalidInput("cannot normalise a zero vector".into()));
        }
        Ok(Self(amplitudes.into_iter().map(|z| z.unscale(n)).collect()))
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![cr(T::zero()); dim];
        v[k] = cr(T::one());
        Self(v)
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn overlap(&self, other: &Self) -> C<T> {
        inner(&self.0, &other.0)
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self(super::matrix::kron_vec(&self.0, &other.0))
    }

    /// `(ΔH)²` in this state.
    pub fn variance(&self, h: &HermitianOperator<T>) -> T {
        let hv = h.matrix().mul_vec(&self.0);
        let mean = inner(&self.0, &hv).re;
        let second: T = hv.iter().map(|z| z.norm_sqr()).sum();
        (second - mean * mean).max(T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn rejects_non_hermitian_with_location() {
        let m = ComplexMatrix::<f64>::from_rows(vec![
            vec![cr(1.0), cr(0.5)],
            vec![cr(0.0), cr(1.0)],
        ])
        .unwrap();
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { deviation, row, col }) => {
                assert!((deviation - 0.5).abs() < 1e-15);
                assert_eq!((row, col), (0, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn density_checks_trace_and_positivity() {
        let bad_trace = ComplexMatrix::<f64>::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::TraceDeviation { .. })));
        let negative = ComplexMatrix::<f64>::from_real_diagonal(&[1.1, -0.1]);
        assert!(matches!(DensityMatrix::new(negative), Err(Error::NotPositive { .. })));
        assert!(DensityMatrix::new(ComplexMatrix::<f64>::from_real_diagonal(&[0.75, 0.25])).is_ok());
    }

    #[test]
    fn pure_state_variance() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(vec![cr(r), cr(r)]).unwrap();
        let hz = HermitianOperator::from_real_diagonal(&[0.5, -0.5]);
        assert!((plus.variance(&hz) - 0.25).abs() < 1e-15);
        assert!(PureState::<f64>::new(vec![Complex::new(1.0, 1.0)]).is_err());
    }
}

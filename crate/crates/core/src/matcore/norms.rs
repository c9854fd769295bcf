use super::eig::jacobi;
use super::matrix::ComplexMatrix;
use super::operators::HermitianOperator;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

/// Reject `alpha < 1` and NaN; `+∞` is accepted.
pub(crate) fn check_order<T: Real>(alpha: T) -> Result<()> {
    if alpha.is_nan() || alpha < T::one() {
        return Err(Error::InvalidParameter(format!("order alpha must be >= 1, got {alpha}")));
    }
    Ok(())
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Vec<T> {
    let (dev, _, _) = a.hermiticity_deviation();
    let scale = a.max_abs();
    let mut sv: Vec<T> = if dev <= T::epsilon() * T::lit(16.0) * scale {
        jacobi(a).values.into_iter().map(|l| l.abs()).collect()
    } else {
        let gram = &a.adjoint() * a;
        jacobi(&gram)
            .values
            .into_iter()
            .map(|l| l.max(T::zero()).sqrt())
            .collect()
    };
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// `(Σ σ_i^α)^{1/α}` on precomputed singular values (or absolute eigenvalues).
pub fn schatten_from_values<T: Real>(values: &[T], alpha: T) -> Result<T> {
    check_order(alpha)?;
    let m = values.iter().map(|v| v.abs()).fold(T::zero(), T::max);
    if alpha.is_infinite() || m == T::zero() {
        return Ok(m);
    }
    if alpha == T::one() {
        return Ok(values.iter().map(|v| v.abs()).sum());
    }
    let s: T = values.iter().map(|v| (v.abs() / m).powf(alpha)).sum();
    Ok(m * s.powf(T::one() / alpha))
}

/// Schatten α-norm, `α ∈ [1, ∞]`.
pub fn schatten_norm<T: Real>(a: &ComplexMatrix<T>, alpha: T) -> Result<T> {
    check_order(alpha)?;
    schatten_from_values(&singular_values(a), alpha)
}

/// Schatten α-norm of a Hermitian operator through its spectrum.
pub fn schatten_norm_hermitian<T: Real>(a: &HermitianOperator<T>, alpha: T) -> Result<T> {
    check_order(alpha)?;
    schatten_from_values(&a.eig().values, alpha)
}

/// `Tr|A|` for Hermitian `A`.
pub fn trace_norm<T: Real>(a: &HermitianOperator<T>) -> T {
    a.eig().values.iter().map(|l| l.abs()).sum()
}

/// `|A| = √(A†A)` for Hermitian `A`.
pub fn abs<T: Real>(a: &HermitianOperator<T>) -> HermitianOperator<T> {
    a.map_spectrum(|l| l.abs())
}

/// Spectral split `A = X₊ + X₋` into positive and negative parts.
#[derive(Clone, Debug)]
pub struct JordanHahn<T: Real> {
    pub positive: HermitianOperator<T>,
    pub negative: HermitianOperator<T>,
    /// Projector onto eigenvalues above `zero_tol`.
    pub positive_projector: HermitianOperator<T>,
    /// Projector onto eigenvalues below `-zero_tol`.
    pub negative_projector: HermitianOperator<T>,
}

impl<T: Real> JordanHahn<T> {
    /// `|A| = X₊ − X₋`
    pub fn abs(&self) -> HermitianOperator<T> {
        self.positive.sub(&self.negative)
    }
}

pub fn jordan_hahn<T: Real>(a: &HermitianOperator<T>) -> JordanHahn<T> {
    let e = a.eig();
    let tol = T::from_usize_lossy(a.dim()) * T::epsilon() * e.max_abs_value();
    let n = a.dim();
    let part = |keep: &dyn Fn(T) -> bool, value: bool| {
        let mut m = ComplexMatrix::zeros(n);
        for (k, &l) in e.values.iter().enumerate() {
            if !keep(l) {
                continue;
            }
            let w = if value { l } else { T::one() };
            let v = e.vector(k);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj() * cr(w);
                }
            }
        }
        HermitianOperator::from_hermitian_part(&m)
    };
    let pos = |l: T| l > tol;
    let neg = |l: T| l < -tol;
    JordanHahn {
        positive: part(&pos, true),
        negative: part(&neg, true),
        positive_projector: part(&pos, false),
        negative_projector: part(&neg, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C;

    fn sz() -> HermitianOperator<f64> {
        HermitianOperator::from_real_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn schatten_examples() {
        let id = ComplexMatrix::<f64>::identity(2);
        assert!((schatten_norm(&id, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((schatten_norm(sz().matrix(), 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 4.0]);
        assert_eq!(schatten_norm(&d, f64::INFINITY).unwrap(), 4.0);
        assert!(matches!(schatten_norm(&d, 0.5), Err(Error::InvalidParameter(_))));
        assert!(schatten_norm(&d, f64::NAN).is_err());
    }

    #[test]
    fn non_hermitian_singular_values() {
        // [[0, 2], [0, 0]] has singular values (2, 0)
        let m = ComplexMatrix::<f64>::from_rows(vec![
            vec![cr(0.0), cr(2.0)],
            vec![cr(0.0), cr(0.0)],
        ])
        .unwrap();
        let sv = singular_values(&m);
        assert!((sv[0] - 2.0).abs() < 1e-15 && sv[1].abs() < 1e-15);
    }

    #[test]
    fn jordan_hahn_examples() {
        let jh = jordan_hahn(&sz());
        let p0 = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        let m1 = HermitianOperator::from_real_diagonal(&[0.0, -1.0]);
        assert!((jh.positive.matrix() - p0.matrix()).max_abs() < 1e-15);
        assert!((jh.negative.matrix() - m1.matrix()).max_abs() < 1e-15);

        let psd = HermitianOperator::new(
            ComplexMatrix::from_rows(vec![
                vec![cr(2.0), C::new(0.5, 0.5)],
                vec![C::new(0.5, -0.5), cr(1.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let jh = jordan_hahn(&psd);
        assert!((jh.positive.matrix() - psd.matrix()).max_abs() < 1e-14);
        assert!(jh.negative.matrix().max_abs() < 1e-15);

        let jh = jordan_hahn(&HermitianOperator::<f64>::zeros(3));
        assert_eq!(jh.positive_projector.matrix().max_abs(), 0.0);
        assert_eq!(jh.negative_projector.matrix().max_abs(), 0.0);
    }

    #[test]
    fn zero_eigenvalues_excluded_from_projectors() {
        let a = HermitianOperator::<f64>::from_real_diagonal(&[2.0, 0.0, -1.0]);
        let jh = jordan_hahn(&a);
        assert!((jh.positive_projector.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!((jh.negative_projector.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!((trace_norm(&a) - 3.0).abs() < 1e-15);
        assert!((jh.abs().matrix() - abs(&a).matrix()).max_abs() < 1e-15);
    }
}

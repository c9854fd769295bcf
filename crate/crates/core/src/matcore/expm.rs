use super::matrix::ComplexMatrix;
use super::operators::HermitianOperator;
use crate::scalar::{Real, C};

const TAYLOR_TERMS: usize = 24;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = a.dim();
    let norm = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<T>())
        .fold(T::zero(), T::max);
    let mut squarings = 0u32;
    let mut s = T::one();
    let half = T::lit(0.5);
    while norm * s > half {
        s *= half;
        squarings += 1;
    }
    let x = a.scale_real(s);
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=TAYLOR_TERMS {
        term = (&term * &x).scale_real(T::one() / T::from_usize_lossy(k));
        sum += &term;
        if term.max_abs() <= T::epsilon() * sum.max_abs() * T::lit(1e-3) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `e^{-iHt}` through the spectral decomposition of `H`.
pub fn unitary_propagator<T: Real>(h: &HermitianOperator<T>, t: T) -> ComplexMatrix<T> {
    let e = h.eig();
    let n = h.dim();
    let phases: Vec<C<T>> = e.values.iter().map(|&l| C::from_polar(T::one(), -l * t)).collect();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n).fold(C::new(T::zero(), T::zero()), |acc, k| {
            acc + e.vectors[(i, k)] * phases[k] * e.vectors[(j, k)].conj()
        })
    })
}

//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Dimensions here are small (at most a few dozen), where Jacobi is both simple and
//! delivers eigenvalues with backward error at the level of machine precision.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use super::operators::HermitianOperator;
use crate::scalar::{cr, Real, C};

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `A = V diag(values) V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigen<T: Real> {
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k)
    }

    /// `V diag(f(λ)) V†`
    pub fn reconstruct_with(&self, mut f: impl FnMut(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mapped: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(cr(T::zero()), |acc, k| {
                acc + self.vectors[(i, k)] * self.vectors[(j, k)].conj() * mapped[k]
            })
        })
    }

    pub fn max_abs_value(&self) -> T {
        self.values.iter().map(|v| v.abs()).fold(T::zero(), T::max)
    }

    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn max(&self) -> T {
        self.values[self.values.len() - 1]
    }
}

/// Eigen-decomposition of a validated Hermitian operator.
pub fn hermitian_eig<T: Real>(a: &HermitianOperator<T>) -> Eigen<T> {
    jacobi(a.matrix())
}

/// Jacobi on the Hermitian part of `m`; callers guarantee Hermiticity.
pub(crate) fn jacobi<T: Real>(m: &ComplexMatrix<T>) -> Eigen<T> {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    let scale = a.frobenius_norm();
    if scale == T::zero() {
        return Eigen {
            values: vec![T::zero(); n],
            vectors: v,
        };
    }
    let negligible = scale * eps * T::lit(1e-3);

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, negligible);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Eigen { values, vectors }
}

fn rotate<T: Real>(
    a: &mut ComplexMatrix<T>,
    v: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    negligible: T,
) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs <= negligible {
        a[(p, q)] = cr(T::zero());
        a[(q, p)] = cr(T::zero());
        return;
    }
    let phase = apq.unscale(abs);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = T::lit(2.0);
    let tau = (aqq - app) / (two * abs);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let ph = phase.conj();
    let u_pp: C<T> = cr(c);
    let u_pq: C<T> = cr(s);
    let u_qp: C<T> = ph * (-s);
    let u_qq: C<T> = ph * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());
    a[(p, p)] = cr(a[(p, p)].re);
    a[(q, q)] = cr(a[(q, q)].re);
}

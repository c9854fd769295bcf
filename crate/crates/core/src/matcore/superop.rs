//! Linear maps on operators, stored on column-stacked vectorisations.
//!
//! `vec(X)[i + j·n] = X[i, j]`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)` and the commutator
//! generator `X ↦ −i[H, X]` becomes `−i(I ⊗ H − Hᵀ ⊗ I)`.

use super::matrix::ComplexMatrix;
use super::operators::HermitianOperator;
use crate::error::{Error, Result};
use crate::scalar::{ci, cr, Real, C};

#[derive(Clone, Debug, PartialEq)]
pub enum SuperopKind<T: Real> {
    /// `X ↦ −i[H, X]`
    Commutator(HermitianOperator<T>),
    /// `X ↦ −i(H_eff X − X H_eff†)` with `H_eff = H − iΓ`.
    NonHermitian {
        h: HermitianOperator<T>,
        gamma: HermitianOperator<T>,
    },
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<T: Real> {
    dim: usize,
    matrix: ComplexMatrix<T>,
    kind: SuperopKind<T>,
}

pub fn vectorize<T: Real>(x: &ComplexMatrix<T>) -> Vec<C<T>> {
    let n = x.dim();
    let mut v = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            v.push(x[(i, j)]);
        }
    }
    v
}

pub fn unvectorize<T: Real>(v: &[C<T>], dim: usize) -> ComplexMatrix<T> {
    assert_eq!(v.len(), dim * dim);
    ComplexMatrix::from_fn(dim, |i, j| v[i + j * dim])
}

fn effective<T: Real>(h: &HermitianOperator<T>, gamma: &HermitianOperator<T>) -> ComplexMatrix<T> {
    h.matrix() - &gamma.matrix().scale(ci(T::one()))
}

/// `X ↦ −i[H, X]`
pub fn commutator_map<T: Real>(h: &HermitianOperator<T>) -> Superoperator<T> {
    let n = h.dim();
    let id = ComplexMatrix::identity(n);
    let left = id.kron(h.matrix());
    let right = h.matrix().transpose().kron(&id);
    Superoperator {
        dim: n,
        matrix: (&left - &right).scale(ci(-T::one())),
        kind: SuperopKind::Commutator(h.clone()),
    }
}

/// `X ↦ −i(H_eff X − X H_eff†)`, `H_eff = H − iΓ`.
pub fn non_hermitian_map<T: Real>(
    h: &HermitianOperator<T>,
    gamma: &HermitianOperator<T>,
) -> Result<Superoperator<T>> {
    h.matrix().ensure_same_dim(gamma.matrix())?;
    let n = h.dim();
    let heff = effective(h, gamma);
    let id = ComplexMatrix::identity(n);
    // vec(X H_eff†) = (H_eff†)ᵀ ⊗ I = conj(H_eff) ⊗ I
    let left = id.kron(&heff);
    let right = heff.conj().kron(&id);
    Ok(Superoperator {
        dim: n,
        matrix: (&left - &right).scale(ci(-T::one())),
        kind: SuperopKind::NonHermitian {
            h: h.clone(),
            gamma: gamma.clone(),
        },
    })
}

impl<T: Real> Superoperator<T> {
    /// Wrap an explicit `n²×n²` matrix; the map must preserve Hermiticity.
    pub fn from_matrix(matrix: ComplexMatrix<T>) -> Result<Self> {
        let big = matrix.dim();
        let dim = (big as f64).sqrt().round() as usize;
        if dim * dim != big || dim == 0 {
            return Err(Error::InvalidInput(format!(
                "superoperator matrix has dimension {big}, which is not a perfect square"
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidInput("superoperator has non-finite entries".into()));
        }
        let s = Self {
            dim,
            matrix,
            kind: SuperopKind::Explicit,
        };
        let dev = s.hermiticity_preservation_deviation();
        if !(dev <= T::herm_tol()) {
            return Err(Error::InvalidInput(format!(
                "superoperator does not preserve Hermiticity (deviation {dev:e})"
            )));
        }
        Ok(s)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim),
            kind: SuperopKind::Explicit,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn kind(&self) -> &SuperopKind<T> {
        &self.kind
    }

    pub fn apply(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(x.dim(), self.dim, "superoperator dimension mismatch");
        let minus_i = ci(-T::one());
        match &self.kind {
            SuperopKind::Commutator(h) => h.matrix().commutator(x).scale(minus_i),
            SuperopKind::NonHermitian { h, gamma } => {
                let heff = effective(h, gamma);
                (&(&heff * x) - &(x * &heff.adjoint())).scale(minus_i)
            }
            SuperopKind::Explicit => unvectorize(&self.matrix.mul_vec(&vectorize(x)), self.dim),
        }
    }

    /// `ℒ[X]` for Hermitian `X`, returned as Hermitian (exact part).
    pub fn apply_hermitian(&self, x: &HermitianOperator<T>) -> HermitianOperator<T> {
        HermitianOperator::from_hermitian_part(&self.apply(x.matrix()))
    }

    /// `max_{ij} |ℒ[E_ij]† − ℒ[E_ji]|`, zero for Hermiticity-preserving maps.
    pub fn hermiticity_preservation_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut eij = ComplexMatrix::zeros(n);
                eij[(i, j)] = cr(T::one());
                let mut eji = ComplexMatrix::zeros(n);
                eji[(j, i)] = cr(T::one());
                let d = (&self.apply(&eij).adjoint() - &self.apply(&eji)).max_abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `max_{ij} |Tr ℒ[E_ij]|`, zero for trace-annihilating generators.
    pub fn trace_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut eij = ComplexMatrix::zeros(n);
                eij[(i, j)] = cr(T::one());
                worst = worst.max(self.apply(&eij).trace().norm());
            }
        }
        worst
    }
}

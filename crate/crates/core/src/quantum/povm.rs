use crate::classical::{ParametricDist, ProbDist};
use crate::error::{Error, Result};
use crate::matcore::{psd_tol, ComplexMatrix, DensityMatrix, Eigen, HermitianOperator};
use crate::scalar::{Real, C};

use super::family::ParametricFamily;

/// Positive operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<T: Real> {
    elements: Vec<HermitianOperator<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<HermitianOperator<T>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidInput("POVM has no elements".into()));
        }
        let dim = elements[0].dim();
        let mut total = ComplexMatrix::zeros(dim);
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            let eig = e.eig();
            if eig.min() < -psd_tol(dim, eig.max_abs_value().max(T::one())) {
                return Err(Error::InvalidInput(format!(
                    "POVM element {k} is not positive (min eigenvalue {:e})",
                    eig.min()
                )));
            }
            total += e.matrix();
        }
        let dev = (&total - &ComplexMatrix::identity(dim)).max_abs();
        if !(dev <= T::herm_tol()) {
            return Err(Error::Incomplete { deviation: dev.as_f64() });
        }
        Ok(Self { elements })
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_basis(vectors: &ComplexMatrix<T>) -> Result<Self> {
        let n = vectors.dim();
        Self::new(
            (0..n)
                .map(|k| {
                    let v = vectors.column(k);
                    HermitianOperator::from_hermitian_part(&ComplexMatrix::outer(&v, &v))
                })
                .collect(),
        )
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            elements: (0..dim)
                .map(|k| {
                    let mut d = vec![T::zero(); dim];
                    d[k] = T::one();
                    HermitianOperator::from_real_diagonal(&d)
                })
                .collect(),
        }
    }

    pub fn elements(&self) -> &[HermitianOperator<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// True when every element is an orthogonal projector.
    pub fn is_projective(&self) -> bool {
        self.elements.iter().all(|e| {
            let sq = e.matrix() * e.matrix();
            (&sq - e.matrix()).max_abs() <= T::lit(1e3).sqrt() * T::herm_tol()
        })
    }

    /// `Tr(E_x A)` for each element.
    pub fn expectations(&self, a: &ComplexMatrix<T>) -> Vec<T> {
        self.elements.iter().map(|e| e.expectation_in(a)).collect()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

/// Outcome distribution `p_x = Tr(E_x ρ)`.
pub fn induced_dist<T: Real>(rho: &DensityMatrix<T>, povm: &Povm<T>) -> Result<ProbDist<T>> {
    povm.check_dim(rho.dim())?;
    ProbDist::new(povm.expectations(rho.matrix()))
}

/// `p_x = Tr(E_x ρ(θ))`, `p'_x = Tr(E_x dρ/dθ)`; needs a trace-preserving family.
pub fn induced_parametric<T: Real>(
    fam: &ParametricFamily<T>,
    theta: T,
    povm: &Povm<T>,
) -> Result<ParametricDist<T>> {
    povm.check_dim(fam.dim())?;
    let point = fam.at(theta)?;
    ParametricDist::from_vecs(
        povm.expectations(point.state.matrix()),
        povm.expectations(point.derivative.matrix()),
    )
}

/// Projectors onto eigenvalue clusters; eigenvalues closer than `tol` share a projector.
pub(crate) fn cluster_projectors<T: Real>(e: &Eigen<T>, tol: T) -> Vec<HermitianOperator<T>> {
    let n = e.values.len();
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && e.values[end] - e.values[end - 1] <= tol {
            end += 1;
        }
        let mut p = ComplexMatrix::zeros(n);
        for k in start..end {
            let v: Vec<C<T>> = e.vector(k);
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        out.push(HermitianOperator::from_hermitian_part(&p));
        start = end;
    }
    out
}

/// Cluster projectors wrapped as a POVM without re-validation.
pub(crate) fn povm_from_clusters<T: Real>(e: &Eigen<T>, tol: T) -> Povm<T> {
    Povm {
        elements: cluster_projectors(e, tol),
    }
}

pub(crate) fn unchecked<T: Real>(elements: Vec<HermitianOperator<T>>) -> Povm<T> {
    Povm { elements }
}

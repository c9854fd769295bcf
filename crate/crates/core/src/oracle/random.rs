use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matcore::{inner, ComplexMatrix, DensityMatrix, HermitianOperator, PureState};
use crate::numeric::stream_rng;
use crate::quantum::Povm;
use crate::scalar::{Real, C};

fn gaussian<T: Real>(rng: &mut dyn RngCore) -> C<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C::new(T::lit(re), T::lit(im))
}

fn ginibre<T: Real>(dim: usize, rng: &mut dyn RngCore) -> ComplexMatrix<T> {
    let entries: Vec<C<T>> = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j])
}

/// `G G† / Tr(G G†)` with `G` complex Ginibre.
pub fn random_density<T: Real>(dim: usize, rng: &mut dyn RngCore) -> DensityMatrix<T> {
    let g = ginibre::<T>(dim, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_real(T::one() / tr)).expect("Ginibre construction is a state")
}

/// Haar-random state vector.
pub fn random_pure<T: Real>(dim: usize, rng: &mut dyn RngCore) -> PureState<T> {
    let v: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
    PureState::normalized(v).expect("Gaussian vector is nonzero")
}

/// `(G + G†)/2`, GUE-distributed.
pub fn random_hermitian<T: Real>(dim: usize, rng: &mut dyn RngCore) -> HermitianOperator<T> {
    HermitianOperator::from_hermitian_part(&ginibre(dim, rng))
}

/// Haar unitary by Gram–Schmidt on Gaussian columns.
pub fn random_unitary<T: Real>(dim: usize, rng: &mut dyn RngCore) -> ComplexMatrix<T> {
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C<T>> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let ov = inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= *y * ov;
                }
            }
        }
        let n = crate::matcore::vec_norm(&v);
        if n > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z.unscale(n)).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Rank-one projective measurement in a Haar-random basis.
pub fn random_povm<T: Real>(dim: usize, rng: &mut dyn RngCore) -> Povm<T> {
    Povm::from_basis(&random_unitary(dim, rng)).expect("unitary columns form a basis")
}

/// Product of `n` Haar-random qubit states.
pub fn random_product_state<T: Real>(n: usize, rng: &mut dyn RngCore) -> PureState<T> {
    let first = random_pure::<T>(2, rng);
    (1..n).fold(first, |acc, _| acc.tensor(&random_pure(2, rng)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Density,
    Pure,
    Hermitian,
    Povm,
    ProductState,
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(Self::Density),
            "pure" => Ok(Self::Pure),
            "hermitian" => Ok(Self::Hermitian),
            "povm" => Ok(Self::Povm),
            "product_state" | "product" => Ok(Self::ProductState),
            other => Err(Error::InvalidInput(format!("unsupported instance kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance<T: Real> {
    Density(DensityMatrix<T>),
    Pure(PureState<T>),
    Hermitian(HermitianOperator<T>),
    Povm(Povm<T>),
}

/// Seeded instance; `size` is the dimension, or the qubit count for product states.
pub fn random_instance<T: Real>(kind: InstanceKind, size: usize, seed: u64) -> Result<Instance<T>> {
    let limit = if kind == InstanceKind::ProductState { 12 } else { 4096 };
    if size == 0 || size > limit {
        return Err(Error::InvalidParameter(format!("size must be in 1..={limit}, got {size}")));
    }
    let mut rng = stream_rng(seed, 0);
    Ok(match kind {
        InstanceKind::Density => Instance::Density(random_density(size, &mut rng)),
        InstanceKind::Pure => Instance::Pure(random_pure(size, &mut rng)),
        InstanceKind::Hermitian => Instance::Hermitian(random_hermitian(size, &mut rng)),
        InstanceKind::Povm => Instance::Povm(random_povm(size, &mut rng)),
        InstanceKind::ProductState => Instance::Pure(random_product_state(size, &mut rng)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_satisfy_invariants() {
        let mut rng = stream_rng(1, 0);
        for k in 0..1000 {
            let dim = 2 + k % 3;
            let rho = random_density::<f64>(dim, &mut rng);
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
            let p = random_povm::<f64>(dim, &mut rng);
            assert!(Povm::new(p.elements().to_vec()).is_ok());
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = stream_rng(2, 0);
        let u = random_unitary::<f64>(4, &mut rng);
        assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(4)).max_abs() < 1e-13);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = random_instance::<f64>(InstanceKind::Density, 3, 42).unwrap();
        let b = random_instance::<f64>(InstanceKind::Density, 3, 42).unwrap();
        assert_eq!(a, b);
        let c = random_instance::<f64>(InstanceKind::Density, 3, 43).unwrap();
        assert_ne!(a, c);
        assert!(random_instance::<f64>(InstanceKind::Povm, 0, 1).is_err());
        assert!("wigner".parse::<InstanceKind>().is_err());
    }

    #[test]
    fn product_state_dimension() {
        match random_instance::<f64>(InstanceKind::ProductState, 3, 5).unwrap() {
            Instance::Pure(p) => assert_eq!(p.dim(), 8),
            other => panic!("{other:?}"),
        }
    }
}

//! Statistical distances and speeds of parametrized quantum states.
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented for `f32` and
//! `f64`). The aliases at the crate root fix the scalar to `f64`, which is what the command
//! line tool and most callers want.

// `!(x <= tol)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod classical;
pub mod error;
pub mod estimation;
pub mod json;
pub mod matcore;
pub mod numeric;
pub mod oracle;
pub mod quantum;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Matrix = matcore::ComplexMatrix<f64>;
pub type Hermitian = matcore::HermitianOperator<f64>;
pub type Density = matcore::DensityMatrix<f64>;
pub type Pure = matcore::PureState<f64>;
pub type Superop = matcore::Superoperator<f64>;

pub type Matrix32 = matcore::ComplexMatrix<f32>;
pub type Hermitian32 = matcore::HermitianOperator<f32>;
pub type Density32 = matcore::DensityMatrix<f32>;

pub type Family = quantum::ParametricFamily<f64>;
pub type Povm = quantum::Povm<f64>;
pub type Family32 = quantum::ParametricFamily<f32>;

//! Dense complex linear algebra at small dimension.

mod eig;
mod expm;
mod matrix;
mod norms;
mod operators;
mod superop;

pub use eig::{hermitian_eig, Eigen};
pub use expm::{expm, unitary_propagator};
pub use matrix::{inner, kron_vec, vec_norm, ComplexMatrix};
pub use norms::{
    abs, jordan_hahn, schatten_from_values, schatten_norm, schatten_norm_hermitian,
    singular_values, trace_norm, JordanHahn,
};
pub use operators::{psd_tol, DensityMatrix, HermitianOperator, PureState};
pub use superop::{commutator_map, non_hermitian_map, unvectorize, vectorize, SuperopKind, Superoperator};

pub(crate) use norms::check_order;

//! Heisenberg limits, separability limits and related bounds on quantum speeds.

mod curve;
mod limits;
mod separability;
mod spin;

pub use curve::{curve_length, LENGTH_TOL};
pub use limits::{
    bhatia_davis_bound, collective_bhatia_davis, heisenberg_limit, nonhermitian_min_norm_qubit,
    nonhermitian_speed_bound, superop_norm, HeisenbergLimit, NonHermitianBound, NormSearch, SuperopNorm,
};
pub use separability::{
    asep_bound, ksep_bound, local_generator_sep_bound, spin_squeezing_xi, variance, verdict, witness,
    LocalBound, SeparabilityBound, Verdict, WitnessReport, WITNESS_SLACK,
};
pub use spin::{local_qubit_operator, pauli, Block, CollectiveSpin, Partition};

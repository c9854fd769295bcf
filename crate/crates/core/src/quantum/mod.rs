//! Quantum distances, speeds and their optimal measurements.

mod distances;
mod family;
mod povm;
mod pure;
mod speeds;
mod thermal;

pub use distances::{bures_distance, fidelity, schatten_distance, trace_distance};
pub use family::{boltzmann, FamilyKind, FamilyPoint, ParametricFamily};
pub use povm::{induced_dist, induced_parametric, Povm};
pub use pure::{nonhermitian_moments, nonhermitian_pure_speed, pure_two_projector_povm, weak_value_fisher};
pub use speeds::{
    hilbert_schmidt_speed, optimal_povm, qfi, quantum_speed, schatten_speed, sld, trace_speed,
    unitary_hs_speed, PovmTarget, SchattenSpeed, SldResult, SpeedKind,
};
pub use thermal::{thermal_family, thermal_gen_fisher};


//! Monte Carlo checks of state discrimination, Cramér–Rao and median-unbiased bounds.
//!
//! Everything here runs in `f64`. Trial `t` of a run with seed `s` draws from stream `t`
//! of a ChaCha generator keyed by `s`, so parallel and serial runs agree exactly.

mod cramer_rao;
mod discrimination;
mod median;
mod model;
pub(crate) mod stats;

pub use cramer_rao::{cramer_rao_check, cramer_rao_check_family, cramer_rao_from_replicas, CramerRaoReport, BATCHES, MIN_CR_TRIALS};
pub use discrimination::{discrimination_game, discrimination_probability, helstrom_povm, DiscriminationReport};
pub use median::{
    classical_median_bound, median_balance, median_check, median_dispersion_vs_bound, median_normality_test,
    quantum_median_bound, quantum_median_chain, quantum_median_povm, replicas, EstimationResult, Estimator,
    KsReport, MedianCheck, MIN_TRIALS,
};
pub use model::{
    check_normalization, median_dispersion_limit, model_fisher, ContinuousModel, LocationKind, LocationModel,
    NORM_TOL,
};
pub use stats::{ks_p_value, ks_statistic, sample_median};

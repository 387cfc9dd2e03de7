//! Risk-averse quantum betting games and the Rényi/Arimoto information measures that
//! characterise them.
//!
//! Logarithms are base 2 throughout. Orders live on the extended real line via [`Order`],
//! and the risk of an isoelastic gambler is `R = 1/α` ([`RiskParam`]).

pub mod betting;
pub mod capacity;
pub mod divergence;
pub mod entropy;
pub mod error;
pub mod games;
pub mod linalg;
pub mod num;
pub mod order;
pub mod povm_opt;
pub mod prob;
pub mod quantum;
pub mod random;
pub mod resource;
pub mod simplex;
pub mod sweep;
pub mod verify;

pub use betting::{
    blp_decomposition, ice, isoelastic_utility, log_ice, numeric_optimal_ice, optimal_strategy, rra,
    BlpTerms, Dist, GameSpec, IceValue, Odds, Strategy,
};
pub use capacity::{renyi_capacity, renyi_capacity_report, CapacityReport};
pub use divergence::{
    cond_renyi_div, renyi_div, sibson_q_star, variant_mi, variant_mi_solution, CrdVariant,
    MiMethod, MiSolution,
};
pub use entropy::{
    arimoto_cond_entropy, arimoto_mi, cond_renyi_probability, renyi_entropy, renyi_probability,
    shannon_mi,
};
pub use error::{Error, Result};
pub use games::{
    arimoto_gap, arimoto_mi_quantum, best_free_qsb_value, cpp_brute_force, discrimination_exclusion,
    max_noisy_arimoto_mi, noisy_arimoto_mi, nqsb_value, qcb_value, qsb_value, result_check, FreeSet,
    GapInstance, QsbGame, ResultInstance, ResultKind, ResultReport,
};
pub use order::{sgn, Order, OrderClass, RiskParam};
pub use prob::{CondPmf, JointPmf, Pmf};
pub use quantum::{
    adjoint_apply, apply_channel, born_cond_pmf, is_uninformative, simulate_measurement,
    DensityMatrix, Ensemble, KrausChannel, Povm, StateSet,
};
pub use resource::{
    alpha_measure, alpha_measure_report, informativeness_certificate, informativeness_measure,
    measured_sibson_div, monotone_suite, robustness_informativeness, weight_informativeness,
    MinimaxCertificate, MonotoneReport, MonotoneSuiteReport,
};
pub use random::{random_instance, InstanceCounts};

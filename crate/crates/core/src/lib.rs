//! Permutation-based crowd labeling.
//!
//! A crowd of `n` workers answers `d` binary questions. Worker `i` is asked
//! question `j` with probability `p_obs` and, when asked, answers correctly
//! with probability `Q*[i][j]`. This crate provides:
//!
//! * [`model`]: probability matrices, ground-truth instances, the response
//!   sampler and model-class validators (Dawid-Skene, intermediate,
//!   permutation-based).
//! * [`metrics`]: Hamming error, the Q*-loss and collective intelligence.
//! * [`spectral`]: top eigenvector of `Y Yᵀ` and the induced worker ordering.
//! * [`estimators`]: majority vote, WAN and OBI-WAN.
//! * [`reference_ls`]: exhaustive least squares over the permutation class for
//!   tiny problems, built on a bimonotone projection.
//! * [`scenarios`]: the simulation and lower-bound constructions.
//! * [`harness`]: seeded Monte Carlo runner with CSV output.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod isotonic;
pub mod metrics;
pub mod model;
pub mod reference_ls;
pub mod rng;
pub mod scenarios;
pub mod spectral;

pub use error::{Error, Result};
pub use estimators::{easy_question_set, majority_vote, obi_wan, wan, window_floor, WanOutput};
pub use metrics::{collective_intelligence, frobenius_error, hamming, qstar_loss, LossValue};
pub use model::{
    classify_matrix, estimate_pobs, sample_responses, Answers, ModelClassReport, ProbabilityMatrix,
    ResponseMatrix, TruthInstance,
};
pub use reference_ls::{least_squares, project_bimonotone, LsLimits, LsSolution};
pub use scenarios::{build, ScenarioKind, ScenarioSpec, TruthMode};
pub use spectral::{ordering_from_vector, top_eigenvector, TopEigenvector, WorkerOrdering};

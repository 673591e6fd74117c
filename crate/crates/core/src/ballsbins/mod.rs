//! Balls-and-bins experiments: ball sets, bin loads, events and estimators.

mod bins;
mod events;
mod exact;
mod montecarlo;
mod sets;
mod subspace;

pub use bins::{bin_counts, event_e1, largest_bin, BinHistogram};
pub use events::{check_e1_e2_implication, event_e2, event_e2_by_fibers, ImplicationReport, Witness, E2_MAX_F};
pub use exact::{
    exact_expected_lbin, exact_lbin_distribution, joint_counts, pairwise_independence_check, ExactDistribution,
    PairwiseMode, PairwiseReport, PAIRWISE_EXACT_LIMIT,
};
pub use montecarlo::{
    estimate_e2, estimate_tail, experiment_set, run_trials, ExperimentConfig, TailEstimate, TrialSummary,
};
pub use sets::{generate_set, BallSet, SetDescriptor, SetKind};
pub use subspace::{subspace_structure, SubspaceReport};

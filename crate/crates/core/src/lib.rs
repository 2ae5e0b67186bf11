//! Numerical core: FLRW scale-factor integration, particle horizons and the
//! holographic bound on one side; finite-dimensional observer states, branch
//! ensembles over replicated observers, infinite-product convergence analysis
//! and frequency-operator statistics on the other.

pub mod branch;
pub mod cosmology;
pub mod frequency;
pub mod numeric;
pub mod quantum;
pub mod rng;

pub use branch::{
    branch_log_probability, branch_probability_sum, branch_probability_sum_brute_force,
    branch_probability_sum_brute_force_with_cap, branch_probability_sum_compressed,
    collapse_decay_curve, compress_branches, compress_branches_with_cap, enumerate_branches,
    enumerate_branches_with_cap, infinite_product_classify, max_branch_probability,
    simulate_finite_collapse, uniform_symmetric_sequence, BranchAssignment, BranchError,
    BranchOutcomes, BranchWeight, CollapseMode, CompressedEnsemble, CompressedEntry,
    ProductAnalysis, ProductVerdict, WeightSequenceSpec, DEFAULT_ENUMERATION_CAP,
    DEFAULT_TABLE_CAP,
};
pub use cosmology::{
    holographic_ratio, particle_horizon, solve_scale_factor, CosmologyError, CosmologyModel,
    CurvatureSign, GridControl, HorizonResult, ScaleFactorCurve, CURVATURE_TOLERANCE,
};
pub use frequency::{
    born_convergence_table, frequency_expectation, frequency_spectrum, frequency_variance,
    ConvergenceRow, FrequencySpectrum,
};
pub use quantum::{indistinguishable, ObserverState, OutcomeDistribution, QuantumError};
pub use rng::RngStream;

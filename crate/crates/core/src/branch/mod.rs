//! Branch ensembles over N replicated observers.
//!
//! A branch assignment maps each of N observers to one of K measurement
//! outcomes; its weight is the product of the per-observer Born
//! probabilities. Everything here carries probabilities in natural-log
//! space end to end: at K = 2 and N in the thousands the linear values sit
//! far below the f64 underflow threshold. Linear-space numbers appear only
//! at API boundaries.

mod compress;
mod product;

pub use compress::{
    compress_branches, compress_branches_with_cap, CompressedEnsemble, CompressedEntry,
};
pub use product::{
    infinite_product_classify, uniform_symmetric_sequence, ProductAnalysis, ProductVerdict,
    WeightSequenceSpec, AWAY_FROM_ONE_MARGIN, BLOCK_DECAY_RATIO, BLOCK_NONDECAY_RATIO,
    LOG_PRODUCT_FLOOR, MIN_CUTOFF, TAIL_SUM_TOLERANCE,
};

use thiserror::Error;

use crate::numeric::NeumaierSum;
use crate::quantum::ObserverState;
use crate::rng::RngStream;

/// Default cap on brute-force enumeration (number of branches).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Default cap on compressed counts-table size (number of entries).
pub const DEFAULT_TABLE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BranchError {
    #[error("enumerating {k}^{n} branches exceeds the cap of {cap}")]
    EnumerationTooLarge { k: u32, n: usize, cap: u64 },
    #[error("counts table would hold about exp({ln_entries:.1}) entries, over the cap of {cap}")]
    TableTooLarge { ln_entries: f64, cap: u64 },
    #[error("assignment must be nonempty")]
    EmptyAssignment,
    #[error("outcome index 0 at position {position}; outcomes are 1-based")]
    ZeroOutcome { position: usize },
    #[error("weight x_{index} = {value} outside (0, 1]")]
    InvalidWeight { index: usize, value: f64 },
    #[error("cutoff {cutoff} below the minimum of {minimum}")]
    CutoffTooSmall { cutoff: usize, minimum: usize },
    #[error("explicit weight sequence has {len} terms, fewer than cutoff {cutoff}")]
    ExplicitSequenceTooShort { cutoff: usize, len: usize },
}

/// One function f_N: {1..N} -> {1..K}, stored as 1-based outcome indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchAssignment {
    outcomes: Vec<u32>,
}

impl BranchAssignment {
    pub fn new(outcomes: Vec<u32>) -> Result<Self, BranchError> {
        if outcomes.is_empty() {
            return Err(BranchError::EmptyAssignment);
        }
        for (position, &o) in outcomes.iter().enumerate() {
            if o == 0 {
                return Err(BranchError::ZeroOutcome { position });
            }
        }
        Ok(Self { outcomes })
    }

    pub fn outcomes(&self) -> &[u32] {
        &self.outcomes
    }

    /// N, the number of observers.
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Outcome multiplicities (c_1..c_K) against a given dimension K.
    pub fn outcome_counts(&self, dimension: usize) -> Vec<u64> {
        let mut counts = vec![0u64; dimension];
        for &o in &self.outcomes {
            assert!(
                (o as usize) <= dimension,
                "outcome {o} exceeds dimension {dimension}"
            );
            counts[o as usize - 1] += 1;
        }
        counts
    }
}

/// How a weighted branch tracks the assignment that produced it.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchOutcomes {
    Explicit(BranchAssignment),
    /// Outcome multiplicities (c_1..c_K); enough for any modulus-level use.
    Counts(Vec<u64>),
}

/// A branch with its log-domain probability.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchWeight {
    log_probability: f64,
    outcomes: BranchOutcomes,
}

impl BranchWeight {
    /// ln |p^{f_N}_N|^2; `f64::NEG_INFINITY` marks an impossible branch.
    pub fn log_probability(&self) -> f64 {
        self.log_probability
    }

    pub fn probability(&self) -> f64 {
        self.log_probability.exp()
    }

    pub fn is_zero_probability(&self) -> bool {
        self.log_probability == f64::NEG_INFINITY
    }

    pub fn outcomes(&self) -> &BranchOutcomes {
        &self.outcomes
    }
}

fn checked_pow(k: u32, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(k as u64)?;
    }
    Some(acc)
}

/// Visits every assignment in lexicographic order without materializing it.
/// The buffer passed to `visit` is reused between calls.
pub(crate) fn for_each_assignment<F: FnMut(&[u32])>(k: u32, n: usize, mut visit: F) {
    debug_assert!(k >= 1 && n >= 1);
    let mut outcomes = vec![1u32; n];
    loop {
        visit(&outcomes);
        // Odometer increment: last position varies fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if outcomes[pos] < k {
                outcomes[pos] += 1;
                break;
            }
            outcomes[pos] = 1;
        }
    }
}

/// All K^N branch assignments in lexicographic order.
pub fn enumerate_branches(k: u32, n: usize) -> Result<Vec<BranchAssignment>, BranchError> {
    enumerate_branches_with_cap(k, n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_branches_with_cap(
    k: u32,
    n: usize,
    cap: u64,
) -> Result<Vec<BranchAssignment>, BranchError> {
    assert!(k >= 1, "need at least one outcome");
    assert!(n >= 1, "need at least one observer");
    let total = match checked_pow(k, n) {
        Some(t) if t <= cap => t,
        _ => return Err(BranchError::EnumerationTooLarge { k, n, cap }),
    };
    let mut all = Vec::with_capacity(total as usize);
    for_each_assignment(k, n, |outcomes| {
        all.push(BranchAssignment {
            outcomes: outcomes.to_vec(),
        });
    });
    Ok(all)
}

/// Log-domain branch probability ln prod_j p_{f(j)} = sum_k c_k ln p_k.
///
/// Grouping by counts makes the result exactly permutation-invariant. A
/// branch using a zero-probability outcome gets the explicit
/// `NEG_INFINITY` marker rather than an error.
pub fn branch_log_probability(state: &ObserverState, assignment: &BranchAssignment) -> BranchWeight {
    let counts = assignment.outcome_counts(state.dimension());
    let log_probability = log_probability_of_counts(state, &counts);
    BranchWeight {
        log_probability,
        outcomes: BranchOutcomes::Explicit(assignment.clone()),
    }
}

pub(crate) fn log_probability_of_counts(state: &ObserverState, counts: &[u64]) -> f64 {
    let probabilities = state.born_probabilities();
    let mut acc = NeumaierSum::new();
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue; // 0 * ln(0) reads as 0 here
        }
        let p = probabilities.probabilities()[k];
        if p == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc.add(c as f64 * p.ln());
    }
    acc.total()
}

/// Sum of |p^{f_N}_N|^2 over all of T_N by direct enumeration.
///
/// Works in linear space (N is small within the cap) with compensated
/// summation; this is the independent oracle for the compressed path.
pub fn branch_probability_sum_brute_force(
    state: &ObserverState,
    n: usize,
) -> Result<f64, BranchError> {
    branch_probability_sum_brute_force_with_cap(state, n, DEFAULT_ENUMERATION_CAP)
}

pub fn branch_probability_sum_brute_force_with_cap(
    state: &ObserverState,
    n: usize,
    cap: u64,
) -> Result<f64, BranchError> {
    let k = state.dimension() as u32;
    if checked_pow(k, n).map_or(true, |t| t > cap) {
        return Err(BranchError::EnumerationTooLarge { k, n, cap });
    }
    let p = state.born_probabilities();
    let probs = p.probabilities();
    let mut acc = NeumaierSum::new();
    for_each_assignment(k, n, |outcomes| {
        let mut branch = 1.0f64;
        for &o in outcomes {
            branch *= probs[o as usize - 1];
        }
        acc.add(branch);
    });
    Ok(acc.total())
}

/// Same total through the multinomial counts table; valid for any N the
/// table cap admits.
pub fn branch_probability_sum_compressed(
    state: &ObserverState,
    n: usize,
) -> Result<f64, BranchError> {
    Ok(compress_branches(state, n as u64)?.total_probability())
}

/// Total branch probability, brute force when the enumeration fits and the
/// compressed route otherwise.
pub fn branch_probability_sum(state: &ObserverState, n: usize) -> Result<f64, BranchError> {
    match branch_probability_sum_brute_force(state, n) {
        Ok(total) => Ok(total),
        Err(BranchError::EnumerationTooLarge { .. }) => branch_probability_sum_compressed(state, n),
        Err(other) => Err(other),
    }
}

/// The single most probable branch: every observer lands on argmax_k p_k
/// (smallest index on ties), so ln p = N ln max_k p_k.
pub fn max_branch_probability(state: &ObserverState, n: u64) -> BranchWeight {
    assert!(n >= 1, "need at least one observer");
    let (outcome, p_max) = state.born_probabilities().max_probability();
    let mut counts = vec![0u64; state.dimension()];
    counts[outcome as usize - 1] = n;
    BranchWeight {
        log_probability: n as f64 * p_max.ln(),
        outcomes: BranchOutcomes::Counts(counts),
    }
}

/// Rows (N, log10 of the max branch probability) = (N, N log10 max_k p_k).
///
/// The slope is log10(max_k p_k) exactly; any state with max p < 1 decays
/// without bound, which is the finite-truncation face of the vanishing
/// branch-probability limit.
pub fn collapse_decay_curve(state: &ObserverState, n_list: &[u64]) -> Vec<(u64, f64)> {
    assert!(!n_list.is_empty(), "n_list must be nonempty");
    assert!(
        n_list.windows(2).all(|w| w[0] < w[1]),
        "n_list must be strictly increasing"
    );
    let (_, p_max) = state.born_probabilities().max_probability();
    let log10_p_max = p_max.log10();
    n_list.iter().map(|&n| (n, n as f64 * log10_p_max)).collect()
}

/// Measurement replication mode for N observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseMode {
    /// One shared Born draw: all post-measurement states coincide. This is
    /// the finite-N regime in which a global collapse does occur.
    Correlated,
    /// N independent Born draws: the frequency-statistics regime.
    Independent,
}

/// Outcome list for N replicated observers under the chosen mode.
pub fn simulate_finite_collapse(
    state: &ObserverState,
    n: usize,
    rng: &mut RngStream,
    mode: CollapseMode,
) -> Vec<u32> {
    assert!(n >= 1, "need at least one observer");
    match mode {
        CollapseMode::Correlated => {
            let shared = state.sample_outcome(rng);
            vec![shared; n]
        }
        CollapseMode::Independent => (0..n).map(|_| state.sample_outcome(rng)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ObserverState;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn half_half() -> ObserverState {
        ObserverState::from_reals(&[1.0, 1.0]).unwrap()
    }

    fn state_36_64() -> ObserverState {
        ObserverState::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap()
    }

    #[test]
    fn enumerate_two_cubed_is_eight_lexicographic() {
        let branches = enumerate_branches(2, 3).unwrap();
        assert_eq!(branches.len(), 8);
        assert_eq!(branches[0].outcomes(), &[1, 1, 1]);
        assert_eq!(branches[1].outcomes(), &[1, 1, 2]);
        assert_eq!(branches[7].outcomes(), &[2, 2, 2]);
        let mut seen = branches.clone();
        seen.dedup();
        assert_eq!(seen.len(), 8, "no duplicates");
    }

    #[test]
    fn enumerate_single_observer_lists_outcomes() {
        let branches = enumerate_branches(3, 1).unwrap();
        let outcomes: Vec<&[u32]> = branches.iter().map(|b| b.outcomes()).collect();
        assert_eq!(outcomes, vec![&[1][..], &[2][..], &[3][..]]);
    }

    #[test]
    fn enumeration_cap_enforced() {
        let err = enumerate_branches(2, 20).unwrap_err();
        assert_eq!(
            err,
            BranchError::EnumerationTooLarge {
                k: 2,
                n: 20,
                cap: DEFAULT_ENUMERATION_CAP
            }
        );
    }

    #[test]
    fn equal_amplitudes_make_every_branch_equiprobable() {
        let s = half_half();
        let a = BranchAssignment::new(vec![1, 2, 1, 2, 2, 1, 1, 2, 1, 2]).unwrap();
        let w = branch_log_probability(&s, &a);
        assert_relative_eq!(w.log_probability(), 10.0 * 0.5f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(w.probability(), 2.0f64.powi(-10), max_relative = 1e-12);
    }

    #[test]
    fn impossible_outcome_is_a_zero_marker_not_an_error() {
        let s = ObserverState::from_reals(&[1.0, 0.0]).unwrap();
        let a = BranchAssignment::new(vec![1, 2, 1]).unwrap();
        let w = branch_log_probability(&s, &a);
        assert!(w.is_zero_probability());
        assert_eq!(w.probability(), 0.0);
    }

    #[test]
    fn mixed_branch_probability_is_product_of_born_weights() {
        let s = state_36_64();
        let a = BranchAssignment::new(vec![1, 2, 2]).unwrap();
        let w = branch_log_probability(&s, &a);
        assert_relative_eq!(w.probability(), 0.36 * 0.64 * 0.64, max_relative = 1e-12);
        assert_relative_eq!(w.probability(), 0.147456, max_relative = 1e-12);
    }

    #[test]
    fn probability_sum_single_observer_is_one() {
        let s = state_36_64();
        assert_relative_eq!(
            branch_probability_sum_brute_force(&s, 1).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn probability_sum_equal_amplitudes_exact() {
        let s = half_half();
        let total = branch_probability_sum_brute_force(&s, 12).unwrap();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn probability_sum_biased_state() {
        let s = state_36_64();
        let total = branch_probability_sum_brute_force(&s, 8).unwrap();
        assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn auto_sum_switches_to_compressed_route() {
        let s = state_36_64();
        // 2^40 branches is far over the cap; the counts table has 41 entries.
        let total = branch_probability_sum(&s, 40).unwrap();
        assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn max_branch_follows_dominant_outcome() {
        let s = state_36_64();
        let w = max_branch_probability(&s, 5);
        assert_relative_eq!(w.log_probability(), 5.0 * 0.64f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(w.probability(), 0.64f64.powi(5), max_relative = 1e-12);
        assert_relative_eq!(w.probability(), 0.1073741824, max_relative = 1e-12);
        match w.outcomes() {
            BranchOutcomes::Counts(counts) => assert_eq!(counts, &vec![0, 5]),
            _ => panic!("expected counts representation"),
        }
    }

    #[test]
    fn max_branch_ties_break_to_smallest_index() {
        let s = half_half();
        let w = max_branch_probability(&s, 3);
        match w.outcomes() {
            BranchOutcomes::Counts(counts) => assert_eq!(counts, &vec![3, 0]),
            _ => panic!("expected counts representation"),
        }
        assert_relative_eq!(w.probability(), 0.125, max_relative = 1e-14);
    }

    #[test]
    fn decay_curve_equal_amplitudes() {
        let s = half_half();
        let rows = collapse_decay_curve(&s, &[1, 10, 100]);
        assert_relative_eq!(rows[0].1, -0.30102999566398120, max_relative = 1e-14);
        assert_relative_eq!(rows[1].1, -3.0102999566398120, max_relative = 1e-14);
        assert_relative_eq!(rows[2].1, -30.102999566398120, max_relative = 1e-14);
    }

    #[test]
    fn decay_curve_slope_is_exact() {
        let s = state_36_64();
        let n_list: Vec<u64> = (1..=100).collect();
        let rows = collapse_decay_curve(&s, &n_list);
        let slope = 0.64f64.log10();
        for w in rows.windows(2) {
            let observed = (w[1].1 - w[0].1) / ((w[1].0 - w[0].0) as f64);
            assert!((observed - slope).abs() <= 1e-12);
        }
        assert_relative_eq!(rows[99].1, -19.382002601611, max_relative = 1e-16, epsilon = 1e-9);
    }

    #[test]
    fn correlated_mode_returns_constant_list() {
        let s = state_36_64();
        for seed in 0..20 {
            let mut rng = RngStream::new(seed);
            let outcomes = simulate_finite_collapse(&s, 50, &mut rng, CollapseMode::Correlated);
            assert_eq!(outcomes.len(), 50);
            assert!(outcomes.iter().all(|&o| o == outcomes[0]));
        }
    }

    #[test]
    fn independent_mode_on_basis_state_is_constant() {
        let s = ObserverState::from_reals(&[1.0, 0.0]).unwrap();
        let mut rng = RngStream::new(3);
        let outcomes = simulate_finite_collapse(&s, 100, &mut rng, CollapseMode::Independent);
        assert!(outcomes.iter().all(|&o| o == 1));
    }

    #[test]
    fn independent_mode_counts_within_four_sigma() {
        // Binomial std at p = 0.5, n = 1e4 is 50; allow 4 sigma = 200.
        let s = half_half();
        let mut rng = RngStream::new(11);
        let outcomes = simulate_finite_collapse(&s, 10_000, &mut rng, CollapseMode::Independent);
        let ones = outcomes.iter().filter(|&&o| o == 1).count() as i64;
        assert!((ones - 5000).abs() <= 200, "count {ones} outside 5000 +- 200");
    }

    #[test]
    fn grouped_brute_force_matches_compressed_entries() {
        use std::collections::BTreeMap;
        for (k, n) in [(2u32, 10usize), (3, 7)] {
            let s = if k == 2 {
                state_36_64()
            } else {
                ObserverState::from_reals(&[0.5, 0.3, 0.2]).unwrap()
            };
            let probs = s.born_probabilities();
            let mut grouped: BTreeMap<Vec<u64>, NeumaierSum> = BTreeMap::new();
            for_each_assignment(k, n, |outcomes| {
                let mut counts = vec![0u64; k as usize];
                let mut branch = 1.0f64;
                for &o in outcomes {
                    counts[o as usize - 1] += 1;
                    branch *= probs.probabilities()[o as usize - 1];
                }
                grouped.entry(counts).or_default().add(branch);
            });
            let ensemble = compress_branches(&s, n as u64).unwrap();
            assert_eq!(grouped.len(), ensemble.len());
            for entry in ensemble.entries() {
                let brute = grouped[&entry.counts].total();
                let compressed = (entry.log_multiplicity + entry.log_probability).exp();
                assert!(
                    (brute - compressed).abs() <= 1e-12,
                    "counts {:?}: brute {brute} vs compressed {compressed}",
                    entry.counts
                );
            }
        }
    }
}

//! Multinomial compression of branch ensembles.
//!
//! All observers share one amplitude vector, so a branch's weight depends
//! only on its outcome multiset. Grouping the K^N assignments by counts
//! vector shrinks the table to C(N+K-1, K-1) entries, each carrying the log
//! multiplicity N!/(c_1!...c_K!) and the log per-branch probability.

use super::{log_probability_of_counts, BranchError, DEFAULT_TABLE_CAP};
use crate::numeric::{ln_multinomial, NeumaierSum};
use crate::quantum::ObserverState;

/// One counts-vector cell of the compressed ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedEntry {
    /// Outcome multiplicities (c_1..c_K), summing to N.
    pub counts: Vec<u64>,
    /// ln N!/(c_1!...c_K!)
    pub log_multiplicity: f64,
    /// ln of the probability of any single branch with these counts.
    pub log_probability: f64,
}

impl CompressedEntry {
    /// Total probability mass of this cell.
    pub fn mass(&self) -> f64 {
        (self.log_multiplicity + self.log_probability).exp()
    }
}

/// Branch ensemble keyed by outcome counts, in lexicographically
/// decreasing counts order (all mass on outcome 1 first).
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedEnsemble {
    entries: Vec<CompressedEntry>,
    n: u64,
    dimension: usize,
}

impl CompressedEnsemble {
    pub fn entries(&self) -> &[CompressedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn observers(&self) -> u64 {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entry(&self, counts: &[u64]) -> Option<&CompressedEntry> {
        self.entries
            .binary_search_by(|e| counts_cmp(&e.counts, counts))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Sum of exp(log multiplicity + log probability) over the table;
    /// the partition-of-unity invariant says this is 1.
    pub fn total_probability(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for e in &self.entries {
            acc.add(e.mass());
        }
        acc.total()
    }
}

fn counts_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    b.cmp(a) // table is stored in decreasing lexicographic order
}

/// Number of counts vectors C(n+k-1, k-1), compared against the cap in log
/// space so huge tables never overflow the check itself.
fn table_fits(n: u64, k: usize, cap: u64) -> Result<(), BranchError> {
    let ln_entries = crate::numeric::ln_binomial(n + k as u64 - 1, k as u64 - 1);
    if ln_entries > (cap as f64).ln() + 1e-9 {
        return Err(BranchError::TableTooLarge { ln_entries, cap });
    }
    Ok(())
}

/// Compressed ensemble for N observers of `state`.
pub fn compress_branches(state: &ObserverState, n: u64) -> Result<CompressedEnsemble, BranchError> {
    compress_branches_with_cap(state, n, DEFAULT_TABLE_CAP)
}

pub fn compress_branches_with_cap(
    state: &ObserverState,
    n: u64,
    cap: u64,
) -> Result<CompressedEnsemble, BranchError> {
    assert!(n >= 1, "need at least one observer");
    let k = state.dimension();
    table_fits(n, k, cap)?;

    let mut entries = Vec::new();
    let mut counts = vec![0u64; k];
    fill_counts(state, n, 0, n, &mut counts, &mut entries);
    Ok(CompressedEnsemble {
        entries,
        n,
        dimension: k,
    })
}

fn fill_counts(
    state: &ObserverState,
    n: u64,
    slot: usize,
    remaining: u64,
    counts: &mut Vec<u64>,
    entries: &mut Vec<CompressedEntry>,
) {
    let k = counts.len();
    if slot == k - 1 {
        counts[slot] = remaining;
        entries.push(CompressedEntry {
            counts: counts.clone(),
            log_multiplicity: ln_multinomial(n, counts),
            log_probability: log_probability_of_counts(state, counts),
        });
        counts[slot] = 0;
        return;
    }
    // Descending head count yields decreasing lexicographic order.
    for c in (0..=remaining).rev() {
        counts[slot] = c;
        fill_counts(state, n, slot + 1, remaining - c, counts, entries);
    }
    counts[slot] = 0;
}

//! Observer states over a fixed K-outcome measurement basis.
//!
//! A state holds K complex amplitudes with unit norm; all replicated
//! observers share one state because the analysis only ever consumes the
//! amplitude moduli, which the replication symmetry forces to agree across
//! observers. Per-observer phases would cancel in every probability below,
//! so they are not stored.

use num_complex::Complex64;
use thiserror::Error;

use crate::rng::RngStream;

/// Constructors renormalize; deviations beyond this are kept exactly but
/// flagged through [`ObserverState::needed_rescale`].
pub const RESCALE_WARN_TOLERANCE: f64 = 1e-9;

/// Unit-norm slack accepted by distribution invariants.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("amplitude vector is numerically zero")]
    ZeroVector,
    #[error("state dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("amplitude {index} is not finite")]
    NonFiniteAmplitude { index: usize },
    #[error("state dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("outcome {outcome} has zero probability and cannot be measured")]
    ImpossibleOutcome { outcome: u32 },
    #[error("outcome {outcome} outside 1..={dimension}")]
    OutcomeOutOfRange { outcome: u32, dimension: usize },
}

/// A pure state over K measurement outcomes, stored with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverState {
    amplitudes: Vec<Complex64>,
    rescale_defect: f64,
}

impl ObserverState {
    /// Builds a state from raw amplitudes, rescaling to unit norm.
    ///
    /// The pre-normalization defect `|norm - 1|` is recorded so callers can
    /// warn when input was materially unnormalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        if amplitudes.len() < 2 {
            return Err(QuantumError::DimensionTooSmall(amplitudes.len()));
        }
        for (index, amp) in amplitudes.iter().enumerate() {
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(QuantumError::NonFiniteAmplitude { index });
            }
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(QuantumError::ZeroVector);
        }
        let norm = norm_sqr.sqrt();
        let rescaled = amplitudes.iter().map(|a| a / norm).collect();
        Ok(Self {
            amplitudes: rescaled,
            rescale_defect: (norm - 1.0).abs(),
        })
    }

    /// Real-amplitude convenience constructor.
    pub fn from_reals(amplitudes: &[f64]) -> Result<Self, QuantumError> {
        Self::new(amplitudes.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// The basis state `e_k` (1-based outcome index).
    pub fn basis(dimension: usize, outcome: u32) -> Result<Self, QuantumError> {
        if dimension < 2 {
            return Err(QuantumError::DimensionTooSmall(dimension));
        }
        if outcome == 0 || outcome as usize > dimension {
            return Err(QuantumError::OutcomeOutOfRange { outcome, dimension });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dimension];
        amplitudes[outcome as usize - 1] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            rescale_defect: 0.0,
        })
    }

    /// K, the number of measurement outcomes.
    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// True when construction had to rescale by more than [`RESCALE_WARN_TOLERANCE`].
    pub fn needed_rescale(&self) -> bool {
        self.rescale_defect > RESCALE_WARN_TOLERANCE
    }

    /// Born probability of the (1-based) outcome `k`.
    pub fn probability(&self, outcome: u32) -> Result<f64, QuantumError> {
        self.check_outcome(outcome)?;
        Ok(self.amplitudes[outcome as usize - 1].norm_sqr())
    }

    /// Born probabilities of all outcomes.
    pub fn born_probabilities(&self) -> OutcomeDistribution {
        OutcomeDistribution {
            probabilities: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Draws one outcome by CDF inversion on half-open intervals
    /// [c_{k-1}, c_k); deterministic given the stream state.
    pub fn sample_outcome(&self, rng: &mut RngStream) -> u32 {
        let u = rng.uniform();
        let mut cumulative = 0.0;
        for (i, amp) in self.amplitudes.iter().enumerate() {
            cumulative += amp.norm_sqr();
            if u < cumulative {
                return (i + 1) as u32;
            }
        }
        self.amplitudes.len() as u32
    }

    /// Post-measurement state for outcome `k`: the canonical basis vector,
    /// with the measured amplitude's phase discarded. Idempotent.
    pub fn collapse(&self, outcome: u32) -> Result<Self, QuantumError> {
        let p = self.probability(outcome)?;
        if p == 0.0 {
            return Err(QuantumError::ImpossibleOutcome { outcome });
        }
        Self::basis(self.dimension(), outcome)
    }

    fn check_outcome(&self, outcome: u32) -> Result<(), QuantumError> {
        if outcome == 0 || outcome as usize > self.dimension() {
            return Err(QuantumError::OutcomeOutOfRange {
                outcome,
                dimension: self.dimension(),
            });
        }
        Ok(())
    }
}

/// Born probabilities of a state; entries are nonnegative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Probability of the (1-based) outcome `k`.
    pub fn get(&self, outcome: u32) -> Option<f64> {
        if outcome == 0 {
            return None;
        }
        self.probabilities.get(outcome as usize - 1).copied()
    }

    /// Largest probability and its outcome; ties go to the smallest index.
    pub fn max_probability(&self) -> (u32, f64) {
        let mut best = (1u32, self.probabilities[0]);
        for (i, &p) in self.probabilities.iter().enumerate().skip(1) {
            if p > best.1 {
                best = ((i + 1) as u32, p);
            }
        }
        best
    }
}

/// Fidelity-based indistinguishability: `1 - |<a|b>|^2 <= tolerance`.
/// Global phase on either argument is irrelevant by construction.
pub fn indistinguishable(
    a: &ObserverState,
    b: &ObserverState,
    tolerance: f64,
) -> Result<bool, QuantumError> {
    if a.dimension() != b.dimension() {
        return Err(QuantumError::DimensionMismatch(a.dimension(), b.dimension()));
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    let infidelity = (1.0 - overlap.norm_sqr()).max(0.0);
    Ok(infidelity <= tolerance)
}

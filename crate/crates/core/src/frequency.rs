//! Frequency statistics over N replicated observers.
//!
//! For a target outcome with Born probability p, the relative-frequency
//! observable on N independent copies has eigenvalues m/N carrying binomial
//! spectral weights C(N,m) p^m (1-p)^(N-m). Its mean is p for every N and
//! its variance p(1-p)/N vanishes as N grows: concentration onto the Born
//! value is the quantitative content of recovering the rule in the large-N
//! limit. The 2^N-dimensional operator itself is never materialized; the
//! spectral measure is all the diagnostics need.

use crate::branch::{simulate_finite_collapse, CollapseMode};
use crate::numeric::{ln_binomial, NeumaierSum};
use crate::quantum::{ObserverState, QuantumError};
use crate::rng::RngStream;

/// Spectral data of the relative-frequency observable for one outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySpectrum {
    eigenvalues: Vec<f64>,
    log_weights: Vec<f64>,
    outcome_probability: f64,
    observers: u64,
}

impl FrequencySpectrum {
    /// Relative frequencies m/N for m = 0..=N, strictly increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// ln of the binomial weight at each eigenvalue.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn outcome_probability(&self) -> f64 {
        self.outcome_probability
    }

    pub fn observers(&self) -> u64 {
        self.observers
    }

    /// Sum of exp(log weight); 1 up to accumulation error.
    pub fn total_weight(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for &lw in &self.log_weights {
            acc.add(lw.exp());
        }
        acc.total()
    }

    /// Spectral mean sum (m/N) w_m.
    pub fn mean(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for (&x, &lw) in self.eigenvalues.iter().zip(&self.log_weights) {
            acc.add(x * lw.exp());
        }
        acc.total()
    }

    /// Spectral second central moment sum (m/N - p)^2 w_m.
    pub fn variance(&self) -> f64 {
        let p = self.outcome_probability;
        let mut acc = NeumaierSum::new();
        for (&x, &lw) in self.eigenvalues.iter().zip(&self.log_weights) {
            acc.add((x - p) * (x - p) * lw.exp());
        }
        acc.total()
    }

    /// Spectral mass at eigenvalues outside [p - radius, p + radius].
    pub fn mass_outside(&self, radius: f64) -> f64 {
        let p = self.outcome_probability;
        let mut acc = NeumaierSum::new();
        for (&x, &lw) in self.eigenvalues.iter().zip(&self.log_weights) {
            if (x - p).abs() > radius {
                acc.add(lw.exp());
            }
        }
        acc.total()
    }
}

/// Binomial spectral weights of the frequency observable for outcome `k`,
/// computed in log space throughout.
pub fn frequency_spectrum(
    state: &ObserverState,
    outcome: u32,
    observers: u64,
) -> Result<FrequencySpectrum, QuantumError> {
    assert!(observers >= 1, "need at least one observer");
    let p = state.probability(outcome)?;
    let n = observers;
    let ln_p = if p > 0.0 { p.ln() } else { f64::NEG_INFINITY };
    let ln_q = if p < 1.0 { (-p).ln_1p() } else { f64::NEG_INFINITY };

    let len = usize::try_from(n + 1).expect("spectrum fits in memory");
    let mut eigenvalues = Vec::with_capacity(len);
    let mut log_weights = Vec::with_capacity(len);
    for m in 0..=n {
        eigenvalues.push(m as f64 / n as f64);
        // 0 * ln(0) reads as 0: degenerate p puts all mass on one endpoint.
        let mut lw = ln_binomial(n, m);
        if m > 0 {
            lw += m as f64 * ln_p;
        }
        if m < n {
            lw += (n - m) as f64 * ln_q;
        }
        log_weights.push(lw);
    }
    Ok(FrequencySpectrum {
        eigenvalues,
        log_weights,
        outcome_probability: p,
        observers: n,
    })
}

/// Mean of the frequency observable: exactly the Born probability of
/// `outcome`, independent of N (binomial mean identity).
pub fn frequency_expectation(
    state: &ObserverState,
    outcome: u32,
    observers: u64,
) -> Result<f64, QuantumError> {
    assert!(observers >= 1, "need at least one observer");
    state.probability(outcome)
}

/// Variance of the frequency observable: p(1-p)/N.
pub fn frequency_variance(
    state: &ObserverState,
    outcome: u32,
    observers: u64,
) -> Result<f64, QuantumError> {
    assert!(observers >= 1, "need at least one observer");
    let p = state.probability(outcome)?;
    Ok(p * (1.0 - p) / observers as f64)
}

/// One row of a Born-convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub observers: u64,
    pub analytic_variance: f64,
    pub empirical_variance: f64,
    pub trials: u64,
}

/// For each N, samples `trials` independent N-observer frequency
/// measurements and reports the empirical variance of the outcome-`k`
/// relative frequency next to the analytic p(1-p)/N.
pub fn born_convergence_table(
    state: &ObserverState,
    outcome: u32,
    n_list: &[u64],
    trials: u64,
    rng: &mut RngStream,
) -> Result<Vec<ConvergenceRow>, QuantumError> {
    assert!(!n_list.is_empty(), "n_list must be nonempty");
    assert!(
        n_list.windows(2).all(|w| w[0] < w[1]),
        "n_list must be strictly increasing"
    );
    assert!(trials >= 2, "need at least two trials for a variance");
    state.probability(outcome)?; // validate outcome up front

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let n_usize = usize::try_from(n).expect("observer count fits in memory");
        let mut freq_acc = NeumaierSum::new();
        let mut freq_sq_acc = NeumaierSum::new();
        for _ in 0..trials {
            let outcomes =
                simulate_finite_collapse(state, n_usize, rng, CollapseMode::Independent);
            let hits = outcomes.iter().filter(|&&o| o == outcome).count();
            let freq = hits as f64 / n as f64;
            freq_acc.add(freq);
            freq_sq_acc.add(freq * freq);
        }
        let t = trials as f64;
        let mean = freq_acc.total() / t;
        // Bessel-corrected sample variance.
        let empirical_variance = ((freq_sq_acc.total() - t * mean * mean) / (t - 1.0)).max(0.0);
        rows.push(ConvergenceRow {
            observers: n,
            analytic_variance: frequency_variance(state, outcome, n)?,
            empirical_variance,
            trials,
        });
    }
    Ok(rows)
}

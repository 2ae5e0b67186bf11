//! Convergence classification for infinite products of weights in (0, 1].
//!
//! The product prod_j x_j tends to a nonzero limit iff the deficit series
//! sum_j (1 - x_j) converges, which in turn needs x_j -> 1. No finite
//! window can decide that in general, so the classifier reports evidence at
//! a cutoff and keeps `IndeterminateAtCutoff` for the honest middle ground.
//!
//! Decision rules, in order, with every threshold a documented constant:
//!
//! 1. constant sequences have a known limit: value < 1 diverges to zero,
//!    value = 1 converges (product of ones);
//! 2. a partial log product below [`LOG_PRODUCT_FLOOR`] has passed under
//!    the smallest positive f64 and can never recover (terms are <= 1);
//! 3. a last-half deficit sum below [`TAIL_SUM_TOLERANCE`] satisfies the
//!    Cauchy criterion at tolerance: converges nonzero;
//! 4. dyadic deficit blocks (J/4, J/2] -> (J/2, J] shrinking by at least
//!    [`BLOCK_DECAY_RATIO`] extrapolate to a summable tail (condensation
//!    view): converges nonzero;
//! 5. blocks holding steady (ratio >= [`BLOCK_NONDECAY_RATIO`]) while the
//!    window keeps deficit mass >= [`AWAY_FROM_ONE_MARGIN`] mean the terms
//!    stay away from 1 persistently: diverges to zero;
//! 6. otherwise indeterminate at this cutoff.

use super::BranchError;
use crate::numeric::NeumaierSum;
use crate::quantum::ObserverState;

/// Fewest terms the classifier accepts.
pub const MIN_CUTOFF: usize = 10;

/// Last-half deficit sum below this counts as Cauchy-satisfied.
pub const TAIL_SUM_TOLERANCE: f64 = 1e-9;

/// Persistent per-window deficit mass at or above this margin reads as
/// "bounded away from 1" within the window.
pub const AWAY_FROM_ONE_MARGIN: f64 = 1e-6;

/// exp(-700) is below the smallest positive normal f64; a partial log
/// product under this floor is numerically zero forever after.
pub const LOG_PRODUCT_FLOOR: f64 = -700.0;

/// Dyadic deficit blocks shrinking by at least this factor extrapolate to
/// a convergent deficit series.
pub const BLOCK_DECAY_RATIO: f64 = 0.75;

/// Dyadic deficit blocks at or above this ratio are treated as non-decaying.
pub const BLOCK_NONDECAY_RATIO: f64 = 0.95;

/// Terms in the block-decay window must stay below this for the
/// "terms approach 1" reading to be tenable at all.
const WINDOW_SUP_SANITY: f64 = 0.5;

/// A rule for producing weights x_j in (0, 1], j = 1, 2, ...
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequenceSpec {
    /// x_j = value for every j.
    Constant { value: f64 },
    /// x_j = 1 - (j + 1)^(-exponent); exponent > 1 sums, exponent <= 1 does not.
    OneMinusInversePower { exponent: f64 },
    /// Arbitrary finite prefix of a sequence.
    Explicit { values: Vec<f64> },
}

impl WeightSequenceSpec {
    /// x_j for 1-based j. Explicit specs must be long enough.
    fn term(&self, j: usize) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::OneMinusInversePower { exponent } => 1.0 - ((j + 1) as f64).powf(-exponent),
            Self::Explicit { values } => values[j - 1],
        }
    }
}

/// Verdict of [`infinite_product_classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductVerdict {
    ConvergesNonzero,
    DivergesToZero,
    IndeterminateAtCutoff,
}

impl ProductVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ConvergesNonzero => "ConvergesNonzero",
            Self::DivergesToZero => "DivergesToZero",
            Self::IndeterminateAtCutoff => "IndeterminateAtCutoff",
        }
    }
}

/// Diagnostics of an infinite product truncated at a cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAnalysis {
    pub verdict: ProductVerdict,
    /// Running sums of ln x_j for j = 1..=cutoff; nonincreasing.
    pub partial_log_products: Vec<f64>,
    /// Deficit sum over the whole window, sum_{j<=J} (1 - x_j).
    pub tail_test_statistic: f64,
    pub cutoff: usize,
}

impl ProductAnalysis {
    pub fn final_partial_log_product(&self) -> f64 {
        *self
            .partial_log_products
            .last()
            .expect("cutoff >= MIN_CUTOFF guarantees at least one term")
    }
}

/// Classifies the product of `spec`'s weights using the first `cutoff_j` terms.
pub fn infinite_product_classify(
    spec: &WeightSequenceSpec,
    cutoff_j: usize,
) -> Result<ProductAnalysis, BranchError> {
    if cutoff_j < MIN_CUTOFF {
        return Err(BranchError::CutoffTooSmall {
            cutoff: cutoff_j,
            minimum: MIN_CUTOFF,
        });
    }
    if let WeightSequenceSpec::Explicit { values } = spec {
        if values.len() < cutoff_j {
            return Err(BranchError::ExplicitSequenceTooShort {
                cutoff: cutoff_j,
                len: values.len(),
            });
        }
    }

    let mut partial_log_products = Vec::with_capacity(cutoff_j);
    let mut log_acc = NeumaierSum::new();
    let mut deficit_acc = NeumaierSum::new();
    let mut prev_block = NeumaierSum::new(); // deficits over (J/4, J/2]
    let mut last_block = NeumaierSum::new(); // deficits over (J/2, J]
    let mut window_sup = 0.0f64;

    let quarter = cutoff_j / 4;
    let half = cutoff_j / 2;

    for j in 1..=cutoff_j {
        let x = spec.term(j);
        if !(x > 0.0 && x <= 1.0) {
            return Err(BranchError::InvalidWeight { index: j, value: x });
        }
        // For x in (0.5, 1], x - 1 is exact (Sterbenz) and ln_1p keeps the
        // tiny log terms accurate to an ulp; plain ln would lose the digits
        // the telescoping-product checks rely on.
        let log_term = if x > 0.5 { (x - 1.0).ln_1p() } else { x.ln() };
        log_acc.add(log_term);
        partial_log_products.push(log_acc.total());

        let deficit = 1.0 - x;
        deficit_acc.add(deficit);
        if j > half {
            last_block.add(deficit);
            window_sup = window_sup.max(deficit);
        } else if j > quarter {
            prev_block.add(deficit);
        }
    }

    let tail_test_statistic = deficit_acc.total();
    let final_log = *partial_log_products.last().unwrap();
    let last = last_block.total();
    let prev = prev_block.total();

    let verdict = match spec {
        WeightSequenceSpec::Constant { value } if *value < 1.0 => ProductVerdict::DivergesToZero,
        WeightSequenceSpec::Constant { .. } => ProductVerdict::ConvergesNonzero,
        _ => {
            if final_log < LOG_PRODUCT_FLOOR {
                ProductVerdict::DivergesToZero
            } else if last < TAIL_SUM_TOLERANCE {
                ProductVerdict::ConvergesNonzero
            } else if last <= BLOCK_DECAY_RATIO * prev && window_sup < WINDOW_SUP_SANITY {
                ProductVerdict::ConvergesNonzero
            } else if last >= BLOCK_NONDECAY_RATIO * prev && last >= AWAY_FROM_ONE_MARGIN {
                ProductVerdict::DivergesToZero
            } else {
                ProductVerdict::IndeterminateAtCutoff
            }
        }
    };

    Ok(ProductAnalysis {
        verdict,
        partial_log_products,
        tail_test_statistic,
        cutoff: cutoff_j,
    })
}

/// The replicated-observer weight sequence: every observer contributes the
/// same best-case factor max_k p_k, so x_j is constant. Any non-basis state
/// has max_k p_k < 1 and classifies as `DivergesToZero`; the degenerate
/// basis state gives the constant-1 product.
pub fn uniform_symmetric_sequence(state: &ObserverState) -> WeightSequenceSpec {
    let (_, p_max) = state.born_probabilities().max_probability();
    WeightSequenceSpec::Constant { value: p_max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ObserverState;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn geometric_constant_diverges() {
        let spec = WeightSequenceSpec::Constant { value: 0.9 };
        for cutoff in [100usize, 1000, 10_000] {
            let a = infinite_product_classify(&spec, cutoff).unwrap();
            assert_eq!(a.verdict, ProductVerdict::DivergesToZero);
            assert_relative_eq!(
                a.final_partial_log_product(),
                cutoff as f64 * 0.9f64.ln(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn inverse_square_family_converges_with_telescoping_partial_product() {
        // prod_{m=2}^{M} (1 - 1/m^2) = (M+1)/(2M), so with x_j = 1-1/(j+1)^2
        // the partial product at J is (J+2)/(2(J+1)) and the limit is 1/2.
        let spec = WeightSequenceSpec::OneMinusInversePower { exponent: 2.0 };
        for cutoff in [100usize, 317, 1000, 3162, 10_000, 100_000] {
            let a = infinite_product_classify(&spec, cutoff).unwrap();
            assert_eq!(
                a.verdict,
                ProductVerdict::ConvergesNonzero,
                "cutoff {cutoff}"
            );
            let expected = (cutoff as f64 + 2.0) / (2.0 * (cutoff as f64 + 1.0));
            assert!(
                (a.final_partial_log_product().exp() - expected).abs() <= 1e-12,
                "cutoff {cutoff}: {} vs {}",
                a.final_partial_log_product().exp(),
                expected
            );
        }
    }

    #[test]
    fn harmonic_family_diverges_with_telescoping_partial_product() {
        // x_j = 1 - 1/(j+1) = j/(j+1), so the partial product telescopes to 1/(J+1).
        let spec = WeightSequenceSpec::OneMinusInversePower { exponent: 1.0 };
        for cutoff in [100usize, 1000, 10_000, 1_000_000, 4_000_000] {
            let a = infinite_product_classify(&spec, cutoff).unwrap();
            assert_eq!(a.verdict, ProductVerdict::DivergesToZero, "cutoff {cutoff}");
            let expected = 1.0 / (cutoff as f64 + 1.0);
            assert_relative_eq!(
                a.final_partial_log_product().exp(),
                expected,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn weights_tending_to_zero_diverge() {
        // x_j = 1/(j+1) -> 0: unitarity in the K -> infinity reading forces the
        // per-branch weights toward zero, and the product collapses with them.
        let values: Vec<f64> = (1..=500).map(|j| 1.0 / (j as f64 + 1.0)).collect();
        let spec = WeightSequenceSpec::Explicit { values };
        let a = infinite_product_classify(&spec, 500).unwrap();
        assert_eq!(a.verdict, ProductVerdict::DivergesToZero);
    }

    #[test]
    fn constant_one_converges() {
        let spec = WeightSequenceSpec::Constant { value: 1.0 };
        let a = infinite_product_classify(&spec, 100).unwrap();
        assert_eq!(a.verdict, ProductVerdict::ConvergesNonzero);
        assert_eq!(a.final_partial_log_product(), 0.0);
        assert_eq!(a.tail_test_statistic, 0.0);
    }

    #[test]
    fn near_one_constant_still_diverges_by_known_limit() {
        let spec = WeightSequenceSpec::Constant { value: 1.0 - 1e-12 };
        let a = infinite_product_classify(&spec, 1000).unwrap();
        assert_eq!(a.verdict, ProductVerdict::DivergesToZero);
    }

    #[test]
    fn ambiguous_explicit_window_is_indeterminate() {
        // Deficits j^(-1.2): dyadic block sums shrink by 2^(-0.2) ~ 0.87,
        // between the decay and non-decay thresholds, so no call is made.
        let values: Vec<f64> = (1..=2000).map(|j| 1.0 - ((j + 1) as f64).powf(-1.2)).collect();
        let spec = WeightSequenceSpec::Explicit { values };
        let a = infinite_product_classify(&spec, 2000).unwrap();
        assert_eq!(a.verdict, ProductVerdict::IndeterminateAtCutoff);
    }

    #[test]
    fn log_floor_forces_divergence() {
        // x alternating just under 1 would be indeterminate, but a deep
        // prefix pushes the partial product under the floor.
        let mut values = vec![1e-300; 3];
        values.extend(std::iter::repeat(1.0).take(97));
        let spec = WeightSequenceSpec::Explicit { values };
        let a = infinite_product_classify(&spec, 100).unwrap();
        assert!(a.final_partial_log_product() < LOG_PRODUCT_FLOOR);
        assert_eq!(a.verdict, ProductVerdict::DivergesToZero);
    }

    #[test]
    fn invalid_weight_rejected() {
        let spec = WeightSequenceSpec::Explicit {
            values: vec![0.5, 0.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5],
        };
        let err = infinite_product_classify(&spec, 10).unwrap_err();
        assert_eq!(err, BranchError::InvalidWeight { index: 2, value: 0.0 });

        let spec = WeightSequenceSpec::Constant { value: 1.5 };
        let err = infinite_product_classify(&spec, 10).unwrap_err();
        assert!(matches!(err, BranchError::InvalidWeight { index: 1, .. }));
    }

    #[test]
    fn cutoff_below_minimum_rejected() {
        let spec = WeightSequenceSpec::Constant { value: 0.5 };
        let err = infinite_product_classify(&spec, 9).unwrap_err();
        assert_eq!(err, BranchError::CutoffTooSmall { cutoff: 9, minimum: 10 });
    }

    #[test]
    fn partial_log_products_nonincreasing() {
        let spec = WeightSequenceSpec::OneMinusInversePower { exponent: 1.5 };
        let a = infinite_product_classify(&spec, 5000).unwrap();
        for w in a.partial_log_products.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn uniform_symmetric_sequence_examples() {
        let half = ObserverState::from_reals(&[1.0, 1.0]).unwrap();
        let seq = uniform_symmetric_sequence(&half);
        match &seq {
            WeightSequenceSpec::Constant { value } => {
                assert_relative_eq!(*value, 0.5, max_relative = 1e-15)
            }
            other => panic!("expected a constant sequence, got {other:?}"),
        }
        let verdict = infinite_product_classify(&seq, 1000).unwrap().verdict;
        assert_eq!(verdict, ProductVerdict::DivergesToZero);

        let biased =
            ObserverState::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let seq = uniform_symmetric_sequence(&biased);
        match &seq {
            WeightSequenceSpec::Constant { value } => {
                assert_relative_eq!(*value, 0.64, max_relative = 1e-15)
            }
            other => panic!("expected a constant sequence, got {other:?}"),
        }
        let verdict = infinite_product_classify(&seq, 1000).unwrap().verdict;
        assert_eq!(verdict, ProductVerdict::DivergesToZero);

        let basis = ObserverState::from_reals(&[1.0, 0.0]).unwrap();
        let seq = uniform_symmetric_sequence(&basis);
        assert_eq!(seq, WeightSequenceSpec::Constant { value: 1.0 });
        let verdict = infinite_product_classify(&seq, 1000).unwrap().verdict;
        assert_eq!(verdict, ProductVerdict::ConvergesNonzero);
    }
}

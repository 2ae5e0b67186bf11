//! Compensated summation and log-domain combinatorics shared across modules.

use std::sync::OnceLock;

/// Kahan-Babuska-Neumaier compensated accumulator.
///
/// Keeps a running correction term so that long sums of small or cancelling
/// contributions stay accurate to a few ulps of the true result.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

const FACTORIAL_TABLE_LEN: usize = 171; // 170! is the largest factorial representable in f64

fn ln_factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0_f64; FACTORIAL_TABLE_LEN];
        let mut factorial = 1.0_f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            factorial *= n as f64;
            *slot = factorial.ln();
        }
        table
    })
}

/// Natural log of `n!`; tabulated below 171, log-gamma above.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < FACTORIAL_TABLE_LEN {
        ln_factorial_table()[n as usize]
    } else {
        statrs::function::gamma::ln_gamma(n as f64 + 1.0)
    }
}

/// Natural log of the binomial coefficient C(n, m).
pub fn ln_binomial(n: u64, m: u64) -> f64 {
    assert!(m <= n, "ln_binomial requires m <= n, got m={m}, n={n}");
    ln_factorial(n) - ln_factorial(m) - ln_factorial(n - m)
}

/// Natural log of the multinomial coefficient n! / prod(counts_k!).
///
/// `counts` must sum to `n`.
pub fn ln_multinomial(n: u64, counts: &[u64]) -> f64 {
    debug_assert_eq!(counts.iter().sum::<u64>(), n);
    let mut acc = ln_factorial(n);
    for &c in counts {
        acc -= ln_factorial(c);
    }
    acc
}

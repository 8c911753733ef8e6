//! Reference values and tolerances behind every embedded check.
//!
//! Quoted reference values are encoded as closed intervals; derived values carry
//! the tolerance of the computation that checks them. Nothing else in the
//! crate hard-codes a threshold.

use serde::Serialize;

use crate::fmt_num;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

impl Band {
    pub const fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub const fn at_most(upper: f64) -> Self {
        Self { lower: f64::NEG_INFINITY, upper }
    }

    pub const fn at_least(lower: f64) -> Self {
        Self { lower, upper: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn describe(&self) -> String {
        match (self.lower.is_finite(), self.upper.is_finite()) {
            (true, true) => format!("in [{}, {}]", fmt_num(self.lower), fmt_num(self.upper)),
            (false, true) => format!("<= {}", fmt_num(self.upper)),
            (true, false) => format!(">= {}", fmt_num(self.lower)),
            (false, false) => "any".into(),
        }
    }
}

// Example target: log(1 + z/2) and its two (1,1) candidates.

/// Padé (1,1) coefficients are rationals, reproduced to rounding.
pub const PADE_COEFF_TOL: f64 = 1e-12;

/// Peak circle error of the Padé candidate `(z/2)/(1 + z/4)`, about 0.025.
pub const PADE_SUP_ERROR: Band = Band::new(0.023, 0.027);

/// Peak circle error of the hand-tuned candidate `(z/1.98)/(1 + z/3.96)`,
/// about 0.020.
pub const NONPADE_SUP_ERROR: Band = Band::new(0.018, 0.022);

/// The optimizer must do at least as well as the hand-tuned candidate.
pub const OPTIMIZED_SUP_ERROR: Band = Band::at_most(0.021);

/// `sup |log(1 + z/2)| = log 2`, attained at `z = −1`; slack for the grid.
pub const LOG_SUPNORM: Band = Band::at_least(std::f64::consts::LN_2 - 1e-3);

/// `ℓ²` norm of `log(1 + z/2)` through order 64; `1/sqrt(3)` is the
/// quoted upper bound.
pub const LOG_L2: Band = Band::at_most(0.5774);
pub const LOG_L2_ORDER: usize = 64;

// Invertibility and the geometric truncation table.

/// Inverse expansion of `1 − L/2` is `(1, 1/2, 1/4, 1/8)` exactly.
pub const INVERSE_EXPANSION_TOL: f64 = 1e-12;

/// Truncating `1/(1 − z/2)` after `k` terms leaves `2^{1−k}` at `z = 1`.
pub const GEOMETRIC_TRUNCATION_TOL: f64 = 1e-12;
pub const GEOMETRIC_TRUNCATION_TERMS: usize = 10;

/// The exact rational representation has no error beyond rounding.
pub const EXACT_RATIONAL_TOL: f64 = 1e-12;

// Finite sections of f(L).

/// Section norms of `1 + L/2` at N = 512 must be within 1% of `sup|f| = 1.5`.
pub const SECTION_NORM_REL_GAP: f64 = 0.01;
pub const SECTION_NORM_LIMIT: f64 = 1.5;

// h(z) = exp(−(1+z)/(1−z)).

/// `h(0) = e^{−1}`.
pub const H0_TOL: f64 = 1e-9;
/// `|h| ≤ 1` on the disk, so `|h + 2| ≥ 1`.
pub const HINF_SHIFTED_MIN: Band = Band::at_least(1.0);
/// Partial `ℓ²` sums are bounded by `‖h‖_∞ ≤ 1`.
pub const HINF_L2: Band = Band::at_most(1.0);

// Truncation of log(1 + z).

/// Truncation errors against a direct summation oracle.
pub const TRUNCATION_ORACLE_TOL: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands() {
        assert!(PADE_SUP_ERROR.contains(0.025));
        assert!(!PADE_SUP_ERROR.contains(0.02));
        assert!(LOG_L2.contains(0.5));
        assert!(!LOG_SUPNORM.contains(0.5));
        assert_eq!(PADE_SUP_ERROR.describe(), "in [0.023, 0.027]");
        assert_eq!(LOG_L2.describe(), "<= 0.5774");
        assert_eq!(HINF_SHIFTED_MIN.describe(), ">= 1");
    }
}

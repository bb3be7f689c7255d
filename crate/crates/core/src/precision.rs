use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which representation of `L` produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Linear combination of two Saalschutzian 4F3(1) series.
    SeriesPair,
    /// Very-well-poised 7F6(1) representation.
    VeryWellPoised,
    /// Barnes contour integral along the shifted line Re(t) = -1/4.
    BarnesContour,
}

/// Knobs for the high-precision kernels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Significant decimal digits of the working precision (>= 30).
    pub working_digits: u32,
    /// Hard cap on the number of series terms summed before the tail fit.
    pub series_max_terms: usize,
    /// Number of inverse-power correction terms beyond the leading decay
    /// exponent used by the tail fit (<= 4).
    pub tail_fit_order: u32,
    /// Truncation half-width of the Barnes contour in the imaginary
    /// direction.
    pub quadrature_halfwidth: f64,
    /// Initial trapezoid step; halved adaptively with a Richardson check.
    pub quadrature_step: f64,
    /// Minimum distance any gamma argument must keep from the non-positive
    /// integers.
    pub pole_clearance: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self::with_digits(60)
    }
}

impl PrecisionConfig {
    /// Config scaled for `digits` significant decimal digits.
    pub fn with_digits(digits: u32) -> Self {
        PrecisionConfig {
            working_digits: digits,
            series_max_terms: 4000,
            tail_fit_order: 2,
            quadrature_halfwidth: 40.0 * (digits as f64) / 60.0,
            quadrature_step: 0.25,
            pole_clearance: 0.02,
        }
    }

    /// Binary working precision, including guard bits.
    pub fn bits(&self) -> u32 {
        (self.working_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    /// One unit in roughly the last working decimal place, as a relative
    /// magnitude.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(-(self.working_digits as i32))
    }

    pub fn validate(&self) -> Result<()> {
        if self.working_digits < 30 {
            return Err(Error::Invalid("working_digits must be >= 30".into()));
        }
        if self.tail_fit_order > 4 {
            return Err(Error::Invalid("tail_fit_order must be <= 4".into()));
        }
        if self.pole_clearance <= 0.0 {
            return Err(Error::Invalid("pole_clearance must be positive".into()));
        }
        if self.series_max_terms == 0 || self.quadrature_halfwidth <= 0.0 || self.quadrature_step <= 0.0 {
            return Err(Error::Invalid("series and quadrature limits must be positive".into()));
        }
        Ok(())
    }

    /// The escalation step taken after a cancellation error: more digits and
    /// a longer series.
    pub fn escalated(&self) -> Self {
        let mut cfg = self.clone();
        cfg.working_digits += 20;
        cfg.series_max_terms *= 2;
        cfg.quadrature_halfwidth = 40.0 * (cfg.working_digits as f64) / 60.0;
        cfg
    }
}

/// A numerical value together with the error bound the producing operation
/// commits to.
#[derive(Debug, Clone)]
pub struct EvaluationResult {
    pub value: Complex,
    /// Upper bound on the absolute error, valid under the operation's
    /// preconditions.
    pub error_estimate: f64,
    pub method: Method,
}

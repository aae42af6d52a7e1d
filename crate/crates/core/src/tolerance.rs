use rug::Float;

use crate::error::{Error, Result};

/// Working precision and comparison tolerance shared by every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceConfig {
    pub precision_bits: u32,
    /// Relative tolerance used by all "equal to tolerance" checks.
    pub eq_tolerance: f64,
    /// Iteration cap of the simultaneous root iteration.
    pub root_polish_iterations: u32,
    /// Seed for the root finder's starting-point perturbations.
    pub root_seed: u64,
}

/// Minimum ratio between `eq_tolerance` and the unit roundoff.
pub const TOLERANCE_HEADROOM_LOG2: i32 = 32;

impl ToleranceConfig {
    pub fn new(precision_bits: u32, eq_tolerance: f64, root_polish_iterations: u32) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::InvalidConfig(format!(
                "precision {precision_bits} bits is below the 64-bit minimum"
            )));
        }
        if !(eq_tolerance > 0.0 && eq_tolerance < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {eq_tolerance:e} must lie in (0, 1)"
            )));
        }
        // eq_tolerance >= 2^(32 - precision_bits)
        let floor_log2 = TOLERANCE_HEADROOM_LOG2 - precision_bits as i32;
        if eq_tolerance.log2() < floor_log2 as f64 {
            return Err(Error::InvalidConfig(format!(
                "tolerance {eq_tolerance:e} is closer than 2^{TOLERANCE_HEADROOM_LOG2} ulps to {precision_bits}-bit roundoff"
            )));
        }
        if root_polish_iterations == 0 {
            return Err(Error::InvalidConfig("root iterations must be positive".into()));
        }
        Ok(Self {
            precision_bits,
            eq_tolerance,
            root_polish_iterations,
            root_seed: 0,
        })
    }

    /// 1024 bits, used for the degree-360 elimination.
    pub fn escalated() -> Self {
        Self::new(1024, 2f64.powi(-256), 2000).expect("static config is valid")
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.root_seed = seed;
        self
    }

    /// Same tolerance, at least `bits` of precision.
    pub fn at_least(&self, bits: u32) -> Self {
        let mut c = self.clone();
        c.precision_bits = c.precision_bits.max(bits);
        c
    }

    pub fn prec(&self) -> u32 {
        self.precision_bits
    }

    pub fn tol(&self) -> Float {
        Float::with_val(64, self.eq_tolerance)
    }

    /// Unit roundoff `2^(1 - precision_bits)` as an `f64`.
    pub fn unit_roundoff(&self) -> f64 {
        2f64.powi(1 - self.precision_bits as i32)
    }
}

impl Default for ToleranceConfig {
    /// 256 bits with tolerance `2^-128`.
    fn default() -> Self {
        Self::new(256, 2f64.powi(-128), 1000).expect("static config is valid")
    }
}

//! Every numerical threshold the engine uses, in one place.

use serde::{Deserialize, Serialize};

/// Default absolute tolerance for generic comparisons.
pub const ABS: f64 = 1e-9;
/// Default relative tolerance for generic comparisons.
pub const REL: f64 = 1e-7;
/// Gram determinant below which a vector family counts as rank deficient.
pub const GRAM_DET: f64 = 1e-12;
/// Orthonormality of frames produced by Gram-Schmidt.
pub const FRAME: f64 = 1e-12;
/// Unit-length check for direction arguments.
pub const UNIT: f64 = 1e-8;
/// Symmetry of `h`, skewness of `P`, unit decomposition of the structure vector.
pub const STRUCTURE: f64 = 1e-10;
/// Builtin warping profiles must reproduce their closed-form derivatives.
pub const PROFILE: f64 = 1e-12;
/// Equality predicates on tensor norms (`h = -h*` and the Chen-Ricci conditions).
pub const PREDICATE: f64 = 1e-9;
/// Slack regarded as zero when checking equality cases.
pub const SLACK_ZERO: f64 = 1e-8;
/// Slack below `-VIOLATION` is a violation of an inequality.
pub const VIOLATION: f64 = 1e-9;
/// Projected-gradient stationarity on the sphere.
pub const SPHERE_GRAD: f64 = 1e-10;
/// Sign tests on restricted Hessian spectra.
pub const HESSIAN_SIGN: f64 = 1e-12;
/// Specialized right-hand sides must match the general ones this closely.
pub const SPECIALIZATION: f64 = 1e-10;
/// Rearrangement identities between two reports.
pub const REARRANGEMENT: f64 = 1e-12;
/// Smallest and largest admissible finite-difference steps.
pub const STEP_MIN: f64 = 1e-7;
pub const STEP_MAX: f64 = 1e-3;
/// Default finite-difference step.
pub const STEP_DEFAULT: f64 = 1e-5;

/// Tolerances that a campaign may override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub violation: f64,
    pub predicate: f64,
    pub slack_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            violation: VIOLATION,
            predicate: PREDICATE,
            slack_zero: SLACK_ZERO,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("violation", self.violation),
            ("predicate", self.predicate),
            ("slack_zero", self.slack_zero),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::Error::Config(format!("tolerance `{name}` must be positive")));
            }
        }
        Ok(())
    }
}

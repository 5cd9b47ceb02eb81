//! Optional last-bit correction: one Newton step on the square-root-forward
//! price `β` using the expanded evaluator and its exact vega.

use crate::normalize::beta_from_c;
use crate::pricing::{price_expanded, vega_sqrtfwd};

/// Price threshold `c_J` of the expanded evaluator.
pub const C_J: f64 = 0.16650723223355586;

/// Largest normalized price at which the polish step is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PolishCutoff {
    #[default]
    Half,
    CJ,
}

impl PolishCutoff {
    pub fn threshold(self) -> f64 {
        match self {
            PolishCutoff::Half => 0.5,
            PolishCutoff::CJ => C_J,
        }
    }
}

impl std::str::FromStr for PolishCutoff {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "half" => Ok(PolishCutoff::Half),
            "cJ" | "cj" => Ok(PolishCutoff::CJ),
            other => Err(crate::Error::InvalidInput(format!("unknown polish cutoff `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolishReport {
    pub applied: bool,
    pub beta_target: f64,
    pub beta_before: f64,
    pub beta_after: f64,
    pub s_before: f64,
    pub s_after: f64,
}

/// Polish with the default cutoff `c <= 1/2`.
pub fn jackel_newton_polish(x: f64, s: f64, c_target: f64) -> (f64, PolishReport) {
    jackel_newton_polish_with(x, s, c_target, PolishCutoff::Half)
}

pub fn jackel_newton_polish_with(x: f64, s: f64, c_target: f64, cutoff: PolishCutoff) -> (f64, PolishReport) {
    if c_target > cutoff.threshold() {
        let report = PolishReport {
            applied: false,
            beta_target: beta_from_c(c_target, x),
            beta_before: f64::NAN,
            beta_after: f64::NAN,
            s_before: s,
            s_after: s,
        };
        return (s, report);
    }
    newton_polish_unchecked(x, s, c_target)
}

/// The polish step without the price cutoff.
///
/// Above one half the `β` residual is dominated by the rounding of prices
/// near one; this entry point exists to demonstrate that loss.
pub fn newton_polish_unchecked(x: f64, s: f64, c_target: f64) -> (f64, PolishReport) {
    let beta_target = beta_from_c(c_target, x);
    let beta_before = price_expanded(x, s);
    let nu = vega_sqrtfwd(x, s);
    let candidate = s + (beta_target - beta_before) / nu;
    let applied = candidate.is_finite() && candidate > 0.0;
    let s_after = if applied { candidate } else { s };
    let report = PolishReport {
        applied,
        beta_target,
        beta_before,
        beta_after: price_expanded(x, s_after),
        s_before: s,
        s_after,
    };
    (s_after, report)
}

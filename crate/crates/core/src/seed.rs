//! Starting values for the refinement: the Choi–Huh–Su L3 lower bound and a
//! conservative repair hierarchy for inputs where it cannot be formed.

use crate::specfun::{inv_norm_cdf_half_excess, inv_norm_cdf_unchecked, LN_TWO_PI, SQRT_TWO_PI};
use std::f64::consts::PI;

/// Smallest seed ever returned.
pub const SEED_FLOOR: f64 = 1e-10;
/// Below this ATM price the inverse-cdf root is replaced by its series.
pub const ATM_SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedSource {
    L3,
    AtmInverse,
    AtmSeries,
    RepairNearAtm,
    RepairOtmAsymptotic,
    RepairTerminal,
}

impl SeedSource {
    pub fn is_repair(self) -> bool {
        matches!(
            self,
            SeedSource::RepairNearAtm | SeedSource::RepairOtmAsymptotic | SeedSource::RepairTerminal
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SeedSource::L3 => "L3",
            SeedSource::AtmInverse => "ATM_inverse",
            SeedSource::AtmSeries => "ATM_series",
            SeedSource::RepairNearAtm => "repair_near_atm",
            SeedSource::RepairOtmAsymptotic => "repair_otm_asymptotic",
            SeedSource::RepairTerminal => "repair_terminal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedOutcome {
    pub v0: f64,
    pub p3: Option<f64>,
    pub z3: Option<f64>,
    pub source: SeedSource,
}

/// Open probability interval handed to the inverse cdf.
const P_MIN: f64 = f64::from_bits(1);
const P_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

/// L3 lower-bound seed for `v`.
pub fn choi_l3(x: f64, c: f64) -> SeedOutcome {
    let k = -x;
    if k == 0.0 {
        return atm_seed(c);
    }
    let e = k.exp();
    let p3 = (c * (c + e) / (2.0 * c + e - 1.0)).clamp(P_MIN, P_MAX);
    if !p3.is_finite() || !(p3 > 0.0 && p3 < 1.0) {
        return repair_seed(x, c);
    }
    let z3 = inv_norm_cdf_unchecked(p3);
    let disc = (z3 * z3 + 2.0 * k).sqrt();
    let v0 = if z3 >= 0.0 { z3 + disc } else { 2.0 * k / (disc - z3) };
    if v0.is_finite() && v0 > 0.0 {
        SeedOutcome { v0: v0.max(SEED_FLOOR), p3: Some(p3), z3: Some(z3), source: SeedSource::L3 }
    } else {
        repair_seed(x, c)
    }
}

fn atm_seed(c: f64) -> SeedOutcome {
    if c < ATM_SERIES_CUTOFF {
        let v0 = SQRT_TWO_PI * c * (1.0 + PI * c * c / 12.0);
        return SeedOutcome { v0: v0.max(SEED_FLOOR), p3: None, z3: None, source: SeedSource::AtmSeries };
    }
    let p = (0.5 * (1.0 + c)).min(P_MAX);
    let z = inv_norm_cdf_half_excess(c);
    let v0 = 2.0 * z;
    if v0.is_finite() && v0 > 0.0 {
        SeedOutcome { v0: v0.max(SEED_FLOOR), p3: Some(p), z3: Some(z), source: SeedSource::AtmInverse }
    } else {
        repair_seed(0.0, c)
    }
}

/// Repair hierarchy: near-ATM small-price form, guarded OTM asymptotic,
/// then `√(2|x|)`; all floored at [`SEED_FLOOR`].
pub fn repair_seed(x: f64, c: f64) -> SeedOutcome {
    let (v0, source) = if c < 1e-4 && x.abs() < 0.01 {
        ((x * x + 2.0 * PI * c * c).sqrt(), SeedSource::RepairNearAtm)
    } else if let Some(v) = otm_asymptotic(x, c) {
        (v, SeedSource::RepairOtmAsymptotic)
    } else {
        ((2.0 * x.abs()).sqrt(), SeedSource::RepairTerminal)
    };
    let v0 = if v0.is_finite() { v0.max(SEED_FLOOR) } else { SEED_FLOOR };
    SeedOutcome { v0, p3: None, z3: None, source }
}

/// `D = √max(-2 ln c - ln 2π, 0)`, `v = -2x/(D + √(D² - 2x))`.
pub fn otm_asymptotic(x: f64, c: f64) -> Option<f64> {
    let d = (-2.0 * c.ln() - LN_TWO_PI).max(0.0).sqrt();
    let disc = d * d - 2.0 * x;
    if !(disc.is_finite() && disc > 0.0) {
        return None;
    }
    let den = d + disc.sqrt();
    if !(den.is_finite() && den > 0.0) {
        return None;
    }
    let v = -2.0 * x / den;
    (v.is_finite() && v > 0.0).then_some(v)
}

//! Per-dataset error aggregation against the reference total volatility.

use super::datasets::{BenchCase, Dataset};
use crate::dispatch::{solve_with, SolverConfig};
use crate::ulp::ulp_error;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Unpolished,
    Polished,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Unpolished, Variant::Polished];

    pub fn config(self) -> SolverConfig {
        match self {
            Variant::Unpolished => SolverConfig::UNPOLISHED,
            Variant::Polished => SolverConfig::POLISHED,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Unpolished => "unpolished",
            Variant::Polished => "polished",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "unpolished" => Ok(Variant::Unpolished),
            "polished" => Ok(Variant::Polished),
            other => Err(crate::Error::InvalidInput(format!("unknown variant `{other}`"))),
        }
    }
}

/// Maximum ulp error allowed per dataset and variant.
pub fn max_ulp_target(dataset: Dataset, variant: Variant) -> f64 {
    let (unpolished, polished) = match dataset {
        Dataset::Cly3d => (266.0, 48.0),
        Dataset::Cly20 => (124.0, 10.0),
        Dataset::Cly80 => (14.0, 10.0),
        Dataset::Jaeckel => (178.0, 26.0),
        Dataset::Market => (354.0, 58.0),
        Dataset::Corners => (658.0, 82.0),
        Dataset::Stress => (276.0, 66.0),
        Dataset::HighVol => (4.0, 4.0),
    };
    match variant {
        Variant::Unpolished => unpolished,
        Variant::Polished => polished,
    }
}

/// Error of one solved case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseError {
    pub case_id: usize,
    pub v_hat: f64,
    pub v_ref: f64,
    pub ulp: f64,
    pub abs_vol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorStats {
    pub dataset: Dataset,
    pub variant: Variant,
    pub count: usize,
    /// Cases where the solver returned an error or a non-finite value.
    pub failures: usize,
    pub max_ulp: f64,
    pub mean_ulp: f64,
    pub max_abs_vol: f64,
    pub worst_case_id: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_case: Option<Vec<CaseError>>,
}

pub fn solve_case(case: &BenchCase, variant: Variant) -> Option<f64> {
    solve_with(case.x(), case.c, case.expiry, &variant.config())
        .ok()
        .map(|r| r.total_vol)
        .filter(|v| v.is_finite())
}

/// Solves every case and aggregates errors; `keep_cases` retains rows.
pub fn run_accuracy(cases: &[BenchCase], variant: Variant, keep_cases: bool) -> ErrorStats {
    let dataset = cases.first().map(|c| c.dataset).unwrap_or(Dataset::Corners);
    let rows: Vec<Option<CaseError>> = cases
        .par_iter()
        .map(|case| {
            solve_case(case, variant).map(|v_hat| CaseError {
                case_id: case.case_id,
                v_hat,
                v_ref: case.v_ref,
                ulp: ulp_error(v_hat, case.v_ref),
                abs_vol: (v_hat - case.v_ref).abs(),
            })
        })
        .collect();
    let failures = rows.iter().filter(|r| r.is_none()).count();
    let ok: Vec<CaseError> = rows.into_iter().flatten().collect();
    let mut max_ulp = 0.0;
    let mut max_abs_vol: f64 = 0.0;
    let mut worst = None;
    let mut sum = 0.0;
    for r in &ok {
        if r.ulp > max_ulp || worst.is_none() {
            max_ulp = r.ulp;
            worst = Some(r.case_id);
        }
        max_abs_vol = max_abs_vol.max(r.abs_vol);
        sum += r.ulp;
    }
    ErrorStats {
        dataset,
        variant,
        count: cases.len(),
        failures,
        max_ulp,
        mean_ulp: if ok.is_empty() { 0.0 } else { sum / ok.len() as f64 },
        max_abs_vol,
        worst_case_id: worst,
        per_case: keep_cases.then_some(ok),
    }
}

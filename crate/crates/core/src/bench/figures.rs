//! Diagnostic data series: one-ulp price sweeps, signed steps, the branch
//! map, per-iteration convergence, and round-trip residuals.

use super::accuracy::Variant;
use super::datasets::BenchCase;
use crate::dispatch::{roundtrip_bound, solve_with};
use crate::error::{Error, Result};
use crate::oracle::{hp_implied_vol_f64, hp_price_f64, hp_vega, rel_err, PrecisionContext};
use crate::pricing::PricePath;
use crate::refine::refine3;
use crate::seed::choi_l3;
use crate::ulp::to_hex;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Pricing scenarios `(label, F*/K*, v)` of the one-ulp sweeps.
pub fn sweep_scenarios() -> [(&'static str, f64, f64); 3] {
    [
        ("far_otm_short", 0.925, 0.15 * (10.0f64 / 252.0).sqrt()),
        ("near_otm", 0.955, 0.05),
        ("near_atm_1d", 0.995, 0.10 * (1.0f64 / 252.0).sqrt()),
    ]
}

/// Number of successive doubles in each sweep.
pub const SWEEP_LEN: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Sweeps,
    Steps,
    BranchMap,
    Convergence,
    RoundTrip,
}

impl Figure {
    pub const ALL: [Figure; 5] =
        [Figure::Sweeps, Figure::Steps, Figure::BranchMap, Figure::Convergence, Figure::RoundTrip];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Sweeps => "fig1_sweeps",
            Figure::Steps => "fig2_steps",
            Figure::BranchMap => "fig3_branchmap",
            Figure::Convergence => "fig4_convergence",
            Figure::RoundTrip => "fig5_roundtrip",
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().split('_').next() == Some(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub scenario: String,
    pub i: usize,
    pub v_hex: String,
    pub v: f64,
    pub c_oracle: f64,
    pub c_cdf: f64,
    pub c_erfcxlog: f64,
    pub c_expanded: f64,
    pub rel_cdf: f64,
    pub rel_erfcxlog: f64,
    pub rel_expanded: f64,
}

/// Prices `SWEEP_LEN` successive doubles starting at `v0` along every path.
pub fn sweep(label: &str, ex: f64, v0: f64) -> Vec<SweepRow> {
    let x = ex.ln();
    let mut vs = Vec::with_capacity(SWEEP_LEN);
    let mut v = v0;
    for _ in 0..SWEEP_LEN {
        vs.push(v);
        v = v.next_up();
    }
    vs.par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let oracle = hp_price_f64(x, v, PrecisionContext::FAST);
            let [cdf, erfcx, expanded] = PricePath::ALL.map(|p| p.price(x, v));
            SweepRow {
                scenario: label.to_string(),
                i,
                v_hex: to_hex(v),
                v,
                c_oracle: oracle.to_f64(),
                c_cdf: cdf,
                c_erfcxlog: erfcx,
                c_expanded: expanded,
                rel_cdf: rel_err(cdf, &oracle),
                rel_erfcxlog: rel_err(erfcx, &oracle),
                rel_expanded: rel_err(expanded, &oracle),
            }
        })
        .collect()
}

pub fn fig1_sweeps() -> Vec<SweepRow> {
    sweep_scenarios().iter().flat_map(|&(label, ex, v)| sweep(label, ex, v)).collect()
}

/// Maximum relative error of each path over a sweep: `[cdf, erfcxlog, expanded]`.
pub fn sweep_max_errors(rows: &[SweepRow]) -> [f64; 3] {
    rows.iter()
        .fold([0.0f64; 3], |m, r| [m[0].max(r.rel_cdf), m[1].max(r.rel_erfcxlog), m[2].max(r.rel_expanded)])
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRow {
    pub i: usize,
    pub v: f64,
    pub step_cdf: f64,
    pub step_erfcxlog: f64,
    pub step_expanded: f64,
}

/// Signed price change, in ulps of the price, when `v` advances by one double.
pub fn fig2_steps(ex: f64, v0: f64) -> Vec<StepRow> {
    let x = ex.ln();
    let mut out = Vec::with_capacity(SWEEP_LEN);
    let mut v = v0;
    let mut prev = PricePath::ALL.map(|p| p.price(x, v));
    for i in 0..SWEEP_LEN {
        let next_v = v.next_up();
        let cur = PricePath::ALL.map(|p| p.price(x, next_v));
        let step = |k: usize| (cur[k] - prev[k]) / crate::ulp::ulp(prev[k]);
        out.push(StepRow { i, v: next_v, step_cdf: step(0), step_erfcxlog: step(1), step_expanded: step(2) });
        prev = cur;
        v = next_v;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchRow {
    pub m: f64,
    pub c: f64,
    pub branch_path: String,
}

/// Branch taken by the polished solver on a log grid of `m = -x` and `c`.
pub fn fig3_branchmap(n_m: usize, n_c: usize) -> Vec<BranchRow> {
    let mut out = Vec::with_capacity(n_m * n_c);
    for i in 0..n_m {
        let m = 10f64.powf(-14.0 + 15.0 * i as f64 / (n_m.max(2) - 1) as f64);
        for j in 0..n_c {
            let c = 10f64.powf(-300.0 + 300.0 * j as f64 / (n_c.max(2) - 1) as f64).min(0.999_999);
            let branch_path = match solve_with(-m, c, 1.0, &Variant::Polished.config()) {
                Ok(r) => r.branch_path.iter().map(|b| b.name()).collect::<Vec<_>>().join(">"),
                Err(e) => format!("error: {e}"),
            };
            out.push(BranchRow { m, c, branch_path });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub x: f64,
    pub v_star: f64,
    pub c: f64,
    pub err_seed: f64,
    pub err_step1: f64,
    pub err_step2: f64,
    pub err_step3: f64,
}

/// Floor applied to relative errors in the convergence series.
pub const CONVERGENCE_FLOOR: f64 = 1e-18;

/// Relative error of the seed and each refinement iterate at fixed `x`
/// against the oracle root of the rounded price.
pub fn fig4_convergence(x: f64, v_grid: &[f64]) -> Vec<ConvergenceRow> {
    v_grid
        .par_iter()
        .filter_map(|&v| {
            let c = hp_price_f64(x, v, PrecisionContext::FAST).to_f64();
            if !(c > 0.0 && c < 1.0) {
                return None;
            }
            let root = hp_implied_vol_f64(x, c, PrecisionContext::FAST).ok()?;
            let v0 = choi_l3(x, c).v0;
            let trace = refine3(x, c, v0).ok()?;
            let e = |k: usize| rel_err(trace.iterates[k], &root).max(CONVERGENCE_FLOOR);
            Some(ConvergenceRow {
                x,
                v_star: root.to_f64(),
                c,
                err_seed: e(0),
                err_step1: e(1),
                err_step2: e(2),
                err_step3: e(3),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTripRow {
    pub dataset: String,
    pub case_id: usize,
    pub c_hex: String,
    pub v_hat_hex: String,
    pub c: f64,
    pub v_hat: f64,
    pub residual: f64,
    pub bound: f64,
}

impl RoundTripRow {
    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound
    }
}

/// Oracle repricing residual `|c(v̂) − c|` of the solver output and its bound.
pub fn fig5_roundtrip(cases: &[BenchCase], variant: Variant) -> Vec<RoundTripRow> {
    let ctx = PrecisionContext::FAST;
    cases
        .par_iter()
        .filter_map(|case| {
            let x = case.x();
            let v_hat = solve_with(x, case.c, case.expiry, &variant.config()).ok()?.total_vol;
            let repriced = hp_price_f64(x, v_hat, ctx);
            let residual = (repriced - case.c).abs().to_f64();
            let vega = hp_vega(&ctx.float(x), &ctx.float(v_hat), ctx).to_f64();
            Some(RoundTripRow {
                dataset: case.dataset.name().to_string(),
                case_id: case.case_id,
                c_hex: to_hex(case.c),
                v_hat_hex: to_hex(v_hat),
                c: case.c,
                v_hat,
                residual,
                bound: roundtrip_bound(case.c, v_hat, vega),
            })
        })
        .collect()
}

/// Writes serializable rows as CSV with a header.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

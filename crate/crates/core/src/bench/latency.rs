//! Single-threaded latency sweeps: minimum over repeated full-dataset passes.

use super::accuracy::Variant;
use super::datasets::BenchCase;
use crate::dispatch::solve_with;
use serde::Serialize;
use std::hint::black_box;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatencyConfig {
    pub sweeps: usize,
    pub runs: usize,
    pub warmup_sweeps: usize,
    /// Cases per sweep; larger datasets are subsampled with a fixed stride.
    pub max_cases: Option<usize>,
}

impl Default for LatencyConfig {
    fn default() -> Self {
        Self { sweeps: 500, runs: 3, warmup_sweeps: 10, max_cases: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatencyStats {
    pub variant: Variant,
    pub cases: usize,
    pub ns_per_call: f64,
    /// Per-run minimum sweep time per call.
    pub run_minima: Vec<f64>,
}

/// Deterministic stride subsample of at most `max` cases.
pub fn subsample(cases: &[BenchCase], max: Option<usize>) -> Vec<(f64, f64, f64)> {
    let n = cases.len();
    let take = max.map_or(n, |m| m.min(n));
    (0..take)
        .map(|i| {
            let c = &cases[if take == n { i } else { i * n / take }];
            (c.x(), c.c, c.expiry)
        })
        .collect()
}

fn sweep(inputs: &[(f64, f64, f64)], variant: Variant) -> f64 {
    let cfg = variant.config();
    let mut acc = 0.0;
    for &(x, c, t) in inputs {
        if let Ok(r) = solve_with(black_box(x), black_box(c), black_box(t), &cfg) {
            acc += r.total_vol;
        }
    }
    acc
}

pub fn run_latency(cases: &[BenchCase], variant: Variant, cfg: &LatencyConfig) -> LatencyStats {
    let inputs = subsample(cases, cfg.max_cases);
    let n = inputs.len().max(1) as f64;
    let mut run_minima = Vec::with_capacity(cfg.runs);
    for _ in 0..cfg.runs {
        for _ in 0..cfg.warmup_sweeps {
            black_box(sweep(&inputs, variant));
        }
        let mut best = f64::INFINITY;
        for _ in 0..cfg.sweeps {
            let start = Instant::now();
            black_box(sweep(&inputs, variant));
            best = best.min(start.elapsed().as_nanos() as f64 / n);
        }
        run_minima.push(best);
    }
    let ns_per_call = run_minima.iter().copied().fold(f64::INFINITY, f64::min);
    LatencyStats { variant, cases: inputs.len(), ns_per_call, run_minima }
}

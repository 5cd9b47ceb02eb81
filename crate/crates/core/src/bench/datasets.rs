//! Benchmark grids and the filters applied to every generated case.

use crate::error::{Error, Result};
use crate::oracle::{hp_price_f64, PrecisionContext};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Dataset {
    Cly3d,
    Cly20,
    Cly80,
    Jaeckel,
    Market,
    Corners,
    Stress,
    HighVol,
}

impl Dataset {
    pub const ALL: [Dataset; 8] = [
        Dataset::Cly3d,
        Dataset::Cly20,
        Dataset::Cly80,
        Dataset::Jaeckel,
        Dataset::Market,
        Dataset::Corners,
        Dataset::Stress,
        Dataset::HighVol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::Cly3d => "CLY3D",
            Dataset::Cly20 => "CLY20",
            Dataset::Cly80 => "CLY80",
            Dataset::Jaeckel => "Jaeckel",
            Dataset::Market => "Market",
            Dataset::Corners => "Corners",
            Dataset::Stress => "Stress",
            Dataset::HighVol => "HighVol",
        }
    }

    /// Number of retained cases.
    pub fn expected_count(self) -> usize {
        match self {
            Dataset::Cly3d => 51321,
            Dataset::Cly20 => 1600,
            Dataset::Cly80 => 1600,
            Dataset::Jaeckel => 5182,
            Dataset::Market => 7151,
            Dataset::Corners => 278,
            Dataset::Stress => 1270,
            Dataset::HighVol => 149,
        }
    }

    pub fn file_stem(self) -> String {
        self.name().to_ascii_lowercase()
    }
}

impl std::fmt::Display for Dataset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String =
            s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Dataset::ALL
            .into_iter()
            .find(|d| d.file_stem() == key || (key == "jackel" && *d == Dataset::Jaeckel))
            .ok_or_else(|| Error::InvalidInput(format!("unknown dataset `{s}`")))
    }
}

/// One benchmark case with its reference volatility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchCase {
    pub dataset: Dataset,
    pub case_id: usize,
    pub c: f64,
    pub ex: f64,
    pub expiry: f64,
    pub sigma_ref: f64,
    pub v_ref: f64,
}

impl BenchCase {
    pub fn x(&self) -> f64 {
        self.ex.ln()
    }
}

/// A grid point before normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCase {
    pub spot: f64,
    pub rate: f64,
    pub strike: f64,
    pub expiry: f64,
    pub sigma: f64,
}

impl RawCase {
    fn new(spot: f64, rate: f64, strike: f64, expiry: f64, sigma: f64) -> Self {
        Self { spot, rate, strike, expiry, sigma }
    }

    pub fn forward(&self) -> f64 {
        self.spot * (self.rate * self.expiry).exp()
    }

    /// `(F*/K*, σ√T)`.
    pub fn normalized_coords(&self) -> (f64, f64) {
        let f = self.forward();
        let ex = f.min(self.strike) / f.max(self.strike);
        (ex, self.sigma * self.expiry.sqrt())
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            let mut out: Vec<f64> = (0..n).map(|i| i as f64 * step + a).collect();
            out[n - 1] = b;
            out
        }
    }
}

fn product(spot: f64, rate: f64, strikes: &[f64], expiries: &[f64], sigmas: &[f64]) -> Vec<RawCase> {
    let mut out = Vec::with_capacity(strikes.len() * expiries.len() * sigmas.len());
    for &k in strikes {
        for &t in expiries {
            for &s in sigmas {
                out.push(RawCase::new(spot, rate, k, t, s));
            }
        }
    }
    out
}

/// Raw grid of a dataset, in case-id order.
pub fn raw_cases(dataset: Dataset) -> Vec<RawCase> {
    match dataset {
        Dataset::Cly3d => product(
            100.0,
            0.03,
            &linspace(105.0, 800.0, 40),
            &linspace(0.01, 2.0, 40),
            &linspace(0.01, 0.99, 40),
        ),
        Dataset::Cly20 => product(100.0, 0.03, &linspace(105.0, 180.0, 40), &linspace(0.1, 2.0, 40), &[0.2]),
        Dataset::Cly80 => product(100.0, 0.03, &linspace(105.0, 800.0, 40), &linspace(0.1, 2.0, 40), &[0.8]),
        Dataset::Jaeckel => product(
            100.0,
            0.0,
            &scaled(&linspace(0.5, 8.0, 30), 100.0),
            &[0.01, 0.1, 0.25, 0.5, 1.0, 2.0],
            &linspace(0.02, 4.0, 30),
        ),
        Dataset::Market => product(
            100.0,
            0.03,
            &scaled(&linspace(0.7, 1.5, 30), 100.0),
            &[1.0 / 252.0, 5.0 / 252.0, 21.0 / 252.0, 63.0 / 252.0, 0.5, 1.0, 2.0, 5.0],
            &linspace(0.05, 1.5, 30),
        ),
        Dataset::Corners => corners().into_iter().flatten().collect(),
        Dataset::Stress => product(
            100.0,
            0.03,
            &[
                101.0, 102.0, 103.0, 110.0, 150.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0, 10000.0, 10.0, 20.0,
                50.0, 80.0, 90.0, 95.0, 98.0, 99.0,
            ],
            &[0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0],
            &[0.01, 0.02, 0.05, 0.10, 0.20, 0.30, 0.50, 0.80, 0.99],
        ),
        Dataset::HighVol => product(
            100.0,
            0.0,
            &[1.0, 2.0, 3.0, 4.0],
            &[1.0, 2.0, 3.0, 5.0, 7.0, 10.0],
            &[0.5, 0.8, 1.0, 1.2, 1.5, 2.0, 2.5],
        ),
    }
}

fn scaled(v: &[f64], by: f64) -> Vec<f64> {
    v.iter().map(|x| x * by).collect()
}

/// The corner sub-grids, all with `S = 100`, `r = 0`.
///
/// 1. low-volatility short-maturity ITM calls:
///    `K ∈ {80, 90, 95, 98, 99, 99.5}`, `T ∈ {0.001, 0.01, 0.05, 0.1}`,
///    `σ ∈ {0.01, 0.02, 0.05, 0.1}`;
/// 2. deep OTM calls: `K ∈ {200, 300, 500, 1000, 2000}`,
///    `T ∈ {0.25, 1, 5, 10}`, `σ ∈ {0.5, 1.0, 1.5}`;
/// 3. near-OTM short-maturity calls: `K = linspace(101, 150, 10)`,
///    `T ∈ {0.002, 0.01, 0.05}`, `σ ∈ {0.1, 0.3}`;
/// 4. high-volatility deep OTM calls: `K ∈ {200, 500, 1000, 2000}`,
///    `T ∈ {0.5, 1, 2}`, `σ ∈ {1.5, 2, 3}`;
/// 5. near-ATM small prices: `K ∈ {100.5, 101, 102, 105, 110}`,
///    `T ∈ {0.001, 0.005, 0.01}`, `σ ∈ {0.005, 0.01, 0.02, 0.05}`;
/// 6. saturated upper prices: `K ∈ {100.01, 100.1, 101, 105, 110}`,
///    `T = 1`, `σ ∈ {3, 4, 5}`.
///
/// Points whose price underflows or saturates are removed by the common
/// filter, leaving 278 cases.
pub fn corners() -> Vec<Vec<RawCase>> {
    let otm_strikes = linspace(101.0, 150.0, 10);
    vec![
        product(
            100.0,
            0.0,
            &[80.0, 90.0, 95.0, 98.0, 99.0, 99.5],
            &[0.001, 0.01, 0.05, 0.1],
            &[0.01, 0.02, 0.05, 0.1],
        ),
        product(
            100.0,
            0.0,
            &[200.0, 300.0, 500.0, 1000.0, 2000.0],
            &[0.25, 1.0, 5.0, 10.0],
            &[0.5, 1.0, 1.5],
        ),
        product(100.0, 0.0, &otm_strikes, &[0.002, 0.01, 0.05], &[0.1, 0.3]),
        product(100.0, 0.0, &[200.0, 500.0, 1000.0, 2000.0], &[0.5, 1.0, 2.0], &[1.5, 2.0, 3.0]),
        product(
            100.0,
            0.0,
            &[100.5, 101.0, 102.0, 105.0, 110.0],
            &[0.001, 0.005, 0.01],
            &[0.005, 0.01, 0.02, 0.05],
        ),
        product(100.0, 0.0, &[100.01, 100.1, 101.0, 105.0, 110.0], &[1.0], &[3.0, 4.0, 5.0]),
    ]
}

/// Filter on the normalized price: `ln c` finite, in `[-708, -1e-15]`,
/// and `c ∈ (0, 1)`.
pub fn passes_common_filter(c: f64) -> bool {
    let lc = c.ln();
    (-708.0..=-1e-15).contains(&lc) && c > 0.0 && c < 1.0
}

/// Dataset-specific filter applied before the common one.
fn passes_dataset_filter(dataset: Dataset, raw: &RawCase, c: f64) -> bool {
    match dataset {
        Dataset::Cly3d => {
            let f = raw.forward();
            let undiscounted = c * f.min(raw.strike) + (f - raw.strike).max(0.0);
            undiscounted * (-raw.rate * raw.expiry).exp() > 1e-20
        }
        Dataset::HighVol => {
            let lc = c.ln();
            lc.is_finite() && lc <= -0.05
        }
        _ => true,
    }
}

/// Generates the cases of a dataset with oracle prices.
pub fn generate(dataset: Dataset, ctx: PrecisionContext) -> Vec<BenchCase> {
    let raw = raw_cases(dataset);
    let priced: Vec<Option<(RawCase, f64, f64, f64)>> = raw
        .par_iter()
        .map(|r| {
            let (ex, v) = r.normalized_coords();
            let x = ex.ln();
            if !(x <= 0.0) || !(v > 0.0) {
                return None;
            }
            let c = hp_price_f64(x, v, ctx).to_f64();
            (passes_dataset_filter(dataset, r, c) && passes_common_filter(c)).then_some((*r, ex, v, c))
        })
        .collect();
    priced
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(case_id, (r, ex, v, c))| BenchCase {
            dataset,
            case_id,
            c,
            ex,
            expiry: r.expiry,
            sigma_ref: r.sigma,
            v_ref: v,
        })
        .collect()
}

/// Pricing-path check points `(x, v)`: `F*/K* = linspace(0.80, 0.995, 8)`,
/// `T ∈ {1, 2, 5, 10, 21, 42, 63, 126, 189, 252}/252`,
/// `σ = linspace(0.10, 1.20, 10)`, kept where the oracle price lies in
/// `[1e-8, 5e-2]` (402 points).
pub fn broad_otm_grid() -> Vec<(f64, f64)> {
    let days = [1.0, 2.0, 5.0, 10.0, 21.0, 42.0, 63.0, 126.0, 189.0, 252.0];
    priced_grid(&linspace(0.80, 0.995, 8), &days, &linspace(0.10, 1.20, 10), 1e-8, 5e-2)
}

/// Near-the-money check points: `F*/K* = linspace(0.99, 0.9995, 5)`,
/// `T ∈ {1, 2, 3, 5, 7, 10}/252`, `σ = linspace(0.05, 0.80, 6)` (180 points).
pub fn near_atm_grid() -> Vec<(f64, f64)> {
    let days = [1.0, 2.0, 3.0, 5.0, 7.0, 10.0];
    priced_grid(&linspace(0.99, 0.9995, 5), &days, &linspace(0.05, 0.80, 6), 0.0, 1.0)
}

fn priced_grid(exs: &[f64], days: &[f64], sigmas: &[f64], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &e in exs {
        for &d in days {
            for &s in sigmas {
                let (x, v) = (e.ln(), s * (d / 252.0f64).sqrt());
                let c = hp_price_f64(x, v, PrecisionContext::FAST).to_f64();
                if c >= lo && c <= hi && c > 0.0 {
                    out.push((x, v));
                }
            }
        }
    }
    out
}

//! Top-level solver.
//!
//! Order of tests: the microscopic Bachelier branch for prices at the
//! `1e-6` scale within `1e-8` of the money, the tiny near-ATM seed, the L3
//! seed with repair, three refinement steps, and the optional polish.

use crate::error::{Error, Result};
use crate::normalize::{beta_from_c, normalize, NormalizedQuote, RawQuote};
use crate::polish::{jackel_newton_polish_with, PolishCutoff, PolishReport};
use crate::pricing::log_price_lower;
use crate::refine::{refine3, StepDiagnostics};
use crate::seed::{choi_l3, SeedOutcome};
use crate::specfun::{
    erfcx, norm_pdf, FRAC_1_SQRT_2, LN_TWO_PI, ONE_OVER_SQRT_TWO_PI, SQRT_PI_OVER_TWO, SQRT_TWO_PI,
};
use crate::ulp::ulp;
use std::f64::consts::PI;

/// Branch tags recorded along a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchTag {
    TinyNearAtm,
    MicroscopicDeepTail,
    MicroscopicRational,
    MicroscopicZeroLimit,
    L3Seed,
    SeedRepaired,
    LowerChebyshev,
    UpperHalley,
    Polished,
}

impl BranchTag {
    pub fn name(self) -> &'static str {
        match self {
            BranchTag::TinyNearAtm => "tiny_near_atm",
            BranchTag::MicroscopicDeepTail => "microscopic_deep_tail",
            BranchTag::MicroscopicRational => "microscopic_rational",
            BranchTag::MicroscopicZeroLimit => "microscopic_zero_limit",
            BranchTag::L3Seed => "l3_seed",
            BranchTag::SeedRepaired => "seed_repaired",
            BranchTag::LowerChebyshev => "lower_chebyshev",
            BranchTag::UpperHalley => "upper_halley",
            BranchTag::Polished => "polished",
        }
    }

    pub fn is_microscopic(self) -> bool {
        matches!(
            self,
            BranchTag::MicroscopicDeepTail | BranchTag::MicroscopicRational | BranchTag::MicroscopicZeroLimit
        )
    }
}

impl std::fmt::Display for BranchTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Solver options.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverConfig {
    pub polish: bool,
    pub polish_cutoff: PolishCutoff,
}

impl SolverConfig {
    pub const UNPOLISHED: SolverConfig = SolverConfig { polish: false, polish_cutoff: PolishCutoff::Half };
    pub const POLISHED: SolverConfig = SolverConfig { polish: true, polish_cutoff: PolishCutoff::Half };
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub total_vol: f64,
    pub implied_vol: f64,
    pub branch_path: Vec<BranchTag>,
    /// Seed followed by every refinement iterate (and the polished value).
    pub trace: Vec<f64>,
    pub seed: Option<SeedOutcome>,
    pub steps: Vec<StepDiagnostics>,
    pub polish: Option<PolishReport>,
}

impl SolveResult {
    pub fn has(&self, tag: BranchTag) -> bool {
        self.branch_path.contains(&tag)
    }
}

/// Microscopic branch cutoff `1e-6`, with one part in `1e12` of tolerance.
pub const MICROSCOPIC_PRICE: f64 = 1e-6 * (1.0 + 1e-12);
pub const MICROSCOPIC_MONEYNESS: f64 = 1e-8;
pub const TINY_NEAR_ATM_PRICE: f64 = 5e-4;
pub const TINY_NEAR_ATM_MONEYNESS: f64 = 0.01;
/// `ln(m/β)` above which the deep-tail equation is used.
pub const DEEP_TAIL_LOG_RATIO: f64 = 20.0;
/// Smallest accepted `m/v` of the deep-tail root.
pub const DEEP_TAIL_MIN_A: f64 = 4.0;

pub fn is_microscopic(x: f64, c: f64) -> bool {
    c <= MICROSCOPIC_PRICE && x.abs() <= MICROSCOPIC_MONEYNESS && x <= 0.0
}

/// `√(x² + 2πc²)`, capped by the L3 lower bound when the moneyness term
/// dominates and the square root lands above the root.
pub fn tiny_near_atm_seed(x: f64, c: f64) -> f64 {
    let v0 = (x * x + 2.0 * PI * c * c).sqrt();
    match log_price_lower(x, v0) {
        Ok(e) if e.log_value <= c.ln() => v0,
        _ => v0.min(choi_l3(x, c).v0),
    }
}

pub fn is_tiny_near_atm(x: f64, c: f64) -> bool {
    c <= TINY_NEAR_ATM_PRICE && x.abs() < TINY_NEAR_ATM_MONEYNESS
}

fn check_inputs(x: f64, c: f64, expiry: f64) -> Result<()> {
    if !x.is_finite() || x > 0.0 {
        return Err(Error::InvalidInput(format!("log-moneyness must be finite and <= 0, got {x}")));
    }
    if !(expiry > 0.0 && expiry.is_finite()) {
        return Err(Error::InvalidInput(format!("expiry must be positive, got {expiry}")));
    }
    if c.is_nan() {
        return Err(Error::InvalidInput("normalized price is NaN".into()));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::ArbitrageViolation(format!("normalized price {c} outside (0, 1)")));
    }
    Ok(())
}

/// Solves for total and annualized volatility of a normalized quote.
pub fn solve(x: f64, c: f64, expiry: f64, polish: bool) -> Result<SolveResult> {
    let cfg = SolverConfig { polish, ..SolverConfig::default() };
    solve_with(x, c, expiry, &cfg)
}

pub fn solve_with(x: f64, c: f64, expiry: f64, cfg: &SolverConfig) -> Result<SolveResult> {
    check_inputs(x, c, expiry)?;
    let mut result = solve_total(x, c, cfg);
    result.implied_vol = result.total_vol / expiry.sqrt();
    Ok(result)
}

fn solve_total(x: f64, c: f64, cfg: &SolverConfig) -> SolveResult {
    let mut path = Vec::with_capacity(4);
    if is_microscopic(x, c) {
        let (v, tag) = microscopic_bachelier(x, c);
        path.push(tag);
        return SolveResult {
            total_vol: v,
            implied_vol: f64::NAN,
            branch_path: path,
            trace: vec![v],
            seed: None,
            steps: Vec::new(),
            polish: None,
        };
    }

    let seed = if is_tiny_near_atm(x, c) {
        path.push(BranchTag::TinyNearAtm);
        None
    } else {
        let s = choi_l3(x, c);
        path.push(if s.source.is_repair() { BranchTag::SeedRepaired } else { BranchTag::L3Seed });
        Some(s)
    };
    let v0 = match seed {
        Some(s) => s.v0,
        None => tiny_near_atm_seed(x, c),
    };

    let (mut v, mut trace, steps) = match refine3(x, c, v0) {
        Ok(t) => {
            path.push(match t.branch {
                crate::pricing::TailBranch::Lower => BranchTag::LowerChebyshev,
                crate::pricing::TailBranch::Upper => BranchTag::UpperHalley,
            });
            let v = t.final_v();
            (v, t.iterates, t.steps)
        }
        Err(_) => {
            let (v, tag) = microscopic_bachelier(x, c);
            path.push(tag);
            (v, vec![v0, v], Vec::new())
        }
    };

    let mut polish = None;
    if cfg.polish && c <= cfg.polish_cutoff.threshold() && v > 0.0 {
        let (s, report) = jackel_newton_polish_with(x, v, c, cfg.polish_cutoff);
        if report.applied {
            path.push(BranchTag::Polished);
            v = s;
            trace.push(s);
        }
        polish = Some(report);
    }

    SolveResult { total_vol: v, implied_vol: f64::NAN, branch_path: path, trace, seed, steps, polish }
}

/// Total volatility of a normalized price.
pub fn implied_total_vol(x: f64, c: f64, polish: bool) -> Result<f64> {
    Ok(solve(x, c, 1.0, polish)?.total_vol)
}

/// Annualized implied volatility of a raw quote.
pub fn implied_vol_from_quote(quote: &RawQuote, polish: bool) -> Result<SolveResult> {
    let n = normalize(quote)?;
    solve_quote(&n, polish)
}

pub fn solve_quote(q: &NormalizedQuote, polish: bool) -> Result<SolveResult> {
    solve(q.x, q.c, q.expiry, polish)
}

/// Conditioning-aware repricing tolerance `max(4 ulp(c), |vega|·4 ulp(v))`.
pub fn roundtrip_bound(c: f64, v: f64, vega: f64) -> f64 {
    (4.0 * ulp(c)).max(vega.abs() * 4.0 * ulp(v))
}

/// Bachelier-limit solve for prices at the `1e-6` scale close to the money.
pub fn microscopic_bachelier(x: f64, c: f64) -> (f64, BranchTag) {
    let beta = beta_from_c(c, x);
    let m = -x;
    if m > 0.0 && (m / beta).ln() > DEEP_TAIL_LOG_RATIO {
        if let Some(v) = deep_tail_solve(beta, m) {
            return (v, BranchTag::MicroscopicDeepTail);
        }
    }
    let mut v = bachelier_iv(beta, m);
    for _ in 0..2 {
        if !(v.is_finite() && v > 0.0) {
            break;
        }
        let a = m / v;
        let pdf = norm_pdf(a);
        let residual = black_from_bachelier_moments(m, v) - beta;
        v -= residual / (pdf * (-v * v / 8.0).exp());
    }
    if v.is_finite() && v > 0.0 {
        (v, BranchTag::MicroscopicRational)
    } else {
        (0.0, BranchTag::MicroscopicZeroLimit)
    }
}

/// `β ≈ I₀ - I₂/8 + I₄/128` with `I₂ = (v³φ(a) - m²I₀)/3`,
/// `I₄ = (v⁵φ(a) - m²I₂)/5`, `a = m/v`.
pub fn black_from_bachelier_moments(m: f64, v: f64) -> f64 {
    let a = m / v;
    let pdf = norm_pdf(a);
    let i0 = bachelier_price(m, v);
    let m2 = m * m;
    let i2 = (v * v * v * pdf - m2 * i0) / 3.0;
    let i4 = (v * v * v * v * v * pdf - m2 * i2) / 5.0;
    i0 - i2 / 8.0 + i4 / 128.0
}

/// Bachelier call `I₀ = vφ(m/v) - mΦ(-m/v)`.
pub fn bachelier_price(m: f64, v: f64) -> f64 {
    if m == 0.0 {
        return ONE_OVER_SQRT_TWO_PI * v;
    }
    let a = m / v;
    m * norm_pdf(a) * mills_gap(a)
}

/// `1/a - Φ(-a)/φ(a)` for `a > 0`.
pub fn mills_gap(a: f64) -> f64 {
    if a > MILLS_GAP_CF_SWITCH {
        let mut k = 0.0;
        for n in (2..=MILLS_GAP_CF_TERMS).rev() {
            k = n as f64 / (a + k);
        }
        let k = 1.0 / (a + k);
        k / (a * (a + k))
    } else {
        1.0 / a - SQRT_PI_OVER_TWO * erfcx(a * FRAC_1_SQRT_2)
    }
}

const MILLS_GAP_CF_SWITCH: f64 = 5.0;
const MILLS_GAP_CF_TERMS: usize = 80;

/// `ln(I₀/m) = -a²/2 - ln(2π)/2 + ln(1/a - Φ(-a)/φ(a))`.
pub fn log_scaled_bachelier(a: f64) -> f64 {
    -0.5 * a * a - 0.5 * LN_TWO_PI + mills_gap(a).ln()
}

/// Safeguarded Newton on `ln(I₀/m) = target` in `a = m/v` within `[lo, hi]`.
fn solve_log_scaled(target: f64, mut a: f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    for _ in 0..100 {
        let gap = mills_gap(a);
        let f = log_scaled_bachelier(a) - target;
        if !f.is_finite() {
            return None;
        }
        if f > 0.0 {
            lo = lo.max(a);
        } else {
            hi = hi.min(a);
        }
        let slope = -1.0 / (a * a * gap);
        let mut next = a - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * a.max(lo) };
        }
        if (next - a).abs() <= 2.0 * f64::EPSILON * a {
            return Some(next);
        }
        a = next;
    }
    Some(a)
}

/// Deep-tail root `v = m/a` of the scaled Mills-ratio equation, accepted
/// only when `m/v > 4`.
pub fn deep_tail_solve(beta: f64, m: f64) -> Option<f64> {
    let log_ratio = (beta / m).ln();
    let a0 = (-2.0 * log_ratio - LN_TWO_PI).max(0.0).sqrt();
    let hi = (2.0 * a0).max(2.0 * DEEP_TAIL_MIN_A);
    let seed = a0.clamp(DEEP_TAIL_MIN_A, hi);
    let a = solve_log_scaled(log_ratio, seed, DEEP_TAIL_MIN_A, hi)?;
    let v = m / a;
    (a > DEEP_TAIL_MIN_A && v.is_finite() && v > 0.0).then_some(v)
}

/// Bachelier implied total volatility `v` with `I₀(m, v) = β`.
pub fn bachelier_iv(beta: f64, m: f64) -> f64 {
    if m == 0.0 {
        return SQRT_TWO_PI * beta;
    }
    let r = beta / m;
    let a0 = bachelier_seed(r);
    match solve_log_scaled(r.ln(), a0, 0.0, f64::INFINITY) {
        Some(a) if a > 0.0 => m / a,
        _ => m / a0,
    }
}

/// Starting `a = m/v` for `ψ(a) = β/m`: the ATM quadratic
/// `v² - √(2π)(β + m/2)v + m²/2 = 0` when the price dominates the
/// moneyness, and a fixed-point of `ψ(a) ≈ φ(a)/a³` otherwise.
fn bachelier_seed(r: f64) -> f64 {
    if r > 0.3 {
        let b = SQRT_TWO_PI * (r + 0.5);
        let disc = b * b - 2.0;
        if disc > 0.0 {
            let v_over_m = 0.5 * (b + disc.sqrt());
            return 1.0 / v_over_m;
        }
    }
    let mut a: f64 = (-2.0 * r.ln()).max(1.0).sqrt();
    for _ in 0..4 {
        let rhs = -2.0 * r.ln() - LN_TWO_PI - 6.0 * a.ln();
        if rhs <= 0.0 {
            break;
        }
        a = rhs.sqrt();
    }
    a.max(0.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_near_atm_branch_for_corner_case() {
        let r = solve(-0.004987541511039051, 4.196019744216237e-4, 0.01, false).unwrap();
        assert!(r.has(BranchTag::TinyNearAtm));
        assert!(!r.branch_path.iter().any(|t| t.is_microscopic()));
        assert!((r.implied_vol - 0.05).abs() < 1e-12);
    }

    #[test]
    fn upper_regression_ignores_polish() {
        for polish in [false, true] {
            let r = solve(-1e-6, 0.9999, 1.0, polish).unwrap();
            let reference = 7.7811840154613839563;
            assert!((r.total_vol - reference).abs() <= 2.0 * ulp(reference));
            assert!(!r.has(BranchTag::Polished));
            assert!(r.has(BranchTag::UpperHalley));
        }
    }

    #[test]
    fn microscopic_deep_tail_example() {
        let c = (-100.0f64).exp();
        let r = solve(-1e-14, c, 1.0, false).unwrap();
        assert_eq!(r.branch_path, vec![BranchTag::MicroscopicDeepTail]);
        let reference = 9.155604419747139e-16;
        assert!((r.total_vol - reference).abs() <= 8.0 * ulp(reference), "{}", r.total_vol);
        let printed = 9.155604419747184e-16;
        assert!(((r.total_vol - printed) / printed).abs() < 6e-15);
        assert!(((1e-14 / r.total_vol) - 10.922271803739784).abs() < 1e-12);
    }

    #[test]
    fn microscopic_transition_example() {
        let (v, tag) = microscopic_bachelier(-1e-8, 1e-16);
        assert_eq!(tag, BranchTag::MicroscopicRational);
        let expect = 1.9952018436169516e-9;
        assert!((v - expect).abs() <= 4.0 * ulp(expect), "{v}");
        assert!(((1e-8 / v) - 5.012024238044884).abs() < 1e-12);
    }

    #[test]
    fn microscopic_atm_agrees_with_series() {
        let c = 1e-7;
        let (v, tag) = microscopic_bachelier(0.0, c);
        assert_eq!(tag, BranchTag::MicroscopicRational);
        let series = SQRT_TWO_PI * c * (1.0 + PI * c * c / 12.0);
        assert!(((v - series) / series).abs() < 1e-12);
    }

    #[test]
    fn bachelier_atm_exact() {
        assert_eq!(bachelier_iv(1e-9, 0.0), SQRT_TWO_PI * 1e-9);
    }

    #[test]
    fn bachelier_round_trip() {
        for i in 0..200 {
            let a = 0.1 + 3.9 * i as f64 / 199.0;
            let m = 1e-8 * (1.0 + (i % 7) as f64);
            let v = m / a;
            let beta = bachelier_price(m, v);
            let back = bachelier_iv(beta, m);
            assert!(((back - v) / v).abs() <= 1e-12, "a = {a}: {back} vs {v}");
        }
    }

    #[test]
    fn deep_tail_monotone_in_price() {
        let m = 1e-14;
        let mut prev = 0.0;
        for i in 0..20 {
            let beta = m * (-(30.0 + 2.0 * i as f64)).exp();
            let v = deep_tail_solve(beta, m).unwrap();
            if i > 0 {
                assert!(v < prev);
            }
            prev = v;
        }
    }

    #[test]
    fn mills_gap_continuity() {
        let below = mills_gap(MILLS_GAP_CF_SWITCH * (1.0 - f64::EPSILON));
        let above = mills_gap(MILLS_GAP_CF_SWITCH * (1.0 + f64::EPSILON));
        assert!(((below - above) / above).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(solve(0.1, 0.2, 1.0, false), Err(Error::InvalidInput(_))));
        assert!(matches!(solve(-0.1, 0.0, 1.0, false), Err(Error::ArbitrageViolation(_))));
        assert!(matches!(solve(-0.1, 1.0, 1.0, false), Err(Error::ArbitrageViolation(_))));
        assert!(matches!(solve(-0.1, 0.2, 0.0, false), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn branch_path_is_deterministic() {
        let a = solve(-0.3, 0.01, 1.0, true).unwrap();
        let b = solve(-0.3, 0.01, 1.0, true).unwrap();
        assert_eq!(a.branch_path, b.branch_path);
        assert_eq!(a.total_vol.to_bits(), b.total_vol.to_bits());
    }
}

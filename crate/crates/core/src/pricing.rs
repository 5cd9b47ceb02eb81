//! Normalized Black call price evaluators.
//!
//! In half coordinates `h = x/v`, `t = v/2` the OTM call is
//! `c = Φ(h+t) - e^{-x}Φ(h-t)`. Besides the textbook cdf form the module
//! offers the erfcx/log representations of `ln c` and `ln(1-c)` used by the
//! solver, and an expanded evaluator of `β = c·e^{x/2}` that splits the
//! `(x, s)` plane into an asymptotic region, a small-`t` region and a
//! Cody-style erfc/erfcx region.

use crate::error::{Error, Result};
use crate::specfun::{
    erf, erfc_dd, erfcx, erfcx_dd, exp_dd, norm_cdf, Dd, FRAC_1_SQRT_2, FRAC_1_SQRT_2_LO, LN_TWO_PI,
    ONE_OVER_SQRT_TWO_PI, SQRT_PI_OVER_TWO,
};

const LN_2: f64 = std::f64::consts::LN_2;

/// `h = x/v`, `t = v/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfCoords {
    pub h: f64,
    pub t: f64,
}

impl HalfCoords {
    pub fn new(x: f64, v: f64) -> Self {
        Self { h: x / v, t: 0.5 * v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailBranch {
    /// `ln c`, used while `c <= 1/2`.
    Lower,
    /// `ln(1 - c)`, used above one half.
    Upper,
}

/// One evaluation of a tail objective with its erfcx pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailObjectiveEval {
    pub branch: TailBranch,
    /// `ln c` (lower) or `ln(1 - c)` (upper).
    pub log_value: f64,
    /// `N⁺` (lower) or `M⁺` (upper).
    pub n_plus: f64,
    /// `N⁻` (lower) or `M⁻` (upper).
    pub n_minus: f64,
    /// `N⁺ - N⁻` (lower) or `M⁺ + M⁻` (upper).
    pub n_combined: f64,
    pub coords: HalfCoords,
    pub x: f64,
    pub v: f64,
}

/// Textbook Black formula `Φ(h+t) - e^{-x}Φ(h-t)`, clamped to `[0, 1]`.
pub fn price_cdf(x: f64, v: f64) -> f64 {
    let HalfCoords { h, t } = HalfCoords::new(x, v);
    let c = norm_cdf(h + t) - (-x).exp() * norm_cdf(h - t);
    c.clamp(0.0, 1.0)
}

/// `|h|` and `t` below this size select the erf form of `N⁺ - N⁻`.
const NEAR_ATM_ARG: f64 = 0.5;

/// `ln c = -(h²+t²)/2 - ln 2 - x/2 + ln(N⁺ - N⁻)`,
/// `N± = erfcx(-(h ± t)/√2)`.
///
/// Close to the money with small `t` the difference cancels;
/// there it is formed as `e^{q²}(expm1(x) + eˣ·erf(p) - erf(q))` with
/// `p, q = (h ± t)/√2`, using `p² - q² = x`.
pub fn log_price_lower(x: f64, v: f64) -> Result<TailObjectiveEval> {
    let coords = HalfCoords::new(x, v);
    let HalfCoords { h, t } = coords;
    let p = (h + t) * FRAC_1_SQRT_2;
    let q = (h - t) * FRAC_1_SQRT_2;
    let n_plus = erfcx(-p);
    let n_minus = erfcx(-q);
    let diff = if h > -NEAR_ATM_ARG && t < NEAR_ATM_ARG {
        (q * q).exp() * (x.exp_m1() + x.exp() * erf(p) - erf(q))
    } else {
        n_plus - n_minus
    };
    if !(diff > 0.0) || !diff.is_finite() {
        return Err(Error::DegenerateDifference { x, v });
    }
    let log_value = -0.5 * (h * h + t * t) - LN_2 - 0.5 * x + diff.ln();
    Ok(TailObjectiveEval {
        branch: TailBranch::Lower,
        log_value,
        n_plus,
        n_minus,
        n_combined: diff,
        coords,
        x,
        v,
    })
}

/// `ln(1-c) = -(h+t)²/2 - ln 2 + ln(M⁺ + M⁻)`,
/// `M⁺ = erfcx((h+t)/√2)`, `M⁻ = erfcx(-(h-t)/√2)`.
pub fn log_gap_upper(x: f64, v: f64) -> TailObjectiveEval {
    let coords = HalfCoords::new(x, v);
    let HalfCoords { h, t } = coords;
    let n_plus = erfcx((h + t) * FRAC_1_SQRT_2);
    let n_minus = erfcx(-(h - t) * FRAC_1_SQRT_2);
    let sum = n_plus + n_minus;
    let log_value = -0.5 * (h + t) * (h + t) - LN_2 + sum.ln();
    TailObjectiveEval { branch: TailBranch::Upper, log_value, n_plus, n_minus, n_combined: sum, coords, x, v }
}

/// `c` from the erfcx/log representation; the smaller tail is used.
pub fn price_erfcx_log(x: f64, v: f64) -> f64 {
    match log_price_lower(x, v) {
        Ok(eval) if eval.log_value <= -LN_2 => eval.log_value.exp(),
        _ => -log_gap_upper(x, v).log_value.exp_m1(),
    }
}

/// Region of the expanded evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    RegionI,
    RegionII,
    Cody,
}

/// Asymptotic-region slope `η`.
pub const REGION_ETA: f64 = -13.0;
/// Small-`t` threshold `τ = 2ε^{1/16}`.
pub const REGION_TAU: f64 = 0.210_224_103_813_428_63;

pub fn region_dispatch(x: f64, s: f64) -> RegionTag {
    if x < REGION_ETA * s && s * (0.5 * s - (REGION_TAU + 0.5 + REGION_ETA)) + x < 0.0 {
        RegionTag::RegionI
    } else if s * (s - 2.0 * REGION_TAU) - x / REGION_ETA < 0.0 {
        RegionTag::RegionII
    } else {
        RegionTag::Cody
    }
}

/// `-(h²+t²)/2` as an unevaluated sum `hi + lo`, with `h = x/s` taken
/// exactly rather than rounded.
pub fn half_sum_sq_exponent(x: f64, s: f64) -> (f64, f64) {
    let h = x / s;
    let h_lo = (-h).mul_add(s, x) / s;
    let t = 0.5 * s;
    let hh = h * h;
    let hh_lo = h.mul_add(h, -hh) + 2.0 * h * h_lo;
    let tt = t * t;
    let tt_lo = t.mul_add(t, -tt);
    let sum = hh + tt;
    let bv = sum - hh;
    let sum_lo = (hh - (sum - bv)) + (tt - bv) + hh_lo + tt_lo;
    (-0.5 * sum, -0.5 * sum_lo)
}

/// `exp(-(h²+t²)/2)` from the compensated exponent.
fn gauss_factor(x: f64, s: f64) -> f64 {
    let (hi, lo) = half_sum_sq_exponent(x, s);
    hi.exp() * (1.0 + lo)
}

/// Square-root-forward vega `∂β/∂s = exp(-(h²+t²)/2)/√(2π)`.
pub fn vega_sqrtfwd(x: f64, s: f64) -> f64 {
    ONE_OVER_SQRT_TWO_PI * gauss_factor(x, s)
}

/// `a(h) = 1 + h·Φ(h)/φ(h)`.
pub fn coeff_a(h: f64) -> f64 {
    if h > A_TAIL_SWITCH {
        1.0 + h * mills_scaled(h)
    } else {
        // With H = -h: a = 1 - H·R(H), R(H) = 1/(H + K), K = 1/(H + 2/(H + 3/(H + ...))).
        let big_h = -h;
        let mut k = 0.0;
        for n in (1..=A_TAIL_TERMS).rev() {
            k = n as f64 / (big_h + k);
        }
        k / (big_h + k)
    }
}

const A_TAIL_SWITCH: f64 = -10.0;
const A_TAIL_TERMS: usize = 60;

/// `Φ(h)/φ(h) = √(π/2)·erfcx(-h/√2)`.
fn mills_scaled(h: f64) -> f64 {
    SQRT_PI_OVER_TWO * erfcx(-h * FRAC_1_SQRT_2)
}

/// Expanded evaluator of `β = c·e^{x/2}` at total volatility `s`.
pub fn price_expanded(x: f64, s: f64) -> f64 {
    match region_dispatch(x, s) {
        RegionTag::RegionI => region_one(x, s),
        RegionTag::RegionII => region_two(x, s),
        RegionTag::Cody => region_cody(x, s),
    }
}

/// Maximum number of terms of the asymptotic series in Region I.
const REGION_ONE_MAX_TERMS: usize = 64;

/// Scaled asymptotic series `Ω(q, e) = Σ 2(-1)ⁿ(2n-1)!! qⁿ Pₙ(e)`,
/// `Pₙ(e) = Σⱼ C(2n+1, 2j+1) eʲ`. Terms are added while they keep shrinking
/// and stop once below `2⁻⁵³` of the partial sum.
pub fn region_one_omega(q: f64, e: f64) -> f64 {
    let mut sum = 2.0;
    let mut prefactor = 2.0;
    let mut prev = f64::INFINITY;
    for n in 1..REGION_ONE_MAX_TERMS {
        prefactor *= -((2 * n - 1) as f64) * q;
        let term = prefactor * binomial_odd_poly(n, e);
        let size = term.abs();
        if size >= prev {
            break;
        }
        sum += term;
        prev = size;
        if size < f64::EPSILON * 0.5 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Σ_{j=0..n} C(2n+1, 2j+1) eʲ` by Horner.
fn binomial_odd_poly(n: usize, e: f64) -> f64 {
    let m = 2 * n + 1;
    let mut coeff = 1.0;
    let mut acc = 1.0;
    // C(m, m) = 1 is the leading coefficient; walk j downward.
    for j in (0..n).rev() {
        let k = 2 * j + 1;
        // C(m, k) from C(m, k + 2).
        coeff *= ((k + 2) * (k + 1)) as f64 / ((m - k) * (m - k - 1)) as f64;
        acc = acc * e + coeff;
    }
    acc
}

fn region_one(x: f64, s: f64) -> f64 {
    let HalfCoords { h, t } = HalfCoords::new(x, s);
    let r = (h + t) * (h - t);
    let e = (t / h) * (t / h);
    let q = (h / r) * (h / r);
    let scaled = (t / r) * region_one_omega(q, e);
    let nu = vega_sqrtfwd(x, s);
    if nu >= f64::MIN_POSITIVE {
        nu * scaled
    } else {
        let (hi, lo) = half_sum_sq_exponent(x, s);
        (hi - 0.5 * LN_TWO_PI + (scaled.ln() + lo)).exp()
    }
}

/// Small-`t` coefficients `b₀..b₆` of `β/ν = t·Σ bⱼ t^{2j}`.
pub fn region_two_coefficients(h: f64) -> [f64; 7] {
    let a = coeff_a(h);
    let h2 = h * h;
    let h4 = h2 * h2;
    let h6 = h4 * h2;
    let h8 = h4 * h4;
    let h10 = h8 * h2;
    let h12 = h6 * h6;
    [
        2.0 * a,
        (-1.0 + a * (3.0 + h2)) / 3.0,
        (-7.0 - h2 + a * (15.0 + 10.0 * h2 + h4)) / 60.0,
        (-57.0 - 18.0 * h2 - h4 + a * (105.0 + 105.0 * h2 + 21.0 * h4 + h6)) / 2520.0,
        (-561.0 - 285.0 * h2 - 33.0 * h4 - h6 + a * (945.0 + 1260.0 * h2 + 378.0 * h4 + 36.0 * h6 + h8))
            / 181440.0,
        (-6555.0 - 4680.0 * h2 - 840.0 * h4 - 52.0 * h6 - h8
            + a * (10395.0 + 17325.0 * h2 + 6930.0 * h4 + 990.0 * h6 + 55.0 * h8 + h10))
            / 19958400.0,
        (-89055.0 - 82845.0 * h2 - 20370.0 * h4 - 1926.0 * h6 - 75.0 * h8 - h10
            + a * (135135.0 + 270270.0 * h2 + 135135.0 * h4 + 25740.0 * h6 + 2145.0 * h8 + 78.0 * h10 + h12))
            / 3113510400.0,
    ]
}

/// Below this `h` the Region II series is summed from moment ratios.
const MOMENT_SWITCH: f64 = -3.0;
/// Depth of the backward recurrence for the moment ratios.
const MOMENT_DEPTH: usize = 64;

/// `β/ν = 2 Σ Iₙ tⁿ/n!` over odd `n`, with `Iₙ = ∫₀^∞ uⁿ e^{hu-u²/2} du`.
/// The ratios `rₙ = Iₙ/Iₙ₋₁ = n/(rₙ₊₁ - h)` come from a backward recurrence
/// and `I₀ = Φ(h)/φ(h)`, so every term is positive.
fn region_two_moments(h: f64, t: f64) -> f64 {
    let mut r = [0.0; MOMENT_DEPTH + 1];
    let tail = (MOMENT_DEPTH + 1) as f64;
    let mut rn = 0.5 * (h + h.mul_add(h, 4.0 * tail).sqrt());
    for n in (1..=MOMENT_DEPTH).rev() {
        rn = n as f64 / (rn - h);
        r[n] = rn;
    }
    let t2 = t * t;
    let mut term = 2.0 * r[1] * mills_scaled(h) * t;
    let mut sum = term;
    let mut n = 1;
    while n + 2 <= MOMENT_DEPTH {
        term *= t2 * r[n + 1] * r[n + 2] / ((n + 1) * (n + 2)) as f64;
        n += 2;
        sum += term;
        if term < 0.125 * f64::EPSILON * sum {
            break;
        }
    }
    sum
}

fn region_two(x: f64, s: f64) -> f64 {
    let HalfCoords { h, t } = HalfCoords::new(x, s);
    let series = if h < MOMENT_SWITCH {
        region_two_moments(h, t)
    } else {
        let b = region_two_coefficients(h);
        let t2 = t * t;
        t * b.iter().rev().fold(0.0, |acc, &bj| acc * t2 + bj)
    };
    vega_sqrtfwd(x, s) * series
}

/// Cody region in double-double: `h`, the erfc arguments and the
/// exponential weights carry their rounding residues.
fn region_cody(x: f64, s: f64) -> f64 {
    use crate::specfun::CODY_THRESHOLD as RHO;
    let h0 = x / s;
    let h = Dd::fast_two_sum(h0, (-h0).mul_add(s, x) / s);
    let t = Dd::from(0.5 * s);
    let inv_sqrt2 = Dd(FRAC_1_SQRT_2, FRAC_1_SQRT_2_LO);
    let q1 = h.add(t).mul(inv_sqrt2).neg();
    let q2 = h.add(t.neg()).mul(inv_sqrt2).neg();
    let up = || exp_dd(Dd::from(0.5 * x));
    let down = || exp_dd(Dd::from(-0.5 * x));
    let gauss = || {
        let (hi, lo) = half_sum_sq_exponent(x, s);
        exp_dd(Dd::fast_two_sum(hi, lo))
    };
    let two_beta = if q1.0 < RHO {
        if q2.0 < RHO {
            up().mul(erfc_dd(q1)).add(down().mul(erfc_dd(q2)).neg())
        } else {
            up().mul(erfc_dd(q1)).add(gauss().mul(erfcx_dd(q2)).neg())
        }
    } else if q2.0 < RHO {
        gauss().mul(erfcx_dd(q1)).add(down().mul(erfc_dd(q2)).neg())
    } else {
        gauss().mul(erfcx_dd(q1).add(erfcx_dd(q2).neg()))
    };
    (0.5 * two_beta.value()).max(0.0)
}

/// Normalized price `c` from the expanded evaluator.
pub fn price_expanded_c(x: f64, s: f64) -> f64 {
    price_expanded(x, s) / (0.5 * x).exp()
}

/// The three double-precision pricing paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PricePath {
    Cdf,
    ErfcxLog,
    Expanded,
}

impl PricePath {
    pub const ALL: [PricePath; 3] = [PricePath::Cdf, PricePath::ErfcxLog, PricePath::Expanded];

    pub fn name(self) -> &'static str {
        match self {
            PricePath::Cdf => "cdf",
            PricePath::ErfcxLog => "erfcxlog",
            PricePath::Expanded => "expanded",
        }
    }

    pub fn price(self, x: f64, v: f64) -> f64 {
        match self {
            PricePath::Cdf => price_cdf(x, v),
            PricePath::ErfcxLog => price_erfcx_log(x, v),
            PricePath::Expanded => price_expanded_c(x, v),
        }
    }
}

impl std::str::FromStr for PricePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cdf" => Ok(PricePath::Cdf),
            "erfcxlog" | "erfcx" | "log" => Ok(PricePath::ErfcxLog),
            "expanded" => Ok(PricePath::Expanded),
            other => Err(Error::InvalidInput(format!("unknown pricing path `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::norm_cdf;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_coords() {
        let c = HalfCoords::new(-0.5, 0.25);
        assert_eq!(c.h, -2.0);
        assert_eq!(c.t, 0.125);
    }

    #[test]
    fn price_cdf_table_scenarios() {
        let c = price_cdf(0.925f64.ln(), 0.15 * (10.0f64 / 252.0).sqrt());
        assert!((c - 4.42e-5).abs() < 0.005e-5, "{c}");
        let c = price_cdf(0.995f64.ln(), 6.30e-3);
        assert!((c - 7.65e-4).abs() < 0.005e-4, "{c}");
        assert!(price_cdf(0.0, 1e-320) < 1e-300);
    }

    #[test]
    fn log_price_worked_example() {
        let e = log_price_lower(-0.004987541511039051, 0.005000000000000001).unwrap();
        assert!(rel(e.log_value, -7.776203975967922) < 2e-13);
        assert!(e.n_plus > e.n_minus && e.n_minus > 0.0);
    }

    #[test]
    fn log_price_atm_closed_form() {
        let e = log_price_lower(0.0, 0.1).unwrap();
        let direct = (2.0 * norm_cdf(0.05) - 1.0).ln();
        assert!(rel(e.log_value, direct) < 1e-13);
        assert!(rel(e.log_value.exp(), price_cdf(0.0, 0.1)) < 1e-13);
    }

    #[test]
    fn log_gap_worked_examples() {
        let e = log_gap_upper(-9.999500033332494e-5, 9.486832980505138);
        assert!(rel(e.log_value, 2.1015410250754499e-6f64.ln()) < 1e-12);
        assert!(rel(e.log_value.exp(), 2.1015410263114376e-6) < 1e-9);
        let e = log_gap_upper(-1e-6, 7.781184015461386);
        assert!(rel(e.log_value.exp(), 1e-4) < 1e-12);
        let e = log_gap_upper(0.0, 1e-12);
        assert!(e.log_value < 0.0 && e.log_value > -1e-11);
    }

    #[test]
    fn region_examples() {
        assert_eq!(region_dispatch(0.0, REGION_TAU / 2.0), RegionTag::RegionII);
        assert_eq!(region_dispatch(-1.0, 0.01), RegionTag::RegionI);
        assert_eq!(region_dispatch(-0.1, 1.0), RegionTag::Cody);
    }

    #[test]
    fn tau_matches_machine_epsilon() {
        assert!((REGION_TAU - 2.0 * f64::EPSILON.powf(1.0 / 16.0)).abs() <= crate::ulp::ulp(REGION_TAU));
    }

    #[test]
    fn expanded_atm_identity() {
        let b = price_expanded(0.0, 0.2);
        let direct = 2.0 * norm_cdf(0.1) - 1.0;
        assert!((b - direct).abs() <= 2.0 * crate::ulp::ulp(direct), "{b} vs {direct}");
    }

    #[test]
    fn coeff_a_limits() {
        assert_eq!(coeff_a(0.0), 1.0);
        let a = coeff_a(-20.0);
        assert!(rel(a, 1.0 / 400.0) < 0.01);
        let at_switch = 0.009714035282680786;
        assert!(rel(coeff_a(A_TAIL_SWITCH), at_switch) < 1e-13);
        assert!(rel(coeff_a(A_TAIL_SWITCH * (1.0 - f64::EPSILON)), at_switch) < 1e-13);
    }

    #[test]
    fn omega_leading_terms() {
        // Ω = 2 - 2q(3+e) + 6q²(5+10e+e²) - ...
        let (q, e) = (1e-5, 0.2);
        let expect = 2.0 - 2.0 * q * (3.0 + e) + 6.0 * q * q * (5.0 + 10.0 * e + e * e)
            - 30.0 * q * q * q * (7.0 + 35.0 * e + 21.0 * e * e + e * e * e);
        assert!(rel(region_one_omega(q, e), expect) < 1e-11);
    }

    #[test]
    fn vega_examples() {
        assert!(rel(vega_sqrtfwd(0.0, 1e-9), ONE_OVER_SQRT_TWO_PI) < 1e-15);
        let v = vega_sqrtfwd(-9.9995e-5, 9.486832980505138);
        assert!(rel(v, 5.19e-6) < 0.01, "{v}");
        let (x, s) = (-0.3, 0.4);
        let d = 1e-6;
        let fd = (price_expanded(x, s + d) - price_expanded(x, s - d)) / (2.0 * d);
        assert!(rel(fd, vega_sqrtfwd(x, s)) < 1e-6);
    }

    #[test]
    fn erfcx_log_path_covers_both_halves() {
        for &(x, v) in &[(-0.1, 0.2), (-0.1, 3.0), (0.0, 1.0)] {
            assert!(rel(price_erfcx_log(x, v), price_cdf(x, v)) < 1e-12);
        }
    }

    #[test]
    fn path_names_round_trip() {
        for p in PricePath::ALL {
            assert_eq!(p.name().parse::<PricePath>().unwrap(), p);
        }
        assert!("bogus".parse::<PricePath>().is_err());
    }
}

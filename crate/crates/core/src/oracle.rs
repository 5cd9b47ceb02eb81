//! Multiprecision ground truth.
//!
//! Prices are evaluated from the textbook Black formula in MPFR arithmetic.
//! The subtraction `Φ(d₁) − e^{−x}Φ(d₂)` cancels in the deep tails, so every
//! evaluation measures the bits it lost and re-runs at a higher working
//! precision until the requested number of digits survives.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

pub use crate::ulp::ulp_error;

/// Working precision in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    pub digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: 50 }
    }
}

impl PrecisionContext {
    pub const FAST: Self = Self { digits: 50 };
    pub const DEEP: Self = Self { digits: 120 };
    pub const GRID: Self = Self { digits: 200 };

    pub fn new(digits: u32) -> Result<Self> {
        if digits < 50 {
            return Err(Error::InvalidInput(format!("oracle precision must be >= 50 digits, got {digits}")));
        }
        Ok(Self { digits })
    }

    /// Mantissa bits carrying `digits` decimal digits.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
    }

    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.bits(), v)
    }
}

fn cdf(z: &Float, prec: u32) -> Float {
    // Φ(z) = erfc(−z/√2)/2
    let sqrt2 = Float::with_val(prec, 2).sqrt();
    let arg = Float::with_val(prec, -z) / sqrt2;
    arg.erfc() / 2u32
}

fn binary_exponent(v: &Float) -> i64 {
    v.get_exp().map(i64::from).unwrap_or(i64::MIN / 4)
}

/// Black price `Φ(x/v + v/2) − e^{−x}Φ(x/v − v/2)` of the normalised OTM call.
pub fn hp_price(x: &Float, v: &Float, ctx: PrecisionContext) -> Float {
    let target = ctx.bits() + 8;
    let mut prec = target + 32;
    loop {
        let xv = Float::with_val(prec, x);
        let vv = Float::with_val(prec, v);
        let h = Float::with_val(prec, &xv / &vv);
        let half = Float::with_val(prec, &vv / 2u32);
        let d1 = Float::with_val(prec, &h + &half);
        let d2 = Float::with_val(prec, &h - &half);
        let first = cdf(&d1, prec);
        let scale = Float::with_val(prec, -&xv).exp();
        let second = cdf(&d2, prec) * scale;
        let c = Float::with_val(prec, &first - &second);
        if c.is_zero() || c.is_sign_negative() {
            // Total cancellation at this precision.
            prec = prec * 2 + 64;
            if prec > 1 << 20 {
                return Float::with_val(ctx.bits(), 0);
            }
            continue;
        }
        let lost = (binary_exponent(&first) - binary_exponent(&c)).max(0) as u32;
        if prec >= target + lost + 16 {
            return Float::with_val(ctx.bits(), c);
        }
        prec = target + lost + 48;
    }
}

/// `hp_price` at double inputs, each taken as an exact binary value.
pub fn hp_price_f64(x: f64, v: f64, ctx: PrecisionContext) -> Float {
    hp_price(&ctx.float(x), &ctx.float(v), ctx)
}

/// `1 − c` evaluated without forming `c` first:
/// `Φ(−d₁) + e^{−x}Φ(d₂)`.
pub fn hp_gap(x: &Float, v: &Float, ctx: PrecisionContext) -> Float {
    let prec = ctx.bits() + 64;
    let xv = Float::with_val(prec, x);
    let vv = Float::with_val(prec, v);
    let h = Float::with_val(prec, &xv / &vv);
    let half = Float::with_val(prec, &vv / 2u32);
    let d1 = Float::with_val(prec, &h + &half);
    let d2 = Float::with_val(prec, &h - &half);
    let first = cdf(&Float::with_val(prec, -&d1), prec);
    let second = cdf(&d2, prec) * Float::with_val(prec, -&xv).exp();
    Float::with_val(ctx.bits(), first + second)
}

/// Normalised vega `∂c/∂v = φ(x/v + v/2)`.
pub fn hp_vega(x: &Float, v: &Float, ctx: PrecisionContext) -> Float {
    let prec = ctx.bits() + 32;
    let d1 = Float::with_val(prec, x / v) + Float::with_val(prec, v / 2u32);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let e = Float::with_val(prec, d1.square_ref()) / -2i32;
    Float::with_val(ctx.bits(), e.exp() / two_pi.sqrt())
}

/// Residual of the smaller-tail log objective at working precision.
struct RootProblem<'a> {
    x: &'a Float,
    upper: bool,
    log_target: Float,
    gap_target: Float,
    prec: u32,
    inner: PrecisionContext,
}

impl<'a> RootProblem<'a> {
    fn new(x: &'a Float, c: &Float, ctx: PrecisionContext) -> Result<Self> {
        let prec = ctx.bits() + 32;
        let one = Float::with_val(prec, 1);
        if *c <= 0 || *c >= one || *x > 0 {
            return Err(Error::Domain("hp_implied_vol needs x <= 0 and c in (0,1)".into()));
        }
        Ok(Self {
            x,
            upper: *c > 0.5,
            log_target: Float::with_val(prec, c.ln_ref()),
            gap_target: Float::with_val(prec, Float::with_val(prec, &one - c).ln_ref()),
            prec,
            inner: PrecisionContext { digits: ctx.digits + 10 },
        })
    }

    fn residual(&self, v: &Float) -> Float {
        if self.upper {
            let g = hp_gap(self.x, v, self.inner);
            Float::with_val(self.prec, &self.gap_target - g.ln())
        } else {
            let p = hp_price(self.x, v, self.inner);
            if p.is_zero() {
                return Float::with_val(self.prec, f64::NEG_INFINITY);
            }
            Float::with_val(self.prec, p.ln() - &self.log_target)
        }
    }

    /// Newton in the log objective from `v`; `None` if it leaves `v > 0`
    /// or fails to reach `digits − 10` digits.
    fn newton(&self, mut v: Float, ctx: PrecisionContext, max_iter: usize) -> Option<Float> {
        let tol = Float::with_val(self.prec, 10).pow(-(ctx.digits as i32 - 10));
        for _ in 0..max_iter {
            let r = self.residual(&v);
            if !r.is_finite() {
                return None;
            }
            // d/dv of ln c is vega/c; of −ln(1−c) it is vega/(1−c).
            let vega = hp_vega(self.x, &v, self.inner);
            let denom =
                if self.upper { hp_gap(self.x, &v, self.inner) } else { hp_price(self.x, &v, self.inner) };
            let slope = Float::with_val(self.prec, &vega / &denom);
            let step = Float::with_val(self.prec, &r / &slope);
            v -= &step;
            if !(v > 0) || !v.is_finite() {
                return None;
            }
            let rel = Float::with_val(self.prec, step.abs_ref()) / &v;
            if rel < tol {
                return Some(Float::with_val(ctx.bits(), v));
            }
        }
        None
    }
}

/// Reference total volatility: bisection to ten digits, then Newton in
/// `ln c` to `digits − 10` digits.
pub fn hp_implied_vol(x: &Float, c: &Float, ctx: PrecisionContext) -> Result<Float> {
    let problem = RootProblem::new(x, c, ctx)?;
    let prec = problem.prec;
    let mut lo = Float::with_val(prec, 1e-3);
    let mut hi = Float::with_val(prec, 1.0);
    while problem.residual(&lo) > 0 {
        lo /= 1024u32;
        if lo.is_zero() || binary_exponent(&lo) < -60_000 {
            return Err(Error::NoConvergence("lower bracket".into()));
        }
    }
    while problem.residual(&hi) < 0 {
        hi *= 4u32;
        if binary_exponent(&hi) > 2_000 {
            return Err(Error::NoConvergence("upper bracket".into()));
        }
    }
    // Geometric bisection to ~10 significant digits.
    for _ in 0..4000 {
        let ratio = Float::with_val(prec, &hi / &lo);
        if ratio < 1.0 + 1e-10 {
            break;
        }
        let mid = Float::with_val(prec, &lo * &hi).sqrt();
        if problem.residual(&mid) < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = Float::with_val(prec, &lo + &hi) / 2u32;
    let start = v.to_f64();
    problem.newton(v, ctx, 60).ok_or_else(|| Error::NoConvergence(format!("Newton stalled from v={start}")))
}

/// Reference total volatility started from a close `guess`, for grids
/// whose prices were generated at a known volatility. Falls back to the
/// bracketing solve when Newton from the guess does not settle quickly.
pub fn hp_implied_vol_near(x: f64, c: f64, guess: f64, ctx: PrecisionContext) -> Result<Float> {
    let (xf, cf) = (ctx.float(x), ctx.float(c));
    let problem = RootProblem::new(&xf, &cf, ctx)?;
    if guess > 0.0 && guess.is_finite() {
        if let Some(v) = problem.newton(Float::with_val(problem.prec, guess), ctx, 8) {
            return Ok(v);
        }
    }
    hp_implied_vol(&xf, &cf, ctx)
}

pub fn hp_implied_vol_f64(x: f64, c: f64, ctx: PrecisionContext) -> Result<Float> {
    hp_implied_vol(&ctx.float(x), &ctx.float(c), ctx)
}

/// `erfcx(z) = e^{z²}erfc(z)` in multiprecision.
pub fn hp_erfcx(z: f64, ctx: PrecisionContext) -> Float {
    let prec = ctx.bits() + 32;
    let zf = Float::with_val(prec, z);
    let e = Float::with_val(prec, zf.square_ref()).exp();
    Float::with_val(ctx.bits(), zf.erfc() * e)
}

pub fn hp_erfc(z: f64, ctx: PrecisionContext) -> Float {
    Float::with_val(ctx.bits(), ctx.float(z).erfc())
}

pub fn hp_norm_cdf(z: f64, ctx: PrecisionContext) -> Float {
    let prec = ctx.bits() + 32;
    Float::with_val(ctx.bits(), cdf(&Float::with_val(prec, z), prec))
}

/// Root of `Φ(z) = p` by Newton from a bisection bracket.
pub fn hp_inv_norm_cdf(p: f64, ctx: PrecisionContext) -> Result<Float> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p={p} outside (0,1)")));
    }
    let prec = ctx.bits() + 32;
    let target = Float::with_val(prec, p);
    let (mut lo, mut hi) = (Float::with_val(prec, -40), Float::with_val(prec, 40));
    for _ in 0..60 {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if cdf(&mid, prec) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = Float::with_val(prec, &lo + &hi) / 2u32;
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let norm = two_pi.sqrt();
    for _ in 0..30 {
        let f = Float::with_val(prec, cdf(&z, prec) - &target);
        let dens = Float::with_val(prec, Float::with_val(prec, z.square_ref()) / -2i32).exp() / &norm;
        let step = Float::with_val(prec, &f / &dens);
        z -= &step;
        if step.is_zero() || binary_exponent(&step) < -(ctx.bits() as i64) - 8 + binary_exponent(&z).max(-64)
        {
            break;
        }
    }
    Ok(Float::with_val(ctx.bits(), z))
}

/// Error of a double in ulps of the rounded multiprecision reference.
pub fn ulps_vs(value: f64, reference: &Float) -> f64 {
    let r = reference.to_f64();
    if r.is_infinite() && value == r {
        return 0.0;
    }
    let diff = Float::with_val(reference.prec(), reference - value).abs().to_f64();
    diff / crate::ulp::ulp(r)
}

/// Relative error of a double against the multiprecision reference.
pub fn rel_err(value: f64, reference: &Float) -> f64 {
    let diff = Float::with_val(reference.prec(), reference - value);
    (diff / reference).abs().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atm_inversion_identity_price() {
        let ctx = PrecisionContext::FAST;
        let z = hp_inv_norm_cdf(0.75, ctx).unwrap();
        let v = Float::with_val(ctx.bits(), &z * 2u32);
        let c = hp_price(&ctx.float(0.0), &v, ctx);
        let err = (c - 0.5f64).abs().to_f64();
        assert!(err < 1e-40, "{err}");
    }

    #[test]
    fn deep_tail_microscopic_root_reprices_to_minus_100() {
        let ctx = PrecisionContext::DEEP;
        let c = hp_price_f64(-1e-14, 9.155604419747139e-16, ctx);
        let lnc = c.ln().to_f64();
        assert!((lnc + 100.0).abs() <= 1e-13 * 100.0, "{lnc}");
    }

    #[test]
    fn deep_tail_wrong_volatility_reprices_elsewhere() {
        let ctx = PrecisionContext::DEEP;
        let lnc = hp_price_f64(-1e-14, 1.25e-15, ctx).ln().to_f64();
        assert!((lnc - -71.43799710528910).abs() < 1e-12, "{lnc}");
    }

    #[test]
    fn reference_vol_of_saturated_regression_case() {
        let ctx = PrecisionContext::FAST;
        let v = hp_implied_vol_f64(-1e-6, 0.9999, ctx).unwrap();
        let s = v.to_string_radix(10, Some(20));
        assert!(s.starts_with("7.7811840154613839563"), "{s}");
    }

    #[test]
    fn constructed_atm_root() {
        let ctx = PrecisionContext::FAST;
        let x = ctx.float(0.0);
        let v = ctx.float(0.2);
        let c = hp_price(&x, &v, ctx);
        let back = hp_implied_vol(&x, &c, ctx).unwrap();
        let rel = Float::with_val(ctx.bits(), &back - &v).abs() / &v;
        assert!(rel < Float::with_val(ctx.bits(), 1e-40), "{}", rel.to_f64());
    }

    #[test]
    fn precision_50_and_120_agree() {
        for &(x, v) in &[(-0.3, 0.2), (-5.0, 0.4), (0.0, 1e-3), (-1e-8, 2e-9), (-20.0, 1.5)] {
            let a = hp_price_f64(x, v, PrecisionContext::FAST);
            let b = hp_price_f64(x, v, PrecisionContext::DEEP);
            let rel = Float::with_val(400, &a - &b).abs() / &b;
            assert!(rel < Float::with_val(400, 1e-40), "({x},{v}) rel={}", rel.to_f64());
        }
    }

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(20).is_err());
        assert_eq!(PrecisionContext::new(120).unwrap(), PrecisionContext::DEEP);
    }

    #[test]
    fn implied_vol_domain() {
        let ctx = PrecisionContext::FAST;
        assert!(hp_implied_vol_f64(-0.1, 1.0, ctx).is_err());
        assert!(hp_implied_vol_f64(0.1, 0.3, ctx).is_err());
    }
}

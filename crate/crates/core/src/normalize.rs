//! Reduction of call/put quotes to the normalized out-of-the-money call.
//!
//! With `F* = min(F, K)` and `K* = max(F, K)` every admissible quote maps to
//! `x = ln(F*/K*) <= 0` and `c = C_otm / F*` in `(0, 1)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionKind {
    Call,
    Put,
}

impl std::str::FromStr for OptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "call" | "c" => Ok(OptionKind::Call),
            "put" | "p" => Ok(OptionKind::Put),
            other => Err(Error::InvalidInput(format!("unknown option kind `{other}`"))),
        }
    }
}

/// An undiscounted option quote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawQuote {
    pub option_kind: OptionKind,
    pub forward: f64,
    pub strike: f64,
    pub expiry: f64,
    pub price: f64,
}

impl RawQuote {
    pub fn new(option_kind: OptionKind, forward: f64, strike: f64, expiry: f64, price: f64) -> Self {
        Self { option_kind, forward, strike, expiry, price }
    }

    /// Quote on a spot with continuously compounded rate, `F = S·e^{rT}`.
    pub fn from_spot(
        option_kind: OptionKind,
        spot: f64,
        rate: f64,
        strike: f64,
        expiry: f64,
        price: f64,
    ) -> Self {
        Self::new(option_kind, forward_from_spot(spot, rate, expiry), strike, expiry, price)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("forward", self.forward),
            ("strike", self.strike),
            ("expiry", self.expiry),
            ("price", self.price),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be finite, got {value}")));
            }
        }
        for (name, value) in &fields[..3] {
            if !(*value > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {value}")));
            }
        }
        if self.price < 0.0 {
            return Err(Error::InvalidInput(format!("price must be non-negative, got {}", self.price)));
        }
        Ok(())
    }
}

pub fn forward_from_spot(spot: f64, rate: f64, expiry: f64) -> f64 {
    spot * (rate * expiry).exp()
}

/// Solver input: log-moneyness, its exponential, normalized OTM price, expiry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedQuote {
    pub x: f64,
    pub ex: f64,
    pub c: f64,
    pub expiry: f64,
}

impl NormalizedQuote {
    /// Builds a quote directly from normalized coordinates, checking the
    /// same bounds as [`normalize`].
    pub fn from_parts(x: f64, c: f64, expiry: f64) -> Result<Self> {
        if !x.is_finite() || x > 0.0 {
            return Err(Error::InvalidInput(format!("log-moneyness must be finite and <= 0, got {x}")));
        }
        if !(expiry > 0.0) || !expiry.is_finite() {
            return Err(Error::InvalidInput(format!("expiry must be positive, got {expiry}")));
        }
        check_band(c)?;
        Ok(Self { x, ex: x.exp(), c, expiry })
    }
}

fn check_band(c: f64) -> Result<()> {
    if c.is_nan() {
        return Err(Error::InvalidInput("normalized price is NaN".into()));
    }
    if c <= 0.0 {
        return Err(Error::ArbitrageViolation(format!(
            "out-of-the-money value must be positive, normalized price is {c}"
        )));
    }
    if c >= 1.0 {
        return Err(Error::ArbitrageViolation(format!(
            "out-of-the-money value must stay below min(forward, strike), normalized price is {c}"
        )));
    }
    Ok(())
}

/// Applies the put-call parity table and returns `(x, eˣ, c, T)`.
pub fn normalize(q: &RawQuote) -> Result<NormalizedQuote> {
    q.validate()?;
    let (f, k) = (q.forward, q.strike);
    let f_star = f.min(k);
    let k_star = f.max(k);
    let otm = match q.option_kind {
        OptionKind::Call if f <= k => q.price,
        OptionKind::Call => q.price - (f - k),
        OptionKind::Put if f >= k => q.price,
        OptionKind::Put => q.price - (k - f),
    };
    if !(otm < f_star) {
        return Err(Error::ArbitrageViolation(format!(
            "out-of-the-money value {otm} is not below min(forward, strike) = {f_star}"
        )));
    }
    let c = otm / f_star;
    check_band(c)?;
    let ex = f_star / k_star;
    Ok(NormalizedQuote { x: ex.ln(), ex, c, expiry: q.expiry })
}

/// Undiscounted price of the quoted option from a normalized OTM price.
pub fn denormalize(kind: OptionKind, forward: f64, strike: f64, c: f64) -> f64 {
    let otm = c * forward.min(strike);
    match kind {
        OptionKind::Call if forward > strike => otm + (forward - strike),
        OptionKind::Put if forward < strike => otm + (strike - forward),
        _ => otm,
    }
}

/// Square-root-forward normalized price `β = c·e^{x/2}`.
pub fn beta_from_c(c: f64, x: f64) -> f64 {
    c * (0.5 * x).exp()
}

pub fn c_from_beta(beta: f64, x: f64) -> f64 {
    beta / (0.5 * x).exp()
}

/// Volatility from total volatility, `σ = v/√T`.
pub fn vol_from_total(v: f64, expiry: f64) -> f64 {
    v / expiry.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn call(f: f64, k: f64, t: f64, p: f64) -> RawQuote {
        RawQuote::new(OptionKind::Call, f, k, t, p)
    }

    #[test]
    fn near_atm_corner_coordinates() {
        let q = normalize(&call(100.0, 100.5, 0.01, 0.04196)).unwrap();
        assert_eq!(q.ex, 0.9950248756218906);
        assert_eq!(q.x, -0.004987541511039051);
    }

    #[test]
    fn saturated_corner_coordinates() {
        let q = normalize(&call(100.0, 100.01, 10.0, 99.0)).unwrap();
        assert_eq!(q.ex, 0.9999000099990001);
        assert_eq!(q.x, -9.999500033332494e-5);
    }

    #[test]
    fn in_the_money_call_removes_intrinsic() {
        let eps = 1.0 / 1024.0;
        let q = normalize(&call(110.0, 100.0, 1.0, 10.0 + eps)).unwrap();
        assert_eq!(q.c, eps / 100.0);
        assert_eq!(q.ex, 100.0 / 110.0);
    }

    #[test]
    fn put_legs_follow_parity() {
        let otm_put = normalize(&RawQuote::new(OptionKind::Put, 120.0, 100.0, 1.0, 3.0)).unwrap();
        assert_eq!(otm_put.c, 0.03);
        let itm_put = normalize(&RawQuote::new(OptionKind::Put, 100.0, 120.0, 1.0, 23.0)).unwrap();
        assert_eq!(itm_put.c, 0.03);
        assert_eq!(itm_put.ex, otm_put.ex);
    }

    #[test]
    fn rejects_out_of_band_prices() {
        assert!(matches!(normalize(&call(100.0, 100.0, 1.0, 0.0)), Err(Error::ArbitrageViolation(_))));
        assert!(matches!(normalize(&call(100.0, 100.0, 1.0, 100.0)), Err(Error::ArbitrageViolation(_))));
        assert!(matches!(normalize(&call(110.0, 100.0, 1.0, 9.0)), Err(Error::ArbitrageViolation(_))));
        assert!(matches!(normalize(&call(100.0, 100.0, 1.0, f64::NAN)), Err(Error::InvalidInput(_))));
        assert!(matches!(normalize(&call(-1.0, 100.0, 1.0, 1.0)), Err(Error::InvalidInput(_))));
        assert!(matches!(normalize(&call(100.0, 100.0, 0.0, 1.0)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn accepts_price_one_ulp_below_forward() {
        let p = 100.0f64.next_down();
        let q = normalize(&call(100.0, 100.0, 1.0, p)).unwrap();
        assert!(q.c < 1.0);
        assert!(matches!(normalize(&call(100.0, 100.0, 1.0, 100.0)), Err(Error::ArbitrageViolation(_))));
    }

    #[test]
    fn spot_constructor_uses_exponential_forward() {
        let q = RawQuote::from_spot(OptionKind::Call, 100.0, 0.03, 105.0, 2.0, 1.0);
        assert_eq!(q.forward, 100.0 * 0.06f64.exp());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_from_c(0.123, 0.0), 0.123);
        let b = beta_from_c(1e-16, -1e-8);
        assert!((b - 9.999999950000000e-17).abs() <= 1e-31);
    }

    #[test]
    fn vol_from_total_examples() {
        assert_eq!(vol_from_total(0.0, 3.0), 0.0);
        let s = vol_from_total(0.005000000000000001, 0.01);
        assert!((s - 0.05).abs() <= crate::ulp::ulp(0.05));
        let s = vol_from_total(9.486832980505138, 10.0);
        assert!((s - 3.0).abs() <= crate::ulp::ulp(3.0));
    }

    #[test]
    fn denormalize_inverts_parity() {
        assert_eq!(denormalize(OptionKind::Call, 110.0, 100.0, 0.01), 11.0);
        assert_eq!(denormalize(OptionKind::Put, 100.0, 120.0, 0.03), 23.0);
        assert_eq!(denormalize(OptionKind::Put, 120.0, 100.0, 0.03), 3.0);
    }

    proptest! {
        #[test]
        fn beta_round_trip(c in 1e-300f64..0.999, x in -700.0f64..0.0) {
            let back = c_from_beta(beta_from_c(c, x), x);
            prop_assert!((back - c).abs() <= crate::ulp::ulp(c));
        }

        #[test]
        fn normalize_is_scale_invariant(
            f in 1.0f64..1000.0,
            k in 1.0f64..1000.0,
            frac in 0.01f64..0.99,
            put in any::<bool>(),
            e in -40i32..40,
        ) {
            let kind = if put { OptionKind::Put } else { OptionKind::Call };
            let otm = frac * f.min(k);
            let price = denormalize(kind, f, k, otm / f.min(k));
            let scale = 2f64.powi(e);
            let a = normalize(&RawQuote::new(kind, f, k, 1.0, price));
            let b = normalize(&RawQuote::new(kind, f * scale, k * scale, 1.0, price * scale));
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
                    prop_assert_eq!(a.c.to_bits(), b.c.to_bits());
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}

//! Multiprecision reference prices and implied volatilities.
//!
//! Run with `cargo run --release --example oracle`.

use thiophene_iv::oracle::{hp_implied_vol_f64, hp_price_f64, ulps_vs, PrecisionContext};
use thiophene_iv::{implied_total_vol, Result};

fn main() -> Result<()> {
    for digits in [50, 80, 120] {
        let ctx = PrecisionContext::new(digits)?;
        let c = hp_price_f64(-0.1, 0.2, ctx);
        println!("{digits:>3} digits: c(-0.1, 0.2) = {c:.40}");
    }

    let ctx = PrecisionContext::DEEP;
    let cases = [(-1e-6, 0.9999), (-0.5, 1e-3), (-3.0, 1e-40), (-1e-14, (-100.0f64).exp())];
    println!("\n{:>8} {:>12}  {:>28} {:>24} {:>8}", "x", "c", "oracle v*", "solver v", "ulps");
    for (x, c) in cases {
        let root = hp_implied_vol_f64(x, c, ctx)?;
        let v = implied_total_vol(x, c, true)?;
        println!(
            "{x:>8.0e} {c:>12.4e}  {:>28} {v:>24.17e} {:>8.2}",
            format!("{root:.20e}"),
            ulps_vs(v, &root)
        );
    }
    Ok(())
}

//! Invert option quotes to Black implied volatility.
//!
//! Run with `cargo run --example invert_quote`.

use thiophene_iv::{implied_total_vol, implied_vol_from_quote, OptionKind, RawQuote, Result};

fn main() -> Result<()> {
    let quotes = [
        RawQuote::new(OptionKind::Call, 100.0, 110.0, 0.5, 2.5),
        RawQuote::new(OptionKind::Put, 100.0, 90.0, 0.25, 0.8),
        RawQuote::new(OptionKind::Call, 100.0, 95.0, 1.0, 9.0),
        RawQuote::from_spot(OptionKind::Put, 100.0, 0.03, 105.0, 2.0, 9.5),
    ];
    println!(
        "{:<5} {:>9} {:>7} {:>6} {:>8}  {:>20} {:>20}  path",
        "kind", "forward", "strike", "T", "price", "sigma", "sigma (polished)"
    );
    for q in &quotes {
        let plain = implied_vol_from_quote(q, false)?;
        let polished = implied_vol_from_quote(q, true)?;
        let path: Vec<&str> = polished.branch_path.iter().map(|b| b.name()).collect();
        println!(
            "{:<5} {:>9.4} {:>7.2} {:>6.2} {:>8.4}  {:>20.17} {:>20.17}  {}",
            format!("{:?}", q.option_kind).to_lowercase(),
            q.forward,
            q.strike,
            q.expiry,
            q.price,
            plain.implied_vol,
            polished.implied_vol,
            path.join(" > ")
        );
    }

    // Normalized coordinates: x = ln(F*/K*) <= 0 and c = OTM price / min(F, K).
    let v = implied_total_vol(-1e-6, 0.9999, false)?;
    println!("\nnormalized x = -1e-6, c = 0.9999: total volatility {v:.17}");

    // An in-the-money quote below intrinsic value is rejected, not clamped.
    let bad = RawQuote::new(OptionKind::Call, 100.0, 90.0, 1.0, 5.0);
    match implied_vol_from_quote(&bad, false) {
        Ok(r) => println!("unexpected: {}", r.implied_vol),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}

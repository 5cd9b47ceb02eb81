//! Branches and guards at the edges of the input domain.
//!
//! Run with `cargo run --example edge_cases`.

use thiophene_iv::dispatch::solve;
use thiophene_iv::normalize::NormalizedQuote;

fn main() {
    let cases = [
        ("at the money", 0.0, 0.2),
        ("tiny price near the money", -0.005, 1e-4),
        ("microscopic, near the money", -1e-8, 1e-16),
        ("microscopic deep tail", -1e-14, (-100.0f64).exp()),
        ("smallest positive price", -1.0, f64::from_bits(1)),
        ("price one ulp below one", -1e-3, 1.0f64.next_down()),
        ("far wing", -720.0, 1e-300),
    ];
    for (label, x, c) in cases {
        match solve(x, c, 1.0, true) {
            Ok(r) => {
                let path: Vec<&str> = r.branch_path.iter().map(|b| b.name()).collect();
                println!(
                    "{label:<30} x = {x:<9.2e} c = {c:<11.3e} v = {:<24.17e} {}",
                    r.total_vol,
                    path.join(" > ")
                );
            }
            Err(e) => println!("{label:<30} error: {e}"),
        }
    }

    println!();
    for (label, x, c) in [
        ("price of zero", -0.1, 0.0),
        ("price of one", -0.1, 1.0),
        ("positive moneyness", 0.1, 0.2),
        ("NaN price", -0.1, f64::NAN),
    ] {
        match NormalizedQuote::from_parts(x, c, 1.0) {
            Ok(_) => println!("{label:<20} accepted"),
            Err(e) => println!("{label:<20} rejected: {e}"),
        }
    }
}

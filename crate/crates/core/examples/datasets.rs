//! Inspect the persisted reference tables and regenerate one of them.
//!
//! Run with `cargo run --release --example datasets`.

use thiophene_iv::bench::datasets::raw_cases;
use thiophene_iv::bench::{generate, load, Dataset};
use thiophene_iv::oracle::PrecisionContext;
use thiophene_iv::Result;

fn main() -> Result<()> {
    println!("{:<8} {:>9} {:>9} {:>12} {:>12}", "dataset", "grid", "kept", "min c", "max v");
    for dataset in Dataset::ALL {
        let cases = load(dataset)?;
        let min_c = cases.iter().map(|c| c.c).fold(f64::INFINITY, f64::min);
        let max_v = cases.iter().map(|c| c.v_ref).fold(0.0, f64::max);
        println!(
            "{:<8} {:>9} {:>9} {min_c:>12.3e} {max_v:>12.4}",
            dataset.name(),
            raw_cases(dataset).len(),
            cases.len()
        );
    }

    let fresh = generate(Dataset::HighVol, PrecisionContext::FAST);
    let stored = load(Dataset::HighVol)?;
    let identical =
        fresh.len() == stored.len() && fresh.iter().zip(&stored).all(|(a, b)| a.c.to_bits() == b.c.to_bits());
    println!(
        "\nregenerated HighVol at 50 digits: {} cases, bit-identical to the table: {identical}",
        fresh.len()
    );
    let first = &stored[0];
    println!("first case: x = {:.6}, c = {:e}, v_ref = {}", first.x(), first.c, first.v_ref);
    Ok(())
}

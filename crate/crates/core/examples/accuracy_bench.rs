//! Per-dataset ulp errors of the solver against the reference volatilities.
//!
//! Run with `cargo run --release --example accuracy_bench`.

use thiophene_iv::bench::{load, max_ulp_target, run_accuracy, Dataset, Variant};
use thiophene_iv::Result;

fn main() -> Result<()> {
    println!(
        "{:<8} {:>7}  {:>10} {:>10} {:>8}  {:>10} {:>10} {:>8}",
        "dataset", "cases", "max ulp", "mean ulp", "target", "max ulp+", "mean ulp+", "target+"
    );
    for dataset in Dataset::ALL {
        let cases = load(dataset)?;
        let u = run_accuracy(&cases, Variant::Unpolished, false);
        let p = run_accuracy(&cases, Variant::Polished, false);
        println!(
            "{:<8} {:>7}  {:>10} {:>10.2} {:>8}  {:>10} {:>10.2} {:>8}",
            dataset.name(),
            cases.len(),
            u.max_ulp,
            u.mean_ulp,
            max_ulp_target(dataset, Variant::Unpolished),
            p.max_ulp,
            p.mean_ulp,
            max_ulp_target(dataset, Variant::Polished)
        );
    }
    Ok(())
}

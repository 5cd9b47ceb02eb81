//! Compare the three double-precision price evaluators against the
//! multiprecision oracle.
//!
//! Run with `cargo run --release --example pricing_paths`.

use thiophene_iv::bench::figures::{sweep, sweep_max_errors, sweep_scenarios};
use thiophene_iv::oracle::{hp_price_f64, rel_err, PrecisionContext};
use thiophene_iv::pricing::{log_gap_upper, log_price_lower, region_dispatch, PricePath};

fn main() {
    let points =
        [(-0.0780, 0.0299), (-0.0460, 0.05), (-0.0050, 0.0063), (-2.0, 0.4), (-6.0, 0.3), (0.0, 3.0)];
    println!("{:>8} {:>7} {:>10}  {:>24} {:>24} {:>24}", "x", "v", "region", "cdf", "erfcx/log", "expanded");
    for (x, v) in points {
        let oracle = hp_price_f64(x, v, PrecisionContext::FAST);
        let cols: Vec<String> = PricePath::ALL
            .iter()
            .map(|p| {
                let c = p.price(x, v);
                format!("{c:>12.5e} ({:>8.1e})", rel_err(c, &oracle))
            })
            .collect();
        println!("{x:>8} {v:>7} {:>10}  {}", format!("{:?}", region_dispatch(x, v)), cols.join(" "));
    }

    // The log objectives stay finite where the price itself underflows.
    let lower = log_price_lower(-5.0, 0.1).expect("positive difference");
    println!(
        "\nln c at (-5, 0.1) = {:.15} (c underflows to {})",
        lower.log_value,
        PricePath::Cdf.price(-5.0, 0.1)
    );
    let upper = log_gap_upper(-1e-6, 7.781184015461386);
    println!("ln(1 - c) at (-1e-6, 7.78) = {:.15}", upper.log_value);

    println!("\nmax relative error over 512 consecutive doubles of v:");
    for (label, ex, v) in sweep_scenarios() {
        let [cdf, erfcx_log, expanded] = sweep_max_errors(&sweep(label, ex, v));
        println!("  {label:<16} cdf {cdf:.2e}  erfcx/log {erfcx_log:.2e}  expanded {expanded:.2e}");
    }
}

//! Single-threaded latency: minimum over repeated sweeps of each dataset.
//!
//! Run with `cargo run --release --example latency_bench`.

use thiophene_iv::bench::{load, run_latency, Dataset, LatencyConfig, Variant};
use thiophene_iv::Result;

fn main() -> Result<()> {
    let cfg = LatencyConfig { sweeps: 200, runs: 3, warmup_sweeps: 10, max_cases: Some(1000) };
    println!("{:<8} {:>6} {:>16} {:>16}", "dataset", "cases", "unpolished ns", "polished ns");
    for dataset in Dataset::ALL {
        let cases = load(dataset)?;
        let u = run_latency(&cases, Variant::Unpolished, &cfg);
        let p = run_latency(&cases, Variant::Polished, &cfg);
        println!("{:<8} {:>6} {:>16.1} {:>16.1}", dataset.name(), u.cases, u.ns_per_call, p.ns_per_call);
    }
    Ok(())
}

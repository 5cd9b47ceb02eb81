//! Write the diagnostic CSV series to a directory.
//!
//! Run with `cargo run --release --example figure_data -- [out_dir]`.

use std::fs::File;
use std::path::PathBuf;
use thiophene_iv::bench::figures::{
    fig1_sweeps, fig2_steps, fig3_branchmap, fig4_convergence, fig5_roundtrip, write_csv,
};
use thiophene_iv::bench::{load, Dataset, Variant};
use thiophene_iv::Result;

fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("thiophene-figures"));
    std::fs::create_dir_all(&dir)?;

    let sweeps = fig1_sweeps();
    write_csv(&sweeps, File::create(dir.join("fig1_sweeps.csv"))?)?;
    let steps = fig2_steps(0.955, 0.05);
    write_csv(&steps, File::create(dir.join("fig2_steps.csv"))?)?;
    let branches = fig3_branchmap(40, 40);
    write_csv(&branches, File::create(dir.join("fig3_branchmap.csv"))?)?;
    let v_grid: Vec<f64> = (0..64).map(|i| 0.02 * 1.08f64.powi(i)).collect();
    let convergence = fig4_convergence(-0.5, &v_grid);
    write_csv(&convergence, File::create(dir.join("fig4_convergence.csv"))?)?;
    let roundtrip = fig5_roundtrip(&load(Dataset::Corners)?, Variant::Polished);
    write_csv(&roundtrip, File::create(dir.join("fig5_roundtrip.csv"))?)?;

    println!("wrote to {}:", dir.display());
    for (name, rows) in [
        ("fig1_sweeps.csv", sweeps.len()),
        ("fig2_steps.csv", steps.len()),
        ("fig3_branchmap.csv", branches.len()),
        ("fig4_convergence.csv", convergence.len()),
        ("fig5_roundtrip.csv", roundtrip.len()),
    ] {
        println!("  {name:<22} {rows:>6} rows");
    }
    let worst = convergence.iter().map(|r| r.err_step3).fold(0.0, f64::max);
    println!("largest relative error after three steps at x = -0.5: {worst:.2e}");
    Ok(())
}

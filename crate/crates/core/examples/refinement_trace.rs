//! Follow the seed and the three refinement steps toward the root.
//!
//! Run with `cargo run --release --example refinement_trace`.

use thiophene_iv::oracle::{hp_implied_vol_f64, hp_price_f64, rel_err, PrecisionContext};
use thiophene_iv::refine::refine3;
use thiophene_iv::seed::choi_l3;
use thiophene_iv::Result;

fn main() -> Result<()> {
    let ctx = PrecisionContext::FAST;
    for (x, v) in [(-0.5, 0.1), (-0.5, 1.0), (-2.0, 0.5), (-0.05, 6.0), (0.0, 0.01)] {
        let c = hp_price_f64(x, v, ctx).to_f64();
        let root = hp_implied_vol_f64(x, c, ctx)?;
        let seed = choi_l3(x, c);
        let trace = refine3(x, c, seed.v0)?;
        println!("x = {x}, c = {c:.6e}, {:?} branch, seed {}", trace.branch, seed.source.name());
        for (k, v_k) in trace.iterates.iter().enumerate() {
            println!("  v{k} = {v_k:.17e}  rel err {:.2e}", rel_err(*v_k, &root));
        }
    }
    Ok(())
}

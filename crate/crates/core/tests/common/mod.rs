#![allow(dead_code)]

use rayon::prelude::*;
use thiophene_iv::oracle::{hp_implied_vol_near, hp_price_f64, PrecisionContext};
use thiophene_iv::pricing::TailBranch;
use thiophene_iv::refine::refine3;
use thiophene_iv::seed::choi_l3;
use thiophene_iv::ulp::ulp;

pub const CTX: PrecisionContext = PrecisionContext::FAST;

/// Oracle-generated `(x, c, v*)` where `c` is the double-rounded price at
/// `(x, v)` and `v*` the oracle root of that rounded price.
pub fn oracle_point(x: f64, v: f64) -> Option<(f64, f64, f64)> {
    let c = hp_price_f64(x, v, CTX).to_f64();
    if !(c > 0.0 && c < 1.0) {
        return None;
    }
    let root = hp_implied_vol_near(x, c, v, CTX).ok()?.to_f64();
    Some((x, c, root))
}

/// `n × n` tensor grid, both ends inclusive.
pub fn grid(xs: (f64, f64), vs: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = xs.0 + (xs.1 - xs.0) * i as f64 / (n - 1) as f64;
            let v = vs.0 + (vs.1 - vs.0) * j as f64 / (n - 1) as f64;
            out.push((x, v));
        }
    }
    out
}

pub fn branch_grid(branch: TailBranch) -> Vec<(f64, f64, f64)> {
    let points = match branch {
        TailBranch::Lower => grid((-5.0, 0.0), (0.01, 4.0), 50),
        TailBranch::Upper => grid((-2.0, 0.0), (2.5, 9.0), 50),
    };
    points
        .par_iter()
        .filter_map(|&(x, v)| oracle_point(x, v))
        .filter(|&(_, c, _)| (c <= 0.5) == (branch == TailBranch::Lower))
        .collect()
}

/// Grid size and the points where `v0 ≤ v1 ≤ v2 ≤ v3 ≤ v*` fails by more
/// than 8 ulps of `v*`.
pub fn monotone_chain_violations(branch: TailBranch) -> (usize, Vec<String>) {
    let pts = branch_grid(branch);
    let bad = pts
        .par_iter()
        .filter_map(|&(x, c, root)| {
            let trace = refine3(x, c, choi_l3(x, c).v0).ok()?;
            assert_eq!(trace.branch, branch);
            let it = &trace.iterates;
            let slack = 8.0 * ulp(root);
            let ok = it.windows(2).all(|w| w[0] <= w[1] + slack) && it[3] <= root + slack;
            (!ok).then(|| format!("x={x} c={c:e} v*={root} iterates={it:?}"))
        })
        .collect();
    (pts.len(), bad)
}

/// `100 × 100` points for the curvature sign checks.
pub fn sign_grid() -> Vec<(f64, f64)> {
    grid((-8.0, 0.0), (0.01, 6.0), 100)
}

use thiophene_iv::bench::datasets::{broad_otm_grid, near_atm_grid};
use thiophene_iv::bench::figures::{fig2_steps, sweep, sweep_max_errors, sweep_scenarios};
use thiophene_iv::oracle::{hp_price_f64, rel_err, PrecisionContext};
use thiophene_iv::pricing::{
    log_gap_upper, log_price_lower, price_cdf, price_expanded, price_expanded_c, region_dispatch, PricePath,
    RegionTag,
};
use thiophene_iv::specfun::norm_cdf;
use thiophene_iv::ulp::ulp;

const CTX: PrecisionContext = PrecisionContext::FAST;

fn percentile(mut v: Vec<f64>, p: f64) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[((v.len() - 1) as f64 * p).round() as usize]
}

#[test]
fn expanded_path_matches_oracle_on_broad_grid() {
    let grid = broad_otm_grid();
    assert!(grid.len() > 300);
    let errs: Vec<f64> =
        grid.iter().map(|&(x, v)| rel_err(price_expanded_c(x, v), &hp_price_f64(x, v, CTX))).collect();
    let max = errs.iter().copied().fold(0.0, f64::max);
    assert!(max <= 1e-14, "max relative error {max:e}");
    assert!(percentile(errs, 0.99) <= 1e-14);
}

#[test]
fn expanded_path_matches_oracle_near_the_money() {
    for (x, v) in near_atm_grid() {
        let e = rel_err(price_expanded_c(x, v), &hp_price_f64(x, v, CTX));
        assert!(e <= 1e-14, "x={x} v={v}: {e:e}");
    }
}

#[test]
fn cody_region_is_accurate_to_two_ulps() {
    let mut checked = 0;
    for i in 0..80 {
        for j in 0..80 {
            let x = -8.0 * i as f64 / 79.0;
            let s = 0.02 + 6.0 * j as f64 / 79.0;
            if region_dispatch(x, s) != RegionTag::Cody {
                continue;
            }
            let beta = hp_price_f64(x, s, CTX).to_f64() * (0.5 * x).exp();
            if beta < 1e-300 {
                continue;
            }
            let e = ((price_expanded(x, s) - beta) / beta).abs() / f64::EPSILON;
            assert!(e <= 2.0, "x={x} s={s}: {e} eps");
            checked += 1;
        }
    }
    assert!(checked > 2000);
}

#[test]
fn log_price_agrees_with_cdf_price() {
    for i in 0..40 {
        for j in 0..40 {
            let x = -4.0 * i as f64 / 39.0;
            let v = 0.05 + 3.0 * j as f64 / 39.0;
            let c = price_cdf(x, v);
            if !(1e-10..=0.5).contains(&c) {
                continue;
            }
            let lc = log_price_lower(x, v).unwrap().log_value;
            assert!((lc.exp() - c).abs() <= 1e-11 * c, "x={x} v={v}");
        }
    }
}

#[test]
fn lower_and_upper_tails_are_complementary() {
    for i in 0..30 {
        for j in 0..30 {
            let x = -3.0 * i as f64 / 29.0;
            let v = 0.1 + 4.0 * j as f64 / 29.0;
            let lower = log_price_lower(x, v).unwrap().log_value.exp();
            let upper = log_gap_upper(x, v).log_value.exp();
            assert!((lower + upper - 1.0).abs() <= 1e-12, "x={x} v={v}");
        }
    }
}

#[test]
fn at_the_money_all_paths_give_closed_form() {
    for &v in &[0.01, 0.2, 1.0, 3.0] {
        let exact = 2.0 * norm_cdf(v / 2.0) - 1.0;
        for p in PricePath::ALL {
            assert!((p.price(0.0, v) - exact).abs() <= 1e-12, "{} at v={v}", p.name());
        }
    }
}

#[test]
fn deep_tail_underflow_regime() {
    assert_eq!(PricePath::Cdf.price(-5.0, 0.1), 0.0);
    let lc = log_price_lower(-5.0, 0.1).unwrap().log_value;
    assert!(lc.is_finite() && lc < -708.0);
}

fn boundary_pair(s: f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let tag_a = region_dispatch(a, s);
    while b.next_down() > a {
        let mid = 0.5 * (a + b);
        let mid = if mid <= a {
            a.next_up()
        } else if mid >= b {
            b.next_down()
        } else {
            mid
        };
        if region_dispatch(mid, s) == tag_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a, b)
}

#[test]
fn expanded_price_is_continuous_across_region_boundaries() {
    let mut checked = 0;
    // The jump is measured against the oracle's own change across the pair.
    for k in 0..60 {
        let s = 0.02 + 4.0 * k as f64 / 59.0;
        let n = 3000;
        for i in 0..n {
            let x0 = -60.0 + 60.0 * i as f64 / n as f64;
            let x1 = -60.0 + 60.0 * (i + 1) as f64 / n as f64;
            if region_dispatch(x0, s) == region_dispatch(x1, s) {
                continue;
            }
            let (a, b) = boundary_pair(s, x0, x1);
            let (pa, pb) = (price_expanded(a, s), price_expanded(b, s));
            if pa < f64::MIN_POSITIVE {
                continue;
            }
            let beta = |x: f64| hp_price_f64(x, s, CTX).to_f64() * (0.5 * x).exp();
            let jump = ((pb - pa) - (beta(b) - beta(a))).abs() / ulp(pa);
            assert!(jump <= 16.0, "s={s} x={a:e} {:?}: {jump} ulps", region_dispatch(a, s));
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} boundary pairs");
}

#[test]
fn sweeps_order_the_paths_by_accuracy() {
    for (label, ex, v) in sweep_scenarios() {
        let rows = sweep(label, ex, v);
        assert_eq!(rows.len(), 512);
        let [cdf, erfcx, expanded] = sweep_max_errors(&rows);
        assert!(cdf >= erfcx && erfcx >= expanded, "{label}: {cdf:e} {erfcx:e} {expanded:e}");
        assert!(expanded <= 1e-14, "{label}: expanded {expanded:e}");
    }
}

#[test]
fn one_ulp_steps_show_downward_moves_on_every_path() {
    let rows = fig2_steps(0.955, 0.05);
    assert!(rows.iter().any(|r| r.step_cdf < 0.0));
    assert!(rows.iter().any(|r| r.step_erfcxlog < 0.0));
    assert!(rows.iter().any(|r| r.step_expanded < 0.0));
}

use thiophene_iv::bench::accuracy::solve_case;
use thiophene_iv::bench::figures::fig5_roundtrip;
use thiophene_iv::bench::{load, max_ulp_target, run_accuracy, Dataset, Variant};
use thiophene_iv::oracle::{hp_implied_vol_f64, ulps_vs, PrecisionContext};
use thiophene_iv::polish::{newton_polish_unchecked, C_J};
use thiophene_iv::solve;
use thiophene_iv::ulp::ulp_error;

#[test]
fn every_dataset_meets_its_ulp_targets() {
    for dataset in Dataset::ALL {
        let cases = load(dataset).unwrap();
        for variant in Variant::ALL {
            let stats = run_accuracy(&cases, variant, false);
            let target = max_ulp_target(dataset, variant);
            assert_eq!(stats.failures, 0, "{dataset} {}", variant.name());
            assert!(stats.max_ulp <= target, "{dataset} {}: {} > {target}", variant.name(), stats.max_ulp);
        }
    }
}

#[test]
fn corners_absolute_error_is_tiny() {
    let stats = run_accuracy(&load(Dataset::Corners).unwrap(), Variant::Polished, false);
    assert!(stats.max_abs_vol <= 6e-15, "{:e}", stats.max_abs_vol);
}

#[test]
fn accuracy_runs_are_deterministic() {
    let cases = load(Dataset::Stress).unwrap();
    for variant in Variant::ALL {
        let a = run_accuracy(&cases, variant, true);
        let b = run_accuracy(&cases, variant, true);
        assert_eq!(a, b);
    }
}

#[test]
fn polish_only_nudges_the_last_bits() {
    for dataset in Dataset::ALL {
        for case in load(dataset).unwrap() {
            let u = solve_case(&case, Variant::Unpolished).unwrap();
            let p = solve_case(&case, Variant::Polished).unwrap();
            assert!(ulp_error(p, u) <= 1e3, "{dataset} #{}: {u} -> {p}", case.case_id);
        }
    }
}

#[test]
fn polish_helps_where_the_expanded_evaluator_is_exact() {
    for dataset in Dataset::ALL {
        let subset: Vec<_> = load(dataset).unwrap().into_iter().filter(|c| c.c <= C_J).collect();
        if subset.is_empty() {
            continue;
        }
        let u = run_accuracy(&subset, Variant::Unpolished, false);
        let p = run_accuracy(&subset, Variant::Polished, false);
        assert!(p.max_ulp <= u.max_ulp, "{dataset}: polished {} > unpolished {}", p.max_ulp, u.max_ulp);
    }
}

#[test]
fn round_trip_residual_respects_the_conditioning_bound() {
    for dataset in [Dataset::Corners, Dataset::Stress, Dataset::HighVol, Dataset::Cly20] {
        let cases = load(dataset).unwrap();
        let rows = fig5_roundtrip(&cases, Variant::Polished);
        assert_eq!(rows.len(), cases.len());
        let bad: Vec<_> = rows.iter().filter(|r| !r.within_bound()).collect();
        assert!(bad.is_empty(), "{dataset}: {} violations, first {:?}", bad.len(), bad[0]);
    }
}

#[test]
fn forcing_polish_above_one_half_loses_accuracy() {
    let (x, c) = (-1e-6, 0.9999);
    let s = solve(x, c, 1.0, true).unwrap().total_vol;
    let reference = hp_implied_vol_f64(x, c, PrecisionContext::DEEP).unwrap();
    assert!(ulps_vs(s, &reference) <= 2.0);
    let (forced, report) = newton_polish_unchecked(x, s, c);
    assert!(report.applied);
    let miss = ulps_vs(forced, &reference);
    assert!((590.0..=630.0).contains(&miss), "{forced} is {miss} ulps away");
    assert!(ulp_error(forced, 7.781184015461925) <= 2.0, "{forced}");
}

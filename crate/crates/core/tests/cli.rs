use std::process::{Command, Output};

fn thiophene(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thiophene")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn invert_reports_volatility_and_branch_path() {
    let out = thiophene(&[
        "invert",
        "call",
        "--forward",
        "100",
        "--strike",
        "110",
        "--expiry",
        "0.5",
        "--price",
        "2.5",
        "--json",
    ]);
    let doc = json(&out);
    let sigma = doc["sigma"].as_f64().unwrap();
    assert!(sigma > 0.1 && sigma < 0.3);
    assert_eq!(doc["branch_path"][0], "l3_seed");
    assert_eq!(doc["polish_applied"], false);
}

#[test]
fn hex_and_decimal_flags_agree() {
    let dec = json(&thiophene(&["price", "--x", "-0.5", "--v", "0.25", "--path", "expanded", "--json"]));
    let hex = json(&thiophene(&["price", "--x", "-0x1p-1", "--v", "0x1p-2", "--path", "expanded", "--json"]));
    assert_eq!(dec, hex);
    assert!(dec["prices"]["expanded"]["c_hex"].as_str().unwrap().starts_with("0x1."));
}

#[test]
fn polished_quote_marks_the_polish_step() {
    let doc = json(&thiophene(&[
        "invert", "put", "--spot", "100", "--rate", "0.01", "--strike", "90", "--expiry", "1", "--price",
        "1.7", "--polish", "--json",
    ]));
    assert_eq!(doc["polish_applied"], true);
    assert_eq!(doc["branch_path"].as_array().unwrap().last().unwrap(), "polished");
}

#[test]
fn arbitrage_violations_exit_with_code_two() {
    let out =
        thiophene(&["invert", "call", "--forward", "100", "--strike", "90", "--expiry", "1", "--price", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn malformed_numbers_exit_with_code_two() {
    let out = thiophene(&["price", "--x", "minus one", "--v", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = thiophene(&["price", "--x", "0.1", "--v", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_with_code_two() {
    assert_eq!(thiophene(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(thiophene(&["--help"]).status.code(), Some(0));
    assert_eq!(thiophene(&["oracle", "--x", "-0.1", "--v", "0.2", "--digits", "40"]).status.code(), Some(2));
}

#[test]
fn oracle_prices_and_inverts() {
    let priced = json(&thiophene(&["oracle", "--x", "-1e-6", "--v", "7.7811840154613839563", "--json"]));
    assert!(priced.is_object());
    let inverted = json(&thiophene(&["oracle", "--x", "-1e-6", "--c", "0.9999", "--json"]));
    assert!(inverted.to_string().contains("7.78118401546138395"));
}

#[test]
fn figdata_writes_csv_with_header() {
    let out = thiophene(&["figdata", "fig2_steps"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("step_cdf"));
    assert!(lines.count() > 10);
    assert_eq!(thiophene(&["figdata", "fig9"]).status.code(), Some(2));
}

#[test]
fn datasets_dry_run_reports_counts() {
    let doc = json(&thiophene(&["datasets", "--dataset", "HighVol", "--dry-run", "--json"]));
    assert!(doc.to_string().contains("149"));
}

#[test]
fn bench_accuracy_emits_json_summary() {
    let doc = json(&thiophene(&["bench", "--dataset", "HighVol", "--accuracy", "--json"]));
    assert!(doc.to_string().contains("max_ulp"));
}

//! Command-line front end: inversion, pricing, benchmark runs, dataset
//! regeneration, figure data and oracle queries.

use crate::bench::figures::{self, Figure};
use crate::bench::{
    self, accuracy::max_ulp_target, reference, Dataset, DatasetSummary, LatencyConfig, Variant,
};
use crate::dispatch::{solve_with, SolverConfig};
use crate::error::{Error, Result};
use crate::normalize::{normalize, OptionKind, RawQuote};
use crate::oracle::{hp_implied_vol_f64, hp_price_f64, PrecisionContext};
use crate::polish::PolishCutoff;
use crate::pricing::{log_price_lower, PricePath};
use crate::ulp::{parse_f64, to_hex};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for invalid input, arbitrage violations and missing tables.
pub const EXIT_INPUT: i32 = 2;

fn num(s: &str) -> std::result::Result<f64, String> {
    parse_f64(s).ok_or_else(|| format!("`{s}` is not a decimal or hexadecimal float"))
}

#[derive(Debug, Parser)]
#[command(name = "thiophene", version, about = "Black implied-volatility inversion and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invert an option quote to implied volatility.
    Invert(InvertArgs),
    /// Price a normalized call along one or all double-precision paths.
    Price(PriceArgs),
    /// Accuracy and latency runs over persisted reference tables.
    Bench(BenchArgs),
    /// Regenerate reference tables with the multiprecision oracle.
    Datasets(DatasetsArgs),
    /// Emit CSV data for a diagnostic series.
    Figdata(FigdataArgs),
    /// Multiprecision price or implied volatility.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Call,
    Put,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    pub kind: KindArg,
    #[arg(long, value_parser = num, allow_hyphen_values = true, conflicts_with = "spot")]
    pub forward: Option<f64>,
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub spot: Option<f64>,
    #[arg(long, value_parser = num, allow_hyphen_values = true, default_value = "0")]
    pub rate: f64,
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub strike: f64,
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub expiry: f64,
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub price: f64,
    #[arg(long)]
    pub polish: bool,
    #[arg(long, default_value = "half")]
    pub polish_cutoff: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PathArg {
    Cdf,
    Erfcxlog,
    Expanded,
    All,
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    /// Log-moneyness `ln(F*/K*)`, at most zero.
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub x: f64,
    /// Total volatility `σ√T`.
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub v: f64,
    #[arg(long, value_enum, default_value = "all")]
    pub path: PathArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Unpolished,
    Polished,
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dataset name, or `all`.
    #[arg(long, default_value = "all")]
    pub dataset: String,
    #[arg(long, value_enum, default_value = "both")]
    pub variant: VariantArg,
    #[arg(long)]
    pub accuracy: bool,
    #[arg(long)]
    pub latency: bool,
    #[arg(long, default_value_t = 500)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 3)]
    pub runs: usize,
    #[arg(long, default_value_t = 10)]
    pub warmup: usize,
    /// Cap on cases per latency sweep.
    #[arg(long)]
    pub max_cases: Option<usize>,
    /// Directory of reference tables.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Write the JSON summary here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write per-case errors as CSV here.
    #[arg(long)]
    pub cases_out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DatasetsArgs {
    #[arg(long, default_value = "all")]
    pub dataset: String,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub digits: u32,
    /// Only report counts; do not write tables.
    #[arg(long)]
    pub dry_run: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FigdataArgs {
    /// fig1_sweeps, fig2_steps, fig3_branchmap, fig4_convergence or fig5_roundtrip.
    pub which: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `F*/K*` for fig2_steps.
    #[arg(long, value_parser = num, default_value = "0.955")]
    pub ex: f64,
    /// Starting total volatility for fig2_steps.
    #[arg(long, value_parser = num, default_value = "0.05")]
    pub v: f64,
    /// Fixed log-moneyness for fig4_convergence.
    #[arg(long, value_parser = num, allow_hyphen_values = true, default_value = "-0.5")]
    pub x: f64,
    /// Dataset for fig5_roundtrip.
    #[arg(long, default_value = "Corners")]
    pub dataset: String,
    #[arg(long, value_enum, default_value = "polished")]
    pub variant: VariantArg,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub x: f64,
    /// Total volatility to price.
    #[arg(long, value_parser = num, allow_hyphen_values = true, conflicts_with = "c", required_unless_present = "c")]
    pub v: Option<f64>,
    /// Normalized price to invert.
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub digits: u32,
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Invert(a) => cmd_invert(a, out),
        Command::Price(a) => cmd_price(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Datasets(a) => cmd_datasets(a, out),
        Command::Figdata(a) => cmd_figdata(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    }
}

fn cmd_invert(a: &InvertArgs, out: &mut dyn Write) -> Result<()> {
    let kind = match a.kind {
        KindArg::Call => OptionKind::Call,
        KindArg::Put => OptionKind::Put,
    };
    let quote = match (a.forward, a.spot) {
        (Some(f), None) => RawQuote::new(kind, f, a.strike, a.expiry, a.price),
        (None, Some(s)) => RawQuote::from_spot(kind, s, a.rate, a.strike, a.expiry, a.price),
        _ => return Err(Error::InvalidInput("exactly one of --forward or --spot is required".into())),
    };
    let n = normalize(&quote)?;
    let cfg = SolverConfig { polish: a.polish, polish_cutoff: a.polish_cutoff.parse::<PolishCutoff>()? };
    let r = solve_with(n.x, n.c, n.expiry, &cfg)?;
    let path: Vec<&str> = r.branch_path.iter().map(|b| b.name()).collect();
    if a.json {
        let doc = json!({
            "sigma": r.implied_vol,
            "total_vol": r.total_vol,
            "sigma_hex": to_hex(r.implied_vol),
            "total_vol_hex": to_hex(r.total_vol),
            "x": n.x,
            "c": n.c,
            "expiry": n.expiry,
            "branch_path": path,
            "trace": r.trace,
            "polish_applied": r.polish.map(|p| p.applied).unwrap_or(false),
        });
        writeln!(out, "{doc}")?;
    } else {
        writeln!(out, "sigma        {:.17e}  ({})", r.implied_vol, to_hex(r.implied_vol))?;
        writeln!(out, "total_vol    {:.17e}  ({})", r.total_vol, to_hex(r.total_vol))?;
        writeln!(out, "x            {:.17e}", n.x)?;
        writeln!(out, "c            {:.17e}", n.c)?;
        writeln!(out, "branch_path  {}", path.join(" > "))?;
        for (i, v) in r.trace.iter().enumerate() {
            writeln!(out, "trace[{i}]     {v:.17e}")?;
        }
    }
    Ok(())
}

fn cmd_price(a: &PriceArgs, out: &mut dyn Write) -> Result<()> {
    if !(a.x.is_finite() && a.x <= 0.0) {
        return Err(Error::InvalidInput(format!("--x must be finite and <= 0, got {}", a.x)));
    }
    if !(a.v.is_finite() && a.v > 0.0) {
        return Err(Error::InvalidInput(format!("--v must be finite and positive, got {}", a.v)));
    }
    let paths: Vec<PricePath> = match a.path {
        PathArg::Cdf => vec![PricePath::Cdf],
        PathArg::Erfcxlog => vec![PricePath::ErfcxLog],
        PathArg::Expanded => vec![PricePath::Expanded],
        PathArg::All => PricePath::ALL.to_vec(),
    };
    let rows: Vec<_> = paths
        .iter()
        .map(|p| {
            let c = p.price(a.x, a.v);
            let ln_c = match (p, log_price_lower(a.x, a.v)) {
                (PricePath::ErfcxLog, Ok(e)) if !(c > f64::MIN_POSITIVE) => e.log_value,
                _ => c.ln(),
            };
            (p.name(), c, ln_c)
        })
        .collect();
    if a.json {
        let prices: serde_json::Map<String, serde_json::Value> = rows
            .iter()
            .map(|(name, c, lc)| {
                let ln_c = if lc.is_finite() { json!(lc) } else { serde_json::Value::Null };
                (name.to_string(), json!({ "c": c, "c_hex": to_hex(*c), "ln_c": ln_c }))
            })
            .collect();
        writeln!(out, "{}", json!({ "x": a.x, "v": a.v, "prices": prices }))?;
    } else {
        for (name, c, lc) in rows {
            writeln!(out, "{name:<9} c = {c:.17e}  ln c = {lc:.17e}")?;
        }
    }
    Ok(())
}

fn datasets_arg(s: &str) -> Result<Vec<Dataset>> {
    if s.eq_ignore_ascii_case("all") {
        Ok(Dataset::ALL.to_vec())
    } else {
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

fn variants_arg(v: VariantArg) -> Vec<Variant> {
    match v {
        VariantArg::Unpolished => vec![Variant::Unpolished],
        VariantArg::Polished => vec![Variant::Polished],
        VariantArg::Both => Variant::ALL.to_vec(),
    }
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let datasets = datasets_arg(&a.dataset)?;
    let variants = variants_arg(a.variant);
    let (do_acc, do_lat) = if a.accuracy || a.latency { (a.accuracy, a.latency) } else { (true, false) };
    let dir = a.data_dir.clone().unwrap_or_else(reference::default_data_dir);
    let lat_cfg =
        LatencyConfig { sweeps: a.sweeps, runs: a.runs, warmup_sweeps: a.warmup, max_cases: a.max_cases };
    let mut summaries = Vec::new();
    let mut per_case = Vec::new();
    for &d in &datasets {
        let cases = bench::load_from(&dir, d)?;
        for &v in &variants {
            let acc = do_acc.then(|| bench::run_accuracy(&cases, v, a.cases_out.is_some()));
            let lat = do_lat.then(|| bench::run_latency(&cases, v, &lat_cfg));
            if !a.json {
                let mut line = format!("{:<8} {:<10} n={:<6}", d.name(), v.name(), cases.len());
                if let Some(s) = &acc {
                    line += &format!(
                        " max_ulp={:<5} (target {:>3}) max_abs={:.3e} failures={}",
                        s.max_ulp,
                        max_ulp_target(d, v),
                        s.max_abs_vol,
                        s.failures
                    );
                }
                if let Some(l) = &lat {
                    line += &format!(" ns_per_call={:.1} (cases {})", l.ns_per_call, l.cases);
                }
                writeln!(out, "{line}")?;
            }
            if let Some(rows) = acc.as_ref().and_then(|s| s.per_case.clone()) {
                per_case.extend(rows.into_iter().map(|r| (d, v, r)));
            }
            summaries.push(DatasetSummary {
                dataset: d,
                variant: v,
                count: cases.len(),
                max_ulp: acc.as_ref().map(|s| s.max_ulp),
                max_abs: acc.as_ref().map(|s| s.max_abs_vol),
                ns_per_call: lat.as_ref().map(|l| l.ns_per_call),
            });
        }
    }
    let doc = serde_json::to_string_pretty(&json!({ "datasets": summaries }))
        .map_err(|e| Error::Io(e.to_string()))?;
    if a.json {
        writeln!(out, "{doc}")?;
    }
    if let Some(path) = &a.out {
        std::fs::write(path, doc + "\n")?;
    }
    if let Some(path) = &a.cases_out {
        #[derive(serde::Serialize)]
        struct Row {
            dataset: Dataset,
            variant: Variant,
            case_id: usize,
            v_hat_hex: String,
            v_ref_hex: String,
            v_hat: f64,
            v_ref: f64,
            ulp: f64,
            abs_vol: f64,
        }
        let rows: Vec<Row> = per_case
            .into_iter()
            .map(|(dataset, variant, r)| Row {
                dataset,
                variant,
                case_id: r.case_id,
                v_hat_hex: to_hex(r.v_hat),
                v_ref_hex: to_hex(r.v_ref),
                v_hat: r.v_hat,
                v_ref: r.v_ref,
                ulp: r.ulp,
                abs_vol: r.abs_vol,
            })
            .collect();
        figures::write_csv(&rows, std::fs::File::create(path)?)?;
    }
    Ok(())
}

fn cmd_datasets(a: &DatasetsArgs, out: &mut dyn Write) -> Result<()> {
    let ctx = PrecisionContext::new(a.digits)?;
    let dir = a.out_dir.clone().unwrap_or_else(reference::default_data_dir);
    let mut report = Vec::new();
    for d in datasets_arg(&a.dataset)? {
        let cases = bench::generate(d, ctx);
        let path = reference::table_path(&dir, d);
        if !a.dry_run {
            reference::write_table(&path, &cases)?;
        }
        if !a.json {
            let dest = if a.dry_run { "not written".to_string() } else { path.display().to_string() };
            writeln!(
                out,
                "{:<8} {:>6} cases (expected {:>6})  {dest}",
                d.name(),
                cases.len(),
                d.expected_count()
            )?;
        }
        report.push(json!({
            "dataset": d,
            "count": cases.len(),
            "expected": d.expected_count(),
            "path": (!a.dry_run).then(|| path.display().to_string()),
        }));
    }
    if a.json {
        writeln!(out, "{}", json!({ "datasets": report }))?;
    }
    Ok(())
}

fn cmd_figdata(a: &FigdataArgs, out: &mut dyn Write) -> Result<()> {
    let which: Figure = a.which.parse()?;
    let mut sink: Box<dyn Write + '_> = match &a.out {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(out),
    };
    match which {
        Figure::Sweeps => figures::write_csv(&figures::fig1_sweeps(), &mut sink),
        Figure::Steps => figures::write_csv(&figures::fig2_steps(a.ex, a.v), &mut sink),
        Figure::BranchMap => figures::write_csv(&figures::fig3_branchmap(60, 60), &mut sink),
        Figure::Convergence => {
            if !(a.x.is_finite() && a.x <= 0.0) {
                return Err(Error::InvalidInput(format!("--x must be finite and <= 0, got {}", a.x)));
            }
            let grid: Vec<f64> = (0..64).map(|i| 0.02 * 1.08f64.powi(i)).collect();
            figures::write_csv(&figures::fig4_convergence(a.x, &grid), &mut sink)
        }
        Figure::RoundTrip => {
            let dir = a.data_dir.clone().unwrap_or_else(reference::default_data_dir);
            let mut rows = Vec::new();
            for d in datasets_arg(&a.dataset)? {
                let cases = bench::load_from(&dir, d)?;
                for v in variants_arg(a.variant) {
                    rows.extend(figures::fig5_roundtrip(&cases, v));
                }
            }
            figures::write_csv(&rows, &mut sink)
        }
    }
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let ctx = PrecisionContext::new(a.digits)?;
    if !(a.x.is_finite() && a.x <= 0.0) {
        return Err(Error::InvalidInput(format!("--x must be finite and <= 0, got {}", a.x)));
    }
    let digits = a.digits as usize;
    let (label, value) = match (a.v, a.c) {
        (Some(v), None) if v > 0.0 && v.is_finite() => ("c", hp_price_f64(a.x, v, ctx)),
        (None, Some(c)) if c > 0.0 && c < 1.0 => ("v", hp_implied_vol_f64(a.x, c, ctx)?),
        _ => return Err(Error::InvalidInput("need --v > 0 or --c in (0, 1)".into())),
    };
    let text = value.to_string_radix(10, Some(digits));
    let rounded = value.to_f64();
    if a.json {
        writeln!(
            out,
            "{}",
            json!({ label: text, "f64": rounded, "f64_hex": to_hex(rounded), "digits": a.digits })
        )?;
    } else {
        writeln!(out, "{label} = {text}")?;
        writeln!(out, "{label} (f64) = {rounded:.17e}  ({})", to_hex(rounded))?;
    }
    Ok(())
}

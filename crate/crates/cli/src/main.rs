//! `getzler`: batch front end for the symbol engine.
//!
//! Exit codes: 0 success, 1 selfcheck failure, 2 input error, 3 semantic
//! error (dimension mismatch, invalid model, non-integrable symbol, ...).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use getzler_core::borel::BorelSpec;
use getzler_core::getzler::getzler_product;
use getzler_core::heat::{heat_residual, solve_expansion};
use getzler_core::index::{mckean_singer_check_expansion, supertrace_heat};
use getzler_core::rational::{self, Q};
use getzler_core::selfcheck::{run_selfcheck, DEFAULT_SEED};
use getzler_core::taylor::taylor_product;
use getzler_core::{CurvatureModel, TaylorSymbol};
use num_traits::Signed;
use serde_json::{json, Value};

use getzler_cli::json::{self, Operand};
use getzler_cli::CliError;

#[derive(Parser)]
#[command(name = "getzler", version, about = "Exact Getzler symbol calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Twisted product of two symbols (or Taylor symbols).
    Product {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Heat expansion through order K with its residual check.
    Heat {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "K", allow_negative_numbers = true)]
        k: i64,
    },
    /// Per-order supertraces, Â comparison and τ-independence.
    Index {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "K", allow_negative_numbers = true, default_value_t = 0)]
        k: i64,
        /// Comma-separated positive rationals.
        #[arg(long, default_value = "1/2,1,2")]
        tau: String,
    },
    /// Evaluates a Borel-summed symbol at (ξ, t).
    Borel {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Also check Taylor recovery up to this order at ξ.
        #[arg(long)]
        check: Option<usize>,
    },
    /// Runs the invariant suite; the seed comes from GETZLER_SEED.
    Selfcheck,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<CurvatureModel, CliError> {
    let text = read(path)?;
    json::parse::<json::ModelJson>(&text, &path.display().to_string())?.build()
}

fn truncation(k: i64) -> Result<usize, CliError> {
    usize::try_from(k).map_err(|_| CliError::Input(format!("K must be ≥ 0, got {k}")))
}

fn parse_taus(list: &str) -> Result<Vec<Q>, CliError> {
    let taus = list
        .split(',')
        .map(|s| rational::parse(s).map_err(|_| CliError::Input(format!("invalid τ {s:?}"))))
        .collect::<Result<Vec<Q>, _>>()?;
    if taus.is_empty() || taus.iter().any(|t| !t.is_positive()) {
        return Err(CliError::Input(format!(
            "τ samples must be positive: {list}"
        )));
    }
    Ok(taus)
}

fn parse_floats(list: &str) -> Result<Vec<f64>, CliError> {
    list.split(',')
        .map(|s| match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(CliError::Input(format!("invalid coordinate {s:?}"))),
        })
        .collect()
}

struct Output {
    json: Value,
    text: String,
}

fn product(model: &Path, a: &Path, b: &Path) -> Result<Output, CliError> {
    let m = load_model(model)?;
    let a = json::parse_operand(&read(a)?, &a.display().to_string())?;
    let b = json::parse_operand(&read(b)?, &b.display().to_string())?;
    let lift = |x: Operand, k: usize| match x {
        Operand::Taylor(t) => t,
        Operand::Symbol(s) => TaylorSymbol::from_leading(s, 0, k),
    };
    Ok(match (a, b) {
        (Operand::Symbol(x), Operand::Symbol(y)) => {
            let p = getzler_product(&x, &y, &m)?;
            Output {
                json: json::symbol_to_json(&p),
                text: format!("{p}\n"),
            }
        }
        (x, y) => {
            let k = [&x, &y]
                .iter()
                .filter_map(|o| match o {
                    Operand::Taylor(t) => Some(t.truncation()),
                    Operand::Symbol(_) => None,
                })
                .min()
                .unwrap_or(0);
            let p = taylor_product(&lift(x, k), &lift(y, k), &m)?;
            let text = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| format!("∂ₜ^{k}: {c}\n"))
                .collect();
            Output {
                json: json::taylor_to_json(&p),
                text,
            }
        }
    })
}

fn heat(model: &Path, k: i64) -> Result<Output, CliError> {
    let k = truncation(k)?;
    let m = load_model(model)?;
    let h = solve_expansion(&m, k)?;
    let residual_zero = heat_residual(&h.expansion, &m)?.is_zero();
    let mut text = String::new();
    for (i, c) in h.expansion.coeffs().iter().enumerate() {
        text.push_str(&format!("F_{i} = {c}\n"));
    }
    for sf in &h.sources {
        let factor = sf
            .factor
            .as_ref()
            .map(rational::format)
            .unwrap_or_else(|| "none".into());
        text.push_str(&format!(
            "source_{} = {factor} · F_{}\n",
            sf.order, sf.previous_order
        ));
    }
    text.push_str(&format!(
        "residual zero: {residual_zero}\ninitial conditions: {}\n",
        h.initial_conditions_hold()
    ));
    Ok(Output {
        json: json::heat_to_json(&h)?,
        text,
    })
}

fn index(model: &Path, k: i64, taus: &str) -> Result<Output, CliError> {
    let k = truncation(k)?;
    let taus = parse_taus(taus)?;
    let m = load_model(model)?;
    let h = solve_expansion(&m, k)?;
    let report = supertrace_heat(&h)?;
    let ms = mckean_singer_check_expansion(&h, &taus)?;
    let mut text = String::new();
    for (i, (s, ind)) in report
        .per_order
        .iter()
        .zip(&report.tau_independent)
        .enumerate()
    {
        text.push_str(&format!("order {i}: {s} (τ-independent: {ind})\n"));
    }
    text.push_str(&format!(
        "Â top coefficient: {}\nratio: {}\nτ-consistent: {}\n",
        rational::format(&report.a_hat_top),
        report
            .match_ratio
            .as_ref()
            .map(rational::format)
            .unwrap_or_else(|| "undefined".into()),
        ms.consistent
    ));
    Ok(Output {
        json: json::index_to_json(&report, k, &ms),
        text,
    })
}

fn borel(spec: &Path, xi: &str, t: f64, check: Option<usize>) -> Result<Output, CliError> {
    if !t.is_finite() {
        return Err(CliError::Input(format!("invalid t {t}")));
    }
    let xi = parse_floats(xi)?;
    let b: BorelSpec =
        json::parse::<json::BorelJson>(&read(spec)?, &spec.display().to_string())?.build()?;
    let value = b.eval(&xi, t)?;
    let partial = b.partial_sum(&xi, t)?;
    let (active, predicted) = if t == 0.0 {
        (Value::Null, Value::Null)
    } else {
        (
            json!(b.active_terms(&xi, t)?),
            json!(b.predicted_active_terms(&xi, t)?),
        )
    };
    let saturated = t.abs() <= b.saturation_radius(&xi)?;
    let checks = match check {
        Some(max_k) => (0..=max_k.min(b.truncation()))
            .map(|k| {
                Ok(json::taylor_check_to_json(&b.taylor_check(
                    k,
                    std::slice::from_ref(&xi),
                    None,
                )?))
            })
            .collect::<Result<Vec<_>, CliError>>()?,
        None => Vec::new(),
    };
    let text = format!(
        "a(ξ, t) = {value}\npartial sum = {partial}\nactive terms: {active}\nsaturated: {saturated}\n"
    );
    Ok(Output {
        json: json!({
            "spec": json::borel_spec_to_json(&b),
            "xi": xi.iter().map(|x| json::format_float(*x)).collect::<Vec<_>>(),
            "t": json::format_float(t),
            "value": json::float_form_to_json(&value),
            "partialSum": json::float_form_to_json(&partial),
            "activeTerms": active,
            "predictedActiveTerms": predicted,
            "saturated": saturated,
            "taylorChecks": checks,
        }),
        text,
    })
}

fn selfcheck() -> Result<(Output, bool), CliError> {
    let seed = match std::env::var("GETZLER_SEED") {
        Ok(s) => s.trim().parse::<u64>().map_err(|_| {
            CliError::Input(format!(
                "GETZLER_SEED must be an unsigned integer, got {s:?}"
            ))
        })?,
        Err(_) => DEFAULT_SEED,
    };
    let report = run_selfcheck(seed)?;
    let mut text = format!("seed {seed}\n");
    for c in &report.checks {
        let tag = if c.passed { "ok" } else { "FAILED" };
        text.push_str(&format!("{tag:>6}  {} ({} cases)", c.name, c.cases));
        if !c.passed {
            text.push_str(&format!(": {}", c.detail));
        }
        text.push('\n');
    }
    let passed = report.all_passed();
    Ok((
        Output {
            json: json::selfcheck_to_json(&report),
            text,
        },
        passed,
    ))
}

fn emit(out: &Output, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let body = match format {
        Format::Json => json::to_pretty(&out.json),
        Format::Text => out.text.clone(),
    };
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    let result = match &cli.command {
        Command::Product { model, a, b } => product(model, a, b)?,
        Command::Heat { model, k } => heat(model, *k)?,
        Command::Index { model, k, tau } => index(model, *k, tau)?,
        Command::Borel { spec, xi, t, check } => borel(spec, xi, *t, *check)?,
        Command::Selfcheck => {
            let (o, passed) = selfcheck()?;
            emit(&o, cli.format, out)?;
            return if passed {
                Ok(())
            } else {
                Err(CliError::SelfcheckFailed)
            };
        }
    };
    emit(&result, cli.format, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("getzler: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

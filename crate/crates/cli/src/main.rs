//! `vwseries` command-line interface.

mod report;

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vwseries::checks::run_checks;
use vwseries::hilb::hilb_numbers;
use vwseries::k3::{vw_k3_series_closed, vw_k3_series_termwise};
use vwseries::qseries::{eta_pow_neg24, euler_product_power};
use vwseries::rational::{display_rational, format_rational, parse_rational};
use vwseries::surface::{chi_twisted, divisibility, hilbert_polynomial};
use vwseries::wallcross::{pairs_breakdown, variant_select, vw_from_pairs};
use vwseries::{Charge, Error, InvariantTable, QSeries, Rational, SurfaceData, Theory};

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "vwseries", version, about = "Exact Vafa-Witten invariants and pair wall-crossing")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Euler characteristics of Hilbert schemes of points.
    Hilb {
        /// Euler number of the surface.
        #[arg(long, allow_negative_numbers = true)]
        euler_number: i64,
        /// Largest number of points.
        #[arg(long)]
        max: usize,
    },
    /// chi(alpha(n)) by Riemann-Roch.
    Chi {
        #[command(flatten)]
        target: Target,
    },
    /// Vafa-Witten generating series of a K3 with trivial determinant.
    Vw {
        #[arg(long, default_value = "k3")]
        surface: String,
        #[arg(long)]
        rank: i64,
        /// Series order: coefficients of q^0 .. q^(N-1).
        #[arg(long)]
        max_c2: i64,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// Pair invariants from Vafa-Witten invariants.
    Pairs {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = TheoryArg::Behrend)]
        theory: TheoryArg,
        /// Invariants of the multiples (j/m) alpha, as `1=v1,2=v2,...`.
        #[arg(long)]
        table: InvariantTable,
    },
    /// Vafa-Witten invariants from pair invariants.
    Solve {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = TheoryArg::Behrend)]
        theory: TheoryArg,
        /// Pair invariants of the multiples (j/m) alpha, as `1=p1,2=p2,...`.
        #[arg(long)]
        pairs: InvariantTable,
    },
    /// Eta and Euler product expansions.
    Series {
        #[command(subcommand)]
        kind: SeriesKind,
    },
    /// Runs the identity checks.
    Check {
        /// Check id, or an id prefix.
        #[arg(long)]
        id: Option<String>,
    },
}

#[derive(Args)]
struct Target {
    /// Preset name or path to a surface JSON file.
    #[arg(long)]
    surface: String,
    /// Charge as `r,c1...,c2`.
    #[arg(long, allow_hyphen_values = true)]
    charge: Charge,
    /// Twist n.
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Subcommand)]
enum SeriesKind {
    /// eta(q^s)^-24.
    Eta {
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        scale: Rational,
        /// Exclusive q-exponent bound.
        #[arg(long, allow_negative_numbers = true)]
        order: i64,
    },
    /// prod_k (1 - q^k)^-e.
    Euler {
        #[arg(long, allow_negative_numbers = true)]
        power: i64,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Toda,
    Closed,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    Behrend,
    Virtual,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Self {
        match t {
            TheoryArg::Behrend => Theory::Behrend,
            TheoryArg::Virtual => Theory::Virtual,
        }
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn load_surface(arg: &str) -> Result<SurfaceData, Failure> {
    match SurfaceData::preset(arg) {
        Ok(s) => Ok(s),
        Err(Error::UnknownPreset(_)) if Path::new(arg).is_file() => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Failure::Usage(format!("cannot read surface file '{arg}': {e}")))?;
            SurfaceData::from_json_str(&text).map_err(|e| Failure::Usage(e.to_string()))
        }
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn series_rows(report: &mut Report, series: &QSeries) {
    for (e, c) in series.terms() {
        report.row([display_rational(&e), display_rational(c)]);
    }
    report.footer.push(format!(
        "known below q^{}",
        display_rational(&series.order_exponent())
    ));
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Hilb { euler_number, max } => {
            let values = hilb_numbers(euler_number, max + 1);
            let mut r = Report::new("hilb", &["n", "e(Hilb^n)"]);
            r.field("euler_number", json!(euler_number));
            r.field(
                "values",
                Value::Array(values.iter().map(|v| json!(v.to_string())).collect()),
            );
            for (n, v) in values.iter().enumerate() {
                r.row([n.to_string(), v.to_string()]);
            }
            Ok(r)
        }
        Command::Chi { target } => {
            let s = load_surface(&target.surface)?;
            let chi = chi_twisted(&target.charge, &s, target.n)?;
            let poly = hilbert_polynomial(&target.charge, &s)?;
            let mut r = Report::new("chi", &["charge", "n", "chi"]);
            r.field("charge", json!(target.charge.to_string()))
                .field("n", json!(target.n))
                .field("chi", json!(format_rational(&chi)))
                .field("hilbert_polynomial", json!(poly.to_string()));
            r.row([target.charge.to_string(), target.n.to_string(), display_rational(&chi)]);
            Ok(r)
        }
        Command::Vw {
            surface,
            rank,
            max_c2,
            method,
        } => {
            let s = load_surface(&surface)?;
            if !s.is_k3() {
                return Err(Error::NotK3(surface).into());
            }
            let (toda, closed) = match method {
                Method::Toda => (Some(vw_k3_series_termwise(rank, max_c2)?), None),
                Method::Closed => (None, Some(vw_k3_series_closed(rank, max_c2)?)),
                Method::Both => (
                    Some(vw_k3_series_termwise(rank, max_c2)?),
                    Some(vw_k3_series_closed(rank, max_c2)?),
                ),
            };
            let mut header = vec!["c2"];
            if toda.is_some() {
                header.push("toda");
            }
            if closed.is_some() {
                header.push("closed");
            }
            let mut r = Report::new("vw", &header);
            r.field("rank", json!(rank)).field("max_c2", json!(max_c2));
            let coeff = |s: &QSeries, c2| s.coeff_int(c2).expect("below order");
            for c2 in 0..max_c2.max(0) {
                let mut row = vec![c2.to_string()];
                row.extend(toda.iter().chain(&closed).map(|s| display_rational(&coeff(s, c2))));
                r.row(row);
            }
            for (name, s) in [("toda", &toda), ("closed", &closed)] {
                if let Some(s) = s {
                    let values: Vec<Value> = (0..max_c2.max(0))
                        .map(|c2| json!(format_rational(&coeff(s, c2))))
                        .collect();
                    r.field(name, Value::Array(values));
                }
            }
            if let (Some(a), Some(b)) = (&toda, &closed) {
                let diff: Vec<Value> = a
                    .diff(b)
                    .iter()
                    .map(|(e, x, y)| {
                        json!({
                            "c2": format_rational(e),
                            "toda": format_rational(x),
                            "closed": format_rational(y),
                        })
                    })
                    .collect();
                r.footer.push(format!("diff: {} entries", diff.len()));
                if !diff.is_empty() {
                    r.exit_code = 3;
                }
                r.field("diff", Value::Array(diff));
            }
            Ok(r)
        }
        Command::Pairs {
            target,
            theory,
            table,
        } => {
            let s = load_surface(&target.surface)?;
            let variant = variant_select(&s, theory.into());
            let eval = pairs_breakdown(&target.charge, &s, target.n, &table, variant)?;
            let mut r = Report::new("pairs", &["composition", "term"]);
            let body = serde_json::to_value(&eval).expect("evaluation serializes");
            if let Value::Object(fields) = body {
                r.json.extend(fields);
            }
            r.field("theory", json!(Theory::from(theory).to_string()))
                .field("table", serde_json::to_value(&table).expect("table serializes"));
            for t in &eval.terms {
                let parts: Vec<String> = t.parts.iter().map(u32::to_string).collect();
                r.row([parts.join("+"), display_rational(&t.value)]);
            }
            r.footer.push(format!(
                "{:?} with h0K = {}: P = {}",
                variant.kind,
                variant.h0k,
                display_rational(&eval.total)
            ));
            Ok(r)
        }
        Command::Solve {
            target,
            theory,
            pairs,
        } => {
            let s = load_surface(&target.surface)?;
            let variant = variant_select(&s, theory.into());
            let solved = vw_from_pairs(&target.charge, &s, target.n, &pairs, variant)?;
            let m = divisibility(&target.charge, &s)?;
            let mut r = Report::new("solve", &["j", "vw"]);
            r.field("charge", json!(target.charge.to_string()))
                .field("n", json!(target.n))
                .field("divisibility", json!(m))
                .field("theory", json!(Theory::from(theory).to_string()))
                .field("variant", serde_json::to_value(variant).expect("variant serializes"))
                .field("pairs", serde_json::to_value(&pairs).expect("table serializes"))
                .field("vw", serde_json::to_value(&solved).expect("table serializes"));
            for (j, v) in solved.iter() {
                r.row([j.to_string(), display_rational(v)]);
            }
            Ok(r)
        }
        Command::Series { kind } => {
            let (name, series) = match kind {
                SeriesKind::Eta { scale, order } => (
                    format!("eta(q^{})^-24", display_rational(&scale)),
                    eta_pow_neg24(&scale, order)?,
                ),
                SeriesKind::Euler { power, order } => (
                    format!("prod (1 - q^k)^-{power}"),
                    euler_product_power(power, order),
                ),
            };
            let mut r = Report::new("series", &["exponent", "coefficient"]);
            r.field("name", json!(name)).field("series", series.to_json());
            series_rows(&mut r, &series);
            Ok(r)
        }
        Command::Check { id } => {
            let results = run_checks(id.as_deref());
            if results.is_empty() {
                return Err(Failure::Usage(format!(
                    "no check matches '{}'",
                    id.unwrap_or_default()
                )));
            }
            let mut r = Report::new("check", &["id", "status", "description"]);
            let failed = results.iter().filter(|c| !c.passed()).count();
            for c in &results {
                r.row([
                    c.id.clone(),
                    if c.passed() { "pass" } else { "fail" }.to_string(),
                    c.description.clone(),
                ]);
                if !c.passed() {
                    r.footer
                        .extend(c.details.iter().map(|d| format!("{}: {d}", c.id)));
                }
                r.footer
                    .extend(c.notes.iter().map(|n| format!("{} note: {n}", c.id)));
            }
            r.footer
                .push(format!("{} of {} passed", results.len() - failed, results.len()));
            r.field("results", serde_json::to_value(&results).expect("results serialize"));
            if failed > 0 {
                r.exit_code = 3;
            }
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.exit_code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: vwseries <hilb|chi|vw|pairs|solve|series|check> [options]; see --help");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use digitsum_core::arith::{format_rational, parse_rational, Rational};
use digitsum_core::bernoulli::bernoulli_poly;
use digitsum_core::identities::{run_suite, CostLimit, IdentityReport, SuiteConfig, DEFAULT_MAX_COST};
use digitsum_core::pte::{
    cancel_common, generalized_partition, parse_grid, search_small_solutions, verify_power_sums, Classes,
    SearchOptions, SearchReport,
};
use digitsum_core::random::DEFAULT_SEED;
use digitsum_core::weights::{alpha_table, beta_table, WeightKind};
use digitsum_core::Error;

mod verify;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COST: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

#[derive(Parser)]
#[command(name = "digitsum", version, about = "Exact digit-sum identities, weight tables and PTE partitions")]
struct Cli {
    /// Cap on summand evaluations per brute-force loop, e.g. 1048576 or 2^20.
    /// Defaults to $DIGITSUM_MAX_COST, then 2^20.
    #[arg(long, global = true, value_parser = parse_cost)]
    max_cost: Option<u64>,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an identity by brute force against its closed form.
    Verify(VerifyArgs),
    /// Dump an alpha or beta weight table.
    Weights(WeightsArgs),
    /// Show a generalized PTE partition with its certificate and reduced form.
    PteShow(PteShowArgs),
    /// Search an (x, y) grid for small PTE solutions.
    PteSearch(PteSearchArgs),
    /// Print the coefficients of a Bernoulli polynomial.
    Bernoulli(BernoulliArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity to check (see --list).
    #[arg(long, conflicts_with_all = ["all", "list"], required_unless_present_any = ["all", "list"])]
    identity: Option<String>,
    /// Run the whole suite.
    #[arg(long)]
    all: bool,
    /// List identity names.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    base: Option<u32>,
    /// One order, or a comma list for multi-index identities.
    #[arg(long, value_delimiter = ',')]
    order: Vec<u32>,
    /// Extra inputs as key=value, e.g. x=1/2 y=3 f=0,0,1.
    #[arg(long = "params", value_parser = parse_key_value, num_args = 1..)]
    params: Vec<(String, String)>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time per report (output is then not reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long)]
    order: u32,
    #[arg(long, value_parser = parse_kind, default_value = "beta")]
    kind: WeightKind,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct PteShowArgs {
    #[arg(long)]
    base: u32,
    #[arg(long)]
    order: u32,
    #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    x: Rational,
    #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    y: Rational,
    /// Highest power checked; defaults to N-1.
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct PteSearchArgs {
    #[arg(long)]
    base: u32,
    #[arg(long)]
    order: u32,
    /// `lo..hi/step` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    x_grid: String,
    #[arg(long, allow_hyphen_values = true)]
    y_grid: String,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Drop solutions smaller than this after cancellation.
    #[arg(long, default_value_t = 1)]
    min_size: u64,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct BernoulliArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_cost(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let v = if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().map_err(|_| format!("bad base in `{s}`"))?;
        let exp: u32 = exp.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        base.checked_pow(exp).ok_or_else(|| format!("`{s}` overflows 64 bits"))?
    } else {
        s.parse().map_err(|_| format!("`{s}` is not a count"))?
    };
    if v == 0 {
        return Err("max-cost must be at least 1".into());
    }
    Ok(v)
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_owned(), v.trim().to_owned()))
        .ok_or_else(|| format!("expected key=value, got `{s}`"))
}

fn parse_kind(s: &str) -> Result<WeightKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn resolve_cost(flag: Option<u64>) -> Result<CostLimit, CliError> {
    if let Some(v) = flag {
        return Ok(CostLimit(v));
    }
    match std::env::var("DIGITSUM_MAX_COST") {
        Ok(s) => parse_cost(&s).map(CostLimit).map_err(|e| CliError::Usage(format!("DIGITSUM_MAX_COST: {e}"))),
        Err(_) => Ok(CostLimit(DEFAULT_MAX_COST)),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn report_line(r: &IdentityReport) -> String {
    let params = serde_json::to_string(&r.params).unwrap_or_default();
    let verdict = if r.equal { "equal" } else { "MISMATCH" };
    let mut line = format!("{:<16} {verdict:<8} {params}", r.identity);
    for note in &r.notes {
        line.push_str(&format!(" [{}: {}]", note.name, if note.matches { "matches" } else { "differs" }));
    }
    line
}

fn run_verify(args: &VerifyArgs, limit: CostLimit, out: &mut dyn Write) -> Result<u8, CliError> {
    if args.list {
        for id in verify::IDENTITIES {
            writeln!(out, "{id}")?;
        }
        return Ok(0);
    }
    let mut reports = if args.all {
        run_suite(&SuiteConfig { seed: args.seed, max_cost: limit })?
    } else {
        let identity = args.identity.as_deref().expect("clap enforces --identity or --all");
        let params: BTreeMap<String, String> = args.params.iter().cloned().collect();
        let req = verify::Request { identity, base: args.base, orders: &args.order, params, seed: args.seed, limit };
        vec![verify::run(&req)?]
    };
    if !args.timings {
        reports = reports.into_iter().map(IdentityReport::without_timing).collect();
    }
    match args.format {
        Format::Json if args.all => write_json(out, &reports)?,
        Format::Json => write_json(out, &reports[0])?,
        Format::Text => {
            for r in &reports {
                writeln!(out, "{}", report_line(r))?;
            }
        }
        Format::Csv => return Err(CliError::Usage("verify supports --format json or text".into())),
    }
    Ok(if reports.iter().all(|r| r.equal) { 0 } else { EXIT_MISMATCH })
}

fn run_weights(args: &WeightsArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let table = match args.kind {
        WeightKind::Alpha if args.base != 2 => {
            return Err(CliError::Usage("alpha weights exist only for base 2".into()));
        }
        WeightKind::Alpha => alpha_table(args.order)?,
        WeightKind::Beta => beta_table(args.base, args.order)?,
    };
    match args.format {
        Format::Json => write_json(out, &table.to_wire())?,
        Format::Csv | Format::Text => {
            let degree = table.field().degree();
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["k".to_owned()];
            header.extend((0..degree).map(|i| format!("xi^{i}")));
            w.write_record(&header)?;
            for (k, v) in table.values().iter().enumerate() {
                let mut row = vec![k.to_string()];
                row.extend(v.coeff_strings());
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn braces(values: &[Rational]) -> String {
    format!("{{{}}}", strings(values).join(", "))
}

#[derive(Serialize)]
struct ReducedWire {
    classes: Vec<Vec<String>>,
    reduced_size: u64,
}

#[derive(Serialize)]
struct PteShowWire {
    b: u32,
    #[serde(rename = "N")]
    order: u32,
    x: String,
    y: String,
    classes: Vec<Vec<String>>,
    kmax: u32,
    power_sums: Vec<Vec<String>>,
    valid: bool,
    reduced: ReducedWire,
}

fn check_partition_cost(b: u32, order: u32, points: u64, limit: CostLimit) -> Result<(), CliError> {
    let size = (b as u128).checked_pow(order).unwrap_or(u128::MAX).saturating_mul(points as u128);
    Ok(limit.charge("pte", size)?)
}

fn run_pte_show(args: &PteShowArgs, limit: CostLimit, out: &mut dyn Write) -> Result<u8, CliError> {
    check_partition_cost(args.base, args.order, 1, limit)?;
    let p = generalized_partition(args.base, args.order, &args.x, &args.y)?;
    let kmax = args.kmax.unwrap_or(args.order - 1);
    let cert = verify_power_sums(&p, kmax);
    let reduced = cancel_common(&p);
    let classes = p.classes().len();
    match args.format {
        Format::Json => {
            let wire = PteShowWire {
                b: args.base,
                order: args.order,
                x: format_rational(&args.x),
                y: format_rational(&args.y),
                classes: (0..classes).map(|i| strings(&p.expanded(i))).collect(),
                kmax,
                power_sums: cert.to_strings(),
                valid: cert.valid,
                reduced: ReducedWire {
                    classes: (0..classes).map(|i| strings(&reduced.expanded(i))).collect(),
                    reduced_size: reduced.reduced_size(),
                },
            };
            write_json(out, &wire)?;
        }
        Format::Text | Format::Csv => {
            writeln!(
                out,
                "b={} N={} x={} y={}",
                args.base,
                args.order,
                format_rational(&args.x),
                format_rational(&args.y)
            )?;
            for i in 0..classes {
                writeln!(out, "class {i}: {}", braces(&p.expanded(i)))?;
            }
            writeln!(out, "power sums:")?;
            for k in 0..=kmax as usize {
                let row: Vec<String> = cert.power_sums.iter().map(|c| format_rational(&c[k])).collect();
                writeln!(out, "  k={k}: {}", row.join(" "))?;
            }
            writeln!(out, "valid: {}", cert.valid)?;
            writeln!(out, "reduced size: {}", reduced.reduced_size())?;
            for i in 0..classes {
                writeln!(out, "reduced class {i}: {}", braces(&reduced.expanded(i)))?;
            }
        }
    }
    Ok(if cert.valid { 0 } else { EXIT_MISMATCH })
}

fn run_pte_search(args: &PteSearchArgs, limit: CostLimit, out: &mut dyn Write) -> Result<u8, CliError> {
    let xs = parse_grid(&args.x_grid)?;
    let ys = parse_grid(&args.y_grid)?;
    check_partition_cost(args.base, args.order, (xs.len() * ys.len()) as u64, limit)?;
    let options = SearchOptions { k_max: args.kmax, min_size: args.min_size, top: Some(args.top) };
    let found = search_small_solutions(args.base, args.order, &xs, &ys, &options)?;
    match args.format {
        Format::Json | Format::Text => write_json(out, &SearchReport::new(args.base, args.order, &found))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["rank", "x", "y", "reduced_size", "classes"])?;
            for (rank, s) in found.iter().enumerate() {
                let wire = s.to_wire();
                let classes: Vec<String> = wire.classes.iter().map(|c| c.join(" ")).collect();
                w.write_record([
                    (rank + 1).to_string(),
                    wire.x,
                    wire.y,
                    wire.reduced_size.to_string(),
                    classes.join(" | "),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BernoulliWire {
    degree: usize,
    coeffs: Vec<String>,
}

fn run_bernoulli(args: &BernoulliArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let p = bernoulli_poly(args.degree);
    match args.format {
        Format::Json => write_json(out, &BernoulliWire { degree: args.degree, coeffs: strings(p.coeffs()) })?,
        Format::Text | Format::Csv => writeln!(out, "B_{}(x) = {p}", args.degree)?,
    }
    Ok(0)
}

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    let limit = resolve_cost(cli.max_cost)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let code = match &cli.command {
        Command::Verify(a) => run_verify(a, limit, &mut out)?,
        Command::Weights(a) => run_weights(a, &mut out)?,
        Command::PteShow(a) => run_pte_show(a, limit, &mut out)?,
        Command::PteSearch(a) => run_pte_search(a, limit, &mut out)?,
        Command::Bernoulli(a) => run_bernoulli(a, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Core(e @ Error::CostExceeded { .. })) => {
            eprintln!("digitsum: {e}");
            ExitCode::from(EXIT_COST)
        }
        Err(CliError::Core(e)) => {
            eprintln!("digitsum: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("digitsum: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Io(e)) => {
            eprintln!("digitsum: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

//! The `trl` command line.
//!
//! Exit codes: 0 success, 1 verification or diff failure, 2 invalid input,
//! 3 I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiments::{self, FuzzConfig, Table1Config, Timings, VerifyConfig};
use crate::poly::{generate_sequence, ComplexPoly, RecurrenceSpec};
use crate::roots::SolverOptions;
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "trl", version, about = "Zeros of recurrence polynomials and ratios of trinomial zeros")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct SpecArgs {
    /// A(z) as a JSON array of [re, im] pairs, ascending degree
    #[arg(long = "A")]
    pub a: Option<String>,
    /// B(z), same format as A
    #[arg(long = "B")]
    pub b: Option<String>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub l: Option<u32>,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of P_0..P_n
    Sequence {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check every admissible zero of the selected P_n, or run random trials
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Indices n, comma separated (default 17,23,56)
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Inclusive range "a:b" of indices n
        #[arg(long)]
        n_range: Option<String>,
        /// Ratio classification tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Run this many random trials instead of a fixed recurrence
        #[arg(long)]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Record wall-clock time in the report
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recompute the reference table and diff it against the printed values
    Table1 {
        #[arg(long, default_value_t = 5e-4)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Data series for plots
    Plotdata {
        #[command(subcommand)]
        kind: PlotKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlotKind {
    /// Samples of g on [-1, 1] with the reference level g(1)
    G {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Largest real alpha over the zeros of P_n for n = n_min, n_min + step, ...
    Alphastar {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 5)]
        step: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Zeros of D(t; z0) and their ratios for every admissible zero of P_n
    Ratios {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Verify(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Verify(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::PolyLiteral(_) => CliError::Input(e.to_string()),
            Error::Io(_) => CliError::Io(e.to_string()),
            Error::Csv(ref inner) if inner.is_io_error() => CliError::Io(e.to_string()),
            other => CliError::Verify(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn resolve_spec(args: &SpecArgs) -> CliResult<RecurrenceSpec> {
    match (&args.a, &args.b, args.k, args.l) {
        (None, None, None, None) => Ok(RecurrenceSpec::table1()),
        (Some(a), Some(b), Some(k), Some(l)) => {
            let a = ComplexPoly::parse_literal(a)?;
            let b = ComplexPoly::parse_literal(b)?;
            Ok(RecurrenceSpec::new(a, b, k, l)?)
        }
        _ => Err(CliError::Input(
            "--A, --B, --k and --l must be given together (or all omitted for the reference recurrence)".into(),
        )),
    }
}

fn spec_json(spec: &RecurrenceSpec) -> Value {
    serde_json::to_value(spec).unwrap_or(Value::Null)
}

fn open_output(out: &OutputArgs) -> CliResult<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Io(format!("{}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// JSON document with version and resolved configuration.
fn write_json<T: Serialize>(out: &OutputArgs, command: &str, config: &Value, data: &T) -> CliResult<()> {
    let doc = json!({
        "tool": "trl",
        "version": VERSION,
        "command": command,
        "config": config,
        "data": data,
    });
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn csv_header(command: &str, config: &Value) -> String {
    let config = json!({ "command": command, "config": config });
    experiments::header_lines(&config.to_string())
}

fn write_csv_rows(out: &OutputArgs, header: &str, columns: &[&str], rows: Vec<Vec<String>>) -> CliResult<()> {
    let mut w = open_output(out)?;
    w.write_all(header.as_bytes())?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns).map_err(Error::from)?;
    for r in rows {
        csv.write_record(&r).map_err(Error::from)?;
    }
    csv.flush()?;
    Ok(())
}

fn parse_range(text: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Input(format!("invalid --n-range {text:?}: expected \"a:b\""));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn cmd_sequence(spec: &SpecArgs, n: usize, out: &OutputArgs) -> CliResult<()> {
    let spec = resolve_spec(spec)?;
    let seq = generate_sequence(&spec, n);
    let config = json!({ "spec": spec_json(&spec), "n": n, "format": out.format });
    match out.format {
        Format::Json => write_json(out, "sequence", &config, &seq),
        Format::Csv => {
            let rows = seq
                .iter()
                .enumerate()
                .flat_map(|(i, p)| {
                    p.coeffs().iter().enumerate().map(move |(d, c)| {
                        vec![
                            i.to_string(),
                            d.to_string(),
                            experiments::fmt_f64(c.re),
                            experiments::fmt_f64(c.im),
                        ]
                    })
                })
                .collect();
            write_csv_rows(out, &csv_header("sequence", &config), &["n", "power", "re", "im"], rows)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    spec: &SpecArgs,
    n: &[usize],
    n_range: Option<&str>,
    tol: Option<f64>,
    fuzz: Option<usize>,
    seed: u64,
    timings: bool,
    out: &OutputArgs,
) -> CliResult<()> {
    let mut verify = VerifyConfig::default();
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        verify.tolerances.classify = t;
    }
    let start = Instant::now();

    if let Some(trials) = fuzz {
        let cfg = FuzzConfig {
            trials,
            seed,
            verify,
            ..FuzzConfig::default()
        };
        let report = experiments::run_fuzz(&cfg);
        let config = json!({ "fuzz": cfg, "format": out.format });
        let mut data = serde_json::to_value(&report).map_err(Error::from)?;
        if timings {
            data["timings"] = json!({ "total_seconds": start.elapsed().as_secs_f64() });
        }
        match out.format {
            Format::Json => write_json(out, "verify", &config, &data)?,
            Format::Csv => {
                let columns = [
                    "trial", "n", "z0_re", "z0_im", "alpha_re", "alpha_im", "gamma_ok", "main_theorem",
                    "corollary", "q_discriminant_max", "omega_expected", "omega_observed",
                ];
                let rows = report
                    .trials
                    .iter()
                    .flat_map(|t| {
                        t.zeros.iter().map(move |z| {
                            vec![
                                t.index.to_string(),
                                t.n.to_string(),
                                experiments::fmt_f64(z.z0.re),
                                experiments::fmt_f64(z.z0.im),
                                experiments::fmt_f64(z.alpha.re),
                                experiments::fmt_f64(z.alpha.im),
                                z.gamma_ok.to_string(),
                                z.main_theorem.to_string(),
                                z.corollary.to_string(),
                                z.q_discriminant.map_or(String::new(), |c| experiments::fmt_f64(c.max_scaled)),
                                z.omega.map_or(String::new(), |c| c.expected.count.to_string()),
                                z.omega.map_or(String::new(), |c| c.observed.to_string()),
                            ]
                        })
                    })
                    .collect();
                write_csv_rows(out, &csv_header("verify", &config), &columns, rows)?;
            }
        }
        if !report.summary.passed {
            for t in &report.trials {
                for f in &t.failures {
                    eprintln!("trial {} (n = {}): {} at {:?}: {}", t.index, f.n, f.check, f.z0, f.detail);
                }
            }
            return Err(CliError::Verify("random trials found violations".into()));
        }
        return Ok(());
    }

    let spec = resolve_spec(spec)?;
    let ns: Vec<usize> = match (n_range, n.is_empty()) {
        (Some(r), true) => parse_range(r)?,
        (Some(_), false) => return Err(CliError::Input("use either --n or --n-range".into())),
        (None, true) => vec![17, 23, 56],
        (None, false) => n.to_vec(),
    };
    let mut report = experiments::run_full_verification(&spec, &ns, &verify);
    if timings {
        report.timings = Some(Timings {
            total_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let config = json!({ "spec": spec_json(&spec), "n": ns, "verify": verify, "format": out.format });
    match out.format {
        Format::Json => write_json(out, "verify", &config, &report)?,
        Format::Csv => {
            let w = open_output(out)?;
            report.write_csv(w, &csv_header("verify", &config))?;
        }
    }
    if !report.passed {
        for f in &report.failures {
            eprintln!("n = {}: {} at {:?}: {}", f.n, f.check, f.z0, f.detail);
        }
        return Err(CliError::Verify(format!("{} verification failures", report.failures.len())));
    }
    Ok(())
}

fn cmd_table1(tol: f64, out: &OutputArgs) -> CliResult<()> {
    if !(tol > 0.0) {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    let cfg = Table1Config {
        tol,
        alpha_tol: tol.min(1e-4),
        ..Table1Config::default()
    };
    let report = experiments::run_table1(&cfg)?;
    let config = json!({ "table1": cfg, "format": out.format });
    match out.format {
        Format::Json => write_json(out, "table1", &config, &report)?,
        Format::Csv => {
            let w = open_output(out)?;
            report.write_csv(w, &csv_header("table1", &config))?;
        }
    }
    if !report.passed {
        for m in &report.mismatches {
            eprintln!("{m}");
        }
        return Err(CliError::Verify(format!("{} cells outside tolerance {tol:e}", report.mismatches.len())));
    }
    Ok(())
}

fn cmd_plot(kind: &PlotKind) -> CliResult<()> {
    match kind {
        PlotKind::G { k, l, points, out } => {
            crate::poly::check_shifts(*k, *l)?;
            let profile = experiments::g_profile(*k, *l, *points);
            let config = json!({ "k": k, "l": l, "points": points, "format": out.format });
            match out.format {
                Format::Json => write_json(out, "plotdata g", &config, &profile),
                Format::Csv => {
                    let header = format!("{}# g1: {}\n", csv_header("plotdata g", &config), experiments::fmt_f64(profile.g1));
                    let rows = profile
                        .samples
                        .iter()
                        .map(|s| vec![experiments::fmt_f64(s[0]), experiments::fmt_f64(s[1])])
                        .collect();
                    write_csv_rows(out, &header, &["x", "g"], rows)
                }
            }
        }
        PlotKind::Alphastar {
            spec,
            n_min,
            n_max,
            step,
            out,
        } => {
            let spec = resolve_spec(spec)?;
            if *step == 0 || n_min > n_max {
                return Err(CliError::Input("need --step >= 1 and --n-min <= --n-max".into()));
            }
            let ns: Vec<usize> = (*n_min..=*n_max).step_by(*step).collect();
            let series = experiments::alpha_star_sweep(&spec, &ns, &SolverOptions::default());
            let config = json!({ "spec": spec_json(&spec), "n": ns, "format": out.format });
            match out.format {
                Format::Json => write_json(out, "plotdata alphastar", &config, &series),
                Format::Csv => {
                    let rows = series
                        .iter()
                        .map(|p| {
                            vec![
                                p.n.to_string(),
                                p.alpha_star.map_or(String::new(), experiments::fmt_f64),
                                p.admissible.to_string(),
                                p.note.clone().unwrap_or_default(),
                            ]
                        })
                        .collect();
                    write_csv_rows(
                        out,
                        &csv_header("plotdata alphastar", &config),
                        &["n", "alpha_star", "admissible", "note"],
                        rows,
                    )
                }
            }
        }
        PlotKind::Ratios { spec, n, out } => {
            let spec = resolve_spec(spec)?;
            if n.is_empty() {
                return Err(CliError::Input("--n is required".into()));
            }
            let verify = VerifyConfig::default();
            let report = experiments::run_full_verification(&spec, n, &verify);
            let config = json!({ "spec": spec_json(&spec), "n": n, "format": out.format });
            match out.format {
                Format::Json => write_json(out, "plotdata ratios", &config, &report),
                Format::Csv => {
                    let w = open_output(out)?;
                    report.write_csv(w, &csv_header("plotdata ratios", &config))?;
                    Ok(())
                }
            }
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("TRL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sequence { spec, n, out } => cmd_sequence(spec, *n, out),
        Command::Verify {
            spec,
            n,
            n_range,
            tol,
            fuzz,
            seed,
            timings,
            out,
        } => cmd_verify(spec, n, n_range.as_deref(), *tol, *fuzz, *seed, *timings, out),
        Command::Table1 { tol, out } => cmd_table1(*tol, out),
        Command::Plotdata { kind } => cmd_plot(kind),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    configure_threads();
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use cfree::convolution::cross_check;
use cfree::verify::{run_suite, Suite, SuiteConfig, SuiteReport};
use cfree::{
    moments_from_transform, transform_from_moments, ConvolutionKind, ConvolutionPath, EOperator, Error,
    Scalar, TransformKind, TruncatedSeries, TwoLevelSpace, TwoStateLaw,
};

#[derive(Parser)]
#[command(name = "cfree", version, about = "Exact c-free transforms, convolutions and Fock-space models")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compute R, T, S, cR, cT or cS from a law.
    Transform {
        #[arg(long, value_parser = parse_from_str::<TransformKind>)]
        kind: TransformKind,
        #[arg(long)]
        law: PathBuf,
        #[arg(short = 'N', default_value_t = 6)]
        n: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Recover moments from R, T, cR or cT.
    Invert {
        #[arg(long, value_parser = parse_from_str::<TransformKind>)]
        kind: TransformKind,
        #[arg(long)]
        series: PathBuf,
        /// psi-moments, as a JSON array or a law file; needed for cR and cT.
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(short = 'N', default_value_t = 6)]
        n: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// c-free additive or multiplicative convolution of two laws.
    Convolve {
        #[arg(long, value_parser = parse_from_str::<ConvolutionKind>)]
        kind: ConvolutionKind,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(short = 'N', default_value_t = 6)]
        n: usize,
        /// transform, axiomatic, operator or all.
        #[arg(long, default_value = "transform")]
        path: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Moments of an operator expression on the truncated two-level space.
    Simulate {
        #[arg(long)]
        op: PathBuf,
        #[arg(short = 'N', default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        lh: usize,
        #[arg(long, default_value_t = 8)]
        lk: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(long, value_parser = parse_from_str::<Suite>)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(short = 'N', default_value_t = 6)]
        n: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn record(&self) -> serde_json::Value {
        match self {
            Failure::Usage(msg) => json!({"error": "usage", "message": msg}),
            Failure::Domain(e) => json!({"error": e.kind(), "message": e.to_string()}),
            Failure::Io(msg) => json!({"error": "io", "message": msg}),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn read_law(path: &Path, n: usize) -> CliResult<TwoStateLaw> {
    Ok(read_json::<TwoStateLaw>(path)?.truncate(n)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PsiInput {
    Moments(Vec<Scalar>),
    Law { psi: Vec<Scalar> },
}

#[derive(Serialize)]
struct PsiMoments {
    order: usize,
    psi: Vec<Scalar>,
}

/// A rendered artifact plus whether it represents a passing run.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializing plain data") + "\n"
}

fn series_csv(s: &TruncatedSeries) -> String {
    let mut out = String::from("k,coeff\n");
    for (k, c) in s.coeffs().iter().enumerate() {
        out += &format!("{k},{c}\n");
    }
    out
}

fn law_csv(law: &TwoStateLaw) -> String {
    let mut out = String::from("n,psi,phi\n");
    for n in 1..=law.order() {
        out += &format!("{n},{},{}\n", law.psi_moment(n), law.phi_moment(n));
    }
    out
}

fn render_law(law: &TwoStateLaw, format: Format) -> String {
    match format {
        Format::Json => to_json(law),
        Format::Csv => law_csv(law),
    }
}

fn render_report(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => format!(
            "suite,trials,seed,order,checks,passed,failures\n{},{},{},{},{},{},{}\n",
            report.suite,
            report.trials,
            report.seed,
            report.order,
            report.checks,
            report.passed,
            report.failures.len()
        ),
    }
}

fn max_rank() -> CliResult<Option<usize>> {
    match std::env::var("CFREE_MAX_RANK") {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("CFREE_MAX_RANK must be a non-negative integer, got {v:?}"))),
    }
}

fn run(command: Command, format: Format) -> CliResult<(Output, Option<PathBuf>)> {
    match command {
        Command::Transform { kind, law, n, output } => {
            let law = read_law(&law, n)?;
            let series = transform_from_moments(kind, &law)?;
            let text = match format {
                Format::Json => to_json(&series),
                Format::Csv => series_csv(&series),
            };
            Ok((Output::ok(text), output))
        }
        Command::Invert { kind, series, psi, n, output } => {
            if matches!(kind, TransformKind::S | TransformKind::CS) {
                return Err(Failure::Usage(format!("invert supports R, T, cR and cT, not {kind}")));
            }
            let series: TruncatedSeries = read_json(&series)?;
            let wanted = kind.transform_order(n);
            if series.order() < wanted {
                return Err(Error::InsufficientData { needed: wanted + 1, available: series.order() + 1 }.into());
            }
            let series = series.with_order(wanted);
            let psi = match psi {
                Some(path) => Some(match read_json::<PsiInput>(&path)? {
                    PsiInput::Moments(m) | PsiInput::Law { psi: m } => m,
                }),
                None => None,
            };
            let moments = moments_from_transform(kind, &series, psi.as_deref())?;
            let text = if kind.is_conditional() {
                let psi = psi.expect("checked by inversion")[..moments.len()].to_vec();
                render_law(&TwoStateLaw::new(psi, moments)?, format)
            } else {
                match format {
                    Format::Json => to_json(&PsiMoments { order: moments.len(), psi: moments }),
                    Format::Csv => {
                        let mut out = String::from("n,psi\n");
                        for (i, m) in moments.iter().enumerate() {
                            out += &format!("{},{m}\n", i + 1);
                        }
                        out
                    }
                }
            };
            Ok((Output::ok(text), output))
        }
        Command::Convolve { kind, x, y, n, path, output } => {
            let x = read_law(&x, n)?;
            let y = read_law(&y, n)?;
            if path == "all" {
                let report = cross_check(kind, &x, &y, n);
                if let Some(msg) = &report.precondition_failure {
                    return Err(Failure::Domain(Error::Domain(msg.clone())));
                }
                let out = match (&report.paths, report.agree) {
                    (Some(paths), true) => Output::ok(render_law(&paths.transform, format)),
                    _ => Output { text: to_json(&report), passed: false },
                };
                return Ok((out, output));
            }
            let path: ConvolutionPath = path.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let law = path.convolve(kind, &x, &y, n)?;
            Ok((Output::ok(render_law(&law, format)), output))
        }
        Command::Simulate { op, n, lh, lk, output } => {
            if lh < n || lk < n {
                return Err(Failure::Usage(format!("--lh and --lk must be at least N = {n}")));
            }
            if let Some(cap) = max_rank()? {
                if lh > cap || lk > cap {
                    return Err(Failure::Usage(format!("truncation ranks exceed CFREE_MAX_RANK = {cap}")));
                }
            }
            let op: EOperator = read_json(&op)?;
            let law = TwoLevelSpace::new(lh, lk).state_pair_moments(&op, n)?;
            Ok((Output::ok(render_law(&law, format)), output))
        }
        Command::Verify { suite, trials, seed, n, output } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be at least 1".into()));
            }
            let report = run_suite(suite, &SuiteConfig { trials, seed, order: n });
            Ok((Output { text: render_report(&report, format), passed: report.passed }, output))
        }
    }
}

fn emit(out: &Output, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, &out.text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(out.text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("{}", f.record());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail(Failure::Usage(first.to_string()));
        }
    };
    match run(cli.command, cli.format).and_then(|(out, path)| emit(&out, path.as_deref()).map(|_| out.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => fail(f),
    }
}

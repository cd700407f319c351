use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use majorant::bounds::{majorizing_vector, report_from_coefficients, BoundReport};
use majorant::families::{family_sweep, fmt_sig12, scan_csv, sweep_csv, sweep_parameters, Family};
use majorant::montecarlo::{beat_rate, bound_gap_stats, histogram, histogram_csv, majorization_fuzz};
use majorant::submatrices::{s_coefficients_with, CoefficientOptions};
use majorant::verify::{run_suite, SuiteConfig};
use majorant::{
    classical_bound, classical_mixture_entropy, cross_section_scan, shannon_entropy, ComplexMatrix, Error, Execution,
    ProbabilityVector, RenyiOrder, RngSeed, StochasticMatrix,
};

#[derive(Parser)]
#[command(name = "majorant", version, about = "Majorization-based entropic uncertainty bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All bounds for one unitary read from a matrix JSON file.
    Bounds(BoundsArgs),
    /// Bounds along a one-parameter family of unitaries.
    Sweep(SweepArgs),
    /// Unistochastic cross-section of the 3x3 Birkhoff polytope.
    Scan(ScanArgs),
    /// Haar Monte Carlo rate at which the ladder bound beats Maassen-Uffink.
    Mc(McArgs),
    /// Random search for violations of the majorization relation.
    Fuzz(FuzzArgs),
    /// Entropy bound and mixture inequalities for a column-stochastic matrix.
    Classical(ClassicalArgs),
    /// Cross-module property suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Rotation,
    #[value(name = "perm_power", alias = "perm-power")]
    PermPower,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Renyi order; repeatable, "inf" for min-entropy.
    #[arg(long = "alpha", value_parser = parse_alpha, default_value = "1")]
    alpha: Vec<RenyiOrder>,
    /// Allow exhaustive enumeration beyond N = 12.
    #[arg(long)]
    allow_large_n: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Dimension for perm_power.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Parameter range "lo:hi"; defaults to [0, pi/2] for rotation and [0, 1] for perm_power.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(f64, f64)>,
    /// Number of intervals; the grid has steps + 1 points.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long = "alpha", value_parser = parse_alpha, default_value = "1")]
    alpha: Vec<RenyiOrder>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    #[arg(long, value_parser = parse_alpha, default_value = "1")]
    alpha: RenyiOrder,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also report the distribution of B^(N-1) - B_MU with this many histogram bins.
    #[arg(long)]
    histogram: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Column-stochastic matrix in the matrix JSON format, zero imaginary parts.
    #[arg(long)]
    input: PathBuf,
    /// Input distribution P as comma-separated probabilities.
    #[arg(long, value_delimiter = ',')]
    prob: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest dimension in the suite.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Samples per dimension and property.
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_alpha(s: &str) -> Result<RenyiOrder, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("range '{s}' is not of the form lo:hi"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}' in range"));
    Ok((num(lo)?, num(hi)?))
}

enum Failure {
    Input(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: &OutputArgs, text: String) -> CmdResult {
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(ComplexMatrix::from_json_str(&text)?)
}

fn no_csv(out: &OutputArgs, command: &str) -> CmdResult {
    if out.format == Some(Format::Csv) {
        return Err(Failure::Input(format!("{command} has no CSV output")));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsOutput {
    n: usize,
    c: f64,
    s: Vec<f64>,
    r: Vec<f64>,
    q: Vec<f64>,
    truncations: Vec<Vec<f64>>,
    reports: Vec<BoundReport>,
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let u = read_matrix(&args.input)?;
    let options = CoefficientOptions { allow_large_n: args.allow_large_n, execution: Execution::Parallel };
    let sc = s_coefficients_with(&u, options)?;
    let c = u.max_abs_entry();
    let mv = majorizing_vector(&sc);
    let reports: Vec<BoundReport> = args.alpha.iter().map(|&a| report_from_coefficients(&sc, c, a)).collect();
    if args.out.format == Some(Format::Csv) {
        let mut text = String::from("alpha,deutsch,mu");
        (1..sc.n()).for_each(|k| text.push_str(&format!(",ladder_{k}")));
        text.push('\n');
        for r in &reports {
            text.push_str(&format!("{},{},{}", r.alpha, fmt_sig12(r.b_deutsch), fmt_sig12(r.b_mu)));
            r.ladder.iter().for_each(|x| text.push_str(&format!(",{}", fmt_sig12(*x))));
            text.push('\n');
        }
        return emit(&args.out, text);
    }
    let out = BoundsOutput {
        n: sc.n(),
        c,
        s: sc.s().to_vec(),
        r: sc.r().to_vec(),
        q: mv.q_full().values().to_vec(),
        truncations: mv.truncations().iter().map(|t| t.values().to_vec()).collect(),
        reports,
    };
    emit(&args.out, json(&out))
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let (family, default_range) = match args.family {
        FamilyName::Rotation => (Family::Rotation, (0.0, std::f64::consts::FRAC_PI_2)),
        FamilyName::PermPower => {
            if !(2..=majorant::tolerance::MAX_ENUMERATION_DIM).contains(&args.n) {
                return Err(Failure::Input(format!("perm_power needs 2 <= n <= 12, got {}", args.n)));
            }
            (Family::PermPower { n: args.n }, (0.0, 1.0))
        }
    };
    let (lo, hi) = args.range.unwrap_or(default_range);
    let params = sweep_parameters(lo, hi, args.steps)?;
    let rows = family_sweep(family, &params, &args.alpha, Execution::Parallel)?;
    match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(&args.out, sweep_csv(&rows)),
        Format::Json => emit(&args.out, json(&rows)),
    }
}

fn cmd_scan(args: &ScanArgs) -> CmdResult {
    let records = cross_section_scan(args.grid_step, args.alpha)?;
    match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(&args.out, scan_csv(&records)),
        Format::Json => emit(&args.out, json(&records)),
    }
}

fn cmd_mc(args: &McArgs) -> CmdResult {
    let seed = RngSeed::new(args.seed);
    let rate = beat_rate(args.n, args.samples, seed)?;
    let Some(bins) = args.histogram else {
        no_csv(&args.out, "mc without --histogram")?;
        return emit(&args.out, json(&rate));
    };
    if bins == 0 {
        return Err(Failure::Input("--histogram needs at least one bin".into()));
    }
    let gaps = bound_gap_stats(args.n, args.samples, RenyiOrder::SHANNON, seed)?;
    let hist = histogram(&gaps.gaps_mu, bins);
    if args.out.format == Some(Format::Csv) {
        return emit(&args.out, histogram_csv(&hist));
    }
    #[derive(Serialize)]
    struct McOutput<'a> {
        beat_rate: &'a majorant::BeatRateResult,
        gaps: &'a majorant::montecarlo::GapStats,
        histogram: &'a [majorant::montecarlo::HistogramBin],
    }
    emit(&args.out, json(&McOutput { beat_rate: &rate, gaps: &gaps, histogram: &hist }))
}

fn cmd_fuzz(args: &FuzzArgs) -> CmdResult {
    no_csv(&args.out, "fuzz")?;
    let report = majorization_fuzz(args.n, args.samples, RngSeed::new(args.seed))?;
    emit(&args.out, json(&report))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Property(format!("{} majorization violations", report.violations.len())))
    }
}

#[derive(Serialize)]
struct MixtureChecks {
    p: Vec<f64>,
    mixture_entropy: f64,
    image_entropy: f64,
    input_entropy: f64,
    lower_holds: bool,
    upper_holds: bool,
    bound_holds: bool,
}

#[derive(Serialize)]
struct ClassicalOutput {
    rows: usize,
    cols: usize,
    kappa: f64,
    bound: f64,
    bistochastic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<MixtureChecks>,
}

fn cmd_classical(args: &ClassicalArgs) -> CmdResult {
    no_csv(&args.out, "classical")?;
    let t = StochasticMatrix::from_complex(&read_matrix(&args.input)?)?;
    let tol = majorant::tolerance::PROPERTY;
    let bound = classical_bound(&t);
    let checks = match &args.prob {
        None => None,
        Some(p) => {
            let p = ProbabilityVector::new(p.clone())?;
            let mixture_entropy = classical_mixture_entropy(&t, &p)?;
            let image_entropy = shannon_entropy(t.apply(&p)?.values());
            let input_entropy = shannon_entropy(p.values());
            Some(MixtureChecks {
                p: p.values().to_vec(),
                mixture_entropy,
                image_entropy,
                input_entropy,
                lower_holds: mixture_entropy <= image_entropy + tol,
                upper_holds: image_entropy <= mixture_entropy + input_entropy + tol,
                bound_holds: input_entropy + image_entropy >= bound - tol,
            })
        }
    };
    let failed = checks.as_ref().is_some_and(|c| !(c.lower_holds && c.upper_holds && c.bound_holds));
    let out = ClassicalOutput {
        rows: t.rows(),
        cols: t.cols(),
        kappa: t.max_entry(),
        bound,
        bistochastic: t.is_bistochastic(majorant::tolerance::NORMALIZATION),
        checks,
    };
    emit(&args.out, json(&out))?;
    if failed {
        return Err(Failure::Property("classical entropy inequality violated".into()));
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    no_csv(&args.out, "verify")?;
    if !(2..=6).contains(&args.n) || args.samples == 0 {
        return Err(Failure::Input("verify needs 2 <= n <= 6 and at least one sample".into()));
    }
    let config = SuiteConfig { max_n: args.n, samples: args.samples, seed: RngSeed::new(args.seed) };
    let checks = run_suite(&config)?;
    emit(&args.out, json(&checks))?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Classical(a) => cmd_classical(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("property violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

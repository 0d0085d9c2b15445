use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use supercong::catalog::{list_checks, Perturbation};
use supercong::engine::config::expand_config_args;
use supercong::engine::scan::degenerate_count;
use supercong::engine::sweep::parse_checks;
use supercong::engine::{
    emit_report, parse_range, run_identity_suites, scan, sweep, EngineError, ReportFormat,
    ScanConfig, SweepConfig, SweepSummary,
};
use supercong::sequences::LucasFamily;

#[derive(Parser)]
#[command(
    name = "supercong",
    version,
    about = "Verify binomial-sum supercongruences over ranges of primes",
    args_override_self = true,
    after_help = "Any subcommand accepts --config FILE with `key = value` lines; command-line flags override it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate registry checks at every prime in a range.
    Verify(VerifyArgs),
    /// Run the exact identity suites.
    Identities(IdentityArgs),
    /// Search Lucas parameters for vanishing weighted sums.
    Scan(ScanArgs),
    /// Print the check registry.
    List,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    from: u64,
    #[arg(long, default_value_t = 1000)]
    to: u64,
    /// `all` or a comma-separated list of check ids.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value = "-5:5", allow_hyphen_values = true)]
    a_range: String,
    #[arg(long, default_value = "-5:5", allow_hyphen_values = true)]
    b_range: String,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "SUPERCONG_JOBS")]
    jobs: Option<usize>,
    /// `jsonl` or `csv`.
    #[arg(long, default_value = "jsonl")]
    format: String,
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record per-check wall time in `micros`.
    #[arg(long)]
    timing: bool,
    #[arg(long, hide = true)]
    perturb: Option<String>,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 60)]
    max_n: u64,
    #[arg(long, default_value_t = 30)]
    series_order: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// `U`, `V` or `U,V`.
    #[arg(long, default_value = "U,V")]
    family: String,
    #[arg(long, default_value = "-5:5", allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value = "-5:5", allow_hyphen_values = true)]
    b: String,
    /// Comma-separated nonzero denominators.
    #[arg(long, default_value = "-16,-8,-4,4,8,16", allow_hyphen_values = true)]
    denoms: String,
    #[arg(long, default_value_t = 500)]
    to: u64,
    #[arg(long, default_value_t = 8)]
    min_primes: usize,
    #[arg(long, env = "SUPERCONG_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_jobs(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn config_error(msg: impl Into<String>) -> EngineError {
    EngineError::InvalidConfig(msg.into())
}

fn run_verify(args: VerifyArgs) -> Result<u8, EngineError> {
    let format: ReportFormat = args.format.parse()?;
    let perturbation = args
        .perturb
        .as_deref()
        .map(str::parse::<Perturbation>)
        .transpose()
        .map_err(config_error)?;
    let cfg = SweepConfig {
        checks: parse_checks(&args.checks)?,
        a_range: parse_range(&args.a_range)?,
        b_range: parse_range(&args.b_range)?,
        jobs: default_jobs(args.jobs),
        format,
        output: args.out,
        perturbation,
        timing: args.timing,
        ..SweepConfig::new(args.from, args.to)
    };
    let results = sweep(&cfg)?;
    emit_report(&results, cfg.format, cfg.output.as_deref(), cfg.timing)?;
    let s = SweepSummary::of(&results);
    eprintln!(
        "{} results, {} applicable, {} passed, {} failed",
        s.results, s.applicable, s.passed, s.failed
    );
    for r in results.iter().filter(|r| r.failed()) {
        let params = r.params.map(|p| format!(" {p}")).unwrap_or_default();
        eprintln!("FAIL {} p={}{params}", r.id, r.prime);
    }
    Ok(s.exit_code() as u8)
}

fn run_identities(args: IdentityArgs) -> u8 {
    let lines = run_identity_suites(args.max_n, args.series_order);
    for l in &lines {
        let status = if l.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({} cases)", l.suite, l.cases);
        for f in &l.failures {
            println!("    {f}");
        }
    }
    u8::from(lines.iter().any(|l| !l.passed()))
}

fn run_scan(args: ScanArgs) -> Result<u8, EngineError> {
    let families = args
        .family
        .split(',')
        .map(str::parse::<LucasFamily>)
        .collect::<Result<Vec<_>, _>>()
        .map_err(EngineError::InvalidGrid)?;
    let denoms = args
        .denoms
        .split(',')
        .map(|d| d.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| EngineError::InvalidGrid(format!("bad denominator: {e}")))?;
    let cfg = ScanConfig {
        families,
        a_range: parse_range(&args.a).map_err(|e| EngineError::InvalidGrid(e.to_string()))?,
        b_range: parse_range(&args.b).map_err(|e| EngineError::InvalidGrid(e.to_string()))?,
        denoms,
        prime_hi: args.to,
        min_primes: args.min_primes,
        jobs: default_jobs(args.jobs),
    };
    let findings = scan(&cfg)?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for f in &findings {
        serde_json::to_writer(&mut out, &f.to_json())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    let known = findings.iter().filter(|f| f.known_match.is_some()).count();
    eprintln!(
        "{} findings ({} known, {} new), {} degenerate points skipped",
        findings.len(),
        known,
        findings.len() - known,
        degenerate_count(&cfg)
    );
    Ok(0)
}

fn run_list() -> u8 {
    for d in list_checks() {
        let kind = if d.parametric { " [a,b]" } else { "" };
        println!(
            "{:<14} mod p^{}  {:<22} {}{kind}",
            d.id.as_str(),
            d.modulus_power,
            d.applicability.to_string(),
            d.anchor
        );
    }
    0
}

fn main() -> ExitCode {
    let args = match expand_config_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Identities(a) => Ok(run_identities(a)),
        Command::Scan(a) => run_scan(a),
        Command::List => Ok(run_list()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

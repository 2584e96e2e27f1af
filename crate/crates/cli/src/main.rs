//! `statwarp` command-line front end.
//!
//! Exit codes: 0 when no proof-faithful bound is violated, 1 when a
//! mathematical violation is found, 2 on usage, configuration or i/o errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use statwarp::ambient::ProfileKind;
use statwarp::campaign::{linspace, run_chart, run_qp, run_verify, CampaignConfig, QpKind, Which};
use statwarp::scengen::{class_audit, realizability_audit, SubmanifoldClass};
use statwarp::{json, Error, PointData};

#[derive(Parser)]
#[command(name = "statwarp", version, about = "Curvature inequality verification on statistical warped products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized verification campaign.
    Verify(VerifyArgs),
    /// Solve one of the constrained quadratic programs.
    Qp(QpArgs),
    /// Finite-difference checks of the chart connections and curvature.
    Chart(ChartArgs),
    /// Realizability audit of a point-data JSON file.
    Audit(AuditArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// TOML config; flags override its keys.
    #[arg(long, env = "STATWARP_CONFIG")]
    config: Option<PathBuf>,
    /// casorati | casorati_hat | chen_ricci | equality | all
    #[arg(long, default_value = "all")]
    which: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Tangent dimension, `K` or `LO..HI` (inclusive).
    #[arg(long)]
    m: Option<String>,
    /// Normal dimension, `K` or `LO..HI` (inclusive).
    #[arg(long)]
    p: Option<String>,
    /// Repeatable, e.g. `--profile exp:2 --profile cosh`.
    #[arg(long)]
    profile: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    cbar: Vec<f64>,
    #[arg(long)]
    class: Vec<String>,
    /// Violation tolerance on proof-faithful slack.
    #[arg(long)]
    tol: Option<f64>,
    /// Findings file (newline-delimited JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct QpArgs {
    /// pk | chen | system16
    #[arg(long, default_value = "pk")]
    which: String,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
}

#[derive(Args)]
struct ChartArgs {
    #[arg(long, default_value = "exp")]
    profile: String,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    z_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    z_max: f64,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    /// Half the fiber dimension.
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Args)]
struct AuditArgs {
    /// JSON file holding one point-data object.
    file: PathBuf,
    /// Also check the predicate of this class.
    #[arg(long)]
    class: Option<String>,
}

fn parse_range(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Config(format!("bad dimension range `{s}`"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            Ok((k, k))
        }
    }
}

fn verify_config(args: &VerifyArgs) -> Result<CampaignConfig, Error> {
    let mut c = match &args.config {
        Some(path) => CampaignConfig::load(path)?,
        None => CampaignConfig::default(),
    };
    if let Some(v) = args.seed {
        c.base_seed = v;
    }
    if let Some(v) = args.trials {
        c.trials = v;
    }
    if let Some(s) = &args.m {
        (c.m_min, c.m_max) = parse_range(s)?;
    }
    if let Some(s) = &args.p {
        (c.p_min, c.p_max) = parse_range(s)?;
    }
    if !args.profile.is_empty() {
        c.profiles = args.profile.clone();
    }
    if !args.cbar.is_empty() {
        c.cbars = args.cbar.clone();
    }
    if !args.class.is_empty() {
        c.classes = args.class.clone();
    }
    if let Some(v) = args.tol {
        c.tol_violation = v;
    }
    if args.out.is_some() {
        c.out = args.out.clone();
    }
    if let Some(v) = args.jobs {
        c.jobs = v;
    }
    c.validate()?;
    Ok(c)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", json::to_string(value)?);
    Ok(())
}

/// `Ok(true)` when no violation was found.
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify(args) => {
            let config = verify_config(&args)?;
            let summary = run_verify(&config, Which::parse(&args.which)?)?;
            print_json(&summary)?;
            Ok(summary.passed())
        }
        Command::Qp(args) => {
            print_json(&run_qp(args.m, args.alpha, QpKind::parse(&args.which)?)?)?;
            Ok(true)
        }
        Command::Chart(args) => {
            let profile = ProfileKind::parse(&args.profile)?;
            let zs = linspace(args.z_min, args.z_max, args.samples);
            print_json(&run_chart(profile, &zs, args.step, args.n)?)?;
            Ok(true)
        }
        Command::Audit(args) => {
            let text = fs::read_to_string(&args.file).map_err(|e| Error::Io(format!("{}: {e}", args.file.display())))?;
            let data: PointData = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            let mut report = realizability_audit(&data);
            if let Some(name) = &args.class {
                let class = class_audit(&data, SubmanifoldClass::parse(name)?);
                report.passed &= class.passed;
                report.checks.extend(class.checks.into_iter().map(|(k, v)| (format!("class.{k}"), v)));
            }
            print_json(&report)?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("statwarp: {e}");
            ExitCode::from(2)
        }
    }
}

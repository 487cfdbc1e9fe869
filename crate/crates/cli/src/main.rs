//! Command-line runner: parse a JSON config, dispatch one of the study modes,
//! persist CSV/JSON outputs, and translate outcomes into exit codes
//! (0 pass, 1 quantitative failure, 2 config error, 3 numerical failure).

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use sigmaevo::config::{parse_config, ExperimentConfig};
use sigmaevo::experiment::{
    run_audits, run_experiment, write_audit_report, write_report, StudyMode,
};
use sigmaevo::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sigmaevo",
    about = "Band-wise decay/growth experiments for visco-elastic damped sigma-evolution models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's output.dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Size of the rayon thread pool (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Print per-record lines
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured data and record |D|^a u and |D|^a u_t norms
    Simulate(RunArgs),
    /// Record kernel-field L1 operator-norm series
    KernelNorms(RunArgs),
    /// Audit the large-frequency symbol-derivative bounds
    AuditBounds(RunArgs),
    /// Merge prior report JSONs into one verdict
    Report {
        /// Output directory for merged.json
        #[arg(long)]
        out: PathBuf,
        /// Report files produced by earlier runs
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_)) | Some(Error::Domain(_)) => 2,
        Some(Error::Numerical(_)) => 3,
        Some(_) => 1,
        None => 2,
    }
}

fn init_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(k) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("failed to size the thread pool")?;
    }
    Ok(())
}

fn out_dir(args: &RunArgs, cfg: &ExperimentConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run_study(args: &RunArgs, mode: StudyMode, name: &str) -> anyhow::Result<bool> {
    init_threads(args.threads)?;
    let cfg = parse_config(&args.config)?;
    let report = run_experiment(&cfg, mode)?;
    let dir = out_dir(args, &cfg);
    let path = write_report(&report, &dir, name)?;
    if args.verbose {
        for r in &report.records {
            let target = r
                .theoretical_exponent
                .map(|t| format!("target <= {:.4}", t + cfg.fits.growth_tol))
                .unwrap_or_else(|| format!("target c >= {:.4}", cfg.fits.min_decay_rate));
            println!(
                "{} a={} band={} i={} j={} fitted={:+.4} {} margin={:+.4} {}",
                r.study,
                r.a,
                r.band,
                r.i.map(|i| i.to_string()).unwrap_or_else(|| "-".into()),
                r.j,
                r.fit.exponent,
                target,
                r.margin,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
    }
    println!(
        "{}: {} records, boundary_mass_max {:.3e}, report {}",
        name,
        report.records.len(),
        report.environment.boundary_mass_max,
        path.display()
    );
    Ok(report.pass)
}

fn run_audit(args: &RunArgs) -> anyhow::Result<bool> {
    init_threads(args.threads)?;
    let cfg = parse_config(&args.config)?;
    let report = run_audits(&cfg)?;
    let dir = out_dir(args, &cfg);
    let path = write_audit_report(&report, &dir, "audit")?;
    if args.verbose {
        for a in &report.audits {
            println!(
                "{:?} p={} j={} b={} alpha={} sup={:.4e} {}",
                a.bound,
                a.p,
                a.j,
                a.b,
                a.alpha,
                a.sup_ratio,
                if a.pass { "pass" } else { "FAIL" }
            );
        }
    }
    println!("audit-bounds: {} audits, report {}", report.audits.len(), path.display());
    Ok(report.pass)
}

fn run_report(out: &Path, inputs: &[PathBuf]) -> anyhow::Result<bool> {
    let mut entries = Vec::new();
    let mut all_pass = true;
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .with_context(|| format!("{} is not valid JSON", path.display()))?;
        let pass = value
            .get("pass")
            .and_then(|p| p.as_bool())
            .with_context(|| format!("{} has no boolean `pass` field", path.display()))?;
        all_pass &= pass;
        entries.push(serde_json::json!({
            "path": path.display().to_string(),
            "pass": pass,
        }));
    }
    std::fs::create_dir_all(out)?;
    let merged = serde_json::json!({ "inputs": entries, "pass": all_pass });
    let path = out.join("merged.json");
    std::fs::write(&path, serde_json::to_string_pretty(&merged)? + "\n")?;
    println!("report: {} inputs, pass={all_pass}, wrote {}", inputs.len(), path.display());
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(args) => run_study(args, StudyMode::Simulate, "simulate"),
        Command::KernelNorms(args) => run_study(args, StudyMode::KernelNorms, "kernel_norms"),
        Command::AuditBounds(args) => run_audit(args),
        Command::Report { out, inputs } => run_report(out, inputs),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

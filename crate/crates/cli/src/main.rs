use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use g2lab::{execute, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "g2lab", version, about = "G2 metrics, instantons and shooting from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity, torsion and instanton residual suites
    Verify {
        /// Bump every connection so the residual checks must fail
        #[arg(long)]
        perturb: bool,
    },
    /// Integrate the Hitchin flow from closed-form data
    Flow,
    /// Shoot one instanton from the singular orbit
    Shoot,
    /// Classify a grid of boundary data
    Scan,
    /// Rescaled bubble profiles as x1 grows
    Bubble,
    /// Energy current against the 8 pi^2 Vol(S3) target
    Energy,
    /// Write a metric profile as CSV
    Export,
}

#[derive(Args)]
struct Common {
    /// Flat key = value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    #[arg(long, global = true)]
    tmax: Option<String>,
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, value_parser = ["bs-spinor", "bggg", "lambda2-s4", "lambda2-cp2"])]
    metric: Option<String>,
    #[arg(long, global = true, value_parser = ["p1", "pid"])]
    bundle: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Override any config key
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Flow => "flow",
        Command::Shoot => "shoot",
        Command::Scan => "scan",
        Command::Bubble => "bubble",
        Command::Energy => "energy",
        Command::Export => "export",
    }
}

fn configure(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(name(&cli.command));
    let c = &cli.common;
    if let Some(path) = &c.config {
        cfg.load_file(path)?;
    }
    for (key, value) in [
        ("out", &c.out),
        ("tol", &c.tol),
        ("tmax", &c.tmax),
        ("grid", &c.grid),
        ("metric", &c.metric),
        ("bundle", &c.bundle),
        ("threads", &c.threads),
    ] {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    for pair in &c.set {
        cfg.set_pair(pair)?;
    }
    if let Command::Verify { perturb: true } = cli.command {
        cfg.set("perturb", "true")?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure(&cli).and_then(|cfg| execute(&cfg));
    match result {
        Ok(run) => {
            eprintln!("g2lab: wrote {} artifacts to {}", run.artifacts.len(), run.out_dir.display());
            ExitCode::from(run.exit_code as u8)
        }
        Err(e) => {
            eprintln!("g2lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

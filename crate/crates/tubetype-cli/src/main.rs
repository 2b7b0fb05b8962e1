//! `tubetype`: identity suites, exact certificates, and finite-type
//! classification for tube-like surfaces, driven from one JSON config.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 bad config or
//! surface spec, 3 a requested order exceeds the exact engines.

mod commands;
mod config;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{
    cmd_analyze, cmd_anchor_cert, cmd_iterate, cmd_tube_cert, cmd_verify, CliError, CommandOutput,
};
use config::{parse_surface_arg, Format, RunConfig};
use report::Report;

#[derive(Parser)]
#[command(
    name = "tubetype",
    version,
    about = "Laplace operator checks, exact iterate certificates, and finite-type \
             classification for tube-like surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity and regression suite on one surface
    Verify(SurfaceCmd),
    /// Classify one surface from its operator iterates
    Analyze(SurfaceCmd),
    /// Sample operator iterates on a grid; csv format emits the full table
    Iterate(SurfaceCmd),
    /// Exact anchor-ring iterate tables, closed forms, and certificate
    AnchorCert(AnchorCertCmd),
    /// Exact tube iterate leads, recursion checks, and certificate
    TubeCert(TubeCertCmd),
}

#[derive(Args)]
struct CommonOpts {
    /// JSON run configuration; other flags override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Evaluate grids sequentially even when parallel support is built in
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SurfaceCmd {
    /// sphere | catenoid | anchor-ring | circle-tube | helix-tube,
    /// inline JSON, or a path to a surface JSON file
    surface: Option<String>,
    /// Grid size NxM (axis u by axis v)
    #[arg(long, value_name = "NxM")]
    grid: Option<String>,
    /// Mask samples with |cos phi| (anchor ring: |cos t|) below this
    #[arg(long)]
    exclusion: Option<f64>,
    /// Deepest numeric iterate
    #[arg(long)]
    kmax: Option<usize>,
    /// Random admissible points drawn by the cross-checks
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for the random draws
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct AnchorCertCmd {
    /// Certificate order (highest iterate of the exact anchor engine)
    #[arg(long)]
    mmax: Option<u32>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct TubeCertCmd {
    /// Certificate order (highest iterate of the exact tube engine)
    #[arg(long)]
    lmax: Option<u32>,
    #[command(flatten)]
    common: CommonOpts,
}

fn base_config(common: &CommonOpts) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Config)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = common.format {
        cfg.format = format;
    }
    if common.sequential {
        cfg.sequential = true;
    }
    Ok(cfg)
}

fn parse_grid(arg: &str) -> Result<[usize; 2], CliError> {
    let err = || CliError::Config(format!("grid must look like 128x64, got '{arg}'"));
    let (nu, nv) = arg.split_once(['x', 'X']).ok_or_else(err)?;
    Ok([
        nu.trim().parse().map_err(|_| err())?,
        nv.trim().parse().map_err(|_| err())?,
    ])
}

fn surface_config(cmd: &SurfaceCmd) -> Result<RunConfig, CliError> {
    let mut cfg = base_config(&cmd.common)?;
    if let Some(surface) = &cmd.surface {
        cfg.surface = Some(parse_surface_arg(surface).map_err(CliError::Config)?);
    }
    if let Some(grid) = &cmd.grid {
        cfg.grid = Some(parse_grid(grid)?);
    }
    if let Some(exclusion) = cmd.exclusion {
        cfg.exclusion = Some(exclusion);
    }
    if let Some(kmax) = cmd.kmax {
        cfg.k_max = kmax;
    }
    if let Some(samples) = cmd.samples {
        cfg.samples = samples;
    }
    if let Some(seed) = cmd.seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(CliError::Config)?;
    cfg.resolve();
    Ok(cfg)
}

fn emit(command: &str, cfg: RunConfig, output: CommandOutput) -> Result<u8, CliError> {
    for line in &output.lines {
        eprintln!("{line}");
    }
    eprintln!(
        "{command}: {}/{} checks passed",
        output.summary.passed, output.summary.checks
    );
    let pass = output.summary.pass;
    let body = match cfg.format {
        Format::Json => Report::new(
            command,
            cfg.clone(),
            output.payload,
            output.summary,
            output.timings_ms,
        )
        .to_json(),
        Format::Csv => output.csv,
    };
    match &cfg.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::Config(format!("writing {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(u8::from(!pass))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Verify(cmd) => {
            let cfg = surface_config(cmd)?;
            let output = cmd_verify(&cfg)?;
            emit("verify", cfg, output)
        }
        Command::Analyze(cmd) => {
            let cfg = surface_config(cmd)?;
            let output = cmd_analyze(&cfg)?;
            emit("analyze", cfg, output)
        }
        Command::Iterate(cmd) => {
            let cfg = surface_config(cmd)?;
            let output = cmd_iterate(&cfg)?;
            emit("iterate", cfg, output)
        }
        Command::AnchorCert(cmd) => {
            let mut cfg = base_config(&cmd.common)?;
            if let Some(mmax) = cmd.mmax {
                cfg.m_max = mmax;
            }
            cfg.validate().map_err(CliError::Config)?;
            let output = cmd_anchor_cert(&cfg)?;
            emit("anchor-cert", cfg, output)
        }
        Command::TubeCert(cmd) => {
            let mut cfg = base_config(&cmd.common)?;
            if let Some(lmax) = cmd.lmax {
                cfg.lambda_max = lmax;
            }
            cfg.validate().map_err(CliError::Config)?;
            let output = cmd_tube_cert(&cfg)?;
            emit("tube-cert", cfg, output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iterpow::commands::{
    cmd_compare, cmd_degrade, cmd_equalize, CompareConfig, DegradeConfig, EqualizeOverrides, Method, Pipeline,
    RunConfig,
};
use iterpow::DegradeParams;
use serde::Serialize;

/// Colour image equalization by iterative n-th root / n-th power.
#[derive(Parser)]
#[command(name = "iterpow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tuning {
    /// Stop when |mean - 0.5| <= TOL.
    #[arg(long)]
    tol: Option<f64>,
    /// Maximum number of power steps per channel.
    #[arg(long)]
    max_iters: Option<usize>,
}

impl Tuning {
    fn overrides(&self) -> EqualizeOverrides {
        EqualizeOverrides {
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Equalize an image and print a JSON run summary.
    Equalize {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value = "rgb")]
        pipeline: Pipeline,
        #[arg(long, default_value = "iterpow")]
        method: Method,
        #[command(flatten)]
        tuning: Tuning,
        /// Write the per-iteration trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Pristine image for PSNR reporting.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Score images against a reference and print PSNR reports as JSON.
    Compare {
        #[arg(long)]
        reference: PathBuf,
        /// Run all four method/pipeline pairs on this image.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Extra candidates as [METHOD-PIPELINE=]PATH.
        candidates: Vec<String>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Make a low-contrast copy: x -> clamp(bias + gain * x^gamma).
    Degrade {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0.4)]
        gain: f64,
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        bias: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
}

fn print<T: Serialize>(value: &T) -> iterpow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> iterpow::Result<()> {
    match cli.command {
        Command::Equalize {
            input,
            output,
            pipeline,
            method,
            tuning,
            trace,
            reference,
        } => {
            let summary = cmd_equalize(&RunConfig {
                pipeline,
                method,
                overrides: tuning.overrides(),
                input,
                output,
                reference,
                trace,
            })?;
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            print(&summary)
        }
        Command::Compare {
            reference,
            input,
            candidates,
            tuning,
        } => print(&cmd_compare(&CompareConfig {
            reference,
            input,
            candidates,
            overrides: tuning.overrides(),
        })?),
        Command::Degrade {
            input,
            output,
            gain,
            bias,
            gamma,
        } => print(&cmd_degrade(&DegradeConfig {
            input,
            output,
            params: DegradeParams { gain, bias, gamma },
        })?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

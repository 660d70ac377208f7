mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lambda_sta::sweep::SweepAxis;

use crate::config::{Format, Initial, RunConfig};
use crate::error::CliError;
use crate::output::OutputDir;

/// Invariant-based fast population transfer in three-level Lambda systems.
#[derive(Parser)]
#[command(name = "lambda-sta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize pulses and check boundary conditions.
    Design(RunArgs),
    /// Propagate a protocol and report populations, modes and metrics.
    Simulate(RunArgs),
    /// Repeat a simulation over one parameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// epsilon, delta, tf_us, detuning_p or detuning_3.
        #[arg(long, value_parser = parse_axis)]
        axis: SweepAxis,
        /// Comma-separated, strictly increasing values.
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required_unless_present = "range",
            conflicts_with = "range"
        )]
        values: Vec<f64>,
        /// Evenly spaced values as start:stop:n.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Write the data behind one of the reference figures.
    ReproduceFigure {
        /// 2, 3, 4, 5 or 6.
        figure: u8,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with any of the keys below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<u8>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Protocol 2 only; defaults to pi/4.
    #[arg(long)]
    delta: Option<f64>,
    /// Duration in microseconds.
    #[arg(long)]
    tf_us: Option<f64>,
    /// Time steps; defaults to one per nanosecond.
    #[arg(long)]
    steps: Option<usize>,
    /// Steps between recorded samples.
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long, value_enum)]
    initial: Option<Initial>,
    /// One-photon detuning, rad/us.
    #[arg(long, allow_negative_numbers = true)]
    detuning_p: Option<f64>,
    /// Two-photon detuning, rad/us.
    #[arg(long, allow_negative_numbers = true)]
    detuning_3: Option<f64>,
    /// Output directory (default: current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    SweepAxis::parse(s).ok_or_else(|| format!("unknown axis {s:?}"))
}

impl RunArgs {
    fn resolve(&self) -> Result<(config::Resolved, OutputDir), CliError> {
        let file = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            protocol: self.protocol,
            epsilon: self.epsilon,
            delta: self.delta,
            tf_us: self.tf_us,
            steps: self.steps,
            stride: self.stride,
            initial: self.initial,
            detuning_p: self.detuning_p,
            detuning_3: self.detuning_3,
            format: self.format,
            out: self.out.as_ref().map(|p| p.to_string_lossy().into_owned()),
        };
        let merged = file.overridden_by(flags);
        let resolved = merged.resolve()?;
        let root = PathBuf::from(merged.out.as_deref().unwrap_or("."));
        Ok((resolved, OutputDir::create(&root)?))
    }
}

fn run(cli: Cli) -> Result<OutputDir, CliError> {
    match cli.command {
        Command::Design(args) => {
            let (resolved, mut out) = args.resolve()?;
            commands::design(&resolved, &mut out).map(|_| out)
        }
        Command::Simulate(args) => {
            let (resolved, mut out) = args.resolve()?;
            commands::simulate_cmd(&resolved, &mut out).map(|_| out)
        }
        Command::Sweep {
            run,
            axis,
            values,
            range,
        } => {
            let values = match range {
                Some(r) => commands::parse_range(&r).map_err(CliError::Usage)?,
                None => values,
            };
            let (resolved, mut out) = run.resolve()?;
            commands::sweep_cmd(&resolved, axis, &values, &mut out).map(|_| out)
        }
        Command::ReproduceFigure {
            figure,
            out,
            format,
        } => commands::reproduce_figure(figure, format, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            for path in out.written() {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `ternquart`: JSON in, JSON/text reports and SVG plots out.

mod commands;
mod config;
mod plot;
mod render;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or configuration (exit 3).
    Input(String),
    /// Degenerate data or solver failure (exit 2).
    Compute(String),
}

impl From<ternquart::Error> for CliError {
    fn from(e: ternquart::Error) -> Self {
        use ternquart::Error as E;
        match e {
            E::InvalidInput(_) | E::NotTraceFree(_) | E::NotSpecialLinear(_) | E::InvalidForm(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Compute(e.to_string()),
        }
    }
}

/// Command output: the bytes to write and whether the checks held.
pub struct Outcome {
    pub body: String,
    pub pass: bool,
}

#[derive(Parser, Debug)]
#[command(name = "ternquart", version, about = "Idempotents, quartics and bitangents of trace-free algebras on C^3")]
struct Cli {
    /// Residual tolerance for zeros.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Merge radius for clustering roots.
    #[arg(long, global = true)]
    tol_merge: Option<f64>,
    /// Pairing radius for tangency roots.
    #[arg(long, global = true)]
    tol_pair: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random coordinate charts tried before giving up.
    #[arg(long, global = true)]
    retries: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with tol_zero, tol_merge, tol_pair, chart_retries, seed, format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the seven idempotents and check general position.
    Idempotents { input: PathBuf },
    /// Recover the quartic from the cubic net.
    Quartic { input: PathBuf },
    /// Certify the 28 candidate bitangents.
    Bitangents { input: PathBuf },
    /// Run every check; several inputs or --random N run as a batch.
    Verify {
        inputs: Vec<PathBuf>,
        /// Also verify N random algebras with seeds seed, seed+1, ...
        #[arg(long)]
        random: Option<u64>,
    },
    /// Rebuild the algebra from seven points.
    Invert { input: PathBuf },
    /// Emit a random trace-free algebra for the seed.
    Random {
        /// Real structure constants.
        #[arg(long)]
        real: bool,
    },
    /// Emit a named fixture.
    Example {
        #[arg(value_enum)]
        name: commands::ExampleName,
    },
    /// Draw the real locus of the quartic and the 28 lines as SVG.
    Plot {
        input: PathBuf,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 800)]
        height: u32,
        /// Chart window as xmin,xmax,ymin,ymax.
        #[arg(long, value_delimiter = ',', default_values_t = [-3.0, 3.0, -3.0, 3.0], allow_hyphen_values = true)]
        view: Vec<f64>,
        /// Marching-squares cells per side.
        #[arg(long, default_value_t = 300)]
        grid: u32,
    },
}

pub fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let mut rc = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.tol {
        rc.tol_zero = v;
    }
    if let Some(v) = cli.tol_merge {
        rc.tol_merge = v;
    }
    if let Some(v) = cli.tol_pair {
        rc.tol_pair = v;
    }
    if let Some(v) = cli.seed {
        rc.seed = v;
    }
    if let Some(v) = cli.retries {
        rc.chart_retries = v;
    }
    if let Some(v) = cli.format {
        rc.format = v;
    }
    let cfg = rc.solver()?;
    let fmt = rc.format;
    match &cli.command {
        Command::Idempotents { input } => commands::idempotents(&read_input(input)?, &cfg, fmt),
        Command::Quartic { input } => commands::quartic(&read_input(input)?, fmt),
        Command::Bitangents { input } => commands::bitangents(&read_input(input)?, &cfg, fmt),
        Command::Verify { inputs, random } => commands::verify(inputs, *random, &cfg, fmt),
        Command::Invert { input } => commands::invert(&read_input(input)?, &cfg, fmt),
        Command::Random { real } => commands::random(cfg.seed, *real, fmt),
        Command::Example { name } => commands::example(*name, fmt),
        Command::Plot {
            input,
            width,
            height,
            view,
            grid,
        } => {
            let view: [f64; 4] = view
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Input("view takes four numbers xmin,xmax,ymin,ymax".into()))?;
            let opts = plot::PlotOptions {
                width: *width,
                height: *height,
                view,
                grid: *grid,
            };
            commands::plot(&read_input(input)?, &cfg, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.clone();
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(3);
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let written = match &out {
        Some(p) => std::fs::write(p, outcome.body.as_bytes()),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(3);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

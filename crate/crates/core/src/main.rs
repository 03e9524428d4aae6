use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tripletcv::bell::BellLabel;
use tripletcv::experiment::SweepMode;
use tripletcv::report::{
    cmd_bell_correlate, cmd_bell_table, cmd_cv_sweep, cmd_reproduce_fig2, cmd_validate,
    CommandError, CommandResult, SweepArgs, DEFAULT_SAMPLES, DEFAULT_SEED, EXIT_USAGE,
};

/// Directory that receives a copy of every output file.
const OUT_DIR_ENV: &str = "TRIPLETCV_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "tripletcv",
    version,
    about = "Triplet-like correlation symmetry of CV entangled light and Bell states"
)]
struct Cli {
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-qubit Bell-state commands.
    #[command(subcommand)]
    Bell(BellCommand),
    /// Continuous-variable experiment commands.
    #[command(subcommand)]
    Cv(CvCommand),
    /// Compare analytic variances with Monte-Carlo estimates.
    Validate {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Add a case with an unphysical covariance, which must be rejected.
        #[arg(long)]
        tamper: bool,
    },
}

#[derive(Subcommand)]
enum BellCommand {
    /// Invariance of the Bell states under local rotations.
    Table,
    /// Direction the second qubit is found along when the first is found along n.
    Correlate {
        #[arg(long, value_parser = parse_label)]
        state: BellLabel,
        #[arg(long, allow_hyphen_values = true)]
        nx: f64,
        #[arg(long, allow_hyphen_values = true)]
        ny: f64,
        #[arg(long, allow_hyphen_values = true)]
        nz: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fixed,
    Mirror,
}

#[derive(Subcommand)]
enum CvCommand {
    /// Combined-noise sweep over dark-plane angles (degrees).
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, allow_hyphen_values = true)]
        phi2: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        stop: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Individual-beam noise and sum/difference correlations.
    Fig2 {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_label(s: &str) -> Result<BellLabel, String> {
    s.parse().map_err(|e: tripletcv::Error| e.to_string())
}

fn run(command: Command) -> (CommandResult, &'static str) {
    match command {
        Command::Bell(BellCommand::Table) => (cmd_bell_table(), "bell_table.txt"),
        Command::Bell(BellCommand::Correlate { state, nx, ny, nz }) => {
            (cmd_bell_correlate(state, nx, ny, nz), "bell_correlate.csv")
        }
        Command::Cv(CvCommand::Sweep {
            config,
            mode,
            phi2,
            start,
            stop,
            step,
        }) => {
            let mode = match mode {
                ModeArg::Fixed => SweepMode::FixedPhi2,
                ModeArg::Mirror => SweepMode::Mirror,
            };
            let args = SweepArgs::resolve(mode, phi2, start, stop, step);
            (cmd_cv_sweep(&config, &args), "cv_sweep.csv")
        }
        Command::Cv(CvCommand::Fig2 { config }) => (cmd_reproduce_fig2(&config), "cv_fig2.csv"),
        Command::Validate {
            seed,
            samples,
            tamper,
        } => (cmd_validate(seed, samples, tamper), "validate.csv"),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CommandError> {
    std::fs::write(path, text)
        .map_err(|e| CommandError::usage(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (result, file_name) = run(cli.command);
    let output = match result {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code);
        }
    };
    print!("{}", output.text);
    let mut targets = Vec::new();
    if let Some(path) = cli.out {
        targets.push(path);
    }
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
        targets.push(PathBuf::from(dir).join(file_name));
    }
    for path in targets {
        if let Err(e) = write_file(&path, &output.text) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if output.exit_code != 0 {
        eprintln!("validation failed");
    }
    ExitCode::from(output.exit_code)
}

//! Configuration files, output tables and the command implementations.

mod commands;
mod config_file;
mod manifest;
mod table;
mod validation;

pub use commands::{
    cmd_bell_correlate, cmd_bell_table, cmd_cv_sweep, cmd_reproduce_fig2, cmd_validate,
    CommandError, CommandOutput, CommandResult, SweepArgs, DEFAULT_SAMPLES, DEFAULT_SEED, EXIT_OK,
    EXIT_USAGE, EXIT_VALIDATION, NORM_SLACK,
};
pub use config_file::{
    BeamsplitterSection, CombinerSection, ConfigError, ConfigFile, InputSection, MetadataSection,
    SignName,
};
pub use manifest::RunManifest;
pub use table::{format_sig, Cell, ResultTable};
pub use validation::{
    case_seed, random_case, reference_cases, run_check, run_suite, tampered_case, CheckOutcome,
    CheckStatus, ValidationCase, DEFAULT_RANDOM_CASES, MAX_Z_SCORE, MIN_SAMPLES,
};

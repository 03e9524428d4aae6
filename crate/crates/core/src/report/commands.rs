//! The `tripletcv` subcommands as plain functions returning rendered output.
//!
//! Exit codes: `0` success, `1` validation failure, `2` usage or configuration error.

use std::fmt::Write as _;
use std::path::Path;

use super::config_file::{ConfigError, ConfigFile};
use super::manifest::RunManifest;
use super::table::{format_sig, Cell, ResultTable};
use super::validation::{
    random_case, reference_cases, run_suite, tampered_case, CheckStatus, DEFAULT_RANDOM_CASES,
    MAX_Z_SCORE, MIN_SAMPLES,
};
use crate::bell::{
    correlated_direction, invariance_table, mirror_matrix, BellLabel, BlochVector, LocalTransform,
};
use crate::error::Error;
use crate::experiment::{fig2_summary, sweep, AngleRange, SweepMode};
use crate::gaussian::from_db;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Direction norms within this distance of one are rescaled with a warning.
pub const NORM_SLACK: f64 = 1e-6;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: u8,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self {
            text,
            exit_code: EXIT_OK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CommandError {
    pub exit_code: u8,
    pub message: String,
}

impl CommandError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        Self::usage(e.0)
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::InvalidArgument(_) | Error::DegenerateInput(_) => EXIT_USAGE,
            Error::InvalidState(_) | Error::InternalConsistency(_) => EXIT_VALIDATION,
        };
        Self {
            exit_code,
            message: e.to_string(),
        }
    }
}

pub type CommandResult = std::result::Result<CommandOutput, CommandError>;

/// Invariance of the four Bell states under the six local transforms, followed by
/// the lowest-fidelity angle found for every non-invariant entry.
pub fn cmd_bell_table() -> CommandResult {
    let table = invariance_table();
    let mut out = RunManifest::new("bell table").render_comments();
    let header: Vec<String> = LocalTransform::COLUMNS
        .iter()
        .map(ToString::to_string)
        .collect();
    let _ = writeln!(out, "# columns: {}", header.join(" "));
    for (label, row) in BellLabel::ALL.iter().zip(&table.entries) {
        let cells: Vec<&str> = row
            .iter()
            .map(|e| if e.invariant { "yes" } else { "no" })
            .collect();
        let _ = writeln!(out, "{label}: {}", cells.join(" "));
    }
    for (label, row) in BellLabel::ALL.iter().zip(&table.entries) {
        for (transform, entry) in LocalTransform::COLUMNS.iter().zip(row) {
            if !entry.invariant {
                let _ = writeln!(
                    out,
                    "witness {label} {transform}: alpha={} fidelity={}",
                    format_sig(entry.worst.alpha),
                    format_sig(entry.worst.fidelity)
                );
            }
        }
    }
    Ok(CommandOutput::ok(out))
}

/// Correlated direction of the second qubit when the first is found along `n`,
/// plus the fitted correlation map.
pub fn cmd_bell_correlate(label: BellLabel, nx: f64, ny: f64, nz: f64) -> CommandResult {
    let norm = (nx * nx + ny * ny + nz * nz).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(CommandError::usage(
            "direction must be a finite, non-zero vector",
        ));
    }
    if (norm - 1.0).abs() > NORM_SLACK {
        return Err(CommandError::usage(format!(
            "direction must be a unit vector, got norm {norm}"
        )));
    }
    if (norm - 1.0).abs() > 0.0 {
        log::warn!("direction norm {norm} rescaled to 1");
    }
    let n = BlochVector::normalized(nx, ny, nz)?;
    let m = correlated_direction(label, &n)?;
    let map = mirror_matrix(label)?;

    let mut table = ResultTable::new(["quantity", "x", "y", "z"]);
    let row = |name: &str, v: [f64; 3]| {
        let mut cells = vec![Cell::from(name)];
        cells.extend(v.iter().map(|&x| Cell::from(flush_round_off(x))));
        cells
    };
    table.push(row("input", [n.x(), n.y(), n.z()]));
    table.push(row("correlated", [m.x(), m.y(), m.z()]));
    for i in 0..3 {
        let r = map.row(i);
        table.push(row(&format!("map_row{}", i + 1), [r[0], r[1], r[2]]));
    }
    let manifest = RunManifest::new(format!(
        "bell correlate --state {label} --nx {} --ny {} --nz {}",
        format_sig(nx),
        format_sig(ny),
        format_sig(nz)
    ));
    Ok(CommandOutput::ok(table.to_csv(&manifest)))
}

/// Zeroes floating-point residue so exact geometric results print exactly.
fn flush_round_off(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepArgs {
    pub mode: SweepMode,
    pub phi2_deg: f64,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepArgs {
    /// Defaults per mode, overridden by any explicit flag.
    pub fn resolve(
        mode: SweepMode,
        phi2: Option<f64>,
        start: Option<f64>,
        stop: Option<f64>,
        step: Option<f64>,
    ) -> Self {
        let (d_start, d_stop) = match mode {
            SweepMode::FixedPhi2 => (-90.0, 90.0),
            SweepMode::Mirror => (0.0, 90.0),
        };
        Self {
            mode,
            phi2_deg: phi2.unwrap_or(45.0),
            start: start.unwrap_or(d_start),
            stop: stop.unwrap_or(d_stop),
            step: step.unwrap_or(5.0),
        }
    }
}

fn load_config(path: &Path) -> Result<(ConfigFile, RunManifestBase), CommandError> {
    let cfg = ConfigFile::load(path)?;
    Ok((
        cfg,
        RunManifestBase {
            digest: cfg.digest(),
            metadata: cfg.metadata.entries(),
        },
    ))
}

struct RunManifestBase {
    digest: String,
    metadata: Vec<(String, String)>,
}

impl RunManifestBase {
    fn manifest(&self, command: String) -> RunManifest {
        let mut m = RunManifest::new(command);
        m.config_digest = Some(self.digest.clone());
        m.metadata = self.metadata.clone();
        m
    }
}

pub fn cmd_cv_sweep(config_path: &Path, args: &SweepArgs) -> CommandResult {
    let (cfg, base) = load_config(config_path)?;
    let range = AngleRange::new(args.start, args.stop, args.step)?;
    let result = sweep(&cfg.experiment(), args.mode, args.phi2_deg, &range)?;

    let mut table = ResultTable::new(["phi1_deg", "phi2_deg", "variance_linear", "variance_db"]);
    for r in &result.rows {
        table.push(vec![
            r.phi1_deg.into(),
            r.phi2_deg.into(),
            r.variance_linear.into(),
            r.variance_db.into(),
        ]);
    }
    let mode = match args.mode {
        SweepMode::FixedPhi2 => format!("fixed --phi2 {}", format_sig(args.phi2_deg)),
        SweepMode::Mirror => "mirror".to_string(),
    };
    let manifest = base
        .manifest(format!(
            "cv sweep --mode {mode} --start {} --stop {} --step {}",
            format_sig(args.start),
            format_sig(args.stop),
            format_sig(args.step)
        ))
        .with("shot_noise_variance", format_sig(result.shot_reference));
    Ok(CommandOutput::ok(table.to_csv(&manifest)))
}

pub fn cmd_reproduce_fig2(config_path: &Path) -> CommandResult {
    let (cfg, base) = load_config(config_path)?;
    let s = fig2_summary(&cfg.experiment())?;
    let mut table = ResultTable::new(["quantity", "value_db", "value_linear"]);
    for (name, db) in [
        ("individual_c", s.individual_c_db),
        ("individual_d", s.individual_d_db),
        ("sum", s.sum_db),
        ("difference", s.difference_db),
    ] {
        table.push(vec![name.into(), db.into(), from_db(db).into()]);
    }
    Ok(CommandOutput::ok(
        table.to_csv(&base.manifest("cv fig2".into())),
    ))
}

/// Analytic variances against Monte-Carlo estimates; exit code 1 if any check
/// misses by more than [`MAX_Z_SCORE`] standard errors or meets an invalid state.
pub fn cmd_validate(seed: u64, n_samples: usize, tamper: bool) -> CommandResult {
    if n_samples < MIN_SAMPLES {
        return Err(CommandError::usage(format!(
            "--samples must be at least {MIN_SAMPLES}, got {n_samples}"
        )));
    }
    let mut cases = (0..DEFAULT_RANDOM_CASES)
        .map(|i| random_case(seed, i))
        .collect::<crate::Result<Vec<_>>>()?;
    cases.extend(reference_cases()?);
    if tamper {
        cases.push(tampered_case()?);
    }
    let outcomes = run_suite(&cases, n_samples, seed)?;

    let mut table = ResultTable::new([
        "check",
        "n_modes",
        "analytic",
        "sampled",
        "standard_error",
        "z_score",
        "status",
    ]);
    for o in &outcomes {
        let status = match &o.status {
            CheckStatus::Pass => "pass".to_string(),
            CheckStatus::Fail => "fail".to_string(),
            CheckStatus::InvalidState(reason) => {
                format!("invalid-state: {}", reason.replace(',', ";"))
            }
        };
        table.push(vec![
            o.name.as_str().into(),
            (o.n_modes as f64).into(),
            o.analytic.into(),
            o.sampled.into(),
            o.standard_error.into(),
            o.z_score.into(),
            status.into(),
        ]);
    }
    let failures = outcomes.iter().filter(|o| !o.passed()).count();
    let mut manifest = RunManifest::new(format!(
        "validate --samples {n_samples}{}",
        if tamper { " --tamper" } else { "" }
    ))
    .with("max_z_score", MAX_Z_SCORE)
    .with("checks", outcomes.len())
    .with("failures", failures);
    manifest.seed = Some(seed);
    Ok(CommandOutput {
        text: table.to_csv(&manifest),
        exit_code: if failures == 0 {
            EXIT_OK
        } else {
            EXIT_VALIDATION
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_table_rows() {
        let out = cmd_bell_table().unwrap().text;
        assert!(out.contains("\nPsi-: yes yes yes no no no\n"));
        assert!(out.contains("\nPhi+: no yes no yes no yes\n"));
        let witnesses = out.lines().filter(|l| l.starts_with("witness ")).count();
        assert_eq!(witnesses, 12);
    }

    #[test]
    fn correlate_singlet_inverts() {
        let out = cmd_bell_correlate(BellLabel::PsiMinus, 0.6, 0.8, 0.0)
            .unwrap()
            .text;
        assert!(out.contains("\ncorrelated,-0.6,-0.8,0\n"), "{out}");
        assert!(out.contains("\nmap_row1,-1,0,0\n"), "{out}");
    }

    #[test]
    fn correlate_rejects_bad_directions() {
        assert_eq!(
            cmd_bell_correlate(BellLabel::PsiPlus, 0.0, 0.0, 0.0)
                .unwrap_err()
                .exit_code,
            EXIT_USAGE
        );
        assert_eq!(
            cmd_bell_correlate(BellLabel::PsiPlus, 0.0, 0.0, 2.0)
                .unwrap_err()
                .exit_code,
            EXIT_USAGE
        );
        let out = cmd_bell_correlate(BellLabel::PsiPlus, 0.0, 0.0, 1.0 + 5e-7)
            .unwrap()
            .text;
        assert!(out.contains("\ncorrelated,0,0,-1\n"), "{out}");
    }

    #[test]
    fn validate_rejects_few_samples() {
        assert_eq!(
            cmd_validate(1, 100, false).unwrap_err().exit_code,
            EXIT_USAGE
        );
    }

    #[test]
    fn missing_config_is_usage_error() {
        let err = cmd_reproduce_fig2(Path::new("/nonexistent/tripletcv.config")).unwrap_err();
        assert_eq!(err.exit_code, EXIT_USAGE);
    }
}

//! Analytic-versus-sampled variance checks behind `tripletcv validate`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiment::{entangle, ExperimentConfig, KerrInputSpec, OutputMode, StokesObservable};
use crate::gaussian::{
    apply_beamsplitter, apply_loss, apply_phase_rotation, apply_squeezer, sample_monte_carlo,
    variance, BeamsplitterSpec, GaussianState, LossChannel, QuadratureObservable, SqueezerSpec,
    SymplecticOp,
};

/// A check fails when the sampled variance is more than this many standard errors
/// away from the analytic one.
pub const MAX_Z_SCORE: f64 = 5.0;

pub const DEFAULT_RANDOM_CASES: usize = 50;

/// Fewer samples than this make the standard-error estimate itself unreliable.
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone)]
pub struct ValidationCase {
    pub name: String,
    pub state: GaussianState,
    pub observable: QuadratureObservable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The state was rejected before sampling.
    InvalidState(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub n_modes: usize,
    pub analytic: f64,
    pub sampled: f64,
    pub standard_error: f64,
    pub z_score: f64,
    pub status: CheckStatus,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Per-case seed derived from the run seed, independent of evaluation order.
pub fn case_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// A random physical state reached from the vacuum by 1 to 8 random operations,
/// with a random observable of 1 to 3 rotated-quadrature terms.
pub fn random_case(seed: u64, index: usize) -> Result<ValidationCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, index));
    let n_modes = rng.random_range(1..=3);
    let mut state = GaussianState::vacuum(n_modes)?;
    for _ in 0..rng.random_range(1..=8) {
        let mode = rng.random_range(0..n_modes);
        state = match rng.random_range(0..5) {
            0 => apply_squeezer(
                &state,
                &SqueezerSpec {
                    mode,
                    r: rng.random_range(0.0..1.2),
                    angle: rng.random_range(0.0..PI),
                },
            )?,
            1 => apply_phase_rotation(&state, mode, rng.random_range(0.0..2.0 * PI))?,
            2 if n_modes > 1 => {
                let other = (mode + rng.random_range(1..n_modes)) % n_modes;
                apply_beamsplitter(
                    &state,
                    &BeamsplitterSpec {
                        modes: (mode, other),
                        transmittance: rng.random_range(0.0..=1.0),
                        relative_phase: rng.random_range(0.0..2.0 * PI),
                    },
                )?
            }
            3 => apply_loss(
                &state,
                &LossChannel {
                    mode,
                    transmittance: rng.random_range(0.0..=1.0),
                },
            )?,
            _ => SymplecticOp::displacement(
                n_modes,
                mode,
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            )?
            .apply(&state)?,
        };
    }
    let mut obs = QuadratureObservable::quadrature(
        rng.random_range(0..n_modes),
        rng.random_range(0.0..2.0 * PI),
    );
    for _ in 1..rng.random_range(1..=3) {
        obs = obs.plus(
            rng.random_range(0..n_modes),
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(-1.5..1.5),
        );
    }
    Ok(ValidationCase {
        name: format!("random_{index:02}"),
        state,
        observable: obs,
    })
}

/// Fixed cases on the measured setup and on ideal inputs.
pub fn reference_cases() -> Result<Vec<ValidationCase>> {
    let measured = ExperimentConfig::measured();
    let ideal = ExperimentConfig::ideal(KerrInputSpec {
        squeezing_db: -4.6,
        antisqueezing_db: 4.6,
        theta_sq: 4f64.to_radians(),
    });
    let mut cases = Vec::new();
    for (tag, config) in [("measured", &measured), ("ideal", &ideal)] {
        let state = entangle(config)?;
        let sq = config.input_a.theta_sq;
        let asq = config.input_a.theta_asq();
        let pair = |angle: f64, weight: f64| {
            StokesObservable {
                mode: OutputMode::C,
                angle,
            }
            .to_quadrature()
            .plus(OutputMode::D.index(), angle, weight)
        };
        cases.push(ValidationCase {
            name: format!("{tag}_sum"),
            state: state.clone(),
            observable: pair(sq, 1.0),
        });
        cases.push(ValidationCase {
            name: format!("{tag}_difference"),
            state: state.clone(),
            observable: pair(asq, -1.0),
        });
        cases.push(ValidationCase {
            name: format!("{tag}_individual_c"),
            state,
            observable: StokesObservable {
                mode: OutputMode::C,
                angle: sq,
            }
            .to_quadrature(),
        });
    }
    cases.push(ValidationCase {
        name: "vacuum".into(),
        state: GaussianState::vacuum(2)?,
        observable: QuadratureObservable::quadrature(0, 0.3).plus(1, 1.1, -1.0),
    });
    Ok(cases)
}

/// A state whose covariance has a negative eigenvalue.
pub fn tampered_case() -> Result<ValidationCase> {
    let cov = DMatrix::from_row_slice(2, 2, &[0.25, 0.5, 0.5, 0.25]);
    Ok(ValidationCase {
        name: "tampered".into(),
        state: GaussianState::from_raw(DVector::zeros(2), cov)?,
        observable: QuadratureObservable::quadrature(0, 0.0),
    })
}

pub fn run_check(case: &ValidationCase, n_samples: usize, seed: u64) -> Result<CheckOutcome> {
    let n_modes = case.state.n_modes();
    let invalid = |reason: String| CheckOutcome {
        name: case.name.clone(),
        n_modes,
        analytic: f64::NAN,
        sampled: f64::NAN,
        standard_error: f64::NAN,
        z_score: f64::NAN,
        status: CheckStatus::InvalidState(reason),
    };
    if let Err(Error::InvalidState(reason)) = case.state.check_physical() {
        return Ok(invalid(reason));
    }
    let analytic = variance(&case.state, &case.observable)?;
    let stats = match sample_monte_carlo(&case.state, &case.observable, n_samples, seed) {
        Ok(s) => s,
        Err(Error::InvalidState(reason)) => return Ok(invalid(reason)),
        Err(e) => return Err(e),
    };
    let z_score = stats.variance_z_score(analytic);
    // A zero-variance observable samples exactly; any discrepancy is then a failure.
    let pass = if stats.standard_error > 0.0 {
        z_score <= MAX_Z_SCORE
    } else {
        (stats.variance - analytic).abs() <= 1e-12 * analytic.abs().max(1.0)
    };
    Ok(CheckOutcome {
        name: case.name.clone(),
        n_modes,
        analytic,
        sampled: stats.variance,
        standard_error: stats.standard_error,
        z_score,
        status: if pass {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
    })
}

/// Runs every case in parallel; results come back in case order.
pub fn run_suite(
    cases: &[ValidationCase],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<CheckOutcome>> {
    cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| run_check(case, n_samples, case_seed(seed.rotate_left(17), i)))
        .collect()
}

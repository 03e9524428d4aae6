use rayon::prelude::*;

use super::config::{build_kerr_state, CombineSign, CombinerSpec, ExperimentConfig};
use super::stokes::{OutputMode, StokesObservable};
use crate::error::{invalid_arg, Error, Result};
use crate::gaussian::{
    apply_beamsplitter, apply_loss, covariance, to_db, variance, BeamsplitterSpec, GaussianState,
    LossChannel, QuadratureObservable, VACUUM_VARIANCE,
};

/// Joint state of the output beams C (mode 0) and D (mode 1).
///
/// Each input passes a virtual vacuum beamsplitter of amplitude transmittance `V`
/// (power transmittance `V²`) to account for imperfect interference, and the two are
/// then mixed on the entangling beamsplitter.
pub fn entangle(config: &ExperimentConfig) -> Result<GaussianState> {
    config.validate()?;
    let a = build_kerr_state(&config.input_a)?;
    let b = build_kerr_state(&config.input_b)?;
    let mut state = a.product(&b);
    let eta = config.visibility * config.visibility;
    for mode in 0..2 {
        state = apply_loss(
            &state,
            &LossChannel {
                mode,
                transmittance: eta,
            },
        )?;
    }
    apply_beamsplitter(
        &state,
        &BeamsplitterSpec {
            modes: (0, 1),
            transmittance: config.bs_transmittance,
            relative_phase: config.relative_phase,
        },
    )
}

/// Shot-noise level of `S_C ± g·S_D`: `(1 + g²)/4`, i.e. `0.5` for unit gain.
pub fn shot_reference(gain: f64) -> f64 {
    (1.0 + gain * gain) * VACUUM_VARIANCE
}

/// `S_C(θ₁) ± g·S_D(θ₂)` as a quadrature observable.
pub fn combined_observable(
    obs_c: &StokesObservable,
    obs_d: &StokesObservable,
    comb: &CombinerSpec,
) -> Result<QuadratureObservable> {
    if obs_c.mode != OutputMode::C || obs_d.mode != OutputMode::D {
        return invalid_arg("expected one observable on beam C and one on beam D");
    }
    Ok(obs_c.to_quadrature().plus(
        obs_d.mode.index(),
        obs_d.angle,
        comb.sign.factor() * comb.gain,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub variance_linear: f64,
    pub variance_db: f64,
}

/// Variance of the combined photocurrent, normalized to its shot noise.
pub fn measure_correlation(
    state: &GaussianState,
    obs_c: &StokesObservable,
    obs_d: &StokesObservable,
    comb: &CombinerSpec,
) -> Result<Correlation> {
    if state.n_modes() != 2 {
        return invalid_arg(format!(
            "expected a two-mode state, got {} modes",
            state.n_modes()
        ));
    }
    let obs = combined_observable(obs_c, obs_d, comb)?;
    let variance_linear = variance(state, &obs)?;
    let variance_db = to_db(variance_linear, shot_reference(comb.gain))?;
    Ok(Correlation {
        variance_linear,
        variance_db,
    })
}

/// Which angle pairs a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMode {
    /// `φ₂` held fixed while `φ₁` is scanned.
    FixedPhi2,
    /// `−φ₁ = φ₂ = φ` scanned together.
    Mirror,
}

/// Scan range in degrees; `step` is a magnitude and the direction follows
/// `stop − start`. Both ends are included when the step divides the span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AngleRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return invalid_arg(format!("sweep step must be positive, got {step}"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return invalid_arg("sweep bounds must be finite");
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let dir = if span < 0.0 { -1.0 } else { 1.0 };
        let count = (span.abs() / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start + dir * self.step * k as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub phi1_deg: f64,
    pub phi2_deg: f64,
    pub variance_linear: f64,
    pub variance_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub shot_reference: f64,
}

impl SweepResult {
    /// Row with the lowest variance (first one on ties).
    pub fn argmin(&self) -> Option<&SweepRow> {
        self.rows.iter().reduce(|best, r| {
            if r.variance_linear < best.variance_linear {
                r
            } else {
                best
            }
        })
    }
}

/// Reference angle for a combination: the squeezed direction for sums and the
/// antisqueezed direction for differences.
pub fn sweep_reference(config: &ExperimentConfig) -> f64 {
    match config.combiner.sign {
        CombineSign::Sum => config.input_a.theta_sq,
        CombineSign::Difference => config.input_a.theta_asq(),
    }
}

/// Correlation of `S_C(ref + φ₁)` and `S_D(ref + φ₂)` over an angle scan.
///
/// In [`SweepMode::FixedPhi2`] the range scans `φ₁`; in [`SweepMode::Mirror`] it
/// scans `φ = φ₂ = −φ₁` and `phi2_fixed_deg` is ignored.
pub fn sweep(
    config: &ExperimentConfig,
    mode: SweepMode,
    phi2_fixed_deg: f64,
    range: &AngleRange,
) -> Result<SweepResult> {
    AngleRange::new(range.start, range.stop, range.step)?;
    let state = entangle(config)?;
    let reference = sweep_reference(config);
    let comb = config.combiner;
    let pairs: Vec<(f64, f64)> = range
        .points()
        .into_iter()
        .map(|p| match mode {
            SweepMode::FixedPhi2 => (p, phi2_fixed_deg),
            SweepMode::Mirror => (-p, p),
        })
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(phi1_deg, phi2_deg)| {
            let c = StokesObservable::relative(OutputMode::C, reference, phi1_deg.to_radians());
            let d = StokesObservable::relative(OutputMode::D, reference, phi2_deg.to_radians());
            let corr = measure_correlation(&state, &c, &d, &comb)?;
            Ok(SweepRow {
                phi1_deg,
                phi2_deg,
                variance_linear: corr.variance_linear,
                variance_db: corr.variance_db,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        rows,
        shot_reference: shot_reference(comb.gain),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainOptimum {
    pub gain: f64,
    pub variance: f64,
}

/// Gain minimizing `Var(S_C ± g·S_D)`: `g* = ∓Cov(S_C, S_D)/Var(S_D)`.
pub fn optimize_gain(
    state: &GaussianState,
    obs_c: &StokesObservable,
    obs_d: &StokesObservable,
    sign: CombineSign,
) -> Result<GainOptimum> {
    let qc = obs_c.to_quadrature();
    let qd = obs_d.to_quadrature();
    let var_c = variance(state, &qc)?;
    let var_d = variance(state, &qd)?;
    if !(var_d > 0.0) {
        return Err(Error::DegenerateInput("Var(S_D) is zero".into()));
    }
    let cov = covariance(state, &qc, &qd)?;
    let s = sign.factor();
    let gain = -s * cov / var_d;
    let variance = var_c + 2.0 * s * gain * cov + gain * gain * var_d;
    Ok(GainOptimum { gain, variance })
}

/// Single-beam Stokes noise in dB relative to shot noise, for each angle (radians).
pub fn individual_noise(
    state: &GaussianState,
    mode: OutputMode,
    angles: &[f64],
) -> Result<Vec<(f64, f64)>> {
    angles
        .iter()
        .map(|&angle| {
            let v = variance(state, &StokesObservable { mode, angle }.to_quadrature())?;
            Ok((angle, to_db(v, VACUUM_VARIANCE)?))
        })
        .collect()
}

/// The four headline numbers of the entangled-pair noise measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Summary {
    /// `S_C(θ_sq)` noise, dB re shot noise.
    pub individual_c_db: f64,
    /// `S_D(θ_sq)` noise, dB re shot noise.
    pub individual_d_db: f64,
    /// `Var(S_C(θ_sq) + S_D(θ_sq))`, dB re two-mode shot noise.
    pub sum_db: f64,
    /// `Var(S_C(θ_asq) − S_D(θ_asq))`, dB re two-mode shot noise.
    pub difference_db: f64,
}

pub fn fig2_summary(config: &ExperimentConfig) -> Result<Fig2Summary> {
    let state = entangle(config)?;
    let sq = config.input_a.theta_sq;
    let asq = config.input_a.theta_asq();
    let c = individual_noise(&state, OutputMode::C, &[sq])?[0].1;
    let d = individual_noise(&state, OutputMode::D, &[sq])?[0].1;
    let at = |mode, angle| StokesObservable { mode, angle };
    let sum = measure_correlation(
        &state,
        &at(OutputMode::C, sq),
        &at(OutputMode::D, sq),
        &CombinerSpec::sum(),
    )?;
    let diff = measure_correlation(
        &state,
        &at(OutputMode::C, asq),
        &at(OutputMode::D, asq),
        &CombinerSpec::difference(),
    )?;
    Ok(Fig2Summary {
        individual_c_db: c,
        individual_d_db: d,
        sum_db: sum.variance_db,
        difference_db: diff.variance_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::KerrInputSpec;
    use approx::assert_relative_eq;

    fn ideal_46() -> ExperimentConfig {
        ExperimentConfig::ideal(KerrInputSpec {
            squeezing_db: -4.6,
            antisqueezing_db: 22.3,
            theta_sq: 4f64.to_radians(),
        })
    }

    #[test]
    fn ideal_sum_equals_input_squeezing() {
        let cfg = ideal_46();
        let st = entangle(&cfg).unwrap();
        let sq = cfg.input_a.theta_sq;
        let c = StokesObservable {
            mode: OutputMode::C,
            angle: sq,
        };
        let d = StokesObservable {
            mode: OutputMode::D,
            angle: sq,
        };
        let corr = measure_correlation(&st, &c, &d, &CombinerSpec::sum()).unwrap();
        assert_relative_eq!(
            corr.variance_linear / 0.5,
            10f64.powf(-0.46),
            epsilon = 1e-12
        );
    }

    #[test]
    fn vacuum_inputs_give_vacuum_outputs() {
        let vac = KerrInputSpec {
            squeezing_db: 0.0,
            antisqueezing_db: 0.0,
            theta_sq: 0.0,
        };
        for t in [0.1, 0.5, 0.93] {
            let mut cfg = ExperimentConfig::ideal(vac);
            cfg.bs_transmittance = t;
            let st = entangle(&cfg).unwrap();
            assert_relative_eq!(
                st.cov(),
                GaussianState::vacuum(2).unwrap().cov(),
                epsilon = 1e-15
            );
            let c = StokesObservable {
                mode: OutputMode::C,
                angle: 0.4,
            };
            let d = StokesObservable {
                mode: OutputMode::D,
                angle: -1.0,
            };
            let corr = measure_correlation(&st, &c, &d, &CombinerSpec::difference()).unwrap();
            assert!(corr.variance_db.abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_mirror_pairs_are_phase_independent() {
        let cfg = ideal_46();
        let st = entangle(&cfg).unwrap();
        let asq = cfg.input_a.theta_asq();
        let levels: Vec<f64> = (0..=18)
            .map(|k| {
                let phi = (5.0 * k as f64).to_radians();
                let c = StokesObservable::relative(OutputMode::C, asq, phi);
                let d = StokesObservable::relative(OutputMode::D, asq, -phi);
                measure_correlation(&st, &c, &d, &CombinerSpec::difference())
                    .unwrap()
                    .variance_db
            })
            .collect();
        for l in &levels {
            assert!((l - levels[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn measure_rejects_swapped_modes() {
        let st = GaussianState::vacuum(2).unwrap();
        let c = StokesObservable {
            mode: OutputMode::D,
            angle: 0.0,
        };
        let d = StokesObservable {
            mode: OutputMode::C,
            angle: 0.0,
        };
        assert!(measure_correlation(&st, &c, &d, &CombinerSpec::sum()).is_err());
        let one = GaussianState::vacuum(1).unwrap();
        assert!(measure_correlation(&one, &d, &c, &CombinerSpec::sum()).is_err());
    }

    #[test]
    fn range_points() {
        let r = AngleRange::new(0.0, -90.0, 5.0).unwrap();
        let p = r.points();
        assert_eq!(p.len(), 19);
        assert_eq!(p[0], 0.0);
        assert_eq!(*p.last().unwrap(), -90.0);
        assert_eq!(
            AngleRange::new(10.0, 10.0, 1.0).unwrap().points(),
            vec![10.0]
        );
        assert!(AngleRange::new(0.0, 1.0, 0.0).is_err());
        assert!(AngleRange::new(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn sweep_rejects_bad_step() {
        let bad = AngleRange {
            start: 0.0,
            stop: 90.0,
            step: 0.0,
        };
        assert!(sweep(&ExperimentConfig::measured(), SweepMode::Mirror, 0.0, &bad).is_err());
    }

    #[test]
    fn fixed_sweep_minimum_at_mirror_angle() {
        let range = AngleRange::new(0.0, -90.0, 5.0).unwrap();
        let res = sweep(
            &ExperimentConfig::measured(),
            SweepMode::FixedPhi2,
            45.0,
            &range,
        )
        .unwrap();
        assert_eq!(res.argmin().unwrap().phi1_deg, -45.0);
    }

    #[test]
    fn sweep_rows_are_consistent_in_db() {
        let range = AngleRange::new(0.0, 90.0, 15.0).unwrap();
        let res = sweep(
            &ExperimentConfig::measured(),
            SweepMode::Mirror,
            0.0,
            &range,
        )
        .unwrap();
        for r in &res.rows {
            assert_relative_eq!(
                r.variance_db,
                to_db(r.variance_linear, res.shot_reference).unwrap()
            );
            assert_eq!(r.phi1_deg, -r.phi2_deg);
        }
    }

    #[test]
    fn optimal_gain_closed_form_for_ideal_pair() {
        let cfg = ideal_46();
        let st = entangle(&cfg).unwrap();
        let sq = cfg.input_a.theta_sq;
        let c = StokesObservable {
            mode: OutputMode::C,
            angle: sq,
        };
        let d = StokesObservable {
            mode: OutputMode::D,
            angle: sq,
        };
        let opt = optimize_gain(&st, &c, &d, CombineSign::Sum).unwrap();
        let (s, n) = (
            cfg.input_a.squeezed_variance(),
            cfg.input_a.antisqueezed_variance(),
        );
        assert_relative_eq!(opt.gain, (n - s) / (n + s), epsilon = 1e-9);
        assert!(opt.gain < 1.0 && opt.gain > 0.99);
    }

    #[test]
    fn optimal_gain_approaches_one_with_large_antisqueezing() {
        let mut last = 0.0;
        for asq in [10.0, 20.0, 30.0, 40.0] {
            let cfg = ExperimentConfig::ideal(KerrInputSpec {
                squeezing_db: -4.6,
                antisqueezing_db: asq,
                theta_sq: 0.0,
            });
            let st = entangle(&cfg).unwrap();
            let c = StokesObservable {
                mode: OutputMode::C,
                angle: 0.0,
            };
            let d = StokesObservable {
                mode: OutputMode::D,
                angle: 0.0,
            };
            let g = optimize_gain(&st, &c, &d, CombineSign::Sum).unwrap().gain;
            assert!(g > last);
            last = g;
        }
        assert!((1.0 - last).abs() < 1e-4);
    }

    #[test]
    fn uncorrelated_modes_give_zero_gain() {
        let st = GaussianState::vacuum(2).unwrap();
        let c = StokesObservable {
            mode: OutputMode::C,
            angle: 0.0,
        };
        let d = StokesObservable {
            mode: OutputMode::D,
            angle: 0.0,
        };
        let opt = optimize_gain(&st, &c, &d, CombineSign::Difference).unwrap();
        assert_eq!(opt.gain, 0.0);
        assert_relative_eq!(opt.variance, 0.25);
    }

    #[test]
    fn paper_config_gain_improves_variance() {
        let cfg = ExperimentConfig::measured();
        let st = entangle(&cfg).unwrap();
        let asq = cfg.input_a.theta_asq();
        let c = StokesObservable {
            mode: OutputMode::C,
            angle: asq,
        };
        let d = StokesObservable {
            mode: OutputMode::D,
            angle: asq,
        };
        let opt = optimize_gain(&st, &c, &d, CombineSign::Difference).unwrap();
        let unit = measure_correlation(&st, &c, &d, &CombinerSpec::difference()).unwrap();
        assert!((opt.gain - 1.0).abs() > 1e-6);
        assert!(opt.variance <= unit.variance_linear);
        let at_opt = measure_correlation(
            &st,
            &c,
            &d,
            &CombinerSpec {
                gain: opt.gain,
                sign: CombineSign::Difference,
            },
        )
        .unwrap();
        assert_relative_eq!(at_opt.variance_linear, opt.variance, epsilon = 1e-12);
    }

    #[test]
    fn zero_variance_denominator_is_degenerate() {
        let cov = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            0.25, 0.25, 0.0, 1.0,
        ]));
        let st = GaussianState::from_raw(nalgebra::DVector::zeros(4), cov).unwrap();
        let c = StokesObservable {
            mode: OutputMode::C,
            angle: 0.0,
        };
        let d = StokesObservable {
            mode: OutputMode::D,
            angle: 0.0,
        };
        assert!(matches!(
            optimize_gain(&st, &c, &d, CombineSign::Sum),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn individual_noise_cases() {
        let vac = GaussianState::vacuum(2).unwrap();
        for (_, db) in individual_noise(&vac, OutputMode::D, &[0.0, 0.5, 1.0]).unwrap() {
            assert!(db.abs() < 1e-12);
        }
        let pure = ExperimentConfig::ideal(KerrInputSpec {
            squeezing_db: -6.0,
            antisqueezing_db: 6.0,
            theta_sq: 0.2,
        });
        let st = entangle(&pure).unwrap();
        let grid: Vec<f64> = (0..36).map(|k| (10.0 * k as f64).to_radians()).collect();
        let levels = individual_noise(&st, OutputMode::C, &grid).unwrap();
        for (_, db) in &levels {
            assert!((db - levels[0].1).abs() < 1e-12);
        }
    }
}

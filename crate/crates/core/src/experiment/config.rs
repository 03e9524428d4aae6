use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{invalid_arg, Result};
use crate::gaussian::{from_db, GaussianState, VACUUM_VARIANCE};

/// Slack on the uncertainty product when checking minimum-uncertainty inputs.
const PRODUCT_TOL: f64 = 1e-12;

/// A Kerr-squeezed input beam described by its measured noise levels.
///
/// The state is a squeezed thermal state: variance `10^{sq/10}/4` along
/// `X(theta_sq)` and `10^{asq/10}/4` along the orthogonal quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrInputSpec {
    /// Squeezed-quadrature noise relative to shot noise, dB (≤ 0).
    pub squeezing_db: f64,
    /// Anti-squeezed-quadrature noise relative to shot noise, dB (≥ 0).
    pub antisqueezing_db: f64,
    /// Skew of the squeezed quadrature from the amplitude quadrature, radians.
    pub theta_sq: f64,
}

impl KerrInputSpec {
    pub fn theta_asq(&self) -> f64 {
        self.theta_sq + FRAC_PI_2
    }

    pub fn validate(&self) -> Result<()> {
        let (sq, asq) = (self.squeezing_db, self.antisqueezing_db);
        if !sq.is_finite() || !asq.is_finite() || !self.theta_sq.is_finite() {
            return invalid_arg("Kerr input parameters must be finite");
        }
        if sq > 0.0 {
            return invalid_arg(format!("squeezing_db must be ≤ 0, got {sq}"));
        }
        if asq < 0.0 {
            return invalid_arg(format!("antisqueezing_db must be ≥ 0, got {asq}"));
        }
        // product of variances ≥ 1/16  ⇔  sq + asq ≥ 0 dB
        if from_db(sq) * from_db(asq) < 1.0 - PRODUCT_TOL {
            return invalid_arg(format!(
                "squeezing {sq} dB with antisqueezing {asq} dB violates the uncertainty bound"
            ));
        }
        Ok(())
    }

    pub fn squeezed_variance(&self) -> f64 {
        from_db(self.squeezing_db) * VACUUM_VARIANCE
    }

    pub fn antisqueezed_variance(&self) -> f64 {
        from_db(self.antisqueezing_db) * VACUUM_VARIANCE
    }
}

/// Single-mode state of a Kerr input.
pub fn build_kerr_state(spec: &KerrInputSpec) -> Result<GaussianState> {
    spec.validate()?;
    let (s, c) = spec.theta_sq.sin_cos();
    let u = Vector2::new(c, s);
    let v = Vector2::new(-s, c);
    let block: Matrix2<f64> = u * u.transpose() * spec.squeezed_variance()
        + v * v.transpose() * spec.antisqueezed_variance();
    let cov = DMatrix::from_iterator(2, 2, block.iter().copied());
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::new(DVector::zeros(2), cov)
}

/// Whether outputs are added or subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombineSign {
    Sum,
    Difference,
}

impl CombineSign {
    pub fn factor(self) -> f64 {
        match self {
            CombineSign::Sum => 1.0,
            CombineSign::Difference => -1.0,
        }
    }
}

/// Photocurrent combination `S_C ± g·S_D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinerSpec {
    pub gain: f64,
    pub sign: CombineSign,
}

impl CombinerSpec {
    pub fn sum() -> Self {
        Self {
            gain: 1.0,
            sign: CombineSign::Sum,
        }
    }

    pub fn difference() -> Self {
        Self {
            gain: 1.0,
            sign: CombineSign::Difference,
        }
    }
}

/// Full parameter set of the two-beam entanglement setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub input_a: KerrInputSpec,
    pub input_b: KerrInputSpec,
    /// Power transmittance of the entangling beamsplitter.
    pub bs_transmittance: f64,
    /// Relative phase of the two inputs at the beamsplitter, radians.
    pub relative_phase: f64,
    /// Interference visibility in `[0, 1]`.
    pub visibility: f64,
    pub combiner: CombinerSpec,
}

impl ExperimentConfig {
    /// The measured setup: −4.6/+22.3 dB and −4.5/+22.2 dB inputs squeezed at 4°,
    /// a 0.49 beamsplitter, 98 % visibility and a π/2 relative phase.
    pub fn measured() -> Self {
        let theta_sq = 4f64.to_radians();
        Self {
            input_a: KerrInputSpec {
                squeezing_db: -4.6,
                antisqueezing_db: 22.3,
                theta_sq,
            },
            input_b: KerrInputSpec {
                squeezing_db: -4.5,
                antisqueezing_db: 22.2,
                theta_sq,
            },
            bs_transmittance: 0.49,
            relative_phase: FRAC_PI_2,
            visibility: 0.98,
            combiner: CombinerSpec::difference(),
        }
    }

    /// Balanced splitter, perfect visibility and two identical inputs.
    pub fn ideal(input: KerrInputSpec) -> Self {
        Self {
            input_a: input,
            input_b: input,
            bs_transmittance: 0.5,
            relative_phase: FRAC_PI_2,
            visibility: 1.0,
            combiner: CombinerSpec::difference(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.input_a.validate()?;
        self.input_b.validate()?;
        if !(0.0..=1.0).contains(&self.bs_transmittance) {
            return invalid_arg(format!(
                "bs_transmittance must lie in [0, 1], got {}",
                self.bs_transmittance
            ));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return invalid_arg(format!(
                "visibility must lie in [0, 1], got {}",
                self.visibility
            ));
        }
        if !self.relative_phase.is_finite() || !self.combiner.gain.is_finite() {
            return invalid_arg("relative_phase and gain must be finite");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{variance, QuadratureObservable};
    use approx::assert_relative_eq;

    #[test]
    fn measured_input_levels() {
        let spec = ExperimentConfig::measured().input_a;
        let st = build_kerr_state(&spec).unwrap();
        let sq = variance(&st, &QuadratureObservable::quadrature(0, spec.theta_sq)).unwrap();
        let asq = variance(&st, &QuadratureObservable::quadrature(0, spec.theta_asq())).unwrap();
        assert_relative_eq!(sq / 0.25, 0.3467, epsilon = 1e-4);
        assert_relative_eq!(asq / 0.25, 169.8, epsilon = 0.05);
        // no cross-covariance in the squeezing frame
        let (s, c) = spec.theta_sq.sin_cos();
        let cross = QuadratureObservable::quadrature(0, spec.theta_sq);
        let w = cross.coefficients(1).unwrap();
        let v = nalgebra::DVector::from_vec(vec![-s, c]);
        assert!(w.dot(&(st.cov() * v)).abs() < 1e-12);
    }

    #[test]
    fn zero_db_is_vacuum() {
        for theta_sq in [0.0, 0.7] {
            let st = build_kerr_state(&KerrInputSpec {
                squeezing_db: 0.0,
                antisqueezing_db: 0.0,
                theta_sq,
            })
            .unwrap();
            assert_relative_eq!(
                st.cov(),
                GaussianState::vacuum(1).unwrap().cov(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn symmetric_levels_are_pure() {
        let st = build_kerr_state(&KerrInputSpec {
            squeezing_db: -3.01,
            antisqueezing_db: 3.01,
            theta_sq: 0.0,
        })
        .unwrap();
        assert_relative_eq!(st.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_unphysical_inputs() {
        let bad = |sq, asq| KerrInputSpec {
            squeezing_db: sq,
            antisqueezing_db: asq,
            theta_sq: 0.0,
        };
        assert!(build_kerr_state(&bad(-6.0, 3.0)).is_err());
        assert!(build_kerr_state(&bad(1.0, 3.0)).is_err());
        assert!(build_kerr_state(&bad(-1.0, -0.5)).is_err());
    }

    #[test]
    fn config_validation() {
        ExperimentConfig::measured().validate().unwrap();
        let mut c = ExperimentConfig::measured();
        c.visibility = 1.2;
        assert!(c.validate().is_err());
        c = ExperimentConfig::measured();
        c.bs_transmittance = -0.1;
        assert!(c.validate().is_err());
    }
}

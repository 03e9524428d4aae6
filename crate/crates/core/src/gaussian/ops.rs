use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use super::state::{symplectic_form, GaussianState, VACUUM_VARIANCE};
use crate::error::{invalid_arg, Error, Result};

/// Tolerance on `‖SΩSᵀ − Ω‖_max` for an accepted symplectic matrix.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Squeezing above this is accepted but the covariance is badly conditioned (~e^{4r}).
pub const SQUEEZING_WARN_THRESHOLD: f64 = 25.0;

/// Squeezes one mode along a rotated quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerSpec {
    pub mode: usize,
    /// Squeezing parameter; the squeezed quadrature variance scales by `e^{-2r}`.
    pub r: f64,
    /// Orientation of the squeezed quadrature `X(angle)`, radians.
    pub angle: f64,
}

/// Two-mode beamsplitter.
///
/// Mode operators transform as
/// `a_i → √T·a_i + e^{iψ}√(1−T)·a_j` and `a_j → √(1−T)·a_i − e^{iψ}√T·a_j`,
/// where `ψ` is `relative_phase`. For `T = 1/2, ψ = π/2` this is
/// `a_{C,D} = (a_A ± i·a_B)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamsplitterSpec {
    pub modes: (usize, usize),
    pub transmittance: f64,
    pub relative_phase: f64,
}

impl BeamsplitterSpec {
    /// 50/50 splitter with a `π/2` relative phase.
    pub fn balanced(i: usize, j: usize) -> Self {
        Self {
            modes: (i, j),
            transmittance: 0.5,
            relative_phase: std::f64::consts::FRAC_PI_2,
        }
    }

    /// The 2×2 mode-operator matrix.
    pub fn unitary(&self) -> Matrix2<Complex64> {
        let t = Complex64::from(self.transmittance.sqrt());
        let r = Complex64::from((1.0 - self.transmittance).sqrt());
        let phase = Complex64::from_polar(1.0, self.relative_phase);
        Matrix2::new(t, phase * r, r, -phase * t)
    }
}

/// Pure-loss channel on one mode: mixing with vacuum at power transmittance `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    pub mode: usize,
    pub transmittance: f64,
}

impl LossChannel {
    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        apply_loss(state, self)
    }
}

/// Affine phase-space map `x ↦ S·x + d` with `S` symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticOp {
    pub fn new(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || dim % 2 != 0 || matrix.ncols() != dim || displacement.len() != dim {
            return invalid_arg(
                "symplectic matrix must be square with even dimension matching the displacement",
            );
        }
        let op = Self {
            matrix,
            displacement,
        };
        let defect = op.symplectic_defect();
        if defect > SYMPLECTIC_TOL {
            return invalid_arg(format!("matrix is not symplectic (defect {defect:e})"));
        }
        Ok(op)
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            displacement: DVector::zeros(2 * n_modes),
        }
    }

    /// Squeezer on `spec.mode` embedded in an `n_modes` system.
    pub fn squeezer(n_modes: usize, spec: &SqueezerSpec) -> Result<Self> {
        check_index(n_modes, spec.mode)?;
        if !(spec.r >= 0.0) || !spec.r.is_finite() {
            return invalid_arg(format!(
                "squeezing parameter must be finite and ≥ 0, got {}",
                spec.r
            ));
        }
        if spec.r > SQUEEZING_WARN_THRESHOLD {
            log::warn!(
                "squeezing r = {} exceeds {SQUEEZING_WARN_THRESHOLD}; covariance condition number ~ e^(4r)",
                spec.r
            );
        }
        let (s, c) = spec.angle.sin_cos();
        let (shrink, grow) = ((-spec.r).exp(), spec.r.exp());
        // shrink·u·uᵀ + grow·v·vᵀ with u = (c, s), v = (−s, c)
        let block = nalgebra::Matrix2::new(
            shrink * c * c + grow * s * s,
            (shrink - grow) * c * s,
            (shrink - grow) * c * s,
            shrink * s * s + grow * c * c,
        );
        let mut op = Self::identity(n_modes);
        op.matrix
            .view_mut((2 * spec.mode, 2 * spec.mode), (2, 2))
            .copy_from(&block);
        Ok(op)
    }

    /// Phase shift `a → e^{iθ}·a` on one mode.
    pub fn phase_rotation(n_modes: usize, mode: usize, angle: f64) -> Result<Self> {
        check_index(n_modes, mode)?;
        let mut op = Self::identity(n_modes);
        let (s, c) = angle.sin_cos();
        op.matrix
            .view_mut((2 * mode, 2 * mode), (2, 2))
            .copy_from(&nalgebra::Matrix2::new(c, -s, s, c));
        Ok(op)
    }

    pub fn beamsplitter(n_modes: usize, spec: &BeamsplitterSpec) -> Result<Self> {
        let (i, j) = spec.modes;
        check_index(n_modes, i)?;
        check_index(n_modes, j)?;
        if i == j {
            return invalid_arg("beamsplitter modes must be distinct");
        }
        if !(0.0..=1.0).contains(&spec.transmittance) {
            return invalid_arg(format!(
                "beamsplitter transmittance must lie in [0, 1], got {}",
                spec.transmittance
            ));
        }
        Ok(Self::passive(n_modes, [i, j], &spec.unitary()))
    }

    /// Phase-space displacement of one mode.
    pub fn displacement(n_modes: usize, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        check_index(n_modes, mode)?;
        let mut op = Self::identity(n_modes);
        op.displacement[2 * mode] = dx;
        op.displacement[2 * mode + 1] = dp;
        Ok(op)
    }

    /// Real representation of a passive two-mode transform `a_k → Σ U_kl a_l`.
    fn passive(n_modes: usize, modes: [usize; 2], u: &Matrix2<Complex64>) -> Self {
        let mut op = Self::identity(n_modes);
        for (k, &mk) in modes.iter().enumerate() {
            for (l, &ml) in modes.iter().enumerate() {
                let z = u[(k, l)];
                let block = nalgebra::Matrix2::new(z.re, -z.im, z.im, z.re);
                op.matrix
                    .view_mut((2 * mk, 2 * ml), (2, 2))
                    .copy_from(&block);
            }
        }
        op
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement_vector(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `‖SΩSᵀ − Ω‖_max`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        (&self.matrix * &omega * self.matrix.transpose() - omega).amax()
    }

    /// The map that applies `first` and then `self`.
    pub fn after(&self, first: &SymplecticOp) -> SymplecticOp {
        SymplecticOp {
            matrix: &self.matrix * &first.matrix,
            displacement: &self.matrix * &first.displacement + &self.displacement,
        }
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.n_modes() != self.n_modes() {
            return invalid_arg(format!(
                "operation acts on {} modes, state has {}",
                self.n_modes(),
                state.n_modes()
            ));
        }
        let mean = &self.matrix * state.mean() + &self.displacement;
        let cov = &self.matrix * state.cov() * self.matrix.transpose();
        // re-symmetrize against rounding drift
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(state.with_moments(mean, cov))
    }

    /// Expresses an output-side linear functional in input-side coordinates: `Sᵀ·w`.
    ///
    /// If `w` are the coefficients of an observable on the output modes, the result
    /// are the coefficients of the same observable written in terms of the inputs.
    pub fn pull_back(&self, coefficients: &DVector<f64>) -> DVector<f64> {
        self.matrix.transpose() * coefficients
    }
}

fn check_index(n_modes: usize, mode: usize) -> Result<()> {
    if mode >= n_modes {
        return invalid_arg(format!(
            "mode index {mode} out of range for {n_modes}-mode system"
        ));
    }
    Ok(())
}

pub fn apply_squeezer(state: &GaussianState, spec: &SqueezerSpec) -> Result<GaussianState> {
    SymplecticOp::squeezer(state.n_modes(), spec)?.apply(state)
}

pub fn apply_beamsplitter(state: &GaussianState, spec: &BeamsplitterSpec) -> Result<GaussianState> {
    SymplecticOp::beamsplitter(state.n_modes(), spec)?.apply(state)
}

pub fn apply_phase_rotation(
    state: &GaussianState,
    mode: usize,
    angle: f64,
) -> Result<GaussianState> {
    SymplecticOp::phase_rotation(state.n_modes(), mode, angle)?.apply(state)
}

/// `cov → η·cov + (1−η)/4·I` and `mean → √η·mean` on the affected mode, including
/// its correlations with other modes (which scale by `√η`).
pub fn apply_loss(state: &GaussianState, ch: &LossChannel) -> Result<GaussianState> {
    state.check_mode(ch.mode)?;
    let eta = ch.transmittance;
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "loss transmittance must lie in [0, 1], got {eta}"
        )));
    }
    let dim = 2 * state.n_modes();
    let mut x = DMatrix::identity(dim, dim);
    x[(2 * ch.mode, 2 * ch.mode)] = eta.sqrt();
    x[(2 * ch.mode + 1, 2 * ch.mode + 1)] = eta.sqrt();
    let mut cov = &x * state.cov() * &x;
    cov[(2 * ch.mode, 2 * ch.mode)] += (1.0 - eta) * VACUUM_VARIANCE;
    cov[(2 * ch.mode + 1, 2 * ch.mode + 1)] += (1.0 - eta) * VACUUM_VARIANCE;
    let mean = &x * state.mean();
    Ok(state.with_moments(mean, cov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, LN_2};

    fn squeezed_vacuum(r: f64, angle: f64) -> GaussianState {
        let vac = GaussianState::vacuum(1).unwrap();
        apply_squeezer(&vac, &SqueezerSpec { mode: 0, r, angle }).unwrap()
    }

    #[test]
    fn squeezer_closed_form() {
        let st = squeezed_vacuum(LN_2, 0.0);
        assert_relative_eq!(st.cov()[(0, 0)], 0.0625, epsilon = 1e-15);
        assert_relative_eq!(st.cov()[(1, 1)], 1.0, epsilon = 1e-15);
        assert_relative_eq!(st.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn squeezer_minus_4_6_db() {
        let exact = 0.46 * 10f64.ln() / 2.0; // e^{-2r} = 10^{-0.46}
        let st = squeezed_vacuum(exact, 0.0);
        assert_relative_eq!(st.cov()[(0, 0)] / 0.25, 10f64.powf(-0.46), epsilon = 1e-12);
        // the rounded parameter reproduces the quoted ratio
        let st = squeezed_vacuum(0.5297, 0.0);
        assert_relative_eq!(st.cov()[(0, 0)] / 0.25, 0.3467, epsilon = 1e-4);
    }

    #[test]
    fn rotated_squeezer_frame() {
        let angle = 0.3;
        let st = squeezed_vacuum(0.8, angle);
        let (s, c) = angle.sin_cos();
        let u = nalgebra::Vector2::new(c, s);
        let v = nalgebra::Vector2::new(-s, c);
        let cov = st.cov().fixed_view::<2, 2>(0, 0);
        assert_relative_eq!(
            (u.transpose() * cov * u)[0],
            0.25 * (-1.6f64).exp(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            (v.transpose() * cov * v)[0],
            0.25 * 1.6f64.exp(),
            epsilon = 1e-13
        );
        assert!((u.transpose() * cov * v)[0].abs() < 1e-14);
    }

    #[test]
    fn zero_squeezing_is_identity() {
        let st = GaussianState::coherent(DVector::from_vec(vec![0.3, -1.2])).unwrap();
        let out = apply_squeezer(
            &st,
            &SqueezerSpec {
                mode: 0,
                r: 0.0,
                angle: 1.1,
            },
        )
        .unwrap();
        assert_relative_eq!(out.cov(), st.cov(), epsilon = 1e-15);
        assert_relative_eq!(out.mean(), st.mean(), epsilon = 1e-15);
    }

    #[test]
    fn squeezer_errors() {
        let vac = GaussianState::vacuum(1).unwrap();
        let bad_mode = SqueezerSpec {
            mode: 1,
            r: 0.1,
            angle: 0.0,
        };
        assert!(matches!(
            apply_squeezer(&vac, &bad_mode),
            Err(Error::InvalidArgument(_))
        ));
        let bad_r = SqueezerSpec {
            mode: 0,
            r: -0.1,
            angle: 0.0,
        };
        assert!(apply_squeezer(&vac, &bad_r).is_err());
    }

    #[test]
    fn generated_ops_are_symplectic() {
        let ops = [
            SymplecticOp::squeezer(
                2,
                &SqueezerSpec {
                    mode: 1,
                    r: 1.3,
                    angle: 0.4,
                },
            )
            .unwrap(),
            SymplecticOp::phase_rotation(2, 0, 2.1).unwrap(),
            SymplecticOp::beamsplitter(
                2,
                &BeamsplitterSpec {
                    modes: (0, 1),
                    transmittance: 0.31,
                    relative_phase: 0.7,
                },
            )
            .unwrap(),
        ];
        for op in &ops {
            assert!(op.symplectic_defect() < 1e-12);
        }
        let composed = ops[2].after(&ops[1]).after(&ops[0]);
        assert!(composed.symplectic_defect() < 1e-12);
    }

    #[test]
    fn rejects_non_symplectic_matrix() {
        let m = DMatrix::from_diagonal_element(2, 2, 2.0);
        assert!(SymplecticOp::new(m, DVector::zeros(2)).is_err());
    }

    #[test]
    fn vacuum_is_beamsplitter_invariant() {
        let vac = GaussianState::vacuum(2).unwrap();
        let out = apply_beamsplitter(&vac, &BeamsplitterSpec::balanced(0, 1)).unwrap();
        assert_relative_eq!(out.cov(), vac.cov(), epsilon = 1e-15);
    }

    #[test]
    fn beamsplitter_maps_coherent_mean() {
        let st = GaussianState::coherent(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0])).unwrap();
        let out = apply_beamsplitter(&st, &BeamsplitterSpec::balanced(0, 1)).unwrap();
        let expected = DVector::from_vec(vec![FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]);
        assert_relative_eq!(out.mean(), &expected, epsilon = 1e-15);
    }

    #[test]
    fn balanced_beamsplitter_matrix() {
        // X_C = (X_A − P_B)/√2, P_C = (P_A + X_B)/√2, X_D = (X_A + P_B)/√2, P_D = (P_A − X_B)/√2
        let op = SymplecticOp::beamsplitter(2, &BeamsplitterSpec::balanced(0, 1)).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                h, 0.0, 0.0, -h, 0.0, h, h, 0.0, h, 0.0, 0.0, h, 0.0, h, -h, 0.0,
            ],
        );
        assert_relative_eq!(op.matrix(), &expected, epsilon = 1e-15);
    }

    #[test]
    fn beamsplitter_errors() {
        let vac = GaussianState::vacuum(2).unwrap();
        let same = BeamsplitterSpec {
            modes: (1, 1),
            ..BeamsplitterSpec::balanced(0, 1)
        };
        assert!(apply_beamsplitter(&vac, &same).is_err());
        let bad_t = BeamsplitterSpec {
            transmittance: 1.2,
            ..BeamsplitterSpec::balanced(0, 1)
        };
        assert!(apply_beamsplitter(&vac, &bad_t).is_err());
        let bad_idx = BeamsplitterSpec::balanced(0, 2);
        assert!(apply_beamsplitter(&vac, &bad_idx).is_err());
    }

    #[test]
    fn full_transmission_is_phase_on_second_port() {
        let spec = BeamsplitterSpec {
            modes: (0, 1),
            transmittance: 1.0,
            relative_phase: FRAC_PI_2,
        };
        let u = spec.unitary();
        assert_relative_eq!(u[(0, 0)].re, 1.0);
        assert_relative_eq!(u[(1, 1)].im, -1.0);
    }

    #[test]
    fn loss_cases() {
        let vac = GaussianState::vacuum(1).unwrap();
        let out = apply_loss(
            &vac,
            &LossChannel {
                mode: 0,
                transmittance: 0.3,
            },
        )
        .unwrap();
        assert_relative_eq!(out.cov(), vac.cov(), epsilon = 1e-15);

        let sq = squeezed_vacuum(LN_2, 0.0);
        let same = apply_loss(
            &sq,
            &LossChannel {
                mode: 0,
                transmittance: 1.0,
            },
        )
        .unwrap();
        assert_eq!(same, sq);
        let half = apply_loss(
            &sq,
            &LossChannel {
                mode: 0,
                transmittance: 0.5,
            },
        )
        .unwrap();
        assert_relative_eq!(half.cov()[(0, 0)], 0.15625, epsilon = 1e-15);

        assert!(apply_loss(
            &sq,
            &LossChannel {
                mode: 0,
                transmittance: 1.5
            }
        )
        .is_err());
        assert!(apply_loss(
            &sq,
            &LossChannel {
                mode: 3,
                transmittance: 0.5
            }
        )
        .is_err());
    }

    #[test]
    fn loss_scales_mean_and_cross_terms() {
        let st = GaussianState::coherent(DVector::from_vec(vec![2.0, 0.0, 0.0, 0.0])).unwrap();
        let st = apply_squeezer(
            &st,
            &SqueezerSpec {
                mode: 0,
                r: 0.7,
                angle: 0.0,
            },
        )
        .unwrap();
        let st = apply_beamsplitter(&st, &BeamsplitterSpec::balanced(0, 1)).unwrap();
        let out = apply_loss(
            &st,
            &LossChannel {
                mode: 1,
                transmittance: 0.64,
            },
        )
        .unwrap();
        assert_relative_eq!(out.mean()[2], 0.8 * st.mean()[2], epsilon = 1e-14);
        assert_relative_eq!(out.cov()[(0, 2)], 0.8 * st.cov()[(0, 2)], epsilon = 1e-14);
        out.check_physical().unwrap();
    }
}

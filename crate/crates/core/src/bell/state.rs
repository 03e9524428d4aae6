use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::rotation::{unitarity_defect, Qubit2};
use crate::error::{invalid_arg, Error, Result};

/// Tolerance on `‖U†U − I‖` for local operations.
pub const UNITARY_TOL: f64 = 1e-10;

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellLabel {
    /// Singlet `(|01⟩ − |10⟩)/√2`.
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellLabel {
    /// Row order used throughout: singlet first, then the triplets.
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiMinus,
        BellLabel::PsiPlus,
        BellLabel::PhiMinus,
        BellLabel::PhiPlus,
    ];

    pub fn is_singlet(self) -> bool {
        self == BellLabel::PsiMinus
    }

    pub fn state(self) -> TwoQubitState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = match self {
            BellLabel::PsiMinus => [0.0, h, -h, 0.0],
            BellLabel::PsiPlus => [0.0, h, h, 0.0],
            BellLabel::PhiMinus => [h, 0.0, 0.0, -h],
            BellLabel::PhiPlus => [h, 0.0, 0.0, h],
        };
        TwoQubitState {
            amplitudes: Vector4::from_iterator(amps.into_iter().map(Complex64::from)),
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellLabel::PsiMinus => "Psi-",
            BellLabel::PsiPlus => "Psi+",
            BellLabel::PhiMinus => "Phi-",
            BellLabel::PhiPlus => "Phi+",
        })
    }
}

impl FromStr for BellLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psi-" => Ok(BellLabel::PsiMinus),
            "psi+" => Ok(BellLabel::PsiPlus),
            "phi-" => Ok(BellLabel::PhiMinus),
            "phi+" => Ok(BellLabel::PhiPlus),
            other => invalid_arg(format!(
                "unknown Bell state '{other}' (expected psi-, psi+, phi-, phi+)"
            )),
        }
    }
}

/// Pure two-qubit state in the basis `|00⟩, |01⟩, |10⟩, |11⟩` (first qubit is A).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    amplitudes: Vector4<Complex64>,
}

impl TwoQubitState {
    pub fn new(amplitudes: Vector4<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return invalid_arg(format!("two-qubit state must have unit norm, got {norm}"));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &Vector4<Complex64> {
        &self.amplitudes
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &TwoQubitState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }
}

/// `A ⊗ B` in the same basis ordering as [`TwoQubitState`].
pub fn kron(a: &Qubit2, b: &Qubit2) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `(U_A ⊗ U_B)·|ψ⟩`; both factors must be unitary.
pub fn apply_local(state: &TwoQubitState, u_a: &Qubit2, u_b: &Qubit2) -> Result<TwoQubitState> {
    for (name, u) in [("U_A", u_a), ("U_B", u_b)] {
        let defect = unitarity_defect(u);
        if !(defect <= UNITARY_TOL) {
            return invalid_arg(format!("{name} is not unitary (‖U†U − I‖ = {defect:e})"));
        }
    }
    Ok(TwoQubitState {
        amplitudes: kron(u_a, u_b) * state.amplitudes,
    })
}

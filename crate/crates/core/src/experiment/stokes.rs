//! Dark-plane Stokes observables.
//!
//! With a bright circularly polarized beam (`⟨S₃⟩ ≠ 0`), fluctuations of
//! `S(θ) = cos θ·S₁ + sin θ·S₂` behave like the quadrature `X(θ)` of a vacuum-like
//! mode, with `S₁ ↔ X` and `S₂ ↔ P`. `⟨S₃⟩` only sets the shot-noise scale.

use crate::error::{invalid_arg, Result};
use crate::gaussian::{QuadratureObservable, QuadratureTerm};

/// Output port of the entangling beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputMode {
    C,
    D,
}

impl OutputMode {
    pub fn index(self) -> usize {
        match self {
            OutputMode::C => 0,
            OutputMode::D => 1,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(OutputMode::C),
            1 => Ok(OutputMode::D),
            _ => invalid_arg(format!("no output mode with index {index}")),
        }
    }
}

/// `S_mode(angle)` with `angle` in radians in the dark `S₁–S₂` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesObservable {
    pub mode: OutputMode,
    pub angle: f64,
}

impl StokesObservable {
    /// `S_mode(reference + offset)`, e.g. `reference = θ_asq`.
    pub fn relative(mode: OutputMode, reference: f64, offset: f64) -> Self {
        Self {
            mode,
            angle: reference + offset,
        }
    }

    pub fn to_quadrature(&self) -> QuadratureObservable {
        QuadratureObservable::quadrature(self.mode.index(), self.angle)
    }

    /// Inverse of [`to_quadrature`](Self::to_quadrature); only single unit-weight terms map back.
    pub fn from_quadrature(obs: &QuadratureObservable) -> Result<Self> {
        match obs.terms() {
            [QuadratureTerm {
                mode,
                phase,
                weight,
            }] if *weight == 1.0 => Ok(Self {
                mode: OutputMode::from_index(*mode)?,
                angle: *phase,
            }),
            _ => invalid_arg("only a single unit-weight quadrature maps to a Stokes observable"),
        }
    }
}

/// Dark-plane rotation produced by turning a half-wave plate by `waveplate_deg`.
///
/// Uses the factor of two quoted for the setup (a 22.25° plate turn skews the
/// observed Stokes parameter by about 45°).
pub fn waveplate_to_stokes_deg(waveplate_deg: f64) -> f64 {
    2.0 * waveplate_deg
}

use nalgebra::DVector;

use super::state::GaussianState;
use crate::error::{invalid_arg, Result};

/// One term `weight · X_mode(phase)` with `X(φ) = cos φ·X + sin φ·P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureTerm {
    pub mode: usize,
    pub phase: f64,
    pub weight: f64,
}

/// A real linear combination of rotated quadratures, `Σ wᵢ·X_{mᵢ}(φᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureObservable {
    terms: Vec<QuadratureTerm>,
}

impl QuadratureObservable {
    pub fn new(terms: Vec<QuadratureTerm>) -> Result<Self> {
        if terms.is_empty() {
            return invalid_arg("observable must have at least one term");
        }
        if terms
            .iter()
            .any(|t| !t.phase.is_finite() || !t.weight.is_finite())
        {
            return invalid_arg("observable phases and weights must be finite");
        }
        Ok(Self { terms })
    }

    /// `X_mode(phase)`.
    pub fn quadrature(mode: usize, phase: f64) -> Self {
        Self {
            terms: vec![QuadratureTerm {
                mode,
                phase,
                weight: 1.0,
            }],
        }
    }

    /// Appends `weight · X_mode(phase)`.
    pub fn plus(mut self, mode: usize, phase: f64, weight: f64) -> Self {
        self.terms.push(QuadratureTerm {
            mode,
            phase,
            weight,
        });
        self
    }

    pub fn terms(&self) -> &[QuadratureTerm] {
        &self.terms
    }

    /// Coefficient vector `w` in `(X₁, P₁, …)` so that the observable is `wᵀ·x`.
    pub fn coefficients(&self, n_modes: usize) -> Result<DVector<f64>> {
        let mut w = DVector::zeros(2 * n_modes);
        for t in &self.terms {
            if t.mode >= n_modes {
                return invalid_arg(format!(
                    "observable references mode {} of a {n_modes}-mode state",
                    t.mode
                ));
            }
            let (s, c) = t.phase.sin_cos();
            w[2 * t.mode] += t.weight * c;
            w[2 * t.mode + 1] += t.weight * s;
        }
        Ok(w)
    }
}

/// `wᵀ·cov·w`.
pub fn variance(state: &GaussianState, obs: &QuadratureObservable) -> Result<f64> {
    let w = obs.coefficients(state.n_modes())?;
    Ok(w.dot(&(state.cov() * &w)))
}

/// `wᵀ·mean`.
pub fn expectation(state: &GaussianState, obs: &QuadratureObservable) -> Result<f64> {
    let w = obs.coefficients(state.n_modes())?;
    Ok(w.dot(state.mean()))
}

/// Symmetrized covariance of two observables, `uᵀ·cov·v`.
pub fn covariance(
    state: &GaussianState,
    a: &QuadratureObservable,
    b: &QuadratureObservable,
) -> Result<f64> {
    let u = a.coefficients(state.n_modes())?;
    let v = b.coefficients(state.n_modes())?;
    Ok(u.dot(&(state.cov() * &v)))
}

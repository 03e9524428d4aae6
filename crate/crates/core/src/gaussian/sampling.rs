//! Monte-Carlo estimation of observable statistics.
//!
//! Draws phase-space points from `N(mean, cov)` and evaluates the observable on each
//! sample. It shares no code path with [`variance`](super::variance) beyond building
//! the coefficient vector, which makes it usable as an independent check.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::observable::QuadratureObservable;
use super::state::GaussianState;
use crate::error::{invalid_arg, Error, Result};

/// Empirical statistics of an observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n_samples: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of `mean`.
    pub mean_standard_error: f64,
    /// Standard error of `variance`, `√((m₄ − s⁴)/n)` from the sample fourth moment.
    pub standard_error: f64,
}

impl SampleStats {
    /// Distance of `expected` from the sampled variance in standard errors.
    pub fn variance_z_score(&self, expected: f64) -> f64 {
        (self.variance - expected).abs() / self.standard_error
    }
}

/// Relative eigenvalue floor below which a covariance is rejected as not PSD.
const PSD_TOL: f64 = 1e-12;

pub fn sample_monte_carlo(
    state: &GaussianState,
    obs: &QuadratureObservable,
    n_samples: usize,
    seed: u64,
) -> Result<SampleStats> {
    if n_samples < 2 {
        return invalid_arg(format!("need at least 2 samples, got {n_samples}"));
    }
    let w = obs.coefficients(state.n_modes())?;
    let factor = psd_factor(state.cov())?;
    // wᵀ(μ + L·z) = wᵀμ + (Lᵀw)ᵀz, so each sample needs only one short dot product.
    let offset = w.dot(state.mean());
    let projected: Vec<f64> = (factor.transpose() * &w).iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n_samples)
        .map(|_| {
            offset
                + projected
                    .iter()
                    .map(|c| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        c * z
                    })
                    .sum::<f64>()
        })
        .collect();

    let n = n_samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (m2, m4) = values.iter().fold((0.0, 0.0), |(m2, m4), v| {
        let d2 = (v - mean).powi(2);
        (m2 + d2, m4 + d2 * d2)
    });
    let variance = m2 / (n - 1.0);
    let fourth = m4 / n;
    let biased = m2 / n;
    Ok(SampleStats {
        n_samples,
        mean,
        variance,
        mean_standard_error: (variance / n).sqrt(),
        standard_error: ((fourth - biased * biased).max(0.0) / n).sqrt(),
    })
}

/// `L` with `L·Lᵀ = cov`, built from the eigendecomposition so that singular
/// (but PSD) covariances are still accepted.
fn psd_factor(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidState(
            "covariance has non-finite entries".into(),
        ));
    }
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(1.0);
    let min = eig.eigenvalues.min();
    if min < -PSD_TOL * scale {
        return Err(Error::InvalidState(format!(
            "covariance is not positive semidefinite (eigenvalue {min:e})"
        )));
    }
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots))
}

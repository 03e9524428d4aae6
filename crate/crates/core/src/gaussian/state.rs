use nalgebra::{DMatrix, DVector};

use crate::error::{invalid_arg, Error, Result};

/// Variance of any quadrature of the vacuum for `a = X + iP`.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Absolute tolerance on `cov - covᵀ`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Smallest eigenvalue of `cov + (i/4)Ω` still accepted as physical.
pub const UNCERTAINTY_TOL: f64 = -1e-10;

/// The standard symplectic form for interleaved ordering `(X₁, P₁, X₂, P₂, …)`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// First and second moments of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state and checks that it is physical.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let state = Self::from_raw(mean, cov)?;
        state.check_physical()?;
        Ok(state)
    }

    /// Builds a state checking only the dimensions.
    ///
    /// Used for deliberately unphysical inputs (e.g. to exercise the rejection paths of
    /// the sampler); most operations assume a state built with [`GaussianState::new`].
    pub fn from_raw(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return invalid_arg(format!("mean must have even, non-zero length, got {dim}"));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return invalid_arg(format!(
                "covariance must be {dim}x{dim}, got {}x{}",
                cov.nrows(),
                cov.ncols()
            ));
        }
        Ok(Self { mean, cov })
    }

    /// The `n`-mode vacuum: zero mean, covariance `I/4`.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes < 1 {
            return invalid_arg("n_modes must be at least 1");
        }
        let dim = 2 * n_modes;
        Ok(Self {
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * VACUUM_VARIANCE,
        })
    }

    /// A coherent state: vacuum noise displaced to `mean`.
    pub fn coherent(mean: DVector<f64>) -> Result<Self> {
        let dim = mean.len();
        Self::from_raw(mean, DMatrix::identity(dim, dim) * VACUUM_VARIANCE)
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Tensor product: the modes of `other` are appended after those of `self`.
    pub fn product(&self, other: &GaussianState) -> GaussianState {
        let (d1, d2) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    /// The reduced state of a single mode.
    pub fn mode(&self, index: usize) -> Result<GaussianState> {
        self.check_mode(index)?;
        let mean = self.mean.rows(2 * index, 2).into_owned();
        let cov = self.cov.view((2 * index, 2 * index), (2, 2)).into_owned();
        Ok(GaussianState { mean, cov })
    }

    pub(crate) fn check_mode(&self, index: usize) -> Result<()> {
        if index >= self.n_modes() {
            return invalid_arg(format!(
                "mode index {index} out of range for {}-mode state",
                self.n_modes()
            ));
        }
        Ok(())
    }

    /// Largest absolute asymmetry `|cov_ij - cov_ji|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.cov - self.cov.transpose()).amax()
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/4)Ω`.
    ///
    /// Computed through the real embedding `[[A, -B], [B, A]]` of `A + iB`, whose
    /// spectrum is that of the Hermitian matrix with every eigenvalue doubled.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let dim = self.cov.nrows();
        let b = symplectic_form(self.n_modes()) * VACUUM_VARIANCE;
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        let mut embed = DMatrix::zeros(2 * dim, 2 * dim);
        embed.view_mut((0, 0), (dim, dim)).copy_from(&sym);
        embed.view_mut((dim, dim), (dim, dim)).copy_from(&sym);
        embed.view_mut((0, dim), (dim, dim)).copy_from(&(-&b));
        embed.view_mut((dim, 0), (dim, dim)).copy_from(&b);
        embed.symmetric_eigenvalues().min()
    }

    /// Smallest eigenvalue of the covariance matrix itself.
    pub fn min_cov_eigenvalue(&self) -> f64 {
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }

    /// Verifies symmetry and the uncertainty relation.
    pub fn check_physical(&self) -> Result<()> {
        if self
            .mean
            .iter()
            .chain(self.cov.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidState("non-finite moments".into()));
        }
        let asym = self.asymmetry();
        if asym > SYMMETRY_TOL * self.cov.amax().max(1.0) {
            return Err(Error::InvalidState(format!(
                "covariance not symmetric (max deviation {asym:e})"
            )));
        }
        let min_eig = self.min_uncertainty_eigenvalue();
        if min_eig < UNCERTAINTY_TOL {
            return Err(Error::InvalidState(format!(
                "uncertainty relation violated: min eigenvalue of cov + iΩ/4 is {min_eig:e}"
            )));
        }
        Ok(())
    }

    /// Symplectic eigenvalues in ascending order; each is `≥ 1/4` for physical states.
    ///
    /// For `K = √cov · Ω · √cov` (real antisymmetric) the singular values are the
    /// symplectic eigenvalues, each appearing twice.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        if eig.eigenvalues.min() <= 0.0 {
            return Err(Error::InvalidState(
                "covariance is not positive definite".into(),
            ));
        }
        let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
        let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
        let k = &root * symplectic_form(self.n_modes()) * &root;
        let mut sv: Vec<f64> = k.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        Ok(sv.into_iter().step_by(2).collect())
    }

    /// `1 / (4ⁿ √det cov)`; equals one for pure states.
    pub fn purity(&self) -> f64 {
        let det = self.cov.determinant();
        1.0 / (4f64.powi(self.n_modes() as i32) * det.sqrt())
    }

    /// Ratio of largest to smallest covariance eigenvalue.
    pub fn condition_number(&self) -> f64 {
        let eig = ((&self.cov + self.cov.transpose()) * 0.5).symmetric_eigenvalues();
        eig.max() / eig.min()
    }

    pub(crate) fn with_moments(&self, mean: DVector<f64>, cov: DMatrix<f64>) -> GaussianState {
        debug_assert_eq!(mean.len(), self.mean.len());
        GaussianState { mean, cov }
    }
}

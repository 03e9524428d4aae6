//! Which direction on the Bloch sphere the second qubit points to after the first
//! qubit of a Bell state is found along `+n`.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use num_complex::Complex64;

use super::state::{kron, BellLabel};
use crate::error::{invalid_arg, Error, Result};

/// Unit-norm tolerance for Bloch vectors.
pub const BLOCH_NORM_TOL: f64 = 1e-12;

/// Maximum residual accepted when fitting the correlation map.
pub const FIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vector3<f64>);

impl BlochVector {
    /// A unit vector; the norm must be one within `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        let norm = v.norm();
        if !((norm - 1.0).abs() <= BLOCH_NORM_TOL) {
            return invalid_arg(format!("Bloch vector must have unit norm, got {norm}"));
        }
        Ok(Self(v))
    }

    /// Rescales any non-zero vector to unit length.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return invalid_arg("direction must be a finite, non-zero vector");
        }
        Ok(Self(v / norm))
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    /// The qubit state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` pointing along this vector.
    pub fn ket(&self) -> Vector2<Complex64> {
        let theta = self.0.z.clamp(-1.0, 1.0).acos();
        let phi = self.0.y.atan2(self.0.x);
        Vector2::new(
            Complex64::from((theta / 2.0).cos()),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        )
    }

    /// Bloch vector of a (not necessarily normalized) qubit ket.
    fn of_ket(ket: &Vector2<Complex64>) -> Result<Self> {
        let norm = ket.norm();
        if norm < 1e-12 {
            return Err(Error::DegenerateInput(
                "conditional state has zero norm".into(),
            ));
        }
        let k = ket / Complex64::from(norm);
        let coh = k[0].conj() * k[1];
        Ok(Self(Vector3::new(
            2.0 * coh.re,
            2.0 * coh.im,
            k[0].norm_sqr() - k[1].norm_sqr(),
        )))
    }
}

/// `n·σ⃗`.
pub fn pauli_dot(n: &Vector3<f64>) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::from(n.z),
        Complex64::new(n.x, -n.y),
        Complex64::new(n.x, n.y),
        Complex64::from(-n.z),
    )
}

/// Bloch direction of qubit B after qubit A of `label` is projected onto `+n`.
pub fn correlated_direction(label: BellLabel, n: &BlochVector) -> Result<BlochVector> {
    let psi = label.state();
    let amps = psi.amplitudes();
    let bra = n.ket().map(|c| c.conj());
    let conditional = Vector2::new(
        bra[0] * amps[0] + bra[1] * amps[2],
        bra[0] * amps[1] + bra[1] * amps[3],
    );
    BlochVector::of_ket(&conditional)
}

/// `⟨ψ| a·σ ⊗ b·σ |ψ⟩`.
pub fn spin_correlation(label: BellLabel, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let psi = label.state();
    let op = kron(&pauli_dot(a), &pauli_dot(b));
    psi.amplitudes().dotc(&(op * psi.amplitudes())).re
}

/// Unit vectors of the 3×3×3 cube directions (26 of them, centre excluded).
pub fn cube_directions() -> Vec<BlochVector> {
    let mut dirs = Vec::with_capacity(26);
    for x in -1..=1 {
        for y in -1..=1 {
            for z in -1..=1 {
                if (x, y, z) != (0, 0, 0) {
                    dirs.push(
                        BlochVector::normalized(x as f64, y as f64, z as f64).expect("non-zero"),
                    );
                }
            }
        }
    }
    dirs
}

/// A linear map fitted to `n ↦ correlated_direction(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMap {
    pub matrix: Matrix3<f64>,
    /// Largest `|M·n − m|` over the fitting directions.
    pub residual: f64,
}

impl CorrelationMap {
    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// `‖MᵀM − I‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - Matrix3::identity()).amax()
    }

    pub fn apply(&self, n: &BlochVector) -> Vector3<f64> {
        self.matrix * n.as_vector()
    }
}

/// Least-squares fit of the correlation map over `directions`.
pub fn fit_correlation_map(label: BellLabel, directions: &[BlochVector]) -> Result<CorrelationMap> {
    let mut cross = Matrix3::zeros();
    let mut gram = Matrix3::zeros();
    let mut pairs = Vec::with_capacity(directions.len());
    for n in directions {
        let m = correlated_direction(label, n)?;
        cross += m.as_vector() * n.as_vector().transpose();
        gram += n.as_vector() * n.as_vector().transpose();
        pairs.push((*n.as_vector(), *m.as_vector()));
    }
    let inv = gram.try_inverse().ok_or_else(|| {
        Error::InvalidArgument("fitting directions do not span three dimensions".into())
    })?;
    let matrix = cross * inv;
    let residual = pairs
        .iter()
        .map(|(n, m)| (matrix * n - m).amax())
        .fold(0.0, f64::max);
    Ok(CorrelationMap { matrix, residual })
}

/// The orthogonal map relating correlated outcomes: `−I` for the singlet and a
/// coordinate-plane reflection for each triplet state.
pub fn mirror_matrix(label: BellLabel) -> Result<Matrix3<f64>> {
    let map = fit_correlation_map(label, &cube_directions())?;
    if map.residual > FIT_TOL {
        return Err(Error::InternalConsistency(format!(
            "correlation map of {label} is not linear (residual {:e})",
            map.residual
        )));
    }
    if map.orthogonality_defect() > FIT_TOL || (map.determinant() + 1.0).abs() > FIT_TOL {
        return Err(Error::InternalConsistency(format!(
            "correlation map of {label} is not an orientation-reversing isometry"
        )));
    }
    Ok(map.matrix)
}

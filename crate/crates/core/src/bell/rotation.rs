use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

/// Complex 2×2 matrix acting on one qubit.
pub type Qubit2 = Matrix2<Complex64>;

/// Bloch-sphere rotation by `alpha` about the axis with polar angle `theta` and
/// azimuth `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
}

impl RotationSpec {
    /// Unit rotation axis `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// `exp(−i·(α/2)·n̂·σ⃗) = cos(α/2)·I − i·sin(α/2)·n̂·σ⃗`.
pub fn rotation_unitary(spec: &RotationSpec) -> Qubit2 {
    let [nx, ny, nz] = spec.axis();
    let (s, c) = (spec.alpha / 2.0).sin_cos();
    let i = Complex64::i();
    let cc = Complex64::from(c);
    Matrix2::new(
        cc - i * (s * nz),
        -i * s * Complex64::new(nx, -ny),
        -i * s * Complex64::new(nx, ny),
        cc + i * (s * nz),
    )
}

/// A coordinate rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Polar and azimuthal angles of the axis direction.
    pub fn angles(self) -> (f64, f64) {
        use std::f64::consts::FRAC_PI_2;
        match self {
            Axis::X => (FRAC_PI_2, 0.0),
            Axis::Y => (FRAC_PI_2, FRAC_PI_2),
            Axis::Z => (0.0, 0.0),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Rotation by `alpha` about a coordinate axis, written out entry by entry.
pub fn axis_unitary(axis: Axis, alpha: f64) -> Qubit2 {
    let (s, c) = (alpha / 2.0).sin_cos();
    let z = Complex64::from;
    let i = Complex64::i();
    match axis {
        Axis::X => Matrix2::new(z(c), -i * s, -i * s, z(c)),
        Axis::Y => Matrix2::new(z(c), z(-s), z(s), z(c)),
        Axis::Z => Matrix2::new(
            Complex64::from_polar(1.0, -alpha / 2.0),
            z(0.0),
            z(0.0),
            Complex64::from_polar(1.0, alpha / 2.0),
        ),
    }
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &Qubit2) -> f64 {
    (u.adjoint() * u - Qubit2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &Qubit2, b: &Qubit2) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

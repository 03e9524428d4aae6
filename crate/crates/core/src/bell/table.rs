//! The `U⊗U` / `U⊗U*` invariance table of the Bell states.
//!
//! For the `U⊗U*` columns the second factor is the reverse rotation `U(−α)` about the
//! same axis. For `x` and `z` this is literally the complex conjugate matrix; `U_y` is
//! real, so its conjugate partner is the reverse rotation rather than `U_y` itself.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rotation::{axis_unitary, Axis, Qubit2};
use super::state::{kron, BellLabel};

/// Fidelity above which a state counts as unchanged.
pub const INVARIANT_FIDELITY: f64 = 1.0 - 1e-10;

/// A "no" entry must have a witness angle with fidelity below this.
pub const WITNESS_FIDELITY: f64 = 0.999;

const GRID_POINTS: usize = 24;
const RANDOM_POINTS: usize = 10;
const RANDOM_SEED: u64 = 0x7a61_626c_6549;

/// How the second qubit's rotation relates to the first's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `U ⊗ U`
    Same,
    /// `U ⊗ U*`, with `U*(α) = U(−α)`
    Conjugate,
}

/// One column of the table: a coordinate axis and a pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalTransform {
    pub axis: Axis,
    pub pairing: Pairing,
}

impl LocalTransform {
    /// Column order: `UxUx, UyUy, UzUz, UxUx*, UyUy*, UzUz*`.
    pub const COLUMNS: [LocalTransform; 6] = [
        LocalTransform {
            axis: Axis::X,
            pairing: Pairing::Same,
        },
        LocalTransform {
            axis: Axis::Y,
            pairing: Pairing::Same,
        },
        LocalTransform {
            axis: Axis::Z,
            pairing: Pairing::Same,
        },
        LocalTransform {
            axis: Axis::X,
            pairing: Pairing::Conjugate,
        },
        LocalTransform {
            axis: Axis::Y,
            pairing: Pairing::Conjugate,
        },
        LocalTransform {
            axis: Axis::Z,
            pairing: Pairing::Conjugate,
        },
    ];

    pub fn matrices(&self, alpha: f64) -> (Qubit2, Qubit2) {
        let first = axis_unitary(self.axis, alpha);
        let second = match self.pairing {
            Pairing::Same => first,
            Pairing::Conjugate => axis_unitary(self.axis, -alpha),
        };
        (first, second)
    }

    /// Fidelity of `(U_A ⊗ U_B)|ψ⟩` with `|ψ⟩`.
    pub fn fidelity(&self, label: BellLabel, alpha: f64) -> f64 {
        let (a, b) = self.matrices(alpha);
        let psi = label.state();
        let out = kron(&a, &b) * psi.amplitudes();
        psi.amplitudes().dotc(&out).norm_sqr()
    }
}

impl fmt::Display for LocalTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = match self.axis {
            Axis::X => "Ux",
            Axis::Y => "Uy",
            Axis::Z => "Uz",
        };
        match self.pairing {
            Pairing::Same => write!(f, "{u}{u}"),
            Pairing::Conjugate => write!(f, "{u}{u}*"),
        }
    }
}

/// Lowest-fidelity angle found for a transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub alpha: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceEntry {
    pub invariant: bool,
    /// The angle with the lowest fidelity among those tested.
    pub worst: Witness,
}

/// Invariance of each Bell state (rows, [`BellLabel::ALL`] order) under each
/// transform (columns, [`LocalTransform::COLUMNS`] order).
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceTable {
    pub entries: [[InvarianceEntry; 6]; 4],
}

impl InvarianceTable {
    pub fn row(&self, label: BellLabel) -> &[InvarianceEntry; 6] {
        let idx = BellLabel::ALL
            .iter()
            .position(|&l| l == label)
            .expect("label in ALL");
        &self.entries[idx]
    }

    pub fn booleans(&self) -> [[bool; 6]; 4] {
        self.entries.map(|row| row.map(|e| e.invariant))
    }
}

/// The angles every transform is tested at: 24 evenly spaced over `[0, 4π)`
/// (the period of a spin-½ rotation) plus 10 fixed pseudo-random ones.
pub fn test_angles() -> Vec<f64> {
    let period = 4.0 * std::f64::consts::PI;
    let mut angles: Vec<f64> = (0..GRID_POINTS)
        .map(|k| period * k as f64 / GRID_POINTS as f64)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    angles.extend((0..RANDOM_POINTS).map(|_| rng.random_range(0.0..period)));
    angles
}

pub fn invariance_table() -> InvarianceTable {
    let angles = test_angles();
    let entries = BellLabel::ALL.map(|label| {
        LocalTransform::COLUMNS.map(|transform| {
            let worst = angles
                .iter()
                .map(|&alpha| Witness {
                    alpha,
                    fidelity: transform.fidelity(label, alpha),
                })
                .min_by(|a, b| a.fidelity.total_cmp(&b.fidelity))
                .expect("non-empty angle set");
            InvarianceEntry {
                invariant: worst.fidelity > INVARIANT_FIDELITY,
                worst,
            }
        })
    });
    InvarianceTable { entries }
}

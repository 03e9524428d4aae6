//! Simulation of triplet-like correlation symmetry in two-mode continuous-variable
//! entangled light, and of the matching symmetry of two-qubit Bell states.
//!
//! The crate is split into four layers:
//!
//! - [`gaussian`]: multimode Gaussian states, symplectic operations, loss channels,
//!   rotated-quadrature variances and a Monte-Carlo sampling oracle.
//! - [`bell`]: exact two-qubit algebra: Bloch rotations, Bell states, the
//!   `U⊗U` / `U⊗U*` invariance table and the mirror/inversion correlation geometry.
//! - [`experiment`]: a model of a polarization-entanglement setup built from two
//!   Kerr-squeezed beams, an imperfect entangling beamsplitter and dark-plane
//!   Stokes detection, with angle sweeps and gain optimization.
//! - [`report`]: configuration files, run manifests, result tables and the
//!   command implementations behind the `tripletcv` binary.
//!
//! Quadratures follow `a = X + iP`, so `[X, P] = i/2` and the vacuum variance of
//! any quadrature is `1/4`. Phase space is ordered `(X₁, P₁, X₂, P₂, …)`.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod error;
pub mod experiment;
pub mod gaussian;
pub mod report;

pub use error::{Error, Result};

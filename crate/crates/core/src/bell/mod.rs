//! Exact two-qubit algebra: Bloch rotations, Bell states, their local-rotation
//! invariances and the geometry of their perfect correlations.

mod geometry;
mod rotation;
mod state;
mod table;

pub use geometry::{
    correlated_direction, cube_directions, fit_correlation_map, mirror_matrix, pauli_dot,
    spin_correlation, BlochVector, CorrelationMap, BLOCH_NORM_TOL, FIT_TOL,
};
pub use rotation::{
    axis_unitary, max_abs_diff, rotation_unitary, unitarity_defect, Axis, Qubit2, RotationSpec,
};
pub use state::{apply_local, kron, BellLabel, TwoQubitState, UNITARY_TOL};
pub use table::{
    invariance_table, test_angles, InvarianceEntry, InvarianceTable, LocalTransform, Pairing,
    Witness, INVARIANT_FIDELITY, WITNESS_FIDELITY,
};

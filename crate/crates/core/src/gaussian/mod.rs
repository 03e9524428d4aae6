//! Multimode Gaussian states and the operations that act on them.

mod observable;
mod ops;
mod sampling;
mod state;
mod units;

pub use observable::{covariance, expectation, variance, QuadratureObservable, QuadratureTerm};
pub use ops::{
    apply_beamsplitter, apply_loss, apply_phase_rotation, apply_squeezer, BeamsplitterSpec,
    LossChannel, SqueezerSpec, SymplecticOp, SQUEEZING_WARN_THRESHOLD, SYMPLECTIC_TOL,
};
pub use sampling::{sample_monte_carlo, SampleStats};
pub use state::{symplectic_form, GaussianState, SYMMETRY_TOL, UNCERTAINTY_TOL, VACUUM_VARIANCE};
pub use units::{from_db, to_db};

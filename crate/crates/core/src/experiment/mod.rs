//! Model of the polarization-entanglement experiment: two Kerr-squeezed beams, an
//! imperfect entangling beamsplitter and dark-plane Stokes detection.

mod config;
mod sim;
mod stokes;

pub use config::{build_kerr_state, CombineSign, CombinerSpec, ExperimentConfig, KerrInputSpec};
pub use sim::{
    combined_observable, entangle, fig2_summary, individual_noise, measure_correlation,
    optimize_gain, shot_reference, sweep, sweep_reference, AngleRange, Correlation, Fig2Summary,
    GainOptimum, SweepMode, SweepResult, SweepRow,
};
pub use stokes::{waveplate_to_stokes_deg, OutputMode, StokesObservable};

//! C ABI over `tripletcv`.
//!
//! Every function returns a [`TcvStatus`]; results are written through out-pointers.
//! Gaussian states live behind an opaque [`TcvGaussianState`] handle that must be
//! released with [`tcv_state_free`]. After a non-OK status, [`tcv_last_error`]
//! copies a human-readable message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tripletcv::bell::{correlated_direction, invariance_table, BellLabel, BlochVector};
use tripletcv::experiment::{
    fig2_summary, sweep, AngleRange, CombineSign, CombinerSpec, ExperimentConfig, KerrInputSpec,
    SweepMode,
};
use tripletcv::gaussian::{
    apply_beamsplitter, apply_loss, apply_phase_rotation, apply_squeezer, variance,
    BeamsplitterSpec, GaussianState, LossChannel, QuadratureObservable, QuadratureTerm,
    SqueezerSpec,
};
use tripletcv::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    DegenerateInput = 4,
    InternalConsistency = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque multimode Gaussian state.
pub struct TcvGaussianState {
    inner: GaussianState,
}

/// One squeezed input beam, angles in degrees.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcvInput {
    pub squeezing_db: f64,
    pub antisqueezing_db: f64,
    pub theta_sq_deg: f64,
}

/// Experiment parameters. `combiner_sign` is `+1` for sums and `-1` for differences.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcvExperimentConfig {
    pub input_a: TcvInput,
    pub input_b: TcvInput,
    pub transmittance: f64,
    pub relative_phase_deg: f64,
    pub visibility: f64,
    pub combiner_gain: f64,
    pub combiner_sign: i32,
}

/// Individual-beam noise and two-beam correlations, all in dB re shot noise.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcvFig2 {
    pub individual_c_db: f64,
    pub individual_d_db: f64,
    pub sum_db: f64,
    pub difference_db: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcvSweepRow {
    pub phi1_deg: f64,
    pub phi2_deg: f64,
    pub variance_linear: f64,
    pub variance_db: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: TcvStatus, msg: &str) -> TcvStatus {
    set_last_error(msg);
    status
}

fn status_of(e: &Error) -> TcvStatus {
    match e {
        Error::InvalidArgument(_) => TcvStatus::InvalidArgument,
        Error::InvalidState(_) => TcvStatus::InvalidState,
        Error::DegenerateInput(_) => TcvStatus::DegenerateInput,
        Error::InternalConsistency(_) => TcvStatus::InternalConsistency,
    }
}

/// Runs `f`, mapping library errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> TcvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            TcvStatus::Ok
        }
        Ok(Err(e)) => fail(status_of(&e), &e.to_string()),
        Err(_) => fail(TcvStatus::Panic, "internal panic"),
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(TcvStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

fn label_from_index(index: u32) -> Result<BellLabel, Error> {
    BellLabel::ALL.get(index as usize).copied().ok_or_else(|| {
        Error::InvalidArgument(format!("Bell state index {index} out of range 0..4"))
    })
}

impl TcvExperimentConfig {
    fn to_core(self) -> Result<ExperimentConfig, Error> {
        let input = |i: TcvInput| KerrInputSpec {
            squeezing_db: i.squeezing_db,
            antisqueezing_db: i.antisqueezing_db,
            theta_sq: i.theta_sq_deg.to_radians(),
        };
        let sign = match self.combiner_sign {
            1 => CombineSign::Sum,
            -1 => CombineSign::Difference,
            s => {
                return Err(Error::InvalidArgument(format!(
                    "combiner_sign must be +1 or -1, got {s}"
                )))
            }
        };
        let cfg = ExperimentConfig {
            input_a: input(self.input_a),
            input_b: input(self.input_b),
            bs_transmittance: self.transmittance,
            relative_phase: self.relative_phase_deg.to_radians(),
            visibility: self.visibility,
            combiner: CombinerSpec {
                gain: self.combiner_gain,
                sign,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tcv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tcv_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates the `n_modes`-mode vacuum.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_vacuum(
    n_modes: usize,
    out: *mut *mut TcvGaussianState,
) -> TcvStatus {
    non_null!(out);
    guard(|| {
        let inner = GaussianState::vacuum(n_modes)?;
        *out = Box::into_raw(Box::new(TcvGaussianState { inner }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `state` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_free(state: *mut TcvGaussianState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_n_modes(
    state: *const TcvGaussianState,
    out: *mut usize,
) -> TcvStatus {
    non_null!(state, out);
    *out = (*state).inner.n_modes();
    TcvStatus::Ok
}

/// Copies the `2n × 2n` covariance matrix, row-major, into `out`.
///
/// # Safety
/// `state` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_covariance(
    state: *const TcvGaussianState,
    out: *mut f64,
    len: usize,
) -> TcvStatus {
    non_null!(state, out);
    let cov = (*state).inner.cov();
    if len < cov.len() {
        return fail(TcvStatus::BufferTooSmall, "covariance buffer too small");
    }
    for (k, (i, j)) in (0..cov.nrows())
        .flat_map(|i| (0..cov.ncols()).map(move |j| (i, j)))
        .enumerate()
    {
        *out.add(k) = cov[(i, j)];
    }
    TcvStatus::Ok
}

/// Squeezes `mode` by `r` along the quadrature at `angle` (radians), in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_squeeze(
    state: *mut TcvGaussianState,
    mode: usize,
    r: f64,
    angle: f64,
) -> TcvStatus {
    non_null!(state);
    let st = &mut (*state).inner;
    guard(|| {
        *st = apply_squeezer(st, &SqueezerSpec { mode, r, angle })?;
        Ok(())
    })
}

/// Rotates the phase of `mode` by `angle` radians, in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_phase_rotate(
    state: *mut TcvGaussianState,
    mode: usize,
    angle: f64,
) -> TcvStatus {
    non_null!(state);
    let st = &mut (*state).inner;
    guard(|| {
        *st = apply_phase_rotation(st, mode, angle)?;
        Ok(())
    })
}

/// Mixes modes `i` and `j` on a beamsplitter of power transmittance `t` and
/// relative phase `phase` (radians), in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_beamsplit(
    state: *mut TcvGaussianState,
    i: usize,
    j: usize,
    t: f64,
    phase: f64,
) -> TcvStatus {
    non_null!(state);
    let st = &mut (*state).inner;
    guard(|| {
        *st = apply_beamsplitter(
            st,
            &BeamsplitterSpec {
                modes: (i, j),
                transmittance: t,
                relative_phase: phase,
            },
        )?;
        Ok(())
    })
}

/// Pure loss on `mode` with power transmittance `eta`, in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_loss(
    state: *mut TcvGaussianState,
    mode: usize,
    eta: f64,
) -> TcvStatus {
    non_null!(state);
    let st = &mut (*state).inner;
    guard(|| {
        *st = apply_loss(
            st,
            &LossChannel {
                mode,
                transmittance: eta,
            },
        )?;
        Ok(())
    })
}

/// Variance of `Σ weights[k] · X_{modes[k]}(phases[k])`.
///
/// # Safety
/// `state` must be a live handle; `modes`, `phases` and `weights` must each point to
/// `n_terms` readable elements; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcv_state_variance(
    state: *const TcvGaussianState,
    modes: *const usize,
    phases: *const f64,
    weights: *const f64,
    n_terms: usize,
    out: *mut f64,
) -> TcvStatus {
    non_null!(state, modes, phases, weights, out);
    let st = &(*state).inner;
    guard(|| {
        let terms = (0..n_terms)
            .map(|k| QuadratureTerm {
                mode: *modes.add(k),
                phase: *phases.add(k),
                weight: *weights.add(k),
            })
            .collect();
        *out = variance(st, &QuadratureObservable::new(terms)?)?;
        Ok(())
    })
}

/// Fills `out[24]` with the invariance table, row-major: rows Ψ⁻, Ψ⁺, Φ⁻, Φ⁺;
/// columns UxUx, UyUy, UzUz, UxUx*, UyUy*, UzUz*. `1` means invariant.
///
/// # Safety
/// `out` must point to 24 writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tcv_bell_table(out: *mut u8) -> TcvStatus {
    non_null!(out);
    guard(|| {
        for (k, v) in invariance_table().booleans().iter().flatten().enumerate() {
            *out.add(k) = u8::from(*v);
        }
        Ok(())
    })
}

/// Direction the second qubit is found along when the first is found along `n`.
/// `state_index` follows the table row order (0 = Ψ⁻ … 3 = Φ⁺).
///
/// # Safety
/// `n` must point to 3 readable doubles and `out` to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tcv_bell_correlated_direction(
    state_index: u32,
    n: *const f64,
    out: *mut f64,
) -> TcvStatus {
    non_null!(n, out);
    guard(|| {
        let label = label_from_index(state_index)?;
        let dir = BlochVector::new(*n, *n.add(1), *n.add(2))?;
        let m = correlated_direction(label, &dir)?;
        for (k, v) in [m.x(), m.y(), m.z()].into_iter().enumerate() {
            *out.add(k) = v;
        }
        Ok(())
    })
}

/// Writes the measured setup's parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcv_config_measured(out: *mut TcvExperimentConfig) -> TcvStatus {
    non_null!(out);
    let c = ExperimentConfig::measured();
    let input = |i: KerrInputSpec| TcvInput {
        squeezing_db: i.squeezing_db,
        antisqueezing_db: i.antisqueezing_db,
        theta_sq_deg: i.theta_sq.to_degrees(),
    };
    *out = TcvExperimentConfig {
        input_a: input(c.input_a),
        input_b: input(c.input_b),
        transmittance: c.bs_transmittance,
        relative_phase_deg: c.relative_phase.to_degrees(),
        visibility: c.visibility,
        combiner_gain: c.combiner.gain,
        combiner_sign: match c.combiner.sign {
            CombineSign::Sum => 1,
            CombineSign::Difference => -1,
        },
    };
    TcvStatus::Ok
}

/// # Safety
/// `config` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tcv_fig2(
    config: *const TcvExperimentConfig,
    out: *mut TcvFig2,
) -> TcvStatus {
    non_null!(config, out);
    let config = *config;
    guard(|| {
        let s = fig2_summary(&config.to_core()?)?;
        *out = TcvFig2 {
            individual_c_db: s.individual_c_db,
            individual_d_db: s.individual_d_db,
            sum_db: s.sum_db,
            difference_db: s.difference_db,
        };
        Ok(())
    })
}

/// Angle sweep in degrees. `mirror == 0` scans `φ₁` with `φ₂ = phi2_deg`; otherwise
/// `φ₂ = −φ₁` are scanned together. Writes at most `capacity` rows and stores the
/// full row count in `out_len`; returns `BUFFER_TOO_SMALL` if they did not all fit.
///
/// # Safety
/// `config` and `out_len` must be valid pointers; `rows` must point to `capacity`
/// writable rows (it may be null when `capacity` is zero).
#[no_mangle]
pub unsafe extern "C" fn tcv_sweep(
    config: *const TcvExperimentConfig,
    mirror: i32,
    phi2_deg: f64,
    start_deg: f64,
    stop_deg: f64,
    step_deg: f64,
    rows: *mut TcvSweepRow,
    capacity: usize,
    out_len: *mut usize,
) -> TcvStatus {
    non_null!(config, out_len);
    if rows.is_null() && capacity > 0 {
        return fail(TcvStatus::NullPointer, "`rows` is null");
    }
    let config = *config;
    let mode = if mirror == 0 {
        SweepMode::FixedPhi2
    } else {
        SweepMode::Mirror
    };
    let mut overflow = false;
    let status = guard(|| {
        let range = AngleRange::new(start_deg, stop_deg, step_deg)?;
        let result = sweep(&config.to_core()?, mode, phi2_deg, &range)?;
        *out_len = result.rows.len();
        overflow = result.rows.len() > capacity;
        for (k, r) in result.rows.iter().take(capacity).enumerate() {
            *rows.add(k) = TcvSweepRow {
                phi1_deg: r.phi1_deg,
                phi2_deg: r.phi2_deg,
                variance_linear: r.variance_linear,
                variance_db: r.variance_db,
            };
        }
        Ok(())
    });
    if status == TcvStatus::Ok && overflow {
        return fail(TcvStatus::BufferTooSmall, "sweep row buffer too small");
    }
    status
}

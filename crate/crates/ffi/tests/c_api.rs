use std::ffi::{c_char, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use tripletcv_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        tcv_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn vacuum(n: usize) -> *mut TcvGaussianState {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { tcv_state_vacuum(n, &mut h) }, TcvStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(tcv_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn vacuum_handle_lifecycle() {
    let h = vacuum(2);
    let mut n = 0usize;
    assert_eq!(unsafe { tcv_state_n_modes(h, &mut n) }, TcvStatus::Ok);
    assert_eq!(n, 2);
    let mut cov = [0.0; 16];
    assert_eq!(
        unsafe { tcv_state_covariance(h, cov.as_mut_ptr(), cov.len()) },
        TcvStatus::Ok
    );
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(cov[4 * i + j], if i == j { 0.25 } else { 0.0 });
        }
    }
    let mut small = [0.0; 3];
    assert_eq!(
        unsafe { tcv_state_covariance(h, small.as_mut_ptr(), 3) },
        TcvStatus::BufferTooSmall
    );
    unsafe { tcv_state_free(h) };
    unsafe { tcv_state_free(ptr::null_mut()) };
}

#[test]
fn entangled_pair_variances() {
    let h = vacuum(2);
    let r = 0.5;
    unsafe {
        assert_eq!(tcv_state_squeeze(h, 0, r, 0.0), TcvStatus::Ok);
        assert_eq!(tcv_state_squeeze(h, 1, r, 0.0), TcvStatus::Ok);
        assert_eq!(
            tcv_state_beamsplit(h, 0, 1, 0.5, std::f64::consts::FRAC_PI_2),
            TcvStatus::Ok
        );
    }
    // X_C + X_D = √2·X_A, whose variance is 2·e^{-2r}/4.
    let modes = [0usize, 1];
    let phases = [0.0, 0.0];
    let weights = [1.0, 1.0];
    let mut v = 0.0;
    let st = unsafe {
        tcv_state_variance(
            h,
            modes.as_ptr(),
            phases.as_ptr(),
            weights.as_ptr(),
            2,
            &mut v,
        )
    };
    assert_eq!(st, TcvStatus::Ok);
    assert!((v - 0.5 * (-2.0 * r).exp()).abs() < 1e-12, "{v}");

    unsafe {
        assert_eq!(tcv_state_loss(h, 0, 0.0), TcvStatus::Ok);
        assert_eq!(tcv_state_loss(h, 1, 0.0), TcvStatus::Ok);
        assert_eq!(
            tcv_state_variance(
                h,
                modes.as_ptr(),
                phases.as_ptr(),
                weights.as_ptr(),
                2,
                &mut v
            ),
            TcvStatus::Ok
        );
        tcv_state_free(h);
    }
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn errors_map_to_codes_and_messages() {
    let h = vacuum(1);
    unsafe {
        assert_eq!(
            tcv_state_beamsplit(h, 0, 0, 0.5, 0.0),
            TcvStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        assert_eq!(tcv_state_loss(h, 0, 1.5), TcvStatus::InvalidArgument);
        assert_eq!(
            tcv_state_squeeze(h, 3, 0.1, 0.0),
            TcvStatus::InvalidArgument
        );
        assert!(last_error().contains('3'), "{}", last_error());
        assert_eq!(
            tcv_state_squeeze(ptr::null_mut(), 0, 0.1, 0.0),
            TcvStatus::NullPointer
        );
        let mut out = ptr::null_mut();
        assert_eq!(tcv_state_vacuum(0, &mut out), TcvStatus::InvalidArgument);
        assert!(out.is_null());
        tcv_state_free(h);
    }
}

#[test]
fn bell_table_and_correlations() {
    let mut table = [0u8; 24];
    assert_eq!(unsafe { tcv_bell_table(table.as_mut_ptr()) }, TcvStatus::Ok);
    assert_eq!(&table[..6], &[1, 1, 1, 0, 0, 0]);
    assert_eq!(&table[18..], &[0, 1, 0, 1, 0, 1]);

    let n = [0.6, 0.8, 0.0];
    let mut m = [0.0; 3];
    assert_eq!(
        unsafe { tcv_bell_correlated_direction(0, n.as_ptr(), m.as_mut_ptr()) },
        TcvStatus::Ok
    );
    assert!((m[0] + 0.6).abs() < 1e-12 && (m[1] + 0.8).abs() < 1e-12 && m[2].abs() < 1e-12);
    assert_eq!(
        unsafe { tcv_bell_correlated_direction(4, n.as_ptr(), m.as_mut_ptr()) },
        TcvStatus::InvalidArgument
    );
    let zero = [0.0; 3];
    assert_eq!(
        unsafe { tcv_bell_correlated_direction(1, zero.as_ptr(), m.as_mut_ptr()) },
        TcvStatus::InvalidArgument
    );
}

#[test]
fn experiment_entry_points() {
    let mut cfg = std::mem::MaybeUninit::<TcvExperimentConfig>::uninit();
    assert_eq!(
        unsafe { tcv_config_measured(cfg.as_mut_ptr()) },
        TcvStatus::Ok
    );
    let cfg = unsafe { cfg.assume_init() };
    assert_eq!(cfg.transmittance, 0.49);
    assert_eq!(cfg.combiner_sign, -1);

    let mut fig2 = TcvFig2 {
        individual_c_db: 0.0,
        individual_d_db: 0.0,
        sum_db: 0.0,
        difference_db: 0.0,
    };
    assert_eq!(unsafe { tcv_fig2(&cfg, &mut fig2) }, TcvStatus::Ok);
    assert!(fig2.individual_c_db > 15.0 && fig2.sum_db < 0.0 && fig2.difference_db < 0.0);

    let mut len = 0usize;
    let st = unsafe { tcv_sweep(&cfg, 1, 0.0, 0.0, 90.0, 5.0, ptr::null_mut(), 0, &mut len) };
    assert_eq!(st, TcvStatus::BufferTooSmall);
    assert_eq!(len, 19);
    let blank = TcvSweepRow {
        phi1_deg: 0.0,
        phi2_deg: 0.0,
        variance_linear: 0.0,
        variance_db: 0.0,
    };
    let mut rows = vec![blank; len];
    let st = unsafe {
        tcv_sweep(
            &cfg,
            1,
            0.0,
            0.0,
            90.0,
            5.0,
            rows.as_mut_ptr(),
            rows.len(),
            &mut len,
        )
    };
    assert_eq!(st, TcvStatus::Ok);
    assert_eq!(rows[18].phi2_deg, 90.0);
    assert_eq!(rows[18].phi1_deg, -90.0);
    assert!(rows.iter().all(|r| r.variance_db < 0.0));

    let bad = TcvExperimentConfig {
        visibility: 1.5,
        ..cfg
    };
    assert_eq!(
        unsafe { tcv_fig2(&bad, &mut fig2) },
        TcvStatus::InvalidArgument
    );
    let bad = TcvExperimentConfig {
        combiner_sign: 0,
        ..cfg
    };
    assert_eq!(
        unsafe {
            tcv_sweep(
                &bad,
                0,
                45.0,
                0.0,
                90.0,
                5.0,
                rows.as_mut_ptr(),
                rows.len(),
                &mut len,
            )
        },
        TcvStatus::InvalidArgument
    );
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("tripletcv.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build script");
    for name in [
        "tcv_state_vacuum",
        "tcv_state_free",
        "tcv_bell_table",
        "tcv_fig2",
        "tcv_sweep",
        "TCV_STATUS_OK",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"tripletcv.h\"\n\
         int main(void) { TcvGaussianState *s = 0; TcvStatus st = tcv_state_vacuum(2, &s); \
         tcv_state_free(s); return st == TCV_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(&include)
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(e) => panic!("{compiler} not runnable: {e}"),
        }
    }
}

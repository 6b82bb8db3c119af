use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use crowdperm_ffi::*;

fn last_error() -> String {
    let p = cp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn responses(n: usize, d: usize, e: &[i8]) -> *mut CpResponseMatrix {
    let mut y = ptr::null_mut();
    assert_eq!(
        unsafe { cp_response_matrix_new(n, d, e.as_ptr(), &mut y) },
        CpStatus::Ok
    );
    y
}

#[test]
fn probability_matrix_rejects_out_of_range_entries() {
    let mut q = ptr::null_mut();
    let e = [0.4, 0.9];
    let s = unsafe { cp_probability_matrix_new(1, 2, e.as_ptr(), false, &mut q) };
    assert_eq!(s, CpStatus::InvalidArgument);
    assert!(q.is_null());
    assert!(!last_error().is_empty());

    let s = unsafe { cp_probability_matrix_new(1, 2, e.as_ptr(), true, &mut q) };
    assert_eq!(s, CpStatus::Ok);
    unsafe { cp_probability_matrix_free(q) };
}

#[test]
fn null_arguments_are_reported() {
    let s = unsafe { cp_response_matrix_new(2, 2, ptr::null(), ptr::null_mut()) };
    assert_eq!(s, CpStatus::NullPointer);
    let mut n = 0;
    let mut d = 0;
    assert_eq!(
        unsafe { cp_response_matrix_dims(ptr::null(), &mut n, &mut d) },
        CpStatus::NullPointer
    );
    assert!(last_error().contains("null"));
    unsafe {
        cp_response_matrix_free(ptr::null_mut());
        cp_instance_free(ptr::null_mut());
        cp_probability_matrix_free(ptr::null_mut());
    }
}

#[test]
fn majority_vote_and_buffer_length_checks() {
    let y = responses(3, 2, &[1, -1, 1, 0, -1, -1]);
    let mut out = [0i8; 2];
    assert_eq!(
        unsafe { cp_majority_vote(y, out.as_mut_ptr(), 2) },
        CpStatus::Ok
    );
    assert_eq!(out, [1, -1]);

    let mut short = [0i8; 1];
    assert_eq!(
        unsafe { cp_majority_vote(y, short.as_mut_ptr(), 1) },
        CpStatus::DimensionMismatch
    );

    let mut buf = [0i8; 6];
    assert_eq!(
        unsafe { cp_response_matrix_copy(y, buf.as_mut_ptr(), 6) },
        CpStatus::Ok
    );
    assert_eq!(buf, [1, -1, 1, 0, -1, -1]);
    unsafe { cp_response_matrix_free(y) };
}

#[test]
fn scenario_sampling_and_estimators_round_trip() {
    let (n, d) = (40, 200);
    let mut inst = ptr::null_mut();
    let s = unsafe { cp_scenario_build(CpScenario::FewSmart, n, d, 1.0, true, 7, &mut inst) };
    assert_eq!(s, CpStatus::Ok);

    let mut truth = vec![0i8; d];
    assert_eq!(
        unsafe { cp_instance_truth(inst, truth.as_mut_ptr(), d) },
        CpStatus::Ok
    );

    let mut y = ptr::null_mut();
    assert_eq!(
        unsafe { cp_sample_responses(inst, 11, &mut y) },
        CpStatus::Ok
    );
    let (mut rn, mut rd) = (0, 0);
    assert_eq!(
        unsafe { cp_response_matrix_dims(y, &mut rn, &mut rd) },
        CpStatus::Ok
    );
    assert_eq!((rn, rd), (n, d));

    let mut p = 0.0;
    assert_eq!(unsafe { cp_estimate_pobs(y, &mut p) }, CpStatus::Ok);
    assert_eq!(p, 1.0);

    let mut est = vec![0i8; d];
    assert_eq!(
        unsafe { cp_obi_wan(y, 1.0, 3, est.as_mut_ptr(), d) },
        CpStatus::Ok
    );

    let mut q = ptr::null_mut();
    assert_eq!(unsafe { cp_instance_matrix(inst, &mut q) }, CpStatus::Ok);
    let mut loss = -1.0;
    let s = unsafe { cp_qstar_loss(q, est.as_ptr(), truth.as_ptr(), d, &mut loss) };
    assert_eq!(s, CpStatus::Ok);
    assert!((0.0..=1.0).contains(&loss));

    let mut ham = -1.0;
    assert_eq!(
        unsafe { cp_hamming(est.as_ptr(), truth.as_ptr(), d, &mut ham) },
        CpStatus::Ok
    );
    assert!((0.0..=1.0).contains(&ham));

    let mut report = CpClassReport::default();
    assert_eq!(
        unsafe { cp_classify_matrix(q, 1e-9, &mut report) },
        CpStatus::Ok
    );
    assert!(report.in_perm);

    let order: Vec<usize> = (0..n).collect();
    let mut info = CpWanInfo::default();
    let s = unsafe { cp_wan(y, order.as_ptr(), n, 1.0, est.as_mut_ptr(), d, &mut info) };
    assert_eq!(s, CpStatus::Ok);
    assert!(info.k_wan >= info.window_floor.min(n) && info.k_wan <= n);

    let mut v = vec![0.0; n];
    let mut lambda = 0.0;
    let s = unsafe { cp_top_eigenvector(y, 1e-10, 1000, v.as_mut_ptr(), n, &mut lambda) };
    assert_eq!(s, CpStatus::Ok);
    assert!(lambda > 0.0);
    let norm: f64 = v.iter().map(|x| x * x).sum();
    assert!((norm - 1.0).abs() < 1e-9);

    unsafe {
        cp_probability_matrix_free(q);
        cp_response_matrix_free(y);
        cp_instance_free(inst);
    }
}

#[test]
fn invalid_ordering_and_answers_are_rejected() {
    let y = responses(2, 2, &[1, 1, -1, 1]);
    let order = [0usize, 0];
    let mut out = [0i8; 2];
    let s = unsafe {
        cp_wan(
            y,
            order.as_ptr(),
            2,
            1.0,
            out.as_mut_ptr(),
            2,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, CpStatus::InvalidArgument);

    let a = [1i8, 2];
    let b = [1i8, 1];
    let mut h = 0.0;
    assert_eq!(
        unsafe { cp_hamming(a.as_ptr(), b.as_ptr(), 2, &mut h) },
        CpStatus::InvalidArgument
    );
    unsafe { cp_response_matrix_free(y) };
}

#[test]
fn collective_intelligence_of_uniform_abilities() {
    let w = [1.0, 1.0, 0.5, 0.5];
    let mut ci = 0.0;
    assert_eq!(
        unsafe { cp_collective_intelligence(w.as_ptr(), 4, &mut ci) },
        CpStatus::Ok
    );
    assert!((ci - 0.5).abs() < 1e-12);
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/crowdperm.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build script");
    for name in [
        "cp_last_error_message",
        "cp_scenario_build",
        "cp_obi_wan",
        "cp_qstar_loss",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler available; skipping syntax check");
        return;
    };
    assert!(status.success());
}

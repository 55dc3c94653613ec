use std::ffi::{CStr, CString};
use std::ptr;

use lozi_lab_ffi::*;

fn params(a: &str, b: &str) -> *mut LoziParams {
    let (a, b) = (CString::new(a).unwrap(), CString::new(b).unwrap());
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { lozi_params_new(a.as_ptr(), b.as_ptr(), true, 0, &mut p) }, LoziStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let m = lozi_last_error_message();
    assert!(!m.is_null());
    unsafe { CStr::from_ptr(m) }.to_string_lossy().into_owned()
}

#[test]
fn period_two_orbit_at_one_half() {
    let p = params("1", "1/2");
    let mut xy = [0.0; 4];
    assert_eq!(unsafe { lozi_params_period_two(p, xy.as_mut_ptr()) }, LoziStatus::Ok);
    assert_eq!(xy, [1.2, -0.2, -0.4, 0.6]);
    let mut x = [0.0; 2];
    assert_eq!(unsafe { lozi_params_fixed_point(p, x.as_mut_ptr()) }, LoziStatus::Ok);
    assert!((x[0] - 2.0 / 3.0).abs() < 1e-15 && (x[1] - 1.0 / 3.0).abs() < 1e-15);
    unsafe { lozi_params_free(p) };
}

#[test]
fn manifold_vertices_round_trip() {
    let p = params("1.06", "0.96");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { lozi_unstable_manifold_new(p, 4, 0, &mut m) }, LoziStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { lozi_manifold_vertex_count(m, LoziBranch::UPlus, &mut n) }, LoziStatus::Ok);
    assert!(n >= 2);
    let mut small = vec![0.0; 2];
    let mut w = 99usize;
    assert_eq!(unsafe { lozi_manifold_vertices(m, LoziBranch::UPlus, small.as_mut_ptr(), 1, &mut w) }, LoziStatus::BufferTooSmall);
    assert_eq!(w, 0);
    let mut xy = vec![0.0; 2 * n];
    assert_eq!(unsafe { lozi_manifold_vertices(m, LoziBranch::UPlus, xy.as_mut_ptr(), n, &mut w) }, LoziStatus::Ok);
    assert_eq!(w, n);
    let mut x = [0.0; 2];
    unsafe { lozi_params_fixed_point(p, x.as_mut_ptr()) };
    assert_eq!(&xy[0..2], &x);
    unsafe {
        lozi_manifold_free(m);
        lozi_params_free(p);
    }
}

#[test]
fn classify_and_json() {
    let p = params("1", "0.5");
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { lozi_classify(p, &mut v) }, LoziStatus::Ok);
    let mut r = LoziRegime::Unknown;
    assert_eq!(unsafe { lozi_verdict_regime(v, &mut r) }, LoziStatus::Ok);
    assert_eq!(r, LoziRegime::RCandidate);
    assert_eq!(unsafe { CStr::from_ptr(lozi_regime_name(r)) }.to_str().unwrap(), "RCandidate");
    let mut need = 0usize;
    assert_eq!(unsafe { lozi_verdict_json(v, ptr::null_mut(), 0, &mut need) }, LoziStatus::BufferTooSmall);
    let mut buf = vec![0 as std::ffi::c_char; need];
    assert_eq!(unsafe { lozi_verdict_json(v, buf.as_mut_ptr(), need, ptr::null_mut()) }, LoziStatus::Ok);
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    let json: serde_json::Value = serde_json::from_str(s).unwrap();
    assert_eq!(json["regime"], "RCandidate");
    unsafe {
        lozi_verdict_free(v);
        lozi_params_free(p);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut p = ptr::null_mut();
    let a = CString::new("banana").unwrap();
    let b = CString::new("0.5").unwrap();
    let s = unsafe { lozi_params_new(a.as_ptr(), b.as_ptr(), true, 0, &mut p) };
    assert_ne!(s, LoziStatus::Ok);
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { lozi_params_new(ptr::null(), b.as_ptr(), true, 0, &mut p) }, LoziStatus::NullArgument);
    let p = params("0.5", "0.25");
    let mut xy = [0.0; 4];
    let s = unsafe { lozi_params_period_two(p, xy.as_mut_ptr()) };
    assert_ne!(s, LoziStatus::Ok);
    let mut m = ptr::null_mut();
    assert_ne!(unsafe { lozi_unstable_manifold_new(p, 3, 0, &mut m) }, LoziStatus::Ok);
    assert!(m.is_null());
    let mut std_ = true;
    assert_eq!(unsafe { lozi_params_is_standard(p, &mut std_) }, LoziStatus::Ok);
    assert!(!std_);
    unsafe {
        lozi_params_free(p);
        lozi_params_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated_and_parses_as_c() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/lozi_lab.h");
    let h = std::fs::read_to_string(path).unwrap();
    for name in ["lozi_params_new", "lozi_classify", "lozi_manifold_vertices", "typedef struct LoziParams LoziParams", "LOZI_STATUS_BUDGET_EXHAUSTED"] {
        assert!(h.contains(name), "{name} missing from header");
    }
    match std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", path]).status() {
        Ok(st) => assert!(st.success()),
        Err(_) => eprintln!("no C compiler; syntax check skipped"),
    }
}

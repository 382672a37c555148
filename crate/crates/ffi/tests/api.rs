use std::ffi::{CStr, CString};
use std::ptr;

use capaflat_ffi::*;

fn last_error() -> String {
    let p = capaflat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn schwarzschild(m: f64, r0: f64) -> *mut CapaflatMetric {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { capaflat_metric_schwarzschild(m, r0, &mut h) }, CapaflatStatus::Ok);
    h
}

#[test]
fn schwarzschild_capacity_is_areal_shift() {
    let h = schwarzschild(2.0, 1.0);
    let mut cap = 0.0;
    assert_eq!(unsafe { capaflat_capacity(h, 0.0, &mut cap) }, CapaflatStatus::Ok);
    assert!((cap - 2.0).abs() < 1e-10, "{cap}");
    unsafe { capaflat_metric_free(h) };
}

#[test]
fn potential_handle_round_trip() {
    let mut metric = ptr::null_mut();
    assert_eq!(unsafe { capaflat_metric_flat(2.0, &mut metric) }, CapaflatStatus::Ok);
    let mut pot = ptr::null_mut();
    assert_eq!(unsafe { capaflat_potential_new(metric, 1e-12, &mut pot) }, CapaflatStatus::Ok);
    // the potential owns its metric
    unsafe { capaflat_metric_free(metric) };

    let (mut cap, mut phi, mut dphi, mut energy) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(capaflat_potential_cap(pot, &mut cap), CapaflatStatus::Ok);
        assert_eq!(capaflat_potential_phi(pot, 4.0, &mut phi), CapaflatStatus::Ok);
        assert_eq!(capaflat_potential_dphi(pot, 4.0, &mut dphi), CapaflatStatus::Ok);
        assert_eq!(capaflat_capacity_energy(pot, &mut energy), CapaflatStatus::Ok);
    }
    // flat exterior: phi = 1 - r0/r
    assert!((cap - 2.0).abs() < 1e-12);
    assert!((phi - 0.5).abs() < 1e-12);
    assert!((dphi - 2.0 / 16.0).abs() < 1e-12);
    assert!((energy - 2.0).abs() < 1e-9);

    assert_eq!(unsafe { capaflat_potential_phi(pot, 1.0, &mut phi) }, CapaflatStatus::InvalidInput);
    assert_eq!(unsafe { capaflat_potential_dphi(pot, 1.0, &mut dphi) }, CapaflatStatus::InvalidInput);
    unsafe { capaflat_potential_free(pot) };
}

#[test]
fn flow_variation_of_schwarzschild_is_one() {
    let h = schwarzschild(1.0, 1.0);
    let mut v = 0.0;
    assert_eq!(unsafe { capaflat_flow_variation(h, 1.5, 0.0, &mut v) }, CapaflatStatus::Ok);
    assert!((v - 1.0).abs() < 1e-8, "{v}");
    unsafe { capaflat_metric_free(h) };
}

#[test]
fn bounds_round_trip() {
    let (mut area, mut hmc, mut m, mut r0) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(capaflat_schwarzschild_bartnik_data(1.0, 2.0, &mut area, &mut hmc), CapaflatStatus::Ok);
        assert_eq!(capaflat_round_data_to_schwarzschild(area, hmc, &mut m, &mut r0), CapaflatStatus::Ok);
    }
    assert!((m - 1.0).abs() < 1e-10 && (r0 - 2.0).abs() < 1e-10, "{m} {r0}");

    let (mut bound, mut cap) = (0.0, 0.0);
    unsafe {
        assert_eq!(capaflat_bray_miao_bound(area, hmc, &mut bound), CapaflatStatus::Ok);
        assert_eq!(capaflat_max_capacity_round(area, hmc, &mut cap), CapaflatStatus::Ok);
    }
    // the maximal capacity is attained by Schwarzschild: r0 + m/2
    assert!((cap - 2.5).abs() < 1e-10, "{cap}");
    assert!(cap <= bound + 1e-12);
}

#[test]
fn hs_examples_have_small_residual() {
    let mut res = f64::NAN;
    let cases = [
        (CapaflatHsExample::Flat, 0.0, 1.0, 1.5, 8.0),
        (CapaflatHsExample::Schwarzschild, 2.0, 1.0, 1.5, 8.0),
        (CapaflatHsExample::Sphere, 0.0, 0.0, -0.5, 0.5),
    ];
    for (ex, m, r0, lo, hi) in cases {
        let s = unsafe { capaflat_hs_example_residual(ex, m, r0, 3.0, lo, hi, 64, &mut res) };
        assert_eq!(s, CapaflatStatus::Ok, "{ex:?}: {}", last_error());
        assert!(res < 1e-8, "{ex:?}: {res}");
    }
    let s = unsafe { capaflat_hs_example_residual(CapaflatHsExample::Flat, 0.0, 1.0, 3.0, 1.5, 8.0, 0, &mut res) };
    assert_eq!(s, CapaflatStatus::InvalidInput);
}

#[test]
fn json_metric_matches_direct_constructor() {
    let json = CString::new(r#"{"family":"conformal","spec":"schwarzschild","m":2,"r0":1,"r1":"inf"}"#).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { capaflat_metric_from_json(json.as_ptr(), &mut h) }, CapaflatStatus::Ok);
    let mut cap = 0.0;
    assert_eq!(unsafe { capaflat_capacity(h, 0.0, &mut cap) }, CapaflatStatus::Ok);
    assert!((cap - 2.0).abs() < 1e-10);
    unsafe { capaflat_metric_free(h) };

    let bad = CString::new("{not json").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { capaflat_metric_from_json(bad.as_ptr(), &mut h) }, CapaflatStatus::InvalidInput);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    let mut x = 0.0;
    unsafe {
        // mass too large for the inner sphere to lie outside the horizon
        assert_eq!(capaflat_metric_schwarzschild(4.0, 1.0, &mut h), CapaflatStatus::InvalidInput);
        assert!(last_error().contains("invalid input"));
        assert_eq!(capaflat_metric_flat(-1.0, &mut h), CapaflatStatus::InvalidInput);
        assert_eq!(capaflat_metric_flat(1.0, ptr::null_mut()), CapaflatStatus::NullPointer);
        assert_eq!(capaflat_capacity(ptr::null(), 0.0, &mut x), CapaflatStatus::NullPointer);
        assert_eq!(capaflat_potential_cap(ptr::null(), &mut x), CapaflatStatus::NullPointer);
        assert_eq!(capaflat_metric_from_json(ptr::null(), &mut h), CapaflatStatus::NullPointer);
        assert_eq!(capaflat_bray_miao_bound(-1.0, 0.0, &mut x), CapaflatStatus::InvalidInput);
        capaflat_metric_free(ptr::null_mut());
        capaflat_potential_free(ptr::null_mut());
    }
    // a successful call clears the message
    let ok = schwarzschild(1.0, 1.0);
    assert!(capaflat_last_error().is_null());
    unsafe { capaflat_metric_free(ok) };
}

#[test]
fn status_names_are_distinct() {
    let all = [
        CapaflatStatus::Ok,
        CapaflatStatus::NullPointer,
        CapaflatStatus::InvalidInput,
        CapaflatStatus::UnsupportedFamily,
        CapaflatStatus::CapacityUndefined,
        CapaflatStatus::Convergence,
        CapaflatStatus::Extrapolation,
        CapaflatStatus::Newton,
        CapaflatStatus::BoundaryMismatch,
        CapaflatStatus::StepFailure,
        CapaflatStatus::Evaluation,
        CapaflatStatus::Panic,
    ];
    let names: std::collections::HashSet<String> = all
        .iter()
        .map(|s| unsafe { CStr::from_ptr(capaflat_status_name(*s)) }.to_string_lossy().into_owned())
        .collect();
    assert_eq!(names.len(), all.len());
}

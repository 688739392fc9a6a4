use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cfree_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cfree_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = cfree_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

fn law(json: &str) -> *mut CfreeLaw {
    let json = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cfree_law_from_json(json.as_ptr(), &mut out) }, CfreeStatus::Ok);
    out
}

#[test]
fn law_round_trip_and_moments() {
    let l = law(r#"{"psi": ["1/2", 1], "phi": [0, "-3/4"]}"#);
    assert_eq!(unsafe { cfree_law_order(l) }, 2);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cfree_law_moment(l, CfreeState::Phi, 2, &mut s) }, CfreeStatus::Ok);
    assert_eq!(take_string(s), "-3/4");
    assert_eq!(unsafe { cfree_law_moment(l, CfreeState::Psi, 3, &mut s) }, CfreeStatus::InvalidArgument);
    assert!(last_error().unwrap().contains("outside"));
    assert_eq!(unsafe { cfree_law_to_json(l, &mut s) }, CfreeStatus::Ok);
    let json = take_string(s);
    assert!(json.contains("\"1/2\""));
    assert!(last_error().is_none());
    unsafe { cfree_law_free(l) };
}

#[test]
fn transform_and_invert() {
    let l = law(r#"{"psi": [0, 0, 0], "phi": ["1/2", "1/4", "1/8"]}"#);
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { cfree_transform(l, CfreeTransform::CR, &mut series) }, CfreeStatus::Ok);
    assert_eq!(unsafe { cfree_series_order(series) }, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cfree_series_coeff(series, 1, &mut s) }, CfreeStatus::Ok);
    assert_eq!(take_string(s), "1/2");
    assert_eq!(unsafe { cfree_invert(CfreeTransform::CR, series, l, &mut s) }, CfreeStatus::Ok);
    assert_eq!(take_string(s), r#"["1/2","1/4","1/8"]"#);
    assert_eq!(unsafe { cfree_invert(CfreeTransform::CR, series, ptr::null(), &mut s) }, CfreeStatus::Domain);
    unsafe {
        cfree_series_free(series);
        cfree_law_free(l);
    }
}

#[test]
fn series_json_and_errors() {
    let json = CString::new(r#"{"order": 2, "coeffs": ["0", "1", "1"]}"#).unwrap();
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { cfree_series_from_json(json.as_ptr(), &mut series) }, CfreeStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cfree_series_to_json(series, &mut s) }, CfreeStatus::Ok);
    assert_eq!(take_string(s), r#"{"order":2,"coeffs":["0","1","1"]}"#);
    unsafe { cfree_series_free(series) };

    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { cfree_series_from_json(bad.as_ptr(), &mut series) }, CfreeStatus::Parse);
    assert_eq!(unsafe { cfree_law_from_json(ptr::null(), ptr::null_mut()) }, CfreeStatus::NullPointer);
    let invalid = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { cfree_law_from_json(invalid.as_ptr(), &mut ptr::null_mut()) }, CfreeStatus::InvalidUtf8);
    let no_psi = law(r#"{"psi": [0, 1], "phi": [1, 1]}"#);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cfree_transform(no_psi, CfreeTransform::T, &mut out) }, CfreeStatus::Domain);
    unsafe { cfree_law_free(no_psi) };
}

#[test]
fn convolution_paths_agree() {
    let x = law(r#"{"psi": [1, "1/2", 2], "phi": [2, 0, "1/3"]}"#);
    let y = law(r#"{"psi": [-1, 1, 0], "phi": ["1/2", 1, 1]}"#);
    for kind in [CfreeConvolution::Add, CfreeConvolution::Mul] {
        let mut jsons = Vec::new();
        for path in [CfreePath::Transform, CfreePath::Axiomatic, CfreePath::Operator] {
            let mut out = ptr::null_mut();
            assert_eq!(unsafe { cfree_convolve(kind, path, x, y, 3, &mut out) }, CfreeStatus::Ok);
            let mut s = ptr::null_mut();
            assert_eq!(unsafe { cfree_law_to_json(out, &mut s) }, CfreeStatus::Ok);
            jsons.push(take_string(s));
            unsafe { cfree_law_free(out) };
        }
        assert!(jsons.windows(2).all(|w| w[0] == w[1]));
        let mut agree = false;
        let mut report = ptr::null_mut();
        assert_eq!(unsafe { cfree_cross_check(kind, x, y, 3, &mut agree, &mut report) }, CfreeStatus::Ok);
        assert!(agree);
        assert!(take_string(report).contains("\"agree\":true"));
    }
    unsafe {
        cfree_law_free(x);
        cfree_law_free(y);
    }
}

#[test]
fn verify_suite() {
    let suite = CString::new("crthm").unwrap();
    let mut passed = false;
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { cfree_verify(suite.as_ptr(), 2, 7, 4, &mut passed, &mut report) }, CfreeStatus::Ok);
    assert!(passed);
    assert!(take_string(report).contains("\"suite\":\"crthm\""));
    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { cfree_verify(unknown.as_ptr(), 1, 0, 4, &mut passed, &mut report) }, CfreeStatus::Parse);
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        cfree_law_free(ptr::null_mut());
        cfree_series_free(ptr::null_mut());
        cfree_string_free(ptr::null_mut());
        assert_eq!(cfree_law_order(ptr::null()), 0);
    }
    let version = unsafe { CStr::from_ptr(cfree_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

use std::ffi::{CStr, CString};
use std::ptr;

use super::*;

fn ring(p: u64, alpha: u32) -> *mut BdrRingHandle {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_ring_new(p, 2, 10, alpha, 1, &mut r) }, BdrStatus::Ok);
    r
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(bdrplus_last_error()) }.to_str().unwrap().to_string()
}

fn to_json(v: *const BdrValue) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_value_to_json(v, &mut s) }, BdrStatus::Ok);
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { bdrplus_string_free(s) };
    out
}

fn from_json(doc: &str) -> (BdrStatus, *mut BdrValue) {
    let c = CString::new(doc).unwrap();
    let mut v = ptr::null_mut();
    let status = unsafe { bdrplus_value_from_json(c.as_ptr(), &mut v) };
    (status, v)
}

fn parse(doc: &str) -> *mut BdrValue {
    let (status, v) = from_json(doc);
    assert_eq!(status, BdrStatus::Ok, "{}", last_error());
    v
}

fn constant(r: *const BdrRingHandle, name: &str) -> *mut BdrValue {
    let c = CString::new(name).unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_ring_constant(r, c.as_ptr(), &mut v) }, BdrStatus::Ok, "{name}");
    v
}

#[test]
fn invalid_profile_sets_code_and_message() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_ring_new(4, 1, 8, 2, 1, &mut r) }, BdrStatus::InvalidProfile);
    assert!(r.is_null());
    assert!(last_error().starts_with("invalid profile"));
    assert_eq!(unsafe { bdrplus_ring_new(3, 1, 8, 2, 1, ptr::null_mut()) }, BdrStatus::NullArgument);
}

#[test]
fn constants_and_arithmetic() {
    let r = ring(3, 2);
    let t = constant(r, "t");
    let zeta = constant(r, "zeta_9");
    let mut kind = BdrKind::Cocycle;
    assert_eq!(unsafe { bdrplus_value_kind(t, &mut kind) }, BdrStatus::Ok);
    assert_eq!(kind, BdrKind::Element);
    // t^2 = 0 at alpha = 2
    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_value_mul(t, t, &mut sq) }, BdrStatus::Ok);
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_value_add(sq, zeta, &mut sum) }, BdrStatus::Ok);
    let mut eq = false;
    assert_eq!(unsafe { bdrplus_value_equal(sum, zeta, &mut eq) }, BdrStatus::Ok);
    assert!(eq);
    let bad = CString::new("zeta_27").unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_ring_constant(r, bad.as_ptr(), &mut v) }, BdrStatus::DomainViolation);
    let other = ring(5, 2);
    let t5 = constant(other, "t");
    assert_eq!(unsafe { bdrplus_value_add(t, t5, &mut v) }, BdrStatus::RingMismatch);
    unsafe {
        for x in [t, zeta, sq, sum, t5] {
            bdrplus_value_free(x);
        }
        bdrplus_ring_free(r);
        bdrplus_ring_free(other);
    }
}

#[test]
fn json_roundtrip_through_handles() {
    let r = ring(3, 2);
    let xi = constant(r, "xi");
    let text = to_json(xi);
    let (status, back) = from_json(&text);
    assert_eq!(status, BdrStatus::Ok);
    let mut eq = false;
    assert_eq!(unsafe { bdrplus_value_equal(xi, back, &mut eq) }, BdrStatus::Ok);
    assert!(eq);
    assert_eq!(to_json(back), text);
    let (status, v) = from_json("{\"schema_version\": 7}");
    assert_eq!(status, BdrStatus::Parse);
    assert!(v.is_null());
    unsafe {
        bdrplus_value_free(xi);
        bdrplus_value_free(back);
        bdrplus_ring_free(r);
    }
}

#[test]
fn log_exp_roundtrip() {
    let r = ring(3, 2);
    let mut phi = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_random_cocycle(r, 11, 2, 2, 1, &mut phi) }, BdrStatus::Ok);
    assert_eq!(unsafe { bdrplus_cocycle_check(phi) }, BdrStatus::Ok);
    let mut nabla = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_log(phi, &mut nabla) }, BdrStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_exp(nabla, 1, &mut back) }, BdrStatus::Ok);
    let mut eq = false;
    assert_eq!(unsafe { bdrplus_value_equal(phi, back, &mut eq) }, BdrStatus::Ok);
    assert!(eq);
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_log(nabla, &mut v) }, BdrStatus::WrongKind);
    assert_eq!(unsafe { bdrplus_mth_root(phi, 2, &mut v) }, BdrStatus::WrongKind);
    unsafe {
        bdrplus_value_free(phi);
        bdrplus_value_free(nabla);
        bdrplus_value_free(back);
        bdrplus_ring_free(r);
    }
}

/// Coordinates of an integer in the power basis of `Q_p(zeta_p)`.
fn coeffs(x: i64, p: u64) -> Vec<String> {
    std::iter::once(x.to_string()).chain((1..p - 1).map(|_| "0".to_string())).collect()
}

fn matrix_doc(p: u64, rows: usize, entries: &[i64]) -> String {
    let elem = |x: i64| {
        if x == 0 {
            serde_json::json!({ "abs": "10" })
        } else {
            let m = p.pow(10) as i64;
            serde_json::json!({ "scale_exp": "0", "abs": "10", "coeffs": coeffs(x.rem_euclid(m), p) })
        }
    };
    let entries: Vec<_> = entries.iter().map(|&x| serde_json::json!({ "digits": [elem(x), { "abs": "10" }] })).collect();
    serde_json::json!({
        "schema_version": 1,
        "profile": { "p": p, "k": 1, "N": 10, "alpha": 2, "s": 1, "n_max": 1 },
        "payload": { "type": "matrix", "entry": "bdr", "rows": rows, "cols": entries.len() / rows, "entries": entries },
    })
    .to_string()
}

#[test]
fn normal_forms_through_handles() {
    let p = 7;
    let a = parse(&matrix_doc(p, 1, &[2]));
    let b = parse(&matrix_doc(p, 1, &[5]));
    let x = parse(&matrix_doc(p, 1, &[1]));
    let mut y = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_sylvester(a, b, x, &mut y) }, BdrStatus::Ok);
    assert_eq!(unsafe { bdrplus_sylvester(a, a, x, &mut y) }, BdrStatus::SpectraNotDisjoint);
    let four = parse(&matrix_doc(p, 1, &[4]));
    let mut root = ptr::null_mut();
    assert_eq!(unsafe { bdrplus_mth_root(four, 2, &mut root) }, BdrStatus::Ok);
    let mut sq = ptr::null_mut();
    let three = parse(&matrix_doc(p, 1, &[3]));
    assert_eq!(unsafe { bdrplus_mth_root(three, 2, &mut sq) }, BdrStatus::ResidueRootMissing);
    let h = parse(&matrix_doc(p, 2, &[1, 0, 0, 2]));
    let (mut m, mut hh) = (ptr::null_mut(), ptr::null_mut());
    let types = [1usize, 1];
    assert_eq!(unsafe { bdrplus_block_diagonalize(h, types.as_ptr(), 2, &mut m, &mut hh) }, BdrStatus::Ok);
    let mut eq = false;
    assert_eq!(unsafe { bdrplus_value_equal(hh, h, &mut eq) }, BdrStatus::Ok);
    assert!(eq);
    unsafe {
        for v in [a, b, x, y, four, root, three, h, m, hh] {
            bdrplus_value_free(v);
        }
    }
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/bdrplus.h");
    for name in ["bdrplus_ring_new", "bdrplus_value_from_json", "bdrplus_log", "bdrplus_block_diagonalize", "BDR_STATUS_OK"] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}

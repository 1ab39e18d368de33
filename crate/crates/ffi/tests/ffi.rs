use permdeg_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

const HEIS: &str = "group H prime p\ngenerators x, y, z\norder p^3\n[x, y] = z\nx^p = y^p = z^p = 1\n";

fn last_error() -> String {
    let e = permdeg_last_error();
    assert!(!e.is_null());
    let s = unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned();
    unsafe { permdeg_string_free(e) };
    s
}

fn build(text: &str, p: u64) -> Result<*mut PermdegGroup, PermdegStatus> {
    let t = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    let s = unsafe { permdeg_group_from_presentation(t.as_ptr(), p, ptr::null(), &mut g) };
    if s == PermdegStatus::Ok {
        Ok(g)
    } else {
        Err(s)
    }
}

#[test]
fn heisenberg_degrees() {
    let g = build(HEIS, 5).unwrap();
    unsafe {
        assert_eq!(permdeg_group_log_order(g), 3);
        assert_eq!(permdeg_group_prime(g), 5);
        assert_eq!(permdeg_group_log_center(g), 1);
        assert!(permdeg_group_is_consistent(g));
        let mut m = 0u64;
        assert_eq!(permdeg_mu(g, 0, &mut m), PermdegStatus::Ok);
        assert_eq!(m, 25);
        let mut c = 0u64;
        assert_eq!(permdeg_c(g, 0, &mut c), PermdegStatus::Ok);
        assert_eq!(c, 25);
        permdeg_group_free(g);
    }
}

#[test]
fn export_and_certificate_strings() {
    let g = build(HEIS, 3).unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(permdeg_export(g, 0, &mut s), PermdegStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        permdeg_string_free(s);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("degree 9"));
        assert_eq!(lines.count(), 3);

        let mut j = ptr::null_mut();
        assert_eq!(permdeg_mu_certificate_json(g, 0, &mut j), PermdegStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(j).to_str().unwrap()).unwrap();
        permdeg_string_free(j);
        assert_eq!(v["degree"], "9");
        permdeg_group_free(g);
    }
}

#[test]
fn catalog_lookup() {
    let id = CString::new("G_(3,3)").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(permdeg_group_from_catalog(ptr::null(), id.as_ptr(), 5, ptr::null(), &mut g), PermdegStatus::Ok);
        let mut m = 0u64;
        assert_eq!(permdeg_mu(g, 0, &mut m), PermdegStatus::Ok);
        assert_eq!(m, 625);
        permdeg_group_free(g);
        let mut failures = 99u32;
        assert_eq!(permdeg_verify_catalog(ptr::null(), 5, false, 0, &mut failures), PermdegStatus::Ok);
        assert_eq!(failures, 0);
    }
}

#[test]
fn error_codes() {
    assert_eq!(build(HEIS, 4).unwrap_err(), PermdegStatus::InvalidPrime);
    assert!(last_error().contains("not an odd prime"));
    assert_eq!(build("group H prime p\ngenerators x\n[x, q] = 1\n", 5).unwrap_err(), PermdegStatus::Parse);
    let g = build(HEIS, 7).unwrap();
    unsafe {
        let mut m = 0u64;
        assert_eq!(permdeg_mu(g, 1, &mut m), PermdegStatus::BudgetExhausted);
        assert_eq!(permdeg_mu(ptr::null(), 0, &mut m), PermdegStatus::NullPointer);
        assert_eq!(permdeg_mu(g, 0, ptr::null_mut()), PermdegStatus::NullPointer);
        permdeg_group_free(g);
        permdeg_group_free(ptr::null_mut());
        permdeg_string_free(ptr::null_mut());
    }
    let id = CString::new("G_(99,99)").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { permdeg_group_from_catalog(ptr::null(), id.as_ptr(), 5, ptr::null(), &mut h) }, PermdegStatus::Catalog);
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/permdeg.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["permdeg_mu", "permdeg_c", "permdeg_group_free", "permdeg_string_free", "permdeg_export"] {
        assert!(text.contains(&format!("{f}(")), "{f} missing from header");
    }
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() else {
        return;
    };
    assert!(status.success());
}

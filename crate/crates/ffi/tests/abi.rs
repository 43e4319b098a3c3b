use std::ffi::{c_char, CStr, CString};
use std::ptr;

use idemkern_ffi::*;

const DIAMOND: &str = r#"{"semiring":{"instance":"boolean"},"points":["x1","x2","x3"],
  "carrier":[["0","0","0"],["1","0","0"],["0","1","0"],["1","1","1"]]}"#;

const NON_INTEGRAL: &str = r#"{"semiring":{"instance":"fuzzy-chain","n":2},
  "source":{"points":["x1","x2"],"carrier":[["0","0"],["1","0"],["1","1"],["2","1"]]},
  "table":[[0,["0"]],[1,["0"]],[2,["1"]],[3,["2"]]]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ik_last_error()) }.to_str().unwrap().to_string()
}

fn take(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ik_string_free(p) };
    s
}

#[test]
fn semimodule_handle() {
    let json = c(DIAMOND);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ik_semimodule_from_json(json.as_ptr(), &mut m) }, IkStatus::Ok);
    let (mut dim, mut len, mut b_sub, mut holds) = (0usize, 0usize, true, false);
    unsafe {
        assert_eq!(ik_semimodule_dim(m, &mut dim), IkStatus::Ok);
        assert_eq!(ik_semimodule_len(m, &mut len), IkStatus::Ok);
        assert_eq!(ik_semimodule_is_b_subsemimodule(m, &mut b_sub), IkStatus::Ok);
        assert_eq!(ik_semimodule_identity_integral(m, &mut holds), IkStatus::Ok);
        ik_semimodule_free(m);
    }
    assert_eq!((dim, len, b_sub, holds), (3, 4, false, true));
}

#[test]
fn full_space_over_rationals_has_no_length() {
    let json = c(r#"{"semiring":{"instance":"max-plus"},"dim":2,"full":true}"#);
    let mut m = ptr::null_mut();
    let mut len = 0usize;
    unsafe {
        assert_eq!(ik_semimodule_from_json(json.as_ptr(), &mut m), IkStatus::Ok);
        assert_eq!(ik_semimodule_len(m, &mut len), IkStatus::InvalidInput);
        ik_semimodule_free(m);
    }
    assert!(last_error().contains("enumerable"));
}

#[test]
fn operator_kernel_verdicts() {
    let json = c(r#"{"semiring":{"instance":"max-plus"},"source":{"dim":2,"full":true},
        "target":{"dim":1,"full":true},"kernel":[["3"],["-1/2"]]}"#);
    let mut op = ptr::null_mut();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(ik_operator_from_json(json.as_ptr(), &mut op), IkStatus::Ok);
        assert_eq!(ik_operator_max_kernel(op, &mut out), IkStatus::Ok);
        ik_operator_free(op);
    }
    let k: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(k["kernel"], serde_json::json!([["3"], ["-1/2"]]));

    let json = c(NON_INTEGRAL);
    unsafe {
        assert_eq!(ik_operator_from_json(json.as_ptr(), &mut op), IkStatus::Ok);
        assert_eq!(ik_operator_max_kernel(op, &mut out), IkStatus::VerdictNegative);
        ik_operator_free(op);
    }
    assert!(take(out).contains("\"kernel\""));
}

#[test]
fn run_mirrors_command_statuses() {
    let mut out = ptr::null_mut();
    let graph = c(r#"{"nodes":["a","b"],"edges":[["a","b",1,1],["b","a",-2,1]],"source":"a"}"#);
    let cmd = c("shortest-path");
    assert_eq!(
        unsafe { ik_run(cmd.as_ptr(), graph.as_ptr(), 0, &mut out) },
        IkStatus::VerdictNegative
    );
    assert!(take(out).contains("negative_cycle"));

    let spec = c(r#"{"instance":"fuzzy-chain","n":4}"#);
    let cmd = c("axioms");
    assert_eq!(
        unsafe { ik_run(cmd.as_ptr(), spec.as_ptr(), 1, &mut out) },
        IkStatus::Ok
    );
    take(out);

    let cmd = c("no-such-command");
    out = ptr::null_mut();
    assert_eq!(
        unsafe { ik_run(cmd.as_ptr(), spec.as_ptr(), 0, &mut out) },
        IkStatus::InvalidInput
    );
    assert!(out.is_null());
    assert!(last_error().contains("no-such-command"));
}

#[test]
fn invalid_input_and_nulls() {
    let bad = c("{\"semiring\":{\"instance\":\"boolean\"}");
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { ik_semimodule_from_json(bad.as_ptr(), &mut m) },
        IkStatus::InvalidInput
    );
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    let good = c(DIAMOND);
    assert_eq!(
        unsafe { ik_semimodule_from_json(good.as_ptr(), ptr::null_mut()) },
        IkStatus::NullPointer
    );
    let mut dim = 0usize;
    assert_eq!(
        unsafe { ik_semimodule_dim(ptr::null(), &mut dim) },
        IkStatus::NullPointer
    );
    unsafe {
        ik_semimodule_free(ptr::null_mut());
        ik_operator_free(ptr::null_mut());
        ik_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(ik_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

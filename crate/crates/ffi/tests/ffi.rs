use std::ffi::{CStr, CString};
use std::ptr;

use qkdv_ffi::*;

fn parse(text: &str) -> *mut QkdvOp {
    let t = CString::new(text).unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { qkdv_op_parse(t.as_ptr(), 2, 4, &mut op) }, QKDV_OK);
    op
}

fn text(op: *const QkdvOp) -> String {
    unsafe {
        let s = qkdv_op_to_string(op);
        let r = CStr::from_ptr(s).to_str().unwrap().to_string();
        qkdv_string_free(s);
        r
    }
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(qkdv_last_error())
            .to_str()
            .unwrap()
            .to_string()
    }
}

#[test]
fn parse_print_round_trip() {
    let op = parse("D^2 - t1(z) D + 1");
    let s = text(op);
    let again = parse(&s);
    assert_eq!(text(again), s);
    unsafe {
        qkdv_op_free(op);
        qkdv_op_free(again);
    }
}

#[test]
fn root_is_truncated_and_round_trips() {
    let l = parse("D^2 - t1(z) D + 1");
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qkdv_op_nth_root(l, 2, 4, &mut p) }, QKDV_OK);
    let s = text(p);
    assert!(s.contains("*D^1 + ") && s.ends_with("+ O(D^-5)"), "{s}");
    let again = parse(&s);
    assert_eq!(text(again), s);
    unsafe {
        qkdv_op_free(l);
        qkdv_op_free(p);
        qkdv_op_free(again);
    }
}

#[test]
fn errors_have_codes_and_messages() {
    let bad = CString::new("t1[0]^-1").unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(
        unsafe { qkdv_op_parse(bad.as_ptr(), 2, 4, &mut op) },
        QKDV_ERR_PARSE
    );
    assert!(op.is_null());
    assert!(last_error().contains("not a unit"));
    assert_eq!(
        unsafe { qkdv_op_parse(ptr::null(), 2, 4, &mut op) },
        QKDV_ERR_NULL
    );
    let t = CString::new("D").unwrap();
    assert_eq!(
        unsafe { qkdv_op_parse(t.as_ptr(), -1, 4, &mut op) },
        QKDV_ERR_CONFIG
    );
    let l = parse("2*D^2");
    assert_eq!(
        unsafe { qkdv_op_nth_root(l, 2, 4, &mut op) },
        QKDV_ERR_COMPUTE
    );
    unsafe { qkdv_op_free(l) };
}

#[test]
fn verify_returns_a_json_report() {
    let suite = CString::new("toda").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { qkdv_verify(suite.as_ptr(), 2, 2, &mut json) },
        QKDV_OK
    );
    let s = unsafe { CStr::from_ptr(json).to_str().unwrap().to_string() };
    unsafe { qkdv_string_free(json) };
    assert!(
        s.contains("\"suite\": \"toda\"")
            && s.contains("\"anchor\"")
            && s.contains("\"pass\": true")
    );
    let bad = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { qkdv_verify(bad.as_ptr(), 2, 2, &mut json) },
        QKDV_ERR_CONFIG
    );
}

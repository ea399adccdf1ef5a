use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rvaluation_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a returned string.
unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    rv_string_free(s);
    owned
}

fn last_error() -> String {
    let p = rv_last_error();
    assert!(!p.is_null(), "no error message recorded");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn poset(src: &str) -> *mut RvPoset {
    let mut p = ptr::null_mut();
    assert_eq!(rv_poset_parse(c(src).as_ptr(), &mut p), RvStatus::Ok);
    p
}

unsafe fn function(src: &str) -> *mut RvFunction {
    let mut f = ptr::null_mut();
    assert_eq!(rv_function_parse(c(src).as_ptr(), &mut f), RvStatus::Ok);
    f
}

#[test]
fn evaluates_valuation_and_measure() {
    unsafe {
        let p = poset("poset { x; y }");
        assert_eq!(rv_poset_len(p), 2);
        let mut out = ptr::null_mut();
        let st = rv_valuation_evaluate(
            p,
            c("[1/2,1/2]@x; [1/4,1/3]@y").as_ptr(),
            c("fn h { x -> [1,2]; y -> [0,inf] }").as_ptr(),
            &mut out,
        );
        assert_eq!(st, RvStatus::Ok);
        // [1/2,1] + [1/4·0, 1/3·inf]
        assert_eq!(take(out), "[1/2,inf]");
        assert!(rv_last_error().is_null());
        rv_poset_free(p);

        let p = poset("poset { x; y; x <= y }");
        let st = rv_measure_evaluate(
            p,
            c("measure { 1 @ x; 1 @ y }").as_ptr(),
            c("fn h { x -> [1,3]; y -> [2,2] }").as_ptr(),
            &mut out,
        );
        assert_eq!(st, RvStatus::Ok);
        assert_eq!(take(out), "[3,5]");
        rv_poset_free(p);
    }
}

#[test]
fn integrates_identity() {
    unsafe {
        let f = function("piecewise { [0,1] inc: x }");
        let mut out = ptr::null_mut();
        assert_eq!(rv_lebesgue_n(f, 2, &mut out), RvStatus::Ok);
        assert_eq!(take(out), "[3/8,5/8]");

        let mut depth = 0u32;
        for threads in [0, 1, 4] {
            assert_eq!(rv_integrate(f, c("1/8").as_ptr(), 24, threads, &mut out, &mut depth), RvStatus::Ok);
            assert_eq!((take(out), depth), ("[7/16,9/16]".to_owned(), 3));
        }

        assert_eq!(rv_integrate(f, c("1/8").as_ptr(), 2, 1, &mut out, &mut depth), RvStatus::DepthCap);
        assert_eq!((take(out), depth), ("[3/8,5/8]".to_owned(), 2));
        assert!(last_error().contains("cap"));
        rv_function_free(f);
    }
}

#[test]
fn reports_errors() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(rv_poset_parse(c("poset { a; <= }").as_ptr(), &mut p), RvStatus::Parse);
        assert!(p.is_null());
        assert!(last_error().contains("1:12"), "{}", last_error());

        assert_eq!(rv_poset_parse(ptr::null(), &mut p), RvStatus::NullPointer);
        assert_eq!(rv_poset_parse(c("poset { a }").as_ptr(), ptr::null_mut()), RvStatus::NullPointer);

        let bad = [0xffu8, 0];
        assert_eq!(rv_poset_parse(bad.as_ptr().cast(), &mut p), RvStatus::InvalidUtf8);

        let mut f = ptr::null_mut();
        let st = rv_function_parse(c("piecewise { [0,1/2] inc: x }").as_ptr(), &mut f);
        assert_eq!(st, RvStatus::Parse);

        let f = function("piecewise { [0,1] inc: x }");
        let (mut out, mut depth) = (ptr::null_mut(), 0);
        assert_eq!(rv_integrate(f, c("0").as_ptr(), 8, 0, &mut out, &mut depth), RvStatus::InvalidInput);
        assert!(out.is_null());
        assert_eq!(rv_integrate(f, c("1/8").as_ptr(), 99, 0, &mut out, &mut depth), RvStatus::InvalidInput);
        rv_function_free(f);

        let q = poset("poset { x }");
        let st = rv_valuation_evaluate(q, c("[1,1]@x").as_ptr(), c("fn h { y -> [1,1] }").as_ptr(), &mut out);
        assert_eq!(st, RvStatus::Parse);
        let st = rv_measure_evaluate(q, c("measure { 0 @ x }").as_ptr(), c("fn h { x -> [1,1] }").as_ptr(), &mut out);
        assert_eq!(st, RvStatus::InvalidInput);
        rv_poset_free(q);

        // freeing null is a no-op
        rv_poset_free(ptr::null_mut());
        rv_function_free(ptr::null_mut());
        rv_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rvaluation.h")).unwrap();
    for name in [
        "typedef struct RvPoset RvPoset",
        "typedef struct RvFunction RvFunction",
        "RV_STATUS_DEPTH_CAP = 5",
        "rv_last_error",
        "rv_string_free",
        "rv_poset_parse",
        "rv_valuation_evaluate",
        "rv_measure_evaluate",
        "rv_function_parse",
        "rv_lebesgue_n",
        "rv_integrate",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

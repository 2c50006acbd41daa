use std::ffi::{CStr, CString};
use std::ptr;

use ipldpc_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ipldpc_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn encode_decode_round_trip() {
    let (a, b) = (cs("mscmpc:5:3,4"), cs("spc:4"));
    let mut code = ptr::null_mut();
    let st = unsafe { ipldpc_product_code_new(a.as_ptr(), b.as_ptr(), ptr::null(), &mut code) };
    assert_eq!(st, IpldpcStatus::Ok);
    let (n, k) = unsafe { (ipldpc_product_code_n(code), ipldpc_product_code_k(code)) };
    assert_eq!((n, k), (60, 20));

    let info: Vec<u8> = (0..k).map(|i| (i % 3 == 0) as u8).collect();
    let mut x = vec![0u8; n];
    let st = unsafe { ipldpc_product_code_encode(code, info.as_ptr(), k, x.as_mut_ptr(), n) };
    assert_eq!(st, IpldpcStatus::Ok);

    let mut llr: Vec<f64> = x.iter().map(|&b| if b == 1 { -4.0 } else { 4.0 }).collect();
    llr[7] = -llr[7] * 0.25;
    let mut hard = vec![0u8; n];
    let (mut it, mut ok) = (0usize, false);
    let st = unsafe {
        ipldpc_product_code_decode(
            code,
            llr.as_ptr(),
            n,
            50,
            hard.as_mut_ptr(),
            &mut it,
            &mut ok,
        )
    };
    assert_eq!(st, IpldpcStatus::Ok);
    assert!(ok && it >= 1);
    assert_eq!(hard, x);
    unsafe { ipldpc_product_code_free(code) };
}

#[test]
fn errors_carry_status_and_message() {
    let (good, bad) = (cs("spc:3"), cs("ldpc:9"));
    let mut code = ptr::null_mut();
    let st =
        unsafe { ipldpc_product_code_new(bad.as_ptr(), good.as_ptr(), ptr::null(), &mut code) };
    assert_eq!(st, IpldpcStatus::Parse);
    assert!(code.is_null());
    assert!(!last_error().is_empty());

    let st = unsafe { ipldpc_product_code_new(ptr::null(), good.as_ptr(), ptr::null(), &mut code) };
    assert_eq!(st, IpldpcStatus::NullPointer);

    let perms = cs(r#"{"n_a": 4, "perms": [[1,2,3,4],[1,1,3,4],[1,2,3,4],[1,2,3,4]]}"#);
    let st =
        unsafe { ipldpc_product_code_new(good.as_ptr(), good.as_ptr(), perms.as_ptr(), &mut code) };
    assert_eq!(st, IpldpcStatus::InvalidArgument);

    let st =
        unsafe { ipldpc_product_code_new(good.as_ptr(), good.as_ptr(), ptr::null(), &mut code) };
    assert_eq!(st, IpldpcStatus::Ok);
    assert!(last_error().is_empty());
    let info = [1u8; 9];
    let mut short = [0u8; 15];
    let st = unsafe { ipldpc_product_code_encode(code, info.as_ptr(), 9, short.as_mut_ptr(), 15) };
    assert_eq!(st, IpldpcStatus::Dimension);
    let llr = [f64::NAN; 16];
    let mut hard = [0u8; 16];
    let st = unsafe {
        ipldpc_product_code_decode(
            code,
            llr.as_ptr(),
            16,
            10,
            hard.as_mut_ptr(),
            ptr::null_mut(),
            ptr::null_mut(),
        )
    };
    assert_eq!(st, IpldpcStatus::InvalidArgument);
    unsafe { ipldpc_product_code_free(code) };
    unsafe { ipldpc_product_code_free(ptr::null_mut()) };
    assert_eq!(unsafe { ipldpc_product_code_n(ptr::null()) }, 0);
}

#[test]
fn peg_json_feeds_back_into_constructor() {
    let a = cs("spc:3");
    let mut json = ptr::null_mut();
    let st = unsafe {
        ipldpc_peg_design(
            a.as_ptr(),
            a.as_ptr(),
            IpldpcPegVariant::Circulant,
            5,
            &mut json,
        )
    };
    assert_eq!(st, IpldpcStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"seed\": 5"), "{text}");

    let mut code = ptr::null_mut();
    let st = unsafe { ipldpc_product_code_new(a.as_ptr(), a.as_ptr(), json, &mut code) };
    assert_eq!(st, IpldpcStatus::Ok);
    assert_eq!(unsafe { ipldpc_product_code_checks(code) }, 7);
    unsafe {
        ipldpc_product_code_free(code);
        ipldpc_string_free(json);
    }
    let v = unsafe { CStr::from_ptr(ipldpc_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let h =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ipldpc.h")).unwrap();
    for name in [
        "typedef struct IpldpcProductCode IpldpcProductCode",
        "IPLDPC_STATUS_OK = 0",
        "IPLDPC_PEG_VARIANT_GENERIC",
        "ipldpc_product_code_new(",
        "ipldpc_product_code_free(",
        "ipldpc_product_code_encode(",
        "ipldpc_product_code_decode(",
        "ipldpc_peg_design(",
        "ipldpc_string_free(",
        "ipldpc_last_error_message(",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

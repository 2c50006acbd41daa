//! C ABI over the `ipldpc` library.
//!
//! Every fallible call returns an [`IpldpcStatus`]; on failure the message is
//! available from [`ipldpc_last_error_message`] on the same thread. Handles
//! are opaque and must be released with their matching `_free` function.
//! Bits cross the boundary as one `uint8_t` (0 or 1) per bit.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ipldpc::peg::{self, PegVariant};
use ipldpc::{
    build_hp, build_hp_interleaved, BitVec, ComponentSpec, Error, PermutationArray, ProductCode,
    SpaDecoder,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpldpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Parse = 4,
    ResourceGuard = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpldpcPegVariant {
    Circulant = 0,
    Generic = 1,
}

/// A product code together with its decoder.
pub struct IpldpcProductCode {
    code: ProductCode,
    decoder: SpaDecoder,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IpldpcStatus {
    match e {
        Error::Dimension(_) => IpldpcStatus::Dimension,
        Error::InvalidParameter(_) | Error::InvalidPermutation(_) => IpldpcStatus::InvalidArgument,
        Error::Parse(_) | Error::Json(_) => IpldpcStatus::Parse,
        Error::ResourceGuard(_) => IpldpcStatus::ResourceGuard,
        Error::Io(_) => IpldpcStatus::Io,
    }
}

struct Fail(IpldpcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(IpldpcStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IpldpcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            IpldpcStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            IpldpcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(IpldpcStatus::Parse, format!("{what} is not UTF-8")))
}

fn spec(s: &str) -> Result<ipldpc::ComponentCode, Fail> {
    Ok(s.parse::<ComponentSpec>()?.build()?)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ipldpc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ipldpc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a direct (`perms_json` null) or interleaved product code from two
/// component descriptors such as `"mscmpc:81:9,10"` or `"spc:3"`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_new(
    comp_a: *const c_char,
    comp_b: *const c_char,
    perms_json: *const c_char,
    out: *mut *mut IpldpcProductCode,
) -> IpldpcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let a = spec(str_arg(comp_a, "comp_a")?)?;
        let b = spec(str_arg(comp_b, "comp_b")?)?;
        let code = if perms_json.is_null() {
            build_hp(&a, &b)
        } else {
            let p = PermutationArray::from_json(str_arg(perms_json, "perms_json")?)?;
            build_hp_interleaved(&a, &b, &p)?
        };
        let decoder = SpaDecoder::new(code.h());
        *out = Box::into_raw(Box::new(IpldpcProductCode { code, decoder }));
        Ok(())
    })
}

/// # Safety
/// `code` must come from [`ipldpc_product_code_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_free(code: *mut IpldpcProductCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length, or 0 for a null handle.
///
/// # Safety
/// `code` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_n(code: *const IpldpcProductCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.n())
}

/// Code dimension, or 0 for a null handle.
///
/// # Safety
/// `code` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_k(code: *const IpldpcProductCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.k())
}

/// Number of parity checks in the code's parity-check matrix.
///
/// # Safety
/// `code` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_checks(code: *const IpldpcProductCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.h().rows())
}

/// Encodes `k` information bits into `n` codeword bits.
///
/// # Safety
/// `info` must hold `info_len` bytes and `codeword` `codeword_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_encode(
    code: *const IpldpcProductCode,
    info: *const u8,
    info_len: usize,
    codeword: *mut u8,
    codeword_len: usize,
) -> IpldpcStatus {
    guard(|| {
        let c = code.as_ref().ok_or_else(|| null("code"))?;
        if info.is_null() {
            return Err(null("info"));
        }
        if codeword.is_null() {
            return Err(null("codeword"));
        }
        let bits = std::slice::from_raw_parts(info, info_len);
        if let Some(i) = bits.iter().position(|&b| b > 1) {
            return Err(Fail(
                IpldpcStatus::InvalidArgument,
                format!("info[{i}] is not 0 or 1"),
            ));
        }
        if codeword_len != c.code.n() {
            return Err(Fail(
                IpldpcStatus::Dimension,
                format!(
                    "codeword buffer has {codeword_len} bytes, code length is {}",
                    c.code.n()
                ),
            ));
        }
        let x = c.code.encode(&BitVec::from_bytes(bits))?;
        std::slice::from_raw_parts_mut(codeword, codeword_len).copy_from_slice(&x.to_bytes());
        Ok(())
    })
}

/// Sum-product decoding of `n` channel LLRs (positive favours 0).
/// `iterations` and `converged` may be null.
///
/// # Safety
/// `llr` must hold `n` doubles and `hard_bits` `n` bytes.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_product_code_decode(
    code: *const IpldpcProductCode,
    llr: *const f64,
    n: usize,
    max_iter: usize,
    hard_bits: *mut u8,
    iterations: *mut usize,
    converged: *mut bool,
) -> IpldpcStatus {
    guard(|| {
        let c = code.as_ref().ok_or_else(|| null("code"))?;
        if llr.is_null() {
            return Err(null("llr"));
        }
        if hard_bits.is_null() {
            return Err(null("hard_bits"));
        }
        let r = c
            .decoder
            .decode(std::slice::from_raw_parts(llr, n), max_iter)?;
        std::slice::from_raw_parts_mut(hard_bits, n).copy_from_slice(&r.hard_bits.to_bytes());
        if let Some(it) = iterations.as_mut() {
            *it = r.iterations_used;
        }
        if let Some(cv) = converged.as_mut() {
            *cv = r.converged;
        }
        Ok(())
    })
}

/// Designs a column interleaver and returns it as permutation-array JSON
/// (1-based). Release the string with [`ipldpc_string_free`].
///
/// # Safety
/// String arguments must be NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_peg_design(
    comp_a: *const c_char,
    comp_b: *const c_char,
    variant: IpldpcPegVariant,
    seed: u64,
    out_json: *mut *mut c_char,
) -> IpldpcStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        *out_json = ptr::null_mut();
        let a = spec(str_arg(comp_a, "comp_a")?)?;
        let b = spec(str_arg(comp_b, "comp_b")?)?;
        let v = match variant {
            IpldpcPegVariant::Circulant => PegVariant::Circulant,
            IpldpcPegVariant::Generic => PegVariant::Generic,
        };
        let meta = serde_json::json!({
            "tool": "ipldpc", "version": env!("CARGO_PKG_VERSION"), "command": "peg",
            "params": {"variant": v.to_string(), "seed": seed,
                       "comp_a": a.label(), "comp_b": b.label()},
        });
        let json = peg::design(v, &a, &b, seed).to_json(Some(meta))?;
        *out_json = CString::new(json).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ipldpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

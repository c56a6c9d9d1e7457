//! C ABI over `sl2recog`.
//!
//! Every fallible call returns an [`Sl2Status`] and writes results through
//! out-pointers. On failure the message is kept per thread and read back with
//! [`sl2_last_error_message`]. Strings handed out must be released with
//! [`sl2_string_free`]; handles with their own `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sl2recog::modcore::{self, GModule, Tag};
use sl2recog::recog::{self, Certificate};
use sl2recog::{Error, FieldSpec};

/// Opaque module handle.
pub struct Sl2Module(GModule);

/// Opaque certificate handle.
pub struct Sl2Certificate(Certificate);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BadCharacteristic = 5,
    RelationsFailed = 6,
    Reducible = 7,
    Undecided = 8,
    OutOfScope = 9,
    RecognitionFailed = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Tag {
    Nat = 0,
    Sym2 = 1,
    Sym3 = 2,
    TwistTensor = 3,
}

impl From<Sl2Tag> for Tag {
    fn from(t: Sl2Tag) -> Tag {
        match t {
            Sl2Tag::Nat => Tag::Nat,
            Sl2Tag::Sym2 => Tag::Sym2,
            Sl2Tag::Sym3 => Tag::Sym3,
            Sl2Tag::TwistTensor => Tag::TwistTensor,
        }
    }
}

impl From<Tag> for Sl2Tag {
    fn from(t: Tag) -> Sl2Tag {
        match t {
            Tag::Nat => Sl2Tag::Nat,
            Tag::Sym2 => Sl2Tag::Sym2,
            Tag::Sym3 => Sl2Tag::Sym3,
            Tag::TwistTensor => Sl2Tag::TwistTensor,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Sl2Status {
    match e {
        Error::Parse(_) => Sl2Status::Parse,
        Error::BadCharacteristic { .. } => Sl2Status::BadCharacteristic,
        Error::RelationsFailed(_) => Sl2Status::RelationsFailed,
        Error::Reducible { .. } => Sl2Status::Reducible,
        Error::Undecided => Sl2Status::Undecided,
        Error::OutOfScope(_) => Sl2Status::OutOfScope,
        Error::NotPrime(_)
        | Error::BadPolynomial(_)
        | Error::NoNontrivialTwist { .. }
        | Error::DimensionMismatch(_)
        | Error::FieldMismatch => Sl2Status::InvalidArgument,
        _ => Sl2Status::RecognitionFailed,
    }
}

struct Fail(Sl2Status, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), format!("{}: {e}", e.kind()))
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> Sl2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Sl2Status::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            Sl2Status::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(Sl2Status::NullPointer, "null handle".into()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(Sl2Status::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(Sl2Status::InvalidUtf8, e.to_string()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(Sl2Status::NullPointer, "null out-pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul").into_raw()
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library and valid until the next failing call.
#[no_mangle]
pub extern "C" fn sl2_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a module file. A `meta` member is ignored.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_module_from_json(json: *const c_char, out: *mut *mut Sl2Module) -> Sl2Status {
    guard(|| {
        let m = GModule::from_json(read_str(json)?)?;
        put(out, Box::into_raw(Box::new(Sl2Module(m))))
    })
}

/// Canonical module over GF(p^m) with the default polynomial.
/// `twist_power` is read only for the twist tensor.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_module_construct(
    tag: Sl2Tag,
    p: u32,
    m: usize,
    twist_power: usize,
    out: *mut *mut Sl2Module,
) -> Sl2Status {
    guard(|| {
        let spec = FieldSpec::default_for(p, m)?;
        let tag = Tag::from(tag);
        let chi = (tag == Tag::TwistTensor).then_some(twist_power);
        let md = modcore::canonical(&spec, tag, chi)?;
        put(out, Box::into_raw(Box::new(Sl2Module(md))))
    })
}

/// New module conjugated by a seeded random change of basis.
///
/// # Safety
/// `module` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_module_scramble(module: *const Sl2Module, seed: u64, out: *mut *mut Sl2Module) -> Sl2Status {
    guard(|| {
        let m = borrow(module)?;
        put(out, Box::into_raw(Box::new(Sl2Module(modcore::scramble(&m.0, seed)))))
    })
}

/// # Safety
/// `module` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_module_to_json(module: *const Sl2Module, out: *mut *mut c_char) -> Sl2Status {
    guard(|| {
        let m = borrow(module)?;
        put(out, to_c(m.0.to_json(None)))
    })
}

/// Dimension over GF(p), or 0 for NULL.
///
/// # Safety
/// `module` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_module_dim(module: *const Sl2Module) -> usize {
    module.as_ref().map_or(0, |m| m.0.dim)
}

/// # Safety
/// `module` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_module_free(module: *mut Sl2Module) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Recognizes `module`. On rejection the status names the reason and the
/// error message carries the JSON rejection record.
///
/// # Safety
/// `module` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_recognize(module: *const Sl2Module, seed: u64, out: *mut *mut Sl2Certificate) -> Sl2Status {
    guard(|| {
        let m = borrow(module)?;
        match recog::recognize(&m.0, seed) {
            Ok(c) => put(out, Box::into_raw(Box::new(Sl2Certificate(c)))),
            Err(rej) => Err(Fail(status_of(&rej.error), rej.to_json_value().to_string())),
        }
    })
}

/// # Safety
/// `cert` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_certificate_tag(cert: *const Sl2Certificate, out: *mut Sl2Tag) -> Sl2Status {
    guard(|| put(out, borrow(cert)?.0.tag.into()))
}

/// Twist power, or -1 when the certificate has none.
///
/// # Safety
/// `cert` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_certificate_chi_power(cert: *const Sl2Certificate, out: *mut i64) -> Sl2Status {
    guard(|| put(out, borrow(cert)?.0.chi_power.map_or(-1, |i| i as i64)))
}

/// # Safety
/// `cert` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_certificate_to_json(cert: *const Sl2Certificate, out: *mut *mut c_char) -> Sl2Status {
    guard(|| put(out, to_c(borrow(cert)?.0.to_json())))
}

/// # Safety
/// `json` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_certificate_from_json(json: *const c_char, out: *mut *mut Sl2Certificate) -> Sl2Status {
    guard(|| {
        let c = Certificate::from_json(read_str(json)?)?;
        put(out, Box::into_raw(Box::new(Sl2Certificate(c))))
    })
}

/// # Safety
/// `cert` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_certificate_free(cert: *mut Sl2Certificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Checks `cert` against `module`. A failed check is not an error: the call
/// returns Ok and writes false. The failed check names go to the error message.
///
/// # Safety
/// Both handles must be live; `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl2_verify(module: *const Sl2Module, cert: *const Sl2Certificate, passed: *mut bool) -> Sl2Status {
    guard(|| {
        let report = recog::verify_certificate(&borrow(module)?.0, &borrow(cert)?.0);
        if !report.passed() {
            set_error(report.failures().join("; "));
        }
        put(passed, report.passed())
    })
}

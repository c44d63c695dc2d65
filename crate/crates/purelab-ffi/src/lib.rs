//! C interface to the purelab decision procedures.  Handles are opaque
//! pointers owned by the caller and released with the matching `_free`;
//! every function returns a status code, and any nonzero status leaves a
//! message retrievable with [`plb_last_error`] on the calling thread.
//! Decision outcomes travel through out parameters, never through the
//! status, so "property fails" is not an error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::sync::Arc;

use purelab::fincat::{is_llp, FinCat, LlpDecision};
use purelab::io;
use purelab::limits::is_pullback_square;
use purelab::presheaf::{Hom, Presheaf};
use purelab::purity::{
    is_pure, is_pure_effective, is_split, PureEffectiveDecision, PurityCertificate,
};
use purelab::suite::run_all;
use purelab::Error;

/// Status of one call.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PlbStatus {
    /// The call completed; out parameters are set.
    Ok = 0,
    /// A pointer argument was null or a string was not valid UTF-8.
    BadArgument = 1,
    /// An input file was missing, malformed, or failed validation.
    InputError = 2,
    /// Inputs parsed but violate a precondition of the operation, for
    /// example a purity check on a map that is not a monomorphism.
    PreconditionError = 3,
}

pub struct PlbCategory {
    inner: Arc<FinCat>,
}

pub struct PlbPresheaf {
    inner: Arc<Presheaf>,
}

pub struct PlbHom {
    inner: Hom,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(kind: &str, message: &str) {
    let text = format!("{kind}: {message}");
    let c = CString::new(text.replace('\0', " ")).expect("nul bytes stripped");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PlbStatus {
    set_error(e.kind(), &e.to_string());
    match e {
        Error::NotMono(_) | Error::NotPureInputs(_) | Error::BadParameters(_) => {
            PlbStatus::PreconditionError
        }
        _ => PlbStatus::InputError,
    }
}

fn bad_argument(what: &str) -> PlbStatus {
    set_error("BadArgument", what);
    PlbStatus::BadArgument
}

/// # Safety
/// `path` must be a NUL-terminated string.
unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, PlbStatus> {
    if path.is_null() {
        return Err(bad_argument("path is null"));
    }
    match CStr::from_ptr(path).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => Err(bad_argument("path is not valid UTF-8")),
    }
}

fn give_string(out: *mut *mut c_char, s: String) -> PlbStatus {
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    let c = CString::new(s.replace('\0', " ")).expect("nul bytes stripped");
    unsafe { *out = c.into_raw() };
    PlbStatus::Ok
}

/// Version of the library as a static string; do not free.
#[no_mangle]
pub extern "C" fn plb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failing call on this thread, or the empty string.
/// Valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn plb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned through an out parameter.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn plb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- categories ----

/// Loads and validates a category file.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_category_load(
    path: *const c_char,
    out: *mut *mut PlbCategory,
) -> PlbStatus {
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    match io::load_category(path) {
        Ok((inner, _)) => {
            *out = Box::into_raw(Box::new(PlbCategory { inner }));
            PlbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `cat` must come from [`plb_category_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn plb_category_free(cat: *mut PlbCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Decides whether every span in the category factors through one of its
/// legs; writes the verdict to `holds`.
///
/// # Safety
/// `cat` must be a live handle; `holds` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_category_is_llp(
    cat: *const PlbCategory,
    holds: *mut bool,
) -> PlbStatus {
    let (Some(cat), false) = (cat.as_ref(), holds.is_null()) else {
        return bad_argument("null handle or out pointer");
    };
    *holds = is_llp(&cat.inner).holds();
    PlbStatus::Ok
}

/// Like [`plb_category_is_llp`] but returns the full report as a JSON
/// string in `out`; free it with [`plb_string_free`].
///
/// # Safety
/// `cat` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_category_llp_json(
    cat: *const PlbCategory,
    out: *mut *mut c_char,
) -> PlbStatus {
    let Some(cat) = cat.as_ref() else {
        return bad_argument("null handle");
    };
    let value = match is_llp(&cat.inner) {
        LlpDecision::Holds(cert) => {
            serde_json::json!({ "llp": true, "spans_factored": cert.len() })
        }
        LlpDecision::Fails(w) => serde_json::json!({
            "llp": false,
            "witness": {
                "apex": cat.inner.object_name(w.apex),
                "left": cat.inner.arrow_name(w.left),
                "right": cat.inner.arrow_name(w.right),
            },
        }),
    };
    give_string(out, value.to_string())
}

// ---- presheaves ----

/// Loads a presheaf file together with the category it references.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_presheaf_load(
    path: *const c_char,
    out: *mut *mut PlbPresheaf,
) -> PlbStatus {
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    match io::load_presheaf(path) {
        Ok((inner, _)) => {
            *out = Box::into_raw(Box::new(PlbPresheaf { inner }));
            PlbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `p` must come from [`plb_presheaf_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn plb_presheaf_free(p: *mut PlbPresheaf) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Total number of elements across all sorts; 0 for a null handle.
///
/// # Safety
/// `p` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn plb_presheaf_size(p: *const PlbPresheaf) -> usize {
    p.as_ref().map_or(0, |p| p.inner.size())
}

// ---- homs ----

/// Loads a hom file together with its source and target presheaves.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_hom_load(path: *const c_char, out: *mut *mut PlbHom) -> PlbStatus {
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    match io::load_hom(path) {
        Ok((inner, _)) => {
            *out = Box::into_raw(Box::new(PlbHom { inner }));
            PlbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `h` must come from [`plb_hom_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn plb_hom_free(h: *mut PlbHom) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Decides purity of a monomorphism; writes the verdict to `pure`.
/// A non-mono input yields `PreconditionError`.
///
/// # Safety
/// `h` must be a live handle; `pure` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_hom_is_pure(h: *const PlbHom, pure: *mut bool) -> PlbStatus {
    let (Some(h), false) = (h.as_ref(), pure.is_null()) else {
        return bad_argument("null handle or out pointer");
    };
    match is_pure(&h.inner) {
        Ok(cert) => {
            *pure = cert.is_pure();
            PlbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Decides whether the monomorphism has a retraction.
///
/// # Safety
/// `h` must be a live handle; `split` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_hom_is_split(h: *const PlbHom, split: *mut bool) -> PlbStatus {
    let (Some(h), false) = (h.as_ref(), split.is_null()) else {
        return bad_argument("null handle or out pointer");
    };
    match is_split(&h.inner) {
        Ok(r) => {
            *split = r.is_some();
            PlbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Full purity certificate as JSON: either the retraction map or the
/// falsifying system with its solution.  Free with [`plb_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_hom_purity_json(h: *const PlbHom, out: *mut *mut c_char) -> PlbStatus {
    let Some(h) = h.as_ref() else {
        return bad_argument("null handle");
    };
    let value = match is_pure(&h.inner) {
        Ok(PurityCertificate::Pure { retraction }) => {
            serde_json::json!({ "pure": true, "retraction": retraction.to_raw("", "").map })
        }
        Ok(PurityCertificate::NotPure { falsifier, solution_in_l }) => {
            let l = h.inner.target();
            serde_json::json!({
                "pure": false,
                "falsifier": falsifier.to_raw(l),
                "solution_in_l": solution_in_l.iter().map(|&e| l.qualified(e)).collect::<Vec<_>>(),
            })
        }
        Err(e) => return status_of(&e),
    };
    give_string(out, value.to_string())
}

// ---- squares ----

/// Which property of a square to check.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PlbSquareCheck {
    /// All four legs pure and the induced map into the pushout a pure mono.
    PureEffective = 0,
    /// The square is a pullback: K is exactly the intersection of A and B.
    Pullback = 1,
}

/// Loads a square file and checks the requested property, writing the
/// verdict to `holds`.
///
/// # Safety
/// `path` must be NUL-terminated; `holds` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_square_check(
    path: *const c_char,
    check: PlbSquareCheck,
    holds: *mut bool,
) -> PlbStatus {
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    if holds.is_null() {
        return bad_argument("out pointer is null");
    }
    let square = match io::load_square(path) {
        Ok((sq, _)) => sq,
        Err(e) => return status_of(&e),
    };
    let verdict = match check {
        PlbSquareCheck::PureEffective => match is_pure_effective(&square) {
            Ok(d) => matches!(d, PureEffectiveDecision::PureEffective { .. }),
            Err(e) => return status_of(&e),
        },
        PlbSquareCheck::Pullback => match is_pullback_square(&square) {
            Ok(b) => b,
            Err(e) => return status_of(&e),
        },
    };
    *holds = verdict;
    PlbStatus::Ok
}

// ---- suite ----

/// Runs all nine acceptance criteria with the given seed; writes whether
/// every criterion passed to `all_passed`.
///
/// # Safety
/// `all_passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plb_suite_run(seed: u64, all_passed: *mut bool) -> PlbStatus {
    if all_passed.is_null() {
        return bad_argument("out pointer is null");
    }
    *all_passed = run_all(seed).iter().all(|o| o.passed);
    PlbStatus::Ok
}

//! C ABI over `levelnerve`. Every call returns an `LnStatus`; on failure the
//! message is available from `ln_last_error` until the next call on the same
//! thread. Handles are opaque and released with their `_free` function;
//! strings returned through `char **` are released with `ln_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use levelnerve::complexes::{build_abelian_nerve, build_image_complex, pi1_report, FinSimpSet, Verdict};
use levelnerve::covers::{Cover, CoverSpec};
use levelnerve::io::{decode, encode, Artifact};
use levelnerve::limits::Limits;
use levelnerve::monodromy::abelian_local_kernel;
use levelnerve::surface::graph::enumerate_stable_graphs;
use levelnerve::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LnStatus {
    Ok = 0,
    NullPointer = 1,
    Argument = 2,
    Schema = 3,
    Resource = 4,
    Unsupported = 5,
    Precondition = 6,
    Invariance = 7,
    Utf8 = 8,
    Internal = 9,
}

/// Finite simplicial set.
pub struct LnComplex(FinSimpSet);

/// Finite Galois cover of a punctured surface.
pub struct LnCover(CoverSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LnStatus {
    match e {
        Error::Argument(_) | Error::InvalidCover(_) => LnStatus::Argument,
        Error::Parse(_) | Error::Schema(_) | Error::SchemaVersion { .. } => LnStatus::Schema,
        Error::Resource { .. } => LnStatus::Resource,
        Error::Unsupported(_) => LnStatus::Unsupported,
        Error::Precondition(_) => LnStatus::Precondition,
        Error::Invariance(_) => LnStatus::Invariance,
        Error::Oracle(_) | Error::Io(_) => LnStatus::Internal,
    }
}

enum Fail {
    Null,
    Utf8,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LnStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LnStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            LnStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            LnStatus::Utf8
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            LnStatus::Internal
        }
    }
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn put_string(out: *mut *mut c_char, bytes: Vec<u8>) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    let c = CString::new(bytes).map_err(|_| Fail::Utf8)?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_json<T: Artifact>(out: *mut *mut c_char, x: &T) -> Result<(), Fail> {
    put_string(out, encode(x)?)
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref().ok_or(Fail::Null)
}

/// Message of the last failed call on this thread, or NULL.
#[no_mangle]
pub extern "C" fn ln_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ln_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr() as *const c_char
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ln_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Abelian nerve of `S_{g,n}` at level `m`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_nerve_build(g: usize, n: usize, m: i64, out: *mut *mut LnComplex) -> LnStatus {
    guard(|| {
        let b = build_abelian_nerve(g, n, m, &Limits::default())?;
        put(out, LnComplex(b.complex))
    })
}

/// Image complex of `cover` at level `m`.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_image_build(cover: *const LnCover, m: i64, out: *mut *mut LnComplex) -> LnStatus {
    guard(|| {
        let c = handle(cover)?;
        let b = build_image_complex(&c.0, m, &Limits::default())?;
        put(out, LnComplex(b.complex))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_complex_from_json(json: *const c_char, out: *mut *mut LnComplex) -> LnStatus {
    guard(|| {
        let x: FinSimpSet = decode(str_arg(json)?.as_bytes())?;
        put(out, LnComplex(x))
    })
}

/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_complex_to_json(x: *const LnComplex, out: *mut *mut c_char) -> LnStatus {
    guard(|| put_json(out, &handle(x)?.0))
}

/// Number of ranks (top rank plus one).
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_complex_ranks(x: *const LnComplex, out: *mut usize) -> LnStatus {
    guard(|| {
        let x = handle(x)?;
        *out.as_mut().ok_or(Fail::Null)? = x.0.ranks.len();
        Ok(())
    })
}

/// Number of simplices of rank `k` (0 above the top rank).
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_complex_count(x: *const LnComplex, k: usize, out: *mut usize) -> LnStatus {
    guard(|| {
        let x = handle(x)?;
        *out.as_mut().ok_or(Fail::Null)? = x.0.count(k);
        Ok(())
    })
}

/// Writes 1 if the edge-path group was shown trivial, 0 if a nontrivial
/// quotient was found, -1 if undecided.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_complex_pi1(x: *const LnComplex, out: *mut i32) -> LnStatus {
    guard(|| {
        let r = pi1_report(&handle(x)?.0);
        *out.as_mut().ok_or(Fail::Null)? = match r.verdict {
            Verdict::Trivial => 1,
            Verdict::Nontrivial { .. } => 0,
            Verdict::Unknown => -1,
        };
        Ok(())
    })
}

/// # Safety
/// `x` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ln_complex_free(x: *mut LnComplex) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Trivial cover of `S_{g,n}`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_cover_identity(g: usize, n: usize, out: *mut *mut LnCover) -> LnStatus {
    guard(|| {
        let s = CoverSpec::identity(g, n);
        Cover::new(&s, &Limits::default())?;
        put(out, LnCover(s))
    })
}

/// Mod-`m` homology cover of `S_{g,n}`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_cover_homology(g: usize, n: usize, m: i64, out: *mut *mut LnCover) -> LnStatus {
    guard(|| {
        let s = CoverSpec::homology_cover(g, n, m);
        Cover::new(&s, &Limits::default())?;
        put(out, LnCover(s))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_cover_from_json(json: *const c_char, out: *mut *mut LnCover) -> LnStatus {
    guard(|| {
        let s: CoverSpec = decode(str_arg(json)?.as_bytes())?;
        Cover::new(&s, &Limits::default())?;
        put(out, LnCover(s))
    })
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_cover_to_json(c: *const LnCover, out: *mut *mut c_char) -> LnStatus {
    guard(|| put_json(out, &handle(c)?.0))
}

/// # Safety
/// `c` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ln_cover_free(c: *mut LnCover) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Abelian local kernel at the `index`-th stratum type of rank `rank`, as a
/// JSON artifact.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ln_abelian_kernel_json(
    g: usize,
    n: usize,
    rank: usize,
    index: usize,
    m: i64,
    out: *mut *mut c_char,
) -> LnStatus {
    guard(|| {
        let t = enumerate_stable_graphs(g, n, rank)?
            .into_iter()
            .nth(index)
            .ok_or_else(|| Error::Argument(format!("no type {index} at rank {rank}")))?;
        put_json(out, &abelian_local_kernel(&t, m)?)
    })
}

//! C ABI for the dilatkit surface library.
//!
//! Surfaces are opaque handles created from the JSON surface format and
//! freed with `dilatkit_surface_free`. Every function returns a status code;
//! a human-readable message for the most recent error on the current thread
//! is available through `dilatkit_last_error`. Strings returned through
//! `char**` out-parameters are owned by the caller and must be released with
//! `dilatkit_string_free`.
//!
//! The matching declarations live in `include/dilatkit.h`.

use dilatkit::classify::{classify, ComponentCount, StratumSignature};
use dilatkit::report::{build_report, report_to_json};
use dilatkit::surface::format::{holonomy_to_json, surface_from_json, surface_to_json};
use dilatkit::surface::{build_surface, corpus, DilationSurface};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes shared with the C header.
pub const DILATKIT_OK: i32 = 0;
pub const DILATKIT_ERR_PARSE: i32 = 1;
pub const DILATKIT_ERR_VALIDATION: i32 = 2;
pub const DILATKIT_ERR_INTERNAL: i32 = 3;
pub const DILATKIT_ERR_NULL_ARG: i32 = 4;
pub const DILATKIT_ERR_UTF8: i32 = 5;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    });
}

/// Opaque surface handle.
pub struct DilatkitSurface {
    inner: DilationSurface,
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error("null argument");
        return Err(DILATKIT_ERR_NULL_ARG);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        DILATKIT_ERR_UTF8
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> i32 {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DILATKIT_OK
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            DILATKIT_ERR_INTERNAL
        }
    }
}

/// Most recent error message on this thread. The pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dilatkit_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dilatkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through a `char**` out-param of
/// this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a surface from its JSON document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_parse(
    json: *const c_char,
    out: *mut *mut DilatkitSurface,
) -> i32 {
    if out.is_null() {
        set_error("null out-pointer");
        return DILATKIT_ERR_NULL_ARG;
    }
    *out = ptr::null_mut();
    let text = match str_arg(json) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let spec = match surface_from_json(text) {
        Ok(s) => s,
        Err(e) => {
            set_error(e.to_string());
            return DILATKIT_ERR_PARSE;
        }
    };
    match build_surface(spec) {
        Ok(surface) => {
            *out = Box::into_raw(Box::new(DilatkitSurface { inner: surface }));
            DILATKIT_OK
        }
        Err(e) => {
            set_error(e.to_string());
            match e {
                dilatkit::surface::SurfaceError::InternalInvariant(_) => DILATKIT_ERR_INTERNAL,
                _ => DILATKIT_ERR_VALIDATION,
            }
        }
    }
}

/// Builds a surface from a built-in corpus family; `param` may be null or a
/// rational like "3/2".
///
/// # Safety
/// `name` must be NUL-terminated; `param` may be null; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_corpus(
    name: *const c_char,
    param: *const c_char,
    out: *mut *mut DilatkitSurface,
) -> i32 {
    if out.is_null() {
        set_error("null out-pointer");
        return DILATKIT_ERR_NULL_ARG;
    }
    *out = ptr::null_mut();
    let name = match str_arg(name) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let param = if param.is_null() {
        None
    } else {
        let text = match str_arg(param) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match parse_rational(text) {
            Some(r) => Some(r),
            None => {
                set_error(format!("bad rational parameter '{text}'"));
                return DILATKIT_ERR_PARSE;
            }
        }
    };
    let spec = match corpus::generate(name, param) {
        Ok(s) => s,
        Err(e) => {
            set_error(e.to_string());
            return DILATKIT_ERR_VALIDATION;
        }
    };
    match build_surface(spec) {
        Ok(surface) => {
            *out = Box::into_raw(Box::new(DilatkitSurface { inner: surface }));
            DILATKIT_OK
        }
        Err(e) => {
            set_error(e.to_string());
            DILATKIT_ERR_INTERNAL
        }
    }
}

fn parse_rational(text: &str) -> Option<dilatkit::num::Rat> {
    use num::BigInt;
    use std::str::FromStr;
    let mut parts = text.split('/');
    let numer = BigInt::from_str(parts.next()?.trim()).ok()?;
    let denom = match parts.next() {
        Some(d) => BigInt::from_str(d.trim()).ok()?,
        None => BigInt::from(1),
    };
    if parts.next().is_some() || denom == BigInt::from(0) {
        return None;
    }
    Some(dilatkit::num::Rat::new(numer, denom))
}

/// Releases a surface handle.
///
/// # Safety
/// `s` must be a handle from this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_free(s: *mut DilatkitSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

macro_rules! surface_ref {
    ($ptr:expr) => {
        match $ptr.as_ref() {
            Some(h) => &h.inner,
            None => {
                set_error("null surface handle");
                return DILATKIT_ERR_NULL_ARG;
            }
        }
    };
}

/// Topology of a surface: vertex classes, pairings, polygons, genus, marked
/// points. Null out-pointers are skipped.
///
/// # Safety
/// `s` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_topology(
    s: *const DilatkitSurface,
    v: *mut u64,
    e: *mut u64,
    f: *mut u64,
    genus: *mut u64,
    n_marked: *mut u64,
) -> i32 {
    let surface = surface_ref!(s);
    let (vv, ee, ff, gg) = dilatkit::euler_data(surface);
    for (ptr, val) in [
        (v, vv as u64),
        (e, ee as u64),
        (f, ff as u64),
        (genus, gg as u64),
        (n_marked, surface.n_marked() as u64),
    ] {
        if !ptr.is_null() {
            *ptr = val;
        }
    }
    DILATKIT_OK
}

/// Canonical serialization of the surface.
///
/// # Safety
/// `s` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_to_json(
    s: *const DilatkitSurface,
    out: *mut *mut c_char,
) -> i32 {
    let surface = surface_ref!(s);
    give_string(surface_to_json(&surface.spec), out)
}

/// Full invariant report as canonical JSON.
///
/// # Safety
/// `s` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_report_json(
    s: *const DilatkitSurface,
    out: *mut *mut c_char,
) -> i32 {
    let surface = surface_ref!(s);
    match build_report(surface) {
        Ok(r) => give_string(report_to_json(&r), out),
        Err(e) => {
            set_error(e.to_string());
            DILATKIT_ERR_INTERNAL
        }
    }
}

/// Holonomy data (χ, m) as JSON.
///
/// # Safety
/// `s` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_holonomy_json(
    s: *const DilatkitSurface,
    out: *mut *mut c_char,
) -> i32 {
    let surface = surface_ref!(s);
    let basis = match dilatkit::holonomy::homology_basis(surface) {
        Ok(b) => b,
        Err(e) => {
            set_error(e.to_string());
            return DILATKIT_ERR_INTERNAL;
        }
    };
    match dilatkit::holonomy::character(surface, &basis) {
        Ok(h) => give_string(holonomy_to_json(&h), out),
        Err(e) => {
            set_error(e.to_string());
            DILATKIT_ERR_INTERNAL
        }
    }
}

/// SVG rendering of the polygon presentation.
///
/// # Safety
/// `s` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_surface_svg(
    s: *const DilatkitSurface,
    out: *mut *mut c_char,
) -> i32 {
    let surface = surface_ref!(s);
    give_string(dilatkit::svg::render_svg(surface), out)
}

/// Component classification of a stratum signature. `count` receives the
/// number of components, or 0 with `is_infinite = 1` for the infinite case.
///
/// # Safety
/// `kappa` must point to `kappa_len` integers (or be null when the length
/// is 0); `count` and `is_infinite` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn dilatkit_component_count(
    genus: u64,
    kappa: *const i64,
    kappa_len: usize,
    count: *mut u64,
    is_infinite: *mut u8,
) -> i32 {
    if (kappa.is_null() && kappa_len > 0) || count.is_null() || is_infinite.is_null() {
        set_error("null argument");
        return DILATKIT_ERR_NULL_ARG;
    }
    let kappa: Vec<i64> = if kappa_len == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(kappa, kappa_len).to_vec()
    };
    let sig = match StratumSignature::new(genus as usize, kappa) {
        Ok(s) => s,
        Err(e) => {
            set_error(e.to_string());
            return DILATKIT_ERR_VALIDATION;
        }
    };
    match classify(&sig).count {
        ComponentCount::Finite(k) => {
            *count = k;
            *is_infinite = 0;
        }
        ComponentCount::Infinite => {
            *count = 0;
            *is_infinite = 1;
        }
    }
    DILATKIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn parse_report_free_round_trip() {
        let json = CString::new(surface_to_json(&corpus::square_torus())).unwrap();
        let mut handle: *mut DilatkitSurface = ptr::null_mut();
        unsafe {
            assert_eq!(dilatkit_surface_parse(json.as_ptr(), &mut handle), DILATKIT_OK);
            let (mut v, mut e, mut f, mut g, mut n) = (0u64, 0u64, 0u64, 0u64, 0u64);
            assert_eq!(
                dilatkit_surface_topology(handle, &mut v, &mut e, &mut f, &mut g, &mut n),
                DILATKIT_OK
            );
            assert_eq!((v, e, f, g, n), (1, 2, 1, 1, 1));
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(dilatkit_surface_report_json(handle, &mut out), DILATKIT_OK);
            let text = CStr::from_ptr(out).to_str().unwrap().to_string();
            assert!(text.contains("\"genus\":1"));
            dilatkit_string_free(out);
            dilatkit_surface_free(handle);
        }
    }

    #[test]
    fn invalid_surface_reports_error() {
        let json = CString::new("{\"polygons\":[],\"pairings\":[]}").unwrap();
        let mut handle: *mut DilatkitSurface = ptr::null_mut();
        unsafe {
            let code = dilatkit_surface_parse(json.as_ptr(), &mut handle);
            assert_ne!(code, DILATKIT_OK);
            assert!(handle.is_null());
            let msg = CStr::from_ptr(dilatkit_last_error()).to_str().unwrap();
            assert!(!msg.is_empty());
        }
    }

    #[test]
    fn corpus_and_classify() {
        let name = CString::new("chamber").unwrap();
        let param = CString::new("2").unwrap();
        let mut handle: *mut DilatkitSurface = ptr::null_mut();
        unsafe {
            assert_eq!(
                dilatkit_surface_corpus(name.as_ptr(), param.as_ptr(), &mut handle),
                DILATKIT_OK
            );
            let mut svg: *mut c_char = ptr::null_mut();
            assert_eq!(dilatkit_surface_svg(handle, &mut svg), DILATKIT_OK);
            dilatkit_string_free(svg);
            dilatkit_surface_free(handle);

            let kappa = [2i64];
            let (mut count, mut inf) = (0u64, 0u8);
            assert_eq!(
                dilatkit_component_count(2, kappa.as_ptr(), 1, &mut count, &mut inf),
                DILATKIT_OK
            );
            assert_eq!((count, inf), (2, 0));
        }
    }
}

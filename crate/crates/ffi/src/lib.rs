//! C interface to `thompson-core`.
//!
//! Maps cross the boundary as opaque `ThMap` handles, rationals and reports
//! as NUL-terminated UTF-8 strings (`"a/b"` and JSON). Every function returns
//! a [`ThStatus`]; on failure the message is available from
//! [`th_last_error`]. Strings handed out must be released with
//! [`th_string_free`], maps with [`th_map_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thompson_core::generators::builtin;
use thompson_core::graphing::{treeing_sweep, Graphing};
use thompson_core::words::{evaluate, Alphabet};
use thompson_core::{Error, GenWord, PLMap, Rational};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    OutOfDomain = 5,
    NotMember = 6,
    Panic = 7,
}

/// Opaque handle to an exact PL homeomorphism of [0, 1].
pub struct ThMap {
    map: PLMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(ThStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => ThStatus::Parse,
            Error::OutOfDomain(_) | Error::NonDifferentiable(_) => ThStatus::OutOfDomain,
            Error::NotMember { .. } => ThStatus::NotMember,
            _ => ThStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ThStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ThStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ThStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ThStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ThStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_map<'a>(p: *const ThMap, what: &str) -> Result<&'a PLMap, Failure> {
    p.as_ref()
        .map(|h| &h.map)
        .ok_or_else(|| Failure(ThStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            ThStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_map(out: *mut *mut ThMap, map: PLMap) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            ThStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(Box::into_raw(Box::new(ThMap { map })));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(ThStatus::Panic, "interior NUL".into()))?;
    write_out(out, c.into_raw())
}

/// Library version; static storage, do not free.
#[no_mangle]
pub extern "C" fn th_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the calling thread's last error message, or null after a success.
#[no_mangle]
pub extern "C" fn th_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(msg) => CString::new(msg.replace('\0', " "))
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn th_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Built-in generator: `"A"`, `"B"` or `"A_{d,p}(d;p)"` for base `n`.
///
/// # Safety
/// `name` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_builtin(
    name: *const c_char,
    n: u32,
    out: *mut *mut ThMap,
) -> ThStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        write_map(out, builtin(name, n)?)
    })
}

/// Parses `{"breakpoints": [["t", "y"], ...]}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_from_json(json: *const c_char, out: *mut *mut ThMap) -> ThStatus {
    guard(|| {
        let json = read_str(json, "json")?;
        let map: PLMap = serde_json::from_str(json)
            .map_err(|e| Failure(ThStatus::Parse, format!("column {}: {e}", e.column())))?;
        write_map(out, map)
    })
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_to_json(map: *const ThMap, out: *mut *mut c_char) -> ThStatus {
    guard(|| {
        let map = read_map(map, "map")?;
        write_string(out, serde_json::to_string(map).expect("maps serialize"))
    })
}

/// Evaluates at the rational `x` (`"a/b"`), writing the exact image.
///
/// # Safety
/// `map` must be a live handle, `x` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_eval(
    map: *const ThMap,
    x: *const c_char,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let map = read_map(map, "map")?;
        let x: Rational = read_str(x, "x")?.parse()?;
        write_string(out, map.eval(&x)?.to_string())
    })
}

/// `outer ∘ inner`: `inner` acts first.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_compose(
    outer: *const ThMap,
    inner: *const ThMap,
    out: *mut *mut ThMap,
) -> ThStatus {
    guard(|| {
        let outer = read_map(outer, "outer")?;
        let inner = read_map(inner, "inner")?;
        write_map(out, outer.compose(inner))
    })
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_inverse(map: *const ThMap, out: *mut *mut ThMap) -> ThStatus {
    guard(|| {
        let map = read_map(map, "map")?;
        write_map(out, map.inverse())
    })
}

/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_equal(
    a: *const ThMap,
    b: *const ThMap,
    out: *mut bool,
) -> ThStatus {
    guard(|| {
        let eq = read_map(a, "a")? == read_map(b, "b")?;
        write_out(out, eq)
    })
}

/// Whether the map lies in F(n); `th_map_certificate` gives the reason.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_is_member(map: *const ThMap, n: u32, out: *mut bool) -> ThStatus {
    guard(|| {
        let map = read_map(map, "map")?;
        write_out(out, map.check_membership(n).verdict)
    })
}

/// Membership certificate for F(n) as JSON.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_map_certificate(
    map: *const ThMap,
    n: u32,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let map = read_map(map, "map")?;
        let cert = map.check_membership(n);
        write_string(
            out,
            serde_json::to_string(&cert).expect("certificates serialize"),
        )
    })
}

/// # Safety
/// `map` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn th_map_free(map: *mut ThMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Evaluates a word such as `"A B^-1"` over the built-in generators for base `n`.
///
/// # Safety
/// `word` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_word_evaluate(
    word: *const c_char,
    n: u32,
    out: *mut *mut ThMap,
) -> ThStatus {
    guard(|| {
        let word = GenWord::parse(read_str(word, "word")?)?;
        let mut entries: Vec<(String, PLMap)> = Vec::new();
        for letter in word.letters() {
            if !entries.iter().any(|(name, _)| name == &letter.name) {
                entries.push((letter.name.clone(), builtin(&letter.name, n)?));
            }
        }
        let alphabet = Alphabet::new(entries)?;
        write_map(out, evaluate(&word, &alphabet)?)
    })
}

/// Cost of the built-in three-piece graphing, as an exact rational.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_graphing_cost(out: *mut *mut c_char) -> ThStatus {
    guard(|| write_string(out, Graphing::phi_r2().cost().to_string()))
}

/// Treeing sweep of the built-in graphing up to `max_len`, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn th_treeing_sweep(
    max_len: u32,
    jobs: u32,
    out: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let report = treeing_sweep(&Graphing::phi_r2(), max_len as usize, jobs as usize)?;
        write_string(
            out,
            serde_json::to_string(&report).expect("reports serialize"),
        )
    })
}

//! C ABI over the `errgroup` library.
//!
//! Objects cross the boundary as opaque handles created by `eg_*_new` or
//! `eg_*_from_json` and released with the matching `eg_*_free`. Every
//! fallible call returns an [`EgStatus`]; on failure the message is kept in
//! a thread-local slot readable through [`eg_last_error`]. Strings handed
//! out by the library must be released with [`eg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use errgroup::error_basis::{pauli_basis, verify_nice, NiceErrorBasis};
use errgroup::groups::DEFAULT_CAP;
use errgroup::instances::{check_all, Instance};
use errgroup::workspace::canonical;
use errgroup::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    /// The computation ran and reported a mathematical or size failure.
    Domain = 4,
    Io = 5,
    Panic = 6,
}

/// A nice error basis.
pub struct EgBasis(NiceErrorBasis);

/// A named example together with its code.
pub struct EgInstance(Instance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> EgStatus {
    match e {
        Error::InvalidArgument(_) | Error::Json(_) => EgStatus::InvalidArgument,
        Error::Io(_) | Error::Workspace(_) => EgStatus::Io,
        _ => EgStatus::Domain,
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), EgStatus>) -> EgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EgStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            EgStatus::Panic
        }
    }
}

fn lib<T>(r: errgroup::Result<T>) -> Result<T, EgStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, EgStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(EgStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        EgStatus::InvalidUtf8
    })
}

fn out_ptr<T>(p: *mut T) -> Result<&'static mut T, EgStatus> {
    // SAFETY: callers pass a pointer they own for the duration of the call
    unsafe { p.as_mut() }.ok_or_else(|| {
        set_error("null output pointer");
        EgStatus::NullPointer
    })
}

fn handle<'a, T>(p: *const T) -> Result<&'a T, EgStatus> {
    // SAFETY: handles come from this library and are live until freed
    unsafe { p.as_ref() }.ok_or_else(|| {
        set_error("null handle");
        EgStatus::NullPointer
    })
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs removed").into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn eg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn eg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn eg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Shift and clock basis on `C^p` for prime `p`.
#[no_mangle]
pub extern "C" fn eg_basis_pauli(p: u64, out: *mut *mut EgBasis) -> EgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let b = lib(pauli_basis(p))?;
        *out = Box::into_raw(Box::new(EgBasis(b)));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn eg_basis_from_json(json: *const c_char, out: *mut *mut EgBasis) -> EgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let v = lib(serde_json::from_str(str_arg(json)?).map_err(Error::from))?;
        *out = Box::into_raw(Box::new(EgBasis(lib(NiceErrorBasis::from_json(&v))?)));
        Ok(())
    })
}

/// Canonical JSON of the basis; free with [`eg_string_free`].
#[no_mangle]
pub extern "C" fn eg_basis_to_json(b: *const EgBasis, out: *mut *mut c_char) -> EgStatus {
    guard(|| {
        let b = handle(b)?;
        *out_ptr(out)? = c_string(canonical(&b.0.to_json()));
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn eg_basis_dim(b: *const EgBasis, out: *mut usize) -> EgStatus {
    guard(|| {
        *out_ptr(out)? = handle(b)?.0.dim();
        Ok(())
    })
}

/// Checks the basis axioms; `pass` receives the verdict and `report`, if
/// not NULL, the full report as JSON.
#[no_mangle]
pub extern "C" fn eg_basis_verify(b: *const EgBasis, pass: *mut bool, report: *mut *mut c_char) -> EgStatus {
    guard(|| {
        let r = verify_nice(&handle(b)?.0);
        *out_ptr(pass)? = r.passed();
        if !report.is_null() {
            *out_ptr(report)? = c_string(canonical(&r.to_json()));
        }
        Ok(())
    })
}

/// # Safety
/// `b` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn eg_basis_free(b: *mut EgBasis) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// One of the built-in examples by name.
///
/// # Safety
/// `name` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn eg_instance_new(name: *const c_char, out: *mut *mut EgInstance) -> EgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let inst = lib(Instance::by_name(str_arg(name)?, DEFAULT_CAP))?;
        *out = Box::into_raw(Box::new(EgInstance(inst)));
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn eg_instance_code_dim(inst: *const EgInstance, out: *mut usize) -> EgStatus {
    guard(|| {
        let inst = handle(inst)?;
        *out_ptr(out)? = lib(inst.0.code())?.dim();
        Ok(())
    })
}

/// Runs every invariant check; the JSON report carries an overall "pass".
#[no_mangle]
pub extern "C" fn eg_instance_check_all(inst: *const EgInstance, seed: u64, out: *mut *mut c_char) -> EgStatus {
    guard(|| {
        let inst = handle(inst)?;
        let out = out_ptr(out)?;
        *out = c_string(canonical(&lib(check_all(&inst.0, seed))?));
        Ok(())
    })
}

/// # Safety
/// `inst` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn eg_instance_free(inst: *mut EgInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs the command line with `argv` (without the program name) and
/// `stdin_text` (may be NULL) as standard input. The captured streams are
/// returned as library strings; `exit_code` gets the process exit status.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn eg_cli_run(
    argc: usize,
    argv: *const *const c_char,
    stdin_text: *const c_char,
    exit_code: *mut i32,
    stdout_text: *mut *mut c_char,
    stderr_text: *mut *mut c_char,
) -> EgStatus {
    guard(|| {
        let mut args = vec!["errgroup".to_string()];
        if argc > 0 {
            if argv.is_null() {
                set_error("null argv");
                return Err(EgStatus::NullPointer);
            }
            for i in 0..argc {
                args.push(str_arg(*argv.add(i))?.to_string());
            }
        }
        let input = if stdin_text.is_null() { "" } else { str_arg(stdin_text)? };
        let code = out_ptr(exit_code)?;
        let so = out_ptr(stdout_text)?;
        let se = out_ptr(stderr_text)?;
        let o = errgroup::cli::run(args, &mut input.as_bytes());
        *code = o.code;
        *so = c_string(o.stdout);
        *se = c_string(o.stderr);
        Ok(())
    })
}

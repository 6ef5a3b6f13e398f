//! C interface to `kksoergel`: opaque root-datum handles, JSON reports and
//! status codes.
//!
//! Every fallible function returns a [`KksStatus`]. On failure a message is
//! available from [`kks_last_error`] until the next call on the same thread.
//! Strings handed out here must be released with [`kks_string_free`], and
//! handles with [`kks_datum_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kksoergel::cli::{self, DatumSource, Invocation, Options};
use kksoergel::{Error, FieldSpec, RootDatum};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KksStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Usage = 3,
    Parse = 4,
    NotPrime = 5,
    NotFiniteType = 6,
    /// The report was produced but one of its checks failed.
    CheckFailed = 7,
    /// Any other error raised during a computation.
    Math = 8,
    Panic = 9,
}

/// An adjoint root datum of finite type.
pub struct KksDatum {
    inner: RootDatum,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (KksStatus, String);

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn failure(e: Error) -> Failure {
    let status = match e {
        Error::Usage(_) => KksStatus::Usage,
        Error::Parse(_) => KksStatus::Parse,
        Error::NotPrime(_) => KksStatus::NotPrime,
        Error::NotFiniteType(_) => KksStatus::NotFiniteType,
        _ => KksStatus::Math,
    };
    (status, format!("{}: {e}", e.kind()))
}

fn guard(f: impl FnOnce() -> Result<KksStatus, Failure>) -> KksStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KksStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((KksStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (KksStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn optional_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn datum<'a>(d: *const KksDatum) -> Result<&'a RootDatum, Failure> {
    d.as_ref().map(|d| &d.inner).ok_or((KksStatus::NullPointer, "datum is null".into()))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err((KksStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL bytes removed").into_raw()
}

/// Library version, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kks_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the last failure on this thread, or the error line
/// printed by [`kks_run_cli`]; empty otherwise. Valid until the next
/// library call on the same thread.
#[no_mangle]
pub extern "C" fn kks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Looks up a named preset (`A1`, `A1xA1`, `A2`, `B2`, `A3`, `G2`).
///
/// # Safety
/// `name` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kks_datum_preset(name: *const c_char, out: *mut *mut KksDatum) -> KksStatus {
    guard(|| {
        let name = text(name, "name")?;
        let inner = RootDatum::preset(name).map_err(failure)?;
        store(out, Box::into_raw(Box::new(KksDatum { inner })))?;
        Ok(KksStatus::Ok)
    })
}

/// Parses a datum from `{"cartan": [[...]]}` JSON.
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kks_datum_from_json(json: *const c_char, out: *mut *mut KksDatum) -> KksStatus {
    guard(|| {
        let json = text(json, "json")?;
        let inner = RootDatum::from_json(json).map_err(failure)?;
        store(out, Box::into_raw(Box::new(KksDatum { inner })))?;
        Ok(KksStatus::Ok)
    })
}

/// Releases a datum. Null is ignored.
///
/// # Safety
/// `d` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kks_datum_free(d: *mut KksDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live datum and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kks_datum_rank(d: *const KksDatum, out: *mut usize) -> KksStatus {
    guard(|| {
        store(out, datum(d)?.rank())?;
        Ok(KksStatus::Ok)
    })
}

/// Order of the Weyl group.
///
/// # Safety
/// `d` must be a live datum and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kks_datum_order(d: *const KksDatum, out: *mut usize) -> KksStatus {
    guard(|| {
        store(out, datum(d)?.order())?;
        Ok(KksStatus::Ok)
    })
}

/// Runs one command (`psi`, `steinberg`, `coinvariants`, `catalog`, ...)
/// on `d` and writes its JSON report to `out_json`.
///
/// `field` (`Q` or `Fp:P`) and `word` (`1,2,1`) may be null; a negative
/// `max_length` selects the command's default bound. Returns
/// `CheckFailed` with the report still written when a check fails.
///
/// # Safety
/// `d` must be a live datum, string arguments valid C strings or null
/// where allowed, and `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kks_report(
    d: *const KksDatum,
    command: *const c_char,
    field: *const c_char,
    word: *const c_char,
    seed: u64,
    max_length: i64,
    out_json: *mut *mut c_char,
) -> KksStatus {
    guard(|| {
        let d = datum(d)?;
        let name = text(command, "command")?;
        let field = match optional_text(field, "field")? {
            Some(f) => FieldSpec::parse(f).map_err(failure)?,
            None => FieldSpec::Q,
        };
        let word = optional_text(word, "word")?.map(|w| d.parse_word(w)).transpose().map_err(failure)?;
        let options =
            Options { word, seed, max_length: usize::try_from(max_length).ok(), json: true, ..Options::default() };
        let inv = Invocation { name: name.to_string(), datum: Some((DatumSource::Inline, d.clone())), field, options };
        let report = cli::dispatch(&inv).map_err(failure)?;
        store(out_json, hand_out(report.json.to_string()))?;
        Ok(if report.pass { KksStatus::Ok } else { KksStatus::CheckFailed })
    })
}

/// Runs the command-line front end on `argv` (including the program name)
/// and returns its standard output and exit code.
///
/// # Safety
/// `argv` must point to `argc` valid C strings; the output pointers must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn kks_run_cli(
    argc: usize,
    argv: *const *const c_char,
    out_stdout: *mut *mut c_char,
    out_code: *mut i32,
) -> KksStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err((KksStatus::NullPointer, "argv is null".into()));
        }
        let args =
            (0..argc).map(|i| text(*argv.add(i), "argument").map(str::to_owned)).collect::<Result<Vec<_>, _>>()?;
        let out = cli::run(args);
        if !out.stderr.is_empty() {
            set_error(out.stderr.trim_end());
        }
        store(out_code, out.code)?;
        store(out_stdout, hand_out(out.stdout))?;
        Ok(KksStatus::Ok)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

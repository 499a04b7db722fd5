//! C ABI over arrowlab workspaces.
//!
//! Handles are opaque and owned by the caller until passed to the matching `_free`.
//! Every call returns an [`ArrowlabStatus`]; on anything but `Ok` or `LawViolation`
//! the message is available from [`arrowlab_last_error`] on the same thread.

use arrowlab::cli::defs;
use arrowlab::cli::{LawFilter, Object, Workspace};
use arrowlab::suite::{self, SuiteConfig};
use arrowlab::{Error, Status, VerificationReport};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowlabStatus {
    Ok = 0,
    /// The call succeeded and the report it produced contains a failing law.
    LawViolation = 1,
    /// Malformed definitions, unknown names, bad arguments.
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// A size cap or precondition stopped the computation.
    Unsupported = 5,
    Panic = 6,
}

/// A set of named algebras, PCAs, morphisms and nuclei.
pub struct ArrowlabWorkspace {
    ws: Workspace,
    cfg: SuiteConfig,
}

/// Findings produced by a check or a suite run.
pub struct ArrowlabReport {
    report: VerificationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ArrowlabStatus {
    match e {
        Error::Cap(_) | Error::Precondition(_) => ArrowlabStatus::Unsupported,
        _ => ArrowlabStatus::InputError,
    }
}

enum Fail {
    Status(ArrowlabStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Status(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<ArrowlabStatus, Fail>) -> ArrowlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            ArrowlabStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(ArrowlabStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(ArrowlabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ws_arg<'a>(p: *mut ArrowlabWorkspace) -> Result<&'a mut ArrowlabWorkspace, Fail> {
    p.as_mut().ok_or_else(|| Fail::Status(ArrowlabStatus::NullPointer, "workspace is null".into()))
}

unsafe fn report_arg<'a>(p: *const ArrowlabReport) -> Result<&'a ArrowlabReport, Fail> {
    p.as_ref().ok_or_else(|| Fail::Status(ArrowlabStatus::NullPointer, "report is null".into()))
}

fn out_null<T>(p: *mut T) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail::Status(ArrowlabStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn report_status(r: &VerificationReport) -> ArrowlabStatus {
    if r.status() == Status::Fail {
        ArrowlabStatus::LawViolation
    } else {
        ArrowlabStatus::Ok
    }
}

/// The message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn arrowlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// A new empty workspace whose randomized checks use `seed`.
#[no_mangle]
pub extern "C" fn arrowlab_workspace_new(seed: u64) -> *mut ArrowlabWorkspace {
    let cfg = SuiteConfig { seed, ..SuiteConfig::default() };
    Box::into_raw(Box::new(ArrowlabWorkspace { ws: Workspace::new(), cfg }))
}

/// # Safety
/// `ws` must come from [`arrowlab_workspace_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_workspace_free(ws: *mut ArrowlabWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Applies a `key=value` cap such as `lambda-terms=50`.
///
/// # Safety
/// `ws` is a live workspace and `cap` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_workspace_set_cap(ws: *mut ArrowlabWorkspace, cap: *const c_char) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        w.cfg.set_cap(str_arg(cap, "cap")?)?;
        Ok(ArrowlabStatus::Ok)
    })
}

/// Loads one JSON definition document; unnamed definitions are called `stem`.
///
/// # Safety
/// `ws` is a live workspace; `json` and `stem` are NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_workspace_load_json(ws: *mut ArrowlabWorkspace, json: *const c_char, stem: *const c_char) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        let defs = defs::parse_str(str_arg(json, "json")?, str_arg(stem, "stem")?)?;
        w.ws.load_defs(defs)?;
        Ok(ArrowlabStatus::Ok)
    })
}

/// Runs a construction on `argc` argument names and registers the result as `name`.
///
/// # Safety
/// `ws` is a live workspace; `construction`, `name` and the `argc` entries of `argv` are NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_workspace_derive(
    ws: *mut ArrowlabWorkspace,
    construction: *const c_char,
    argv: *const *const c_char,
    argc: usize,
    name: *const c_char,
) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        let construction = str_arg(construction, "construction")?;
        if argv.is_null() && argc > 0 {
            return Err(Fail::Status(ArrowlabStatus::NullPointer, "argv is null".into()));
        }
        let mut args = Vec::with_capacity(argc);
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argument")?.to_string());
        }
        w.ws.derive(construction, &args, str_arg(name, "name")?)?;
        Ok(ArrowlabStatus::Ok)
    })
}

/// Number of elements of a named algebra or PCA.
///
/// # Safety
/// `ws` is a live workspace, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_workspace_size(ws: *mut ArrowlabWorkspace, name: *const c_char, out: *mut usize) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        out_null(out)?;
        let n = match w.ws.get(str_arg(name, "name")?)? {
            Object::Algebra(a, _) => a.size(),
            Object::Pca(p) => p.size(),
            other => return Err(Fail::Status(ArrowlabStatus::InputError, format!("a {} has no carrier", other.kind()))),
        };
        *out = n;
        Ok(ArrowlabStatus::Ok)
    })
}

/// Checks a named object. `laws` is a comma-separated filter, or null for every applicable law.
/// Returns `LawViolation` when the report contains a failure; the report is written either way.
///
/// # Safety
/// `ws` is a live workspace, `subject` a NUL-terminated string, `laws` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_workspace_check(
    ws: *mut ArrowlabWorkspace,
    subject: *const c_char,
    laws: *const c_char,
    out: *mut *mut ArrowlabReport,
) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        out_null(out)?;
        let filter = if laws.is_null() { LawFilter::all() } else { LawFilter::parse(&[str_arg(laws, "laws")?.to_string()])? };
        let mut report = w.ws.check(str_arg(subject, "subject")?, &filter, &w.cfg)?;
        report.canonicalize();
        let status = report_status(&report);
        *out = Box::into_raw(Box::new(ArrowlabReport { report }));
        Ok(status)
    })
}

/// Runs one generated family (`frames`, `oracles`, `lambda`, `pcas`, `tripos`, `nuclei`, `modified`),
/// or all of them when `family` is null.
///
/// # Safety
/// `ws` is a live workspace, `family` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_run_suite(ws: *mut ArrowlabWorkspace, family: *const c_char, out: *mut *mut ArrowlabReport) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        out_null(out)?;
        let mut report = if family.is_null() {
            suite::run_suite(&w.cfg)
        } else {
            let f = str_arg(family, "family")?;
            suite::run_family(f, &w.cfg).ok_or_else(|| Fail::Status(ArrowlabStatus::InputError, format!("unknown family `{f}`")))?
        };
        report.canonicalize();
        let status = report_status(&report);
        *out = Box::into_raw(Box::new(ArrowlabReport { report }));
        Ok(status)
    })
}

/// Evaluates a closed λ-term in a named algebra; the element name is written to `out`
/// and must be released with [`arrowlab_string_free`].
///
/// # Safety
/// `ws` is a live workspace, `algebra` and `term` NUL-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_lambda_eval(
    ws: *mut ArrowlabWorkspace,
    algebra: *const c_char,
    term: *const c_char,
    out: *mut *mut c_char,
) -> ArrowlabStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        out_null(out)?;
        let alg = str_arg(algebra, "algebra")?;
        let (v, _) = w.ws.eval(alg, str_arg(term, "term")?, &[])?;
        let name = w.ws.algebra(alg)?.name(v).to_string();
        *out = CString::new(name).map_err(|_| Fail::Status(ArrowlabStatus::InvalidUtf8, "element name has a NUL byte".into()))?.into_raw();
        Ok(ArrowlabStatus::Ok)
    })
}

/// 0 all pass, 1 some law failed, 2 inconclusive without failures; -1 for a null report.
///
/// # Safety
/// `report` is null or a live report.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_report_status(report: *const ArrowlabReport) -> i32 {
    match report.as_ref() {
        None => -1,
        Some(r) => match r.report.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        },
    }
}

/// Number of findings, 0 for a null report.
///
/// # Safety
/// `report` is null or a live report.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_report_len(report: *const ArrowlabReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.findings.len())
}

/// The structured JSON form of a report; release with [`arrowlab_string_free`].
///
/// # Safety
/// `report` is a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_report_json(report: *const ArrowlabReport, out: *mut *mut c_char) -> ArrowlabStatus {
    guard(|| {
        let r = report_arg(report)?;
        out_null(out)?;
        *out = CString::new(r.report.to_structured()).expect("json has no NUL").into_raw();
        Ok(ArrowlabStatus::Ok)
    })
}

/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_report_free(report: *mut ArrowlabReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn arrowlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

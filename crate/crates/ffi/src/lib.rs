//! C ABI for `cfree-core`.
//!
//! Every fallible function returns a [`CfreeStatus`]; on failure a message is
//! available from [`cfree_last_error_message`] until the next call on the same
//! thread. Laws and series are opaque handles released with their `_free`
//! functions. Strings returned through out-parameters are owned by the caller
//! and released with [`cfree_string_free`]. Rationals cross the boundary as
//! `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cfree::verify::{run_suite, Suite, SuiteConfig};
use cfree::{
    cross_check, moments_from_transform, transform_from_moments, ConvolutionKind, ConvolutionPath, Error,
    TransformKind, TruncatedSeries, TwoStateLaw,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfreeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    NotInvertible = 5,
    CompositionUndefined = 6,
    Overflow = 7,
    InsufficientData = 8,
    OrderMismatch = 9,
    Panic = 10,
    InvalidArgument = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfreeTransform {
    R = 0,
    T = 1,
    S = 2,
    CR = 3,
    CT = 4,
    CS = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfreeConvolution {
    Add = 0,
    Mul = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfreePath {
    Transform = 0,
    Axiomatic = 1,
    Operator = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfreeState {
    Psi = 0,
    Phi = 1,
}

/// Opaque two-state law.
pub struct CfreeLaw(TwoStateLaw);

/// Opaque truncated power series.
pub struct CfreeSeries(TruncatedSeries);

impl From<CfreeTransform> for TransformKind {
    fn from(k: CfreeTransform) -> Self {
        match k {
            CfreeTransform::R => TransformKind::R,
            CfreeTransform::T => TransformKind::T,
            CfreeTransform::S => TransformKind::S,
            CfreeTransform::CR => TransformKind::CR,
            CfreeTransform::CT => TransformKind::CT,
            CfreeTransform::CS => TransformKind::CS,
        }
    }
}

impl From<CfreeConvolution> for ConvolutionKind {
    fn from(k: CfreeConvolution) -> Self {
        match k {
            CfreeConvolution::Add => ConvolutionKind::Add,
            CfreeConvolution::Mul => ConvolutionKind::Mul,
        }
    }
}

impl From<CfreePath> for ConvolutionPath {
    fn from(p: CfreePath) -> Self {
        match p {
            CfreePath::Transform => ConvolutionPath::Transform,
            CfreePath::Axiomatic => ConvolutionPath::Axiomatic,
            CfreePath::Operator => ConvolutionPath::Operator,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CfreeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::CompositionUndefined(_) => CfreeStatus::CompositionUndefined,
            Error::NotInvertible(_) => CfreeStatus::NotInvertible,
            Error::Domain(_) => CfreeStatus::Domain,
            Error::Overflow { .. } => CfreeStatus::Overflow,
            Error::InsufficientData { .. } => CfreeStatus::InsufficientData,
            Error::OrderMismatch(_) => CfreeStatus::OrderMismatch,
            Error::Parse(_) => CfreeStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior NULs removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CfreeStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(CfreeStatus::Panic, msg))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            CfreeStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(Some(msg));
            status
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CfreeStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` is null or points to a live value of type `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CfreeStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `out` is null or writable.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON and rationals contain no NUL").into_raw()
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure(CfreeStatus::Parse, e.to_string()))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializing plain data")
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cfree_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cfree_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfree_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a law from JSON `{"psi": [...], "phi": [...]}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_law_from_json(json: *const c_char, out: *mut *mut CfreeLaw) -> CfreeStatus {
    guard(|| {
        let law: TwoStateLaw = parse_json(read_str(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(CfreeLaw(law))))
    })
}

/// # Safety
/// `law` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_law_to_json(law: *const CfreeLaw, out: *mut *mut c_char) -> CfreeStatus {
    guard(|| {
        let law = borrow(law, "law")?;
        write_out(out, to_c_string(to_json(&law.0)))
    })
}

/// Number of moments per state, or 0 for a null handle.
///
/// # Safety
/// `law` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfree_law_order(law: *const CfreeLaw) -> usize {
    law.as_ref().map_or(0, |l| l.0.order())
}

/// The `n`-th moment (`n >= 1`) in the given state, as `"p/q"`.
///
/// # Safety
/// `law` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_law_moment(
    law: *const CfreeLaw,
    state: CfreeState,
    n: usize,
    out: *mut *mut c_char,
) -> CfreeStatus {
    guard(|| {
        let law = &borrow(law, "law")?.0;
        if n == 0 || n > law.order() {
            return Err(Failure(
                CfreeStatus::InvalidArgument,
                format!("moment index {n} outside 1..={}", law.order()),
            ));
        }
        let value = match state {
            CfreeState::Psi => law.psi_moment(n),
            CfreeState::Phi => law.phi_moment(n),
        };
        write_out(out, to_c_string(value.to_string()))
    })
}

/// # Safety
/// `law` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfree_law_free(law: *mut CfreeLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// Parses a series from JSON `{"order": N, "coeffs": [...]}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_series_from_json(json: *const c_char, out: *mut *mut CfreeSeries) -> CfreeStatus {
    guard(|| {
        let series: TruncatedSeries = parse_json(read_str(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(CfreeSeries(series))))
    })
}

/// # Safety
/// `series` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_series_to_json(series: *const CfreeSeries, out: *mut *mut c_char) -> CfreeStatus {
    guard(|| {
        let series = borrow(series, "series")?;
        write_out(out, to_c_string(to_json(&series.0)))
    })
}

/// Truncation order, or 0 for a null handle.
///
/// # Safety
/// `series` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfree_series_order(series: *const CfreeSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.order())
}

/// Coefficient of `z^k` as `"p/q"`.
///
/// # Safety
/// `series` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_series_coeff(series: *const CfreeSeries, k: usize, out: *mut *mut c_char) -> CfreeStatus {
    guard(|| {
        let series = &borrow(series, "series")?.0;
        if k > series.order() {
            return Err(Failure(
                CfreeStatus::InvalidArgument,
                format!("coefficient index {k} above order {}", series.order()),
            ));
        }
        write_out(out, to_c_string(series.coeff(k).to_string()))
    })
}

/// # Safety
/// `series` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfree_series_free(series: *mut CfreeSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Computes a transform of `law`.
///
/// # Safety
/// `law` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_transform(
    law: *const CfreeLaw,
    kind: CfreeTransform,
    out: *mut *mut CfreeSeries,
) -> CfreeStatus {
    guard(|| {
        let law = borrow(law, "law")?;
        let series = transform_from_moments(kind.into(), &law.0)?;
        write_out(out, Box::into_raw(Box::new(CfreeSeries(series))))
    })
}

/// Recovers moments from a transform as a JSON array of `"p/q"` strings:
/// `ψ`-moments for `R`, `T`, `S` and `φ`-moments for the conditional kinds.
/// `psi_law` supplies the `ψ`-moments the conditional kinds need and may be
/// null otherwise.
///
/// # Safety
/// `series` is a live handle; `psi_law` is null or a live handle; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_invert(
    kind: CfreeTransform,
    series: *const CfreeSeries,
    psi_law: *const CfreeLaw,
    out: *mut *mut c_char,
) -> CfreeStatus {
    guard(|| {
        let series = borrow(series, "series")?;
        let psi = psi_law.as_ref().map(|l| l.0.psi());
        let moments = moments_from_transform(kind.into(), &series.0, psi)?;
        write_out(out, to_c_string(to_json(&moments)))
    })
}

/// Law of `X + Y` or `XY` through order `n` along one computation path.
///
/// # Safety
/// `x`, `y` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_convolve(
    kind: CfreeConvolution,
    path: CfreePath,
    x: *const CfreeLaw,
    y: *const CfreeLaw,
    n: usize,
    out: *mut *mut CfreeLaw,
) -> CfreeStatus {
    guard(|| {
        let (x, y) = (borrow(x, "x")?, borrow(y, "y")?);
        let law = ConvolutionPath::from(path).convolve(kind.into(), &x.0, &y.0, n)?;
        write_out(out, Box::into_raw(Box::new(CfreeLaw(law))))
    })
}

/// Runs all three convolution paths. Writes whether they agree and the full
/// report as JSON. A failed precondition is reported in the JSON with
/// `agree = false` and status `Ok`.
///
/// # Safety
/// `x`, `y` are live handles; `agree` and `report_json` are writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_cross_check(
    kind: CfreeConvolution,
    x: *const CfreeLaw,
    y: *const CfreeLaw,
    n: usize,
    agree: *mut bool,
    report_json: *mut *mut c_char,
) -> CfreeStatus {
    guard(|| {
        let (x, y) = (borrow(x, "x")?, borrow(y, "y")?);
        if agree.is_null() || report_json.is_null() {
            return Err(null("output pointer"));
        }
        let report = cross_check(kind.into(), &x.0, &y.0, n);
        write_out(agree, report.agree)?;
        write_out(report_json, to_c_string(to_json(&report)))
    })
}

/// Runs a named verification suite. Writes whether it passed and the report
/// as JSON.
///
/// # Safety
/// `suite` is a NUL-terminated string; `passed` and `report_json` are
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cfree_verify(
    suite: *const c_char,
    trials: usize,
    seed: u64,
    order: usize,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> CfreeStatus {
    guard(|| {
        let suite: Suite = read_str(suite, "suite")?.parse()?;
        if passed.is_null() || report_json.is_null() {
            return Err(null("output pointer"));
        }
        let report = run_suite(suite, &SuiteConfig { trials, seed, order });
        write_out(passed, report.passed)?;
        write_out(report_json, to_c_string(to_json(&report)))
    })
}

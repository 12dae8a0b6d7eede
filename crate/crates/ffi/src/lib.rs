//! C ABI over the `uc-chp` library.
//!
//! Every entry point returns a [`UcStatus`]. Results come back through out
//! parameters or opaque handles that the caller releases with the matching
//! `*_free` function. On failure, [`uc_last_error`] holds a message for the
//! calling thread until the next failing call on that thread.
//!
//! Array accessors follow one convention: pass `buf = NULL` (or a short `len`)
//! to learn the required length through `out_len`, then call again with a
//! buffer at least that long.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uc_chp::mip::{MipOptions, MipStatus};
use uc_chp::model::{load_instance, load_instance_from_str, LoadOptions, SystemInstance};
use uc_chp::pricing::{compare_iso, price_with, render_csv, solve_system, IsoSolution, Method, PricingReport};
use uc_chp::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Validation = 5,
    InvalidInput = 6,
    Infeasible = 7,
    Unbounded = 8,
    NodeLimit = 9,
    Numerical = 10,
    OutOfRange = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcMethod {
    Tlmp = 0,
    Chp = 1,
}

/// A validated system instance.
pub struct UcInstance {
    inner: SystemInstance,
}

/// The system MIP optimum and its schedule.
pub struct UcSolution {
    inner: IsoSolution,
}

/// One or more pricing reports sharing an ISO schedule.
pub struct UcReport {
    reports: Vec<PricingReport>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> UcStatus {
    match err {
        Error::Io { .. } => UcStatus::Io,
        Error::Parse { .. } => UcStatus::Parse,
        Error::Validation(_) => UcStatus::Validation,
        Error::Infeasible(_) => UcStatus::Infeasible,
        Error::Unbounded(_) => UcStatus::Unbounded,
        Error::NodeLimit { .. } => UcStatus::NodeLimit,
        Error::NumericalFailure { .. } | Error::FractionalSolution { .. } => UcStatus::Numerical,
        Error::EnumerationTooLarge { .. } | Error::InvalidInput(_) => UcStatus::InvalidInput,
    }
}

struct Fail(UcStatus, String);

impl From<Error> for Fail {
    fn from(err: Error) -> Self {
        let mut msg = err.to_string();
        if let Error::Validation(diags) = &err {
            for d in diags {
                msg.push_str(&format!("\n  {d}"));
            }
        }
        Fail(status_of(&err), msg)
    }
}

fn fail(status: UcStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

/// Runs `f`, converting errors and panics into a status plus a thread-local message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> UcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            UcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(UcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(UcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(UcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(UcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// Copies `src` into `buf` when it fits; always reports the length.
unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize, out_len: *mut usize) -> Result<(), Fail> {
    *out(out_len, "out_len")? = src.len();
    if buf.is_null() || len < src.len() {
        return Err(fail(
            UcStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

fn options(pieces: u32) -> LoadOptions {
    LoadOptions {
        tangent_pieces: (pieces > 0).then_some(pieces as usize),
    }
}

/// Message for the last failing call on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads and validates an instance file. `pieces` overrides the tangent count
/// of quadratic costs; pass 0 to keep the file's value.
#[no_mangle]
pub unsafe extern "C" fn uc_instance_load(path: *const c_char, pieces: u32, instance: *mut *mut UcInstance) -> UcStatus {
    guard(|| {
        let path = text(path, "path")?;
        let slot = out(instance, "instance")?;
        let inner = load_instance(path, &options(pieces))?;
        *slot = Box::into_raw(Box::new(UcInstance { inner }));
        Ok(())
    })
}

/// Same as [`uc_instance_load`] for a JSON document in memory.
#[no_mangle]
pub unsafe extern "C" fn uc_instance_parse(json: *const c_char, pieces: u32, instance: *mut *mut UcInstance) -> UcStatus {
    guard(|| {
        let json = text(json, "json")?;
        let slot = out(instance, "instance")?;
        let inner = load_instance_from_str(json, &options(pieces))?;
        *slot = Box::into_raw(Box::new(UcInstance { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn uc_instance_free(instance: *mut UcInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

#[no_mangle]
pub unsafe extern "C" fn uc_instance_horizon(instance: *const UcInstance, out_horizon: *mut usize) -> UcStatus {
    guard(|| {
        let inst = deref(instance, "instance")?;
        *out(out_horizon, "out_horizon")? = inst.inner.horizon;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn uc_instance_generator_count(instance: *const UcInstance, out_count: *mut usize) -> UcStatus {
    guard(|| {
        let inst = deref(instance, "instance")?;
        *out(out_count, "out_count")? = inst.inner.generators.len();
        Ok(())
    })
}

/// Solves the system commitment problem. `node_limit = 0` uses the default.
#[no_mangle]
pub unsafe extern "C" fn uc_solve(instance: *const UcInstance, node_limit: usize, solution: *mut *mut UcSolution) -> UcStatus {
    guard(|| {
        let inst = deref(instance, "instance")?;
        let slot = out(solution, "solution")?;
        let mut opts = MipOptions::default();
        if node_limit > 0 {
            opts.node_limit = node_limit;
        }
        let inner = solve_system(&inst.inner, &opts)?;
        *slot = Box::into_raw(Box::new(UcSolution { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn uc_solution_free(solution: *mut UcSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Objective value and whether optimality was proven (1) or the node limit hit (0).
#[no_mangle]
pub unsafe extern "C" fn uc_solution_objective(
    solution: *const UcSolution,
    out_objective: *mut f64,
    out_proven: *mut i32,
) -> UcStatus {
    guard(|| {
        let sol = deref(solution, "solution")?;
        *out(out_objective, "out_objective")? = sol.inner.z_qip;
        if let Some(p) = out_proven.as_mut() {
            *p = i32::from(sol.inner.status == MipStatus::Optimal);
        }
        Ok(())
    })
}

/// Dispatch of generator `generator` (0-based, file order) in every period.
#[no_mangle]
pub unsafe extern "C" fn uc_solution_dispatch(
    solution: *const UcSolution,
    generator: usize,
    buf: *mut f64,
    len: usize,
    out_len: *mut usize,
) -> UcStatus {
    guard(|| {
        let sol = deref(solution, "solution")?;
        let unit = sol
            .inner
            .schedule
            .units
            .get(generator)
            .ok_or_else(|| fail(UcStatus::OutOfRange, format!("no generator at index {generator}")))?;
        copy_out(&unit.x, buf, len, out_len)
    })
}

/// Solves the system and prices it with one method.
#[no_mangle]
pub unsafe extern "C" fn uc_price(instance: *const UcInstance, method: UcMethod, report: *mut *mut UcReport) -> UcStatus {
    guard(|| {
        let inst = deref(instance, "instance")?;
        let slot = out(report, "report")?;
        let iso = solve_system(&inst.inner, &MipOptions::default())?;
        let method = match method {
            UcMethod::Tlmp => Method::Tlmp,
            UcMethod::Chp => Method::Chp,
        };
        let reports = vec![price_with(&inst.inner, method, &iso)?];
        *slot = Box::into_raw(Box::new(UcReport { reports }));
        Ok(())
    })
}

/// Solves the system and prices it with both methods: entry 0 is TLMP, entry 1 CHP.
#[no_mangle]
pub unsafe extern "C" fn uc_compare(instance: *const UcInstance, report: *mut *mut UcReport) -> UcStatus {
    guard(|| {
        let inst = deref(instance, "instance")?;
        let slot = out(report, "report")?;
        let iso = solve_system(&inst.inner, &MipOptions::default())?;
        let reports = compare_iso(&inst.inner, &iso)?;
        *slot = Box::into_raw(Box::new(UcReport { reports }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn uc_report_free(report: *mut UcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[no_mangle]
pub unsafe extern "C" fn uc_report_count(report: *const UcReport, out_count: *mut usize) -> UcStatus {
    guard(|| {
        let r = deref(report, "report")?;
        *out(out_count, "out_count")? = r.reports.len();
        Ok(())
    })
}

unsafe fn entry<'a>(report: *const UcReport, index: usize) -> Result<&'a PricingReport, Fail> {
    deref(report, "report")?
        .reports
        .get(index)
        .ok_or_else(|| fail(UcStatus::OutOfRange, format!("no report entry {index}")))
}

#[no_mangle]
pub unsafe extern "C" fn uc_report_method(report: *const UcReport, index: usize, out_method: *mut UcMethod) -> UcStatus {
    guard(|| {
        let r = entry(report, index)?;
        *out(out_method, "out_method")? = match r.method {
            Method::Tlmp => UcMethod::Tlmp,
            Method::Chp => UcMethod::Chp,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn uc_report_prices(
    report: *const UcReport,
    index: usize,
    buf: *mut f64,
    len: usize,
    out_len: *mut usize,
) -> UcStatus {
    guard(|| copy_out(entry(report, index)?.prices.as_slice(), buf, len, out_len))
}

/// Per-generator uplift, in file order.
#[no_mangle]
pub unsafe extern "C" fn uc_report_uplifts(
    report: *const UcReport,
    index: usize,
    buf: *mut f64,
    len: usize,
    out_len: *mut usize,
) -> UcStatus {
    guard(|| {
        let values: Vec<f64> = entry(report, index)?.per_gen.iter().map(|g| g.uplift).collect();
        copy_out(&values, buf, len, out_len)
    })
}

/// Summary numbers of one entry. Any out pointer may be NULL. `gap_tm` is
/// NaN unless the report came from [`uc_compare`].
#[no_mangle]
pub unsafe extern "C" fn uc_report_summary(
    report: *const UcReport,
    index: usize,
    total_uplift: *mut f64,
    z_qip: *mut f64,
    relaxation_objective: *mut f64,
    gap_tm: *mut f64,
) -> UcStatus {
    guard(|| {
        let r = entry(report, index)?;
        for (p, v) in [
            (total_uplift, r.total_uplift),
            (z_qip, r.z_qip),
            (relaxation_objective, r.relaxation_objective),
            (gap_tm, r.gap_tm.unwrap_or(f64::NAN)),
        ] {
            if let Some(p) = p.as_mut() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// The report as CSV, identical to the command line output. Release with
/// [`uc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn uc_report_csv(report: *const UcReport, out_csv: *mut *mut c_char) -> UcStatus {
    guard(|| {
        let r = deref(report, "report")?;
        let slot = out(out_csv, "out_csv")?;
        let csv = CString::new(render_csv(&r.reports)).map_err(|_| fail(UcStatus::InvalidInput, "report text contains a NUL byte"))?;
        *slot = csv.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn uc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C interface to `teleqcp`.
//!
//! Every function returns a [`TqStatus`]. On failure the message is kept per
//! thread and can be read with [`tq_last_error_message`]. Panics are caught at
//! the boundary and reported as [`TqStatus::Panic`]. Handles are opaque and
//! must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use teleqcp::chains::{
    xxz_qcp_delta1, xxz_qcp_delta2, ChainSize, CorrelatorProvider, Strategy, ThermalPoint,
};
use teleqcp::detector::{
    extrapolate_qcp, finite_difference, locate_extremum, scan, FitKind, Grid, ModelFamily,
    Observable, ScanSeries,
};
use teleqcp::error::Error;
use teleqcp::teleport::{
    d_min, f_max, mean_fidelity, mean_trace_distance, PairCorrelators, SetFamily,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unphysical = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TqSetFamily {
    Psi = 0,
    Phi = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TqFamily {
    /// XXZ scanning the anisotropy; `fixed` is the field.
    XxzDelta = 0,
    /// XY scanning lambda; `fixed` is gamma.
    XyLambda = 1,
    /// XY scanning gamma; `fixed` is lambda.
    XyGamma = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TqObservable {
    Z = 0,
    Xx = 1,
    Yy = 2,
    Zz = 3,
    FbarPsi = 4,
    FbarPhi = 5,
    Fmax = 6,
    DbarPsi = 7,
    DbarPhi = 8,
    Dmin = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TqFit {
    Linear = 0,
    Quadratic = 1,
}

/// One-site magnetization and nearest-neighbour Pauli correlators.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TqCorrelators {
    pub z: f64,
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TqExtremum {
    pub location: f64,
    pub uncertainty: f64,
    pub derivative: f64,
    /// Nonzero when the extremum lies on a one-sided point or the window edge.
    pub at_edge: i32,
}

/// Correlator source with a spectrum cache.
pub struct TqProvider(CorrelatorProvider);

/// One finished scan.
pub struct TqScan(ScanSeries);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> TqStatus {
    match e {
        Error::Unphysical(_) | Error::InvalidState(_) => TqStatus::Unphysical,
        Error::InvalidArgument(_)
        | Error::Config(_)
        | Error::UnsupportedStrategy(_)
        | Error::SizeLimit { .. }
        | Error::DimensionMismatch(_) => TqStatus::InvalidArgument,
        _ => TqStatus::Numerical,
    }
}

struct Fail(TqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TqStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TqStatus::Ok
        }
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
            TqStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, n) })
}

fn correlators(c: TqCorrelators) -> Result<PairCorrelators, Fail> {
    Ok(PairCorrelators::new(c.z, c.xx, c.yy, c.zz)?)
}

fn set_family(f: TqSetFamily) -> SetFamily {
    match f {
        TqSetFamily::Psi => SetFamily::Psi,
        TqSetFamily::Phi => SetFamily::Phi,
    }
}

fn tq_set_family(f: SetFamily) -> TqSetFamily {
    match f {
        SetFamily::Psi => TqSetFamily::Psi,
        SetFamily::Phi => TqSetFamily::Phi,
    }
}

/// `chain_length = 0` selects the free-fermion solution.
fn strategy(chain_length: usize) -> Result<Strategy, Fail> {
    Ok(match chain_length {
        0 => Strategy::FreeFermion,
        l => Strategy::Ed(ChainSize::new(l)?),
    })
}

fn observable(o: TqObservable) -> Observable {
    Observable::ALL[o as usize]
}

/// Copies the last error message of this thread, NUL-terminated, into `buf`.
/// Returns the message length excluding the terminator; call with `len = 0`
/// to query the size.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn tq_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_fmax(
    c: TqCorrelators,
    value: *mut f64,
    family: *mut TqSetFamily,
) -> TqStatus {
    guard(|| {
        let e = f_max(&correlators(c)?);
        unsafe {
            write(value, e.value, "value")?;
            write(family, tq_set_family(e.family), "family")
        }
    })
}

/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_dmin(
    c: TqCorrelators,
    value: *mut f64,
    family: *mut TqSetFamily,
) -> TqStatus {
    guard(|| {
        let e = d_min(&correlators(c)?);
        unsafe {
            write(value, e.value, "value")?;
            write(family, tq_set_family(e.family), "family")
        }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_mean_fidelity(
    c: TqCorrelators,
    family: TqSetFamily,
    out: *mut f64,
) -> TqStatus {
    guard(|| unsafe {
        write(
            out,
            mean_fidelity(&correlators(c)?, set_family(family)),
            "out",
        )
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_mean_trace_distance(
    c: TqCorrelators,
    family: TqSetFamily,
    out: *mut f64,
) -> TqStatus {
    guard(|| unsafe {
        write(
            out,
            mean_trace_distance(&correlators(c)?, set_family(family)),
            "out",
        )
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_xxz_delta1(h: f64, out: *mut f64) -> TqStatus {
    guard(|| unsafe { write(out, xxz_qcp_delta1(h)?, "out") })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_xxz_delta2(h: f64, out: *mut f64) -> TqStatus {
    guard(|| unsafe { write(out, xxz_qcp_delta2(h)?, "out") })
}

/// Creates a provider; release it with [`tq_provider_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_provider_new(out: *mut *mut TqProvider) -> TqStatus {
    guard(|| unsafe {
        write(
            out,
            Box::into_raw(Box::new(TqProvider(CorrelatorProvider::new()))),
            "out",
        )
    })
}

/// # Safety
/// `p` must come from [`tq_provider_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tq_provider_free(p: *mut TqProvider) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(unsafe { Box::from_raw(p) })));
    }
}

/// Thermal correlators of one model point. `family` and `fixed` name the
/// model as in scans and `param` is the scanned coordinate.
///
/// # Safety
/// `provider` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_correlators(
    provider: *const TqProvider,
    family: TqFamily,
    fixed: f64,
    param: f64,
    kt: f64,
    chain_length: usize,
    out: *mut TqCorrelators,
) -> TqStatus {
    guard(|| {
        let provider = unsafe { provider.as_ref() }.ok_or_else(|| null("provider"))?;
        let model = model_family(family, fixed).model_at(param)?;
        let point = ThermalPoint::new(model, kt)?;
        let c = provider
            .0
            .correlators(&point, strategy(chain_length)?)?
            .correlators;
        let c = TqCorrelators {
            z: c.z(),
            xx: c.xx(),
            yy: c.yy(),
            zz: c.zz(),
        };
        unsafe { write(out, c, "out") }
    })
}

fn model_family(f: TqFamily, fixed: f64) -> ModelFamily {
    match f {
        TqFamily::XxzDelta => ModelFamily::XxzDelta { h: fixed },
        TqFamily::XyLambda => ModelFamily::XyLambda { gamma: fixed },
        TqFamily::XyGamma => ModelFamily::XyGamma { lambda: fixed },
    }
}

/// Scans `[start, end]` with spacing `step` at temperature `kt`; release the
/// result with [`tq_scan_free`].
///
/// # Safety
/// `provider` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_scan_new(
    provider: *const TqProvider,
    family: TqFamily,
    fixed: f64,
    start: f64,
    end: f64,
    step: f64,
    kt: f64,
    chain_length: usize,
    out: *mut *mut TqScan,
) -> TqStatus {
    guard(|| {
        let provider = unsafe { provider.as_ref() }.ok_or_else(|| null("provider"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = Grid::from_range(start, end, step)?;
        let s = scan(
            model_family(family, fixed),
            grid,
            kt,
            strategy(chain_length)?,
            &provider.0,
        )?;
        unsafe { write(out, Box::into_raw(Box::new(TqScan(s))), "out") }
    })
}

/// # Safety
/// `s` must come from [`tq_scan_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tq_scan_free(s: *mut TqScan) {
    if !s.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(unsafe { Box::from_raw(s) })));
    }
}

/// Number of grid points, or 0 for a null handle.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tq_scan_len(s: *const TqScan) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.0.len())
}

/// Copies the scanned parameter values into `buf`.
///
/// # Safety
/// `s` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tq_scan_params(s: *const TqScan, buf: *mut f64, len: usize) -> TqStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("scan"))?;
        unsafe { copy_out(&s.0.params(), buf, len) }
    })
}

/// Copies one observable column into `buf`; failed grid points are NaN.
///
/// # Safety
/// `s` must be a live handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tq_scan_column(
    s: *const TqScan,
    observable: TqObservable,
    buf: *mut f64,
    len: usize,
) -> TqStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("scan"))?;
        let col: Vec<f64> =
            s.0.column(self::observable(observable))
                .into_iter()
                .map(|v| v.unwrap_or(f64::NAN))
                .collect();
        unsafe { copy_out(&col, buf, len) }
    })
}

unsafe fn copy_out(values: &[f64], buf: *mut f64, len: usize) -> Result<(), Fail> {
    if len < values.len() {
        return Err(Fail(
            TqStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    Ok(())
}

/// Finite-difference derivative (order 1 or 2) of `n` equally spaced values,
/// written to `out` (length `n`).
///
/// # Safety
/// `series` must be valid for `n` reads and `out` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn tq_finite_difference(
    series: *const f64,
    n: usize,
    step: f64,
    order: usize,
    out: *mut f64,
) -> TqStatus {
    guard(|| {
        let series = unsafe { slice(series, n, "series")? };
        let d = finite_difference(series, step, order)?;
        unsafe { copy_out(&d.values, out, n) }
    })
}

/// Largest `|derivative|` of `series` over grid points within `[lo, hi]`,
/// where the grid is `start + i * step`.
///
/// # Safety
/// `series` must be valid for `n` reads and `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn tq_locate_extremum(
    series: *const f64,
    n: usize,
    start: f64,
    step: f64,
    order: usize,
    lo: f64,
    hi: f64,
    out: *mut TqExtremum,
) -> TqStatus {
    guard(|| {
        let series = unsafe { slice(series, n, "series")? };
        let d = finite_difference(series, step, order)?;
        let grid: Vec<f64> = (0..n).map(|i| start + i as f64 * step).collect();
        let e = locate_extremum(&d, &grid, (lo, hi), Observable::Dmin, f64::NAN)?;
        let e = TqExtremum {
            location: e.location,
            uncertainty: e.uncertainty,
            derivative: e.derivative_value,
            at_edge: e.at_edge as i32,
        };
        unsafe { write(out, e, "out") }
    })
}

/// Least-squares fit of extremum locations against temperature, evaluated
/// at zero temperature. Points with `kt <= 0` are ignored.
///
/// # Safety
/// `kts` and `locations` must be valid for `n` reads; output pointers for
/// writes (`residual` may be null).
#[no_mangle]
pub unsafe extern "C" fn tq_extrapolate(
    kts: *const f64,
    locations: *const f64,
    n: usize,
    fit: TqFit,
    location: *mut f64,
    residual: *mut f64,
) -> TqStatus {
    guard(|| {
        let kts = unsafe { slice(kts, n, "kts")? };
        let locs = unsafe { slice(locations, n, "locations")? };
        let points: Vec<(f64, f64)> = kts.iter().copied().zip(locs.iter().copied()).collect();
        let kind = match fit {
            TqFit::Linear => FitKind::Linear,
            TqFit::Quadratic => FitKind::Quadratic,
        };
        let e = extrapolate_qcp(&points, kind)?;
        unsafe {
            write(location, e.extrapolated_location, "location")?;
            if !residual.is_null() {
                residual.write(e.residual);
            }
        }
        Ok(())
    })
}

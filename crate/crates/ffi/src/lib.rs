//! C ABI over `lozi-lab`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! call returns a [`LoziStatus`]; on failure the message is kept per thread
//! and read back with [`lozi_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lozi_lab::budget::Budget;
use lozi_lab::classify::{classify_parameters, ClassifyBudgets, Regime, RegionVerdict};
use lozi_lab::error::LabError;
use lozi_lab::export::{output_precision, to_xy};
use lozi_lab::geom::{GeomError, Point};
use lozi_lab::manifold::{unstable_manifold_with_budget, Branch, UnstableManifold};
use lozi_lab::map::{NumericMode, Params};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoziStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidParameters = 3,
    Precondition = 4,
    Degenerate = 5,
    BudgetExhausted = 6,
    DepthInsufficient = 7,
    Inconsistency = 8,
    NotSimple = 9,
    Numeric = 10,
    Geometry = 11,
    Config = 12,
    Io = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoziRegime {
    RCandidate = 0,
    FrakRMinusRCandidate = 1,
    FiniteCrossings = 2,
    PositiveEntropySignal = 3,
    OutOfScope = 4,
    Unknown = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoziBranch {
    UPlus = 0,
    UMinus = 1,
}

/// Map parameters `(a, b)` and arithmetic mode.
pub struct LoziParams(Params);

/// Computed unstable manifold of the fixed point `X`.
pub struct LoziManifold {
    m: UnstableManifold,
    precision: u32,
}

/// Classification of one parameter pair.
pub struct LoziVerdict(RegionVerdict);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &LabError) -> LoziStatus {
    match e {
        LabError::Numeric(_) => LoziStatus::Numeric,
        LabError::Geom(GeomError::NotSimple(..)) => LoziStatus::NotSimple,
        LabError::Geom(_) => LoziStatus::Geometry,
        LabError::InvalidParameters(_) => LoziStatus::InvalidParameters,
        LabError::Precondition(_) => LoziStatus::Precondition,
        LabError::Degenerate(_) => LoziStatus::Degenerate,
        LabError::BudgetExhausted { .. } => LoziStatus::BudgetExhausted,
        LabError::DepthInsufficient { .. } => LoziStatus::DepthInsufficient,
        LabError::Inconsistency(_) => LoziStatus::Inconsistency,
        LabError::Config(_) => LoziStatus::Config,
        LabError::Io(_) => LoziStatus::Io,
    }
}

fn fail(status: LoziStatus, msg: impl Into<String>) -> LoziStatus {
    set_error(msg.into());
    status
}

impl From<LabError> for LoziStatus {
    fn from(e: LabError) -> Self {
        fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), LoziStatus>) -> LoziStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LoziStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(LoziStatus::Panic, "panic inside lozi-lab"),
    }
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, LoziStatus> {
    p.as_ref().ok_or_else(|| fail(LoziStatus::NullArgument, "null pointer argument"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, LoziStatus> {
    p.as_mut().ok_or_else(|| fail(LoziStatus::NullArgument, "null output pointer"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, LoziStatus> {
    if p.is_null() {
        return Err(fail(LoziStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(LoziStatus::InvalidUtf8, "string is not UTF-8"))
}

/// Copies `s` plus a NUL into `buf`; `needed` receives the full size.
unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), LoziStatus> {
    if let Some(n) = needed.as_mut() {
        *n = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        return Err(fail(LoziStatus::BufferTooSmall, format!("buffer needs {} bytes", s.len() + 1)));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr() as *const c_char, buf, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn point_out(p: &Point, precision: u32, xy: &mut [f64]) -> Result<(), LoziStatus> {
    let (x, y) = to_xy(p, precision)?;
    xy[0] = x;
    xy[1] = y;
    Ok(())
}

/// Message of the last failed call on this thread, or NULL.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lozi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Static NUL-terminated name of a regime.
#[no_mangle]
pub extern "C" fn lozi_regime_name(r: LoziRegime) -> *const c_char {
    let s: &'static CStr = match r {
        LoziRegime::RCandidate => c"RCandidate",
        LoziRegime::FrakRMinusRCandidate => c"FrakRMinusRCandidate",
        LoziRegime::FiniteCrossings => c"FiniteCrossings",
        LoziRegime::PositiveEntropySignal => c"PositiveEntropySignal",
        LoziRegime::OutOfScope => c"OutOfScope",
        LoziRegime::Unknown => c"Unknown",
    };
    s.as_ptr()
}

/// Parses decimal or fraction text for `a` and `b`. `exact` selects exact
/// arithmetic; otherwise `precision_bits` (at least 53) is used.
///
/// # Safety
/// `a` and `b` are NUL-terminated strings, `out_params` is writable.
#[no_mangle]
pub unsafe extern "C" fn lozi_params_new(a: *const c_char, b: *const c_char, exact: bool, precision_bits: u32, out_params: *mut *mut LoziParams) -> LoziStatus {
    guard(|| {
        let slot = out(out_params)?;
        *slot = std::ptr::null_mut();
        let mode = if exact { NumericMode::Exact } else { NumericMode::Float { precision_bits } };
        let p = Params::from_text(text(a)?, text(b)?, mode)?;
        *slot = Box::into_raw(Box::new(LoziParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` is NULL or came from `lozi_params_new` and was not freed.
#[no_mangle]
pub unsafe extern "C" fn lozi_params_free(p: *mut LoziParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Whether `(a, b)` is in the standard region where the manifold tools apply.
///
/// # Safety
/// `p` is a live handle, `standard` is writable.
#[no_mangle]
pub unsafe extern "C" fn lozi_params_is_standard(p: *const LoziParams, standard: *mut bool) -> LoziStatus {
    guard(|| {
        *out(standard)? = as_ref(p)?.0.flags().standard();
        Ok(())
    })
}

/// Fixed point `X` as `xy[0..2]`.
///
/// # Safety
/// `p` is a live handle, `xy` has room for 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn lozi_params_fixed_point(p: *const LoziParams, xy: *mut f64) -> LoziStatus {
    guard(|| {
        let p = &as_ref(p)?.0;
        out(xy)?;
        let x = p.fixed_point_x()?;
        point_out(&x, output_precision(p), std::slice::from_raw_parts_mut(xy, 2))
    })
}

/// Period-two orbit `P`, `P′` as `xy[0..4]`.
///
/// # Safety
/// `p` is a live handle, `xy` has room for 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn lozi_params_period_two(p: *const LoziParams, xy: *mut f64) -> LoziStatus {
    guard(|| {
        let p = &as_ref(p)?.0;
        out(xy)?;
        let (a, b) = p.period_two_orbit()?;
        let buf = std::slice::from_raw_parts_mut(xy, 4);
        let pr = output_precision(p);
        point_out(&a, pr, &mut buf[0..2])?;
        point_out(&b, pr, &mut buf[2..4])
    })
}

/// Unstable manifold of `X` to `depth` arcs per branch. `max_vertices` of 0
/// keeps the default budget.
///
/// # Safety
/// `p` is a live handle, `out_manifold` is writable.
#[no_mangle]
pub unsafe extern "C" fn lozi_unstable_manifold_new(p: *const LoziParams, depth: usize, max_vertices: usize, out_manifold: *mut *mut LoziManifold) -> LoziStatus {
    guard(|| {
        let slot = out(out_manifold)?;
        *slot = std::ptr::null_mut();
        let p = &as_ref(p)?.0;
        let mut budget = Budget::default();
        if max_vertices > 0 {
            budget.max_vertices = max_vertices;
        }
        let m = unstable_manifold_with_budget(p, depth, &budget, true)?;
        *slot = Box::into_raw(Box::new(LoziManifold { m, precision: output_precision(p) }));
        Ok(())
    })
}

/// # Safety
/// `m` is NULL or a live manifold handle.
#[no_mangle]
pub unsafe extern "C" fn lozi_manifold_free(m: *mut LoziManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

fn branch(b: LoziBranch) -> Branch {
    match b {
        LoziBranch::UPlus => Branch::UPlus,
        LoziBranch::UMinus => Branch::UMinus,
    }
}

/// Number of vertices on one branch, starting at `X`.
///
/// # Safety
/// `m` is a live handle, `count` is writable.
#[no_mangle]
pub unsafe extern "C" fn lozi_manifold_vertex_count(m: *const LoziManifold, b: LoziBranch, count: *mut usize) -> LoziStatus {
    guard(|| {
        *out(count)? = as_ref(m)?.m.branch_chain(branch(b)).vertices.len();
        Ok(())
    })
}

/// Writes the branch vertices as interleaved `x, y` doubles. `capacity` is
/// in points; `written` receives the number of points.
///
/// # Safety
/// `m` is a live handle, `xy` has room for `2 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn lozi_manifold_vertices(m: *const LoziManifold, b: LoziBranch, xy: *mut f64, capacity: usize, written: *mut usize) -> LoziStatus {
    guard(|| {
        let lm = as_ref(m)?;
        let chain = lm.m.branch_chain(branch(b));
        let n = chain.vertices.len();
        if let Some(w) = written.as_mut() {
            *w = 0;
        }
        if capacity < n {
            return Err(fail(LoziStatus::BufferTooSmall, format!("branch has {n} vertices")));
        }
        out(xy)?;
        let buf = std::slice::from_raw_parts_mut(xy, 2 * n);
        for (i, v) in chain.vertices.iter().enumerate() {
            point_out(v, lm.precision, &mut buf[2 * i..2 * i + 2])?;
        }
        if let Some(w) = written.as_mut() {
            *w = n;
        }
        Ok(())
    })
}

/// Runs the classifier with default budgets.
///
/// # Safety
/// `p` is a live handle, `out_verdict` is writable.
#[no_mangle]
pub unsafe extern "C" fn lozi_classify(p: *const LoziParams, out_verdict: *mut *mut LoziVerdict) -> LoziStatus {
    guard(|| {
        let slot = out(out_verdict)?;
        *slot = std::ptr::null_mut();
        let v = classify_parameters(&as_ref(p)?.0, &ClassifyBudgets::default());
        *slot = Box::into_raw(Box::new(LoziVerdict(v)));
        Ok(())
    })
}

/// # Safety
/// `v` is NULL or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn lozi_verdict_free(v: *mut LoziVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` is a live handle, `regime` is writable.
#[no_mangle]
pub unsafe extern "C" fn lozi_verdict_regime(v: *const LoziVerdict, regime: *mut LoziRegime) -> LoziStatus {
    guard(|| {
        *out(regime)? = match as_ref(v)?.0.regime {
            Regime::RCandidate => LoziRegime::RCandidate,
            Regime::FrakRMinusRCandidate => LoziRegime::FrakRMinusRCandidate,
            Regime::FiniteCrossings => LoziRegime::FiniteCrossings,
            Regime::PositiveEntropySignal => LoziRegime::PositiveEntropySignal,
            Regime::OutOfScope => LoziRegime::OutOfScope,
            Regime::Unknown => LoziRegime::Unknown,
        };
        Ok(())
    })
}

/// Full verdict as JSON. Call with `buf = NULL` to learn the size through
/// `needed` (which includes the NUL).
///
/// # Safety
/// `v` is a live handle; `buf` is NULL or has room for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn lozi_verdict_json(v: *const LoziVerdict, buf: *mut c_char, len: usize, needed: *mut usize) -> LoziStatus {
    guard(|| {
        let s = serde_json::to_string(&as_ref(v)?.0).map_err(|e| fail(LoziStatus::Io, e.to_string()))?;
        copy_out(&s, buf, len, needed)
    })
}

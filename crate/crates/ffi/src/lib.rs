//! C ABI over the `intsep` solvers.
//!
//! Instances and solutions are opaque heap handles released with their
//! `*_free` function. Every fallible call returns an [`IntsepStatus`]; on
//! failure [`intsep_last_error`] describes the problem for the calling
//! thread. Strings returned to the caller are released with
//! [`intsep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use intsep::fast::solve_fast;
use intsep::format::{parse_instance, render_solution};
use intsep::model::{to_two_direction, Instance, Solution};
use intsep::oracle::{brute_force, OracleError};
use intsep::prelim::solve_preliminary;
use intsep::Scalar;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntsepStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInstance = 4,
    InvalidArgument = 5,
    TooLarge = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// Intervals may only move right.
pub const INTSEP_MODE_ONE: u32 = 0;
/// Intervals may move either way.
pub const INTSEP_MODE_TWO: u32 = 1;

pub const INTSEP_ALGO_FAST: u32 = 0;
pub const INTSEP_ALGO_PRELIM: u32 = 1;
/// Exhaustive search; at most 10 intervals.
pub const INTSEP_ALGO_BRUTE: u32 = 2;

/// Opaque validated instance.
pub struct IntsepInstance {
    inner: Instance,
}

/// Opaque solution together with the instance it solves.
pub struct IntsepSolution {
    inst: Instance,
    sol: Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: IntsepStatus, msg: impl Into<String>) -> IntsepStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> IntsepStatus) -> IntsepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(IntsepStatus::Internal, "internal error"),
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn intsep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance from the text format (`left right` per line).
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn intsep_instance_parse(
    text: *const c_char,
    out: *mut *mut IntsepInstance,
) -> IntsepStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(IntsepStatus::NullArgument, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(IntsepStatus::InvalidUtf8, "input is not valid UTF-8");
        };
        match parse_instance(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IntsepInstance { inner }));
                IntsepStatus::Ok
            }
            Err(e) => fail(IntsepStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds an instance from `n` integer endpoint pairs.
///
/// # Safety
/// `lefts` and `rights` must point to `n` readable values each; `out` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn intsep_instance_from_arrays(
    lefts: *const i64,
    rights: *const i64,
    n: usize,
    out: *mut *mut IntsepInstance,
) -> IntsepStatus {
    guard(|| {
        if out.is_null() || (n > 0 && (lefts.is_null() || rights.is_null())) {
            return fail(IntsepStatus::NullArgument, "null argument");
        }
        let pairs: Vec<(i64, i64)> = if n == 0 {
            Vec::new()
        } else {
            let l = std::slice::from_raw_parts(lefts, n);
            let r = std::slice::from_raw_parts(rights, n);
            l.iter().copied().zip(r.iter().copied()).collect()
        };
        match Instance::from_pairs(pairs) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IntsepInstance { inner }));
                IntsepStatus::Ok
            }
            Err(e) => fail(IntsepStatus::InvalidInstance, e.to_string()),
        }
    })
}

/// Number of intervals, or 0 for null.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn intsep_instance_len(inst: *const IntsepInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.len())
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn intsep_instance_free(inst: *mut IntsepInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Solves `inst` with one of the `INTSEP_ALGO_*` solvers in one of the
/// `INTSEP_MODE_*` modes.
///
/// # Safety
/// `inst` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn intsep_solve(
    inst: *const IntsepInstance,
    mode: u32,
    algo: u32,
    out: *mut *mut IntsepSolution,
) -> IntsepStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(IntsepStatus::NullArgument, "null argument");
        };
        if mode > INTSEP_MODE_TWO {
            return fail(
                IntsepStatus::InvalidArgument,
                format!("unknown mode {mode}"),
            );
        }
        let inst = &inst.inner;
        let one = match algo {
            INTSEP_ALGO_FAST => match solve_fast(inst).reconstruct(inst) {
                Ok(s) => s,
                Err(e) => return fail(IntsepStatus::Internal, e.to_string()),
            },
            INTSEP_ALGO_PRELIM => solve_preliminary(inst),
            INTSEP_ALGO_BRUTE => match brute_force(inst) {
                Ok(s) => s,
                Err(e @ OracleError::TooLarge { .. }) => {
                    return fail(IntsepStatus::TooLarge, e.to_string())
                }
                Err(e) => return fail(IntsepStatus::InvalidArgument, e.to_string()),
            },
            other => {
                return fail(
                    IntsepStatus::InvalidArgument,
                    format!("unknown algorithm {other}"),
                )
            }
        };
        let sol = if mode == INTSEP_MODE_TWO {
            to_two_direction(&one)
        } else {
            one
        };
        *out = Box::into_raw(Box::new(IntsepSolution {
            inst: inst.clone(),
            sol,
        }));
        IntsepStatus::Ok
    })
}

/// Optimal max-displacement as an exact decimal or `p/q` string; null on a
/// null handle. Release with [`intsep_string_free`].
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn intsep_solution_delta(sol: *const IntsepSolution) -> *mut c_char {
    sol.as_ref()
        .map_or(ptr::null_mut(), |s| into_c_string(s.sol.delta.to_string()))
}

/// Optimal max-displacement rounded to the nearest double; NaN on null.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn intsep_solution_delta_f64(sol: *const IntsepSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.sol.delta.to_f64())
}

/// Writes the left-to-right order as 0-based input positions into `buf`.
///
/// # Safety
/// `sol` must be null or a live handle; `buf` must have room for `cap`
/// values.
#[no_mangle]
pub unsafe extern "C" fn intsep_solution_order(
    sol: *const IntsepSolution,
    buf: *mut usize,
    cap: usize,
) -> IntsepStatus {
    guard(|| {
        let (Some(s), false) = (sol.as_ref(), buf.is_null()) else {
            return fail(IntsepStatus::NullArgument, "null argument");
        };
        let n = s.sol.order.len();
        if cap < n {
            return fail(
                IntsepStatus::BufferTooSmall,
                format!("need room for {n} values"),
            );
        }
        let dst = std::slice::from_raw_parts_mut(buf, n);
        for (d, &rank) in dst.iter_mut().zip(&s.sol.order) {
            *d = s.inst[rank].id();
        }
        IntsepStatus::Ok
    })
}

/// New left endpoint of the interval at 0-based input position `id`,
/// rendered exactly. Null for a null handle or an out-of-range id.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn intsep_solution_position(
    sol: *const IntsepSolution,
    id: usize,
) -> *mut c_char {
    let Some(s) = sol.as_ref() else {
        return ptr::null_mut();
    };
    if id >= s.inst.len() {
        return ptr::null_mut();
    }
    let pos: &Scalar = s
        .sol
        .config
        .position(s.inst.rank_of_id(id))
        .expect("solutions place every interval");
    into_c_string(pos.to_string())
}

/// The solution in the text solution format. Release with
/// [`intsep_string_free`].
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn intsep_solution_render(sol: *const IntsepSolution) -> *mut c_char {
    sol.as_ref().map_or(ptr::null_mut(), |s| {
        into_c_string(render_solution(&s.inst, &s.sol))
    })
}

/// # Safety
/// `sol` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn intsep_solution_free(sol: *mut IntsepSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn intsep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

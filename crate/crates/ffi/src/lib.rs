//! C ABI for `ecdensity`.
//!
//! Results are returned through out-parameters; every function returns an [`EcStatus`].
//! Values that own memory are opaque handles released by their `_free` function. Strings
//! returned to the caller are released with [`ec_string_free`]. After a failed call,
//! [`ec_last_error`] describes the failure on the calling thread.

use ecdensity::decision::{Decider, Stratum, Target, TriState};
use ecdensity::elliptic::{ResidueMedium, ResidueShort};
use ecdensity::estimator::{exhaustive_density, monte_carlo_density, ratio_string, to_f64, DensityEstimate, RunOptions};
use ecdensity::formulas::{density_iso, density_tors, ExactDensity};
use ecdensity::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PrimeTwoUnsupported = 3,
    NotPrime = 4,
    Precision = 5,
    BudgetExceeded = 6,
    Unsupported = 7,
    Internal = 8,
}

/// Tri-state answer of a decision.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EcAnswer {
    No = 0,
    Yes = 1,
    Undecided = 2,
}

pub const EC_PREDICATE_TORSION3: u32 = 0;
pub const EC_PREDICATE_ISOGENY3: u32 = 1;
/// Torsion of the prime order passed as `ell`.
pub const EC_PREDICATE_ELL_TORSION: u32 = 2;
pub const EC_PREDICATE_P_TORSION: u32 = 3;
pub const EC_PREDICATE_ALWAYS: u32 = 4;

/// Pass as `stratum` to estimate over all models.
pub const EC_STRATUM_ALL: i32 = -1;
pub const EC_STRATUM_GOOD: i32 = 0;
pub const EC_STRATUM_SPLIT_MULT: i32 = 1;
pub const EC_STRATUM_NONSPLIT_MULT: i32 = 2;
pub const EC_STRATUM_ADDITIVE: i32 = 3;
pub const EC_STRATUM_UNRESOLVED: i32 = 4;

/// An exact rational number.
pub struct EcRational(ExactDensity);

/// A density estimate with its tallies.
pub struct EcEstimate(DensityEstimate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EcStatus {
    match e {
        Error::PrimeTwoUnsupported => EcStatus::PrimeTwoUnsupported,
        Error::NotPrime(_) => EcStatus::NotPrime,
        Error::Precision { .. } => EcStatus::Precision,
        Error::BudgetExceeded(_) => EcStatus::BudgetExceeded,
        Error::Unsupported(_) => EcStatus::Unsupported,
        _ => EcStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), EcStatus>) -> EcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal error".into());
            EcStatus::Internal
        }
    }
}

fn lib<T>(r: ecdensity::Result<T>) -> Result<T, EcStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn invalid(msg: &str) -> EcStatus {
    set_error(msg.to_string());
    EcStatus::InvalidArgument
}

fn out_ptr<T>(out: *mut T) -> Result<(), EcStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        Err(EcStatus::NullPointer)
    } else {
        Ok(())
    }
}

fn target_of(predicate: u32, ell: u64) -> Result<Target, EcStatus> {
    Ok(match predicate {
        EC_PREDICATE_TORSION3 => Target::Torsion3,
        EC_PREDICATE_ISOGENY3 => Target::Isogeny3,
        EC_PREDICATE_ELL_TORSION => Target::EllTorsion(ell),
        EC_PREDICATE_P_TORSION => Target::PTorsion,
        EC_PREDICATE_ALWAYS => Target::Always,
        _ => return Err(invalid("unknown predicate")),
    })
}

fn stratum_of(s: i32) -> Result<Option<Stratum>, EcStatus> {
    Ok(match s {
        EC_STRATUM_ALL => None,
        EC_STRATUM_GOOD => Some(Stratum::Good),
        EC_STRATUM_SPLIT_MULT => Some(Stratum::SplitMult),
        EC_STRATUM_NONSPLIT_MULT => Some(Stratum::NonsplitMult),
        EC_STRATUM_ADDITIVE => Some(Stratum::Additive),
        EC_STRATUM_UNRESOLVED => Some(Stratum::Unresolved),
        _ => return Err(invalid("unknown stratum")),
    })
}

fn answer_of(t: TriState) -> EcAnswer {
    match t {
        TriState::Yes => EcAnswer::Yes,
        TriState::No => EcAnswer::No,
        TriState::Undecided(_) => EcAnswer::Undecided,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn ec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Free with `ec_string_free`.
#[no_mangle]
pub extern "C" fn ec_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by `ec_last_error`, `ec_rational_to_string` or
/// `ec_estimate_to_json`, not already freed.
#[no_mangle]
pub unsafe extern "C" fn ec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn density_into(out: *mut *mut EcRational, f: impl FnOnce() -> ecdensity::Result<ExactDensity>) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let value = lib(f())?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = Box::into_raw(Box::new(EcRational(value))) };
        Ok(())
    })
}

/// Density of curves over `Z_p` with a nontrivial `Q_p`-rational 3-torsion point.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ec_density_tors(p: u64, out: *mut *mut EcRational) -> EcStatus {
    density_into(out, || density_tors(p))
}

/// Density of curves over `Z_p` with a `Q_p`-rational 3-isogeny (`p >= 5`).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ec_density_iso(p: u64, out: *mut *mut EcRational) -> EcStatus {
    density_into(out, || density_iso(p))
}

/// Writes the value as `"num/den"`. Free the string with `ec_string_free`.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ec_rational_to_string(r: *const EcRational, out: *mut *mut c_char) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let r = r.as_ref().ok_or_else(|| invalid("null rational"))?;
        *out = into_c_string(ratio_string(&r.0));
        Ok(())
    })
}

/// Nearest double to the value.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ec_rational_to_double(r: *const EcRational, out: *mut f64) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let r = r.as_ref().ok_or_else(|| invalid("null rational"))?;
        *out = to_f64(&r.0);
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not already freed.
#[no_mangle]
pub unsafe extern "C" fn ec_rational_free(r: *mut EcRational) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Decides a predicate for `y^2 = x^3 + a x + b` given modulo `p^k`. At `p = 3` the model is
/// treated as `y^2 = x^3 + a x + b` with zero `x^2` term.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ec_decide_short(
    p: u64,
    a: i64,
    b: i64,
    k: u32,
    predicate: u32,
    ell: u64,
    out: *mut EcAnswer,
) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let target = target_of(predicate, ell)?;
        let decider = lib(Decider::new(target, p))?;
        let model = lib(ResidueShort::new(a as i128, b as i128, p, k))?;
        *out = answer_of(lib(decider.decide_short(model))?.answer);
        Ok(())
    })
}

/// Decides a predicate for `y^2 = x^3 + a2 x^2 + a4 x + a6` given modulo `3^k`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ec_decide_medium_p3(
    a2: i64,
    a4: i64,
    a6: i64,
    k: u32,
    predicate: u32,
    ell: u64,
    out: *mut EcAnswer,
) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let target = target_of(predicate, ell)?;
        let decider = lib(Decider::new(target, 3))?;
        let model = lib(ResidueMedium::new(a2 as i128, a4 as i128, a6 as i128, 3, k))?;
        *out = answer_of(lib(decider.decide_medium(model))?.answer);
        Ok(())
    })
}

fn estimate_into(out: *mut *mut EcEstimate, f: impl FnOnce() -> Result<DensityEstimate, EcStatus>) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let e = f()?;
        // SAFETY: checked non-null; the caller guarantees it is writable.
        unsafe { *out = Box::into_raw(Box::new(EcEstimate(e))) };
        Ok(())
    })
}

/// Applies a predicate to every model modulo `p^k`. `jobs = 0` uses all cores.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ec_estimate_exhaustive(
    p: u64,
    k: u32,
    predicate: u32,
    ell: u64,
    stratum: i32,
    budget: u64,
    jobs: u32,
    out: *mut *mut EcEstimate,
) -> EcStatus {
    estimate_into(out, || {
        let target = target_of(predicate, ell)?;
        let opts = RunOptions { budget, jobs: jobs as usize };
        lib(exhaustive_density(p, k, target, stratum_of(stratum)?, opts))
    })
}

/// Applies a predicate to `samples` seeded random models modulo `p^k`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ec_estimate_monte_carlo(
    p: u64,
    k: u32,
    samples: u64,
    seed: u64,
    predicate: u32,
    ell: u64,
    stratum: i32,
    jobs: u32,
    out: *mut *mut EcEstimate,
) -> EcStatus {
    estimate_into(out, || {
        let target = target_of(predicate, ell)?;
        let opts = RunOptions { jobs: jobs as usize, ..RunOptions::default() };
        lib(monte_carlo_density(p, k, samples, seed, target, stratum_of(stratum)?, opts))
    })
}

/// Yes, no and undecided counts of the estimate.
///
/// # Safety
/// `e` must be a live handle; each output pointer must be valid and writable.
#[no_mangle]
pub unsafe extern "C" fn ec_estimate_counts(
    e: *const EcEstimate,
    yes: *mut u64,
    no: *mut u64,
    undecided: *mut u64,
) -> EcStatus {
    guard(|| {
        out_ptr(yes)?;
        out_ptr(no)?;
        out_ptr(undecided)?;
        let e = e.as_ref().ok_or_else(|| invalid("null estimate"))?;
        *yes = e.0.tally.yes;
        *no = e.0.tally.no;
        *undecided = e.0.tally.undecided;
        Ok(())
    })
}

/// Lower and upper ends of the interval claimed to contain the density. For Monte-Carlo
/// estimates this is the widened confidence interval.
///
/// # Safety
/// `e` must be a live handle; `lower` and `upper` must be valid pointers to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ec_estimate_bracket(
    e: *const EcEstimate,
    lower: *mut *mut EcRational,
    upper: *mut *mut EcRational,
) -> EcStatus {
    guard(|| {
        out_ptr(lower)?;
        out_ptr(upper)?;
        let e = e.as_ref().ok_or_else(|| invalid("null estimate"))?;
        let (lo, hi) = e.0.bracket();
        *lower = Box::into_raw(Box::new(EcRational(lo.clone())));
        *upper = Box::into_raw(Box::new(EcRational(hi.clone())));
        Ok(())
    })
}

/// The estimate as a JSON object. Free the string with `ec_string_free`.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ec_estimate_to_json(e: *const EcEstimate, out: *mut *mut c_char) -> EcStatus {
    guard(|| {
        out_ptr(out)?;
        let e = e.as_ref().ok_or_else(|| invalid("null estimate"))?;
        *out = into_c_string(e.0.to_json().to_string());
        Ok(())
    })
}

/// # Safety
/// `e` must be null or a handle from this library, not already freed.
#[no_mangle]
pub unsafe extern "C" fn ec_estimate_free(e: *mut EcEstimate) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

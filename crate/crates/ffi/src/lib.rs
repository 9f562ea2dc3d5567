//! C ABI for `kodaira-kit`.
//!
//! Objects cross the boundary as opaque handles created by `kk_*_new` or
//! `kk_*_from_json` and released by the matching `kk_*_free`. Every call
//! returns a [`KkStatus`]; on failure the message is available from
//! [`kk_last_error`] on the same thread. Strings returned by the library are
//! owned by the caller and released with [`kk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kodaira_kit::chern::riero_report;
use kodaira_kit::curves::{blow_down, blow_up, property_p, CurveConfiguration, ReducedDivisor};
use kodaira_kit::deformation::{classify, h1_minus_h2};
use kodaira_kit::discriminant::{verify_inductive, BlowDownChain};
use kodaira_kit::kodaira::{census, fiber, FiberType};
use kodaira_kit::surface::{make_surface, BundleInvariants, SurfaceModel};

/// Result of every exported call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// Input parsed but violates a mathematical precondition.
    DomainError = 4,
    Panic = 5,
}

/// Compact complex surface invariants.
pub struct KkSurface {
    inner: SurfaceModel,
}

/// Rank and Chern numbers of a vector bundle.
pub struct KkBundle {
    inner: BundleInvariants,
}

/// Configuration of curves with marked points.
pub struct KkConfig {
    inner: CurveConfiguration,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

struct Failure(KkStatus, String);

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure(KkStatus::DomainError, e.to_string())
}

fn parse(e: impl std::fmt::Display) -> Failure {
    Failure(KkStatus::ParseError, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    let (status, message) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return KkStatus::Ok,
        Ok(Err(Failure(status, message))) => (status, message),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            (KkStatus::Panic, msg)
        }
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
    status
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(KkStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(KkStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(KkStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(KkStatus::NullPointer, format!("{name} is null")));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(domain)?;
    write_out(out, owned_string(text), "out_json")
}

/// Message of the last failed call on this thread, or null. The caller owns
/// the returned string.
#[no_mangle]
pub extern "C" fn kk_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), owned_string))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Schema tag of the JSON documents produced and accepted. Static; do not
/// free.
#[no_mangle]
pub extern "C" fn kk_schema() -> *const c_char {
    c"kodaira-kit/1".as_ptr()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kk_surface_new(
    k_squared: i64,
    c2: i64,
    picard_rank: i64,
    alg_dim: i64,
    kodaira_dim: i64,
    minimal: bool,
    kaehler: bool,
    out: *mut *mut KkSurface,
) -> KkStatus {
    guard(|| {
        let inner = make_surface(k_squared, c2, picard_rank, alg_dim, kodaira_dim, minimal, kaehler).map_err(domain)?;
        write_out(out, Box::into_raw(Box::new(KkSurface { inner })), "out")
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kk_surface_from_json(json: *const c_char, out: *mut *mut KkSurface) -> KkStatus {
    guard(|| {
        let inner: SurfaceModel = serde_json::from_str(str_arg(json, "json")?).map_err(parse)?;
        write_out(out, Box::into_raw(Box::new(KkSurface { inner })), "out")
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kk_surface_free(s: *mut KkSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Holomorphic Euler characteristic `(K^2 + c2) / 12`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_surface_chi_o(s: *const KkSurface, out: *mut i64) -> KkStatus {
    guard(|| write_out(out, ref_arg(s, "surface")?.inner.chi_o(), "out"))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kk_bundle_new(rank: i64, c1_sq: i64, c1_dot_k: i64, c2: i64, out: *mut *mut KkBundle) -> KkStatus {
    guard(|| {
        let inner = BundleInvariants::new(rank, c1_sq, c1_dot_k, c2).map_err(domain)?;
        write_out(out, Box::into_raw(Box::new(KkBundle { inner })), "out")
    })
}

/// # Safety
/// `b` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kk_bundle_free(b: *mut KkBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kk_config_from_json(json: *const c_char, out: *mut *mut KkConfig) -> KkStatus {
    guard(|| {
        let inner: CurveConfiguration = serde_json::from_str(str_arg(json, "json")?).map_err(parse)?;
        if let Some(v) = inner.validate().first() {
            return Err(domain(serde_json::to_string(v).map_err(domain)?));
        }
        write_out(out, Box::into_raw(Box::new(KkConfig { inner })), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_config_to_json(c: *const KkConfig, out_json: *mut *mut c_char) -> KkStatus {
    guard(|| write_json(out_json, &ref_arg(c, "config")?.inner))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_config_len(c: *const KkConfig, out: *mut usize) -> KkStatus {
    guard(|| write_out(out, ref_arg(c, "config")?.inner.len(), "out"))
}

/// # Safety
/// `c` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kk_config_free(c: *mut KkConfig) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Property (P) for the divisor given as comma-separated curve ids, or for
/// the sum of all curves when `divisor` is null. `out_json` may be null.
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_check_p(
    c: *const KkConfig,
    divisor: *const c_char,
    out_holds: *mut bool,
    out_json: *mut *mut c_char,
) -> KkStatus {
    guard(|| {
        let cfg = &ref_arg(c, "config")?.inner;
        let d = if divisor.is_null() {
            cfg.full_divisor()
        } else {
            ReducedDivisor::new(str_arg(divisor, "divisor")?.split(',').map(str::trim).filter(|s| !s.is_empty()))
        };
        let p = property_p(cfg, &d).map_err(domain)?;
        write_out(out_holds, p.holds, "out_holds")?;
        if !out_json.is_null() {
            write_json(out_json, &p)?;
        }
        Ok(())
    })
}

/// Blows up a marked point. `out_exceptional` may be null.
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_blow_up(
    c: *const KkConfig,
    point: *const c_char,
    out: *mut *mut KkConfig,
    out_exceptional: *mut *mut c_char,
) -> KkStatus {
    guard(|| {
        let b = blow_up(&ref_arg(c, "config")?.inner, str_arg(point, "point")?).map_err(domain)?;
        if !out_exceptional.is_null() {
            out_exceptional.write(owned_string(b.exceptional.clone()));
        }
        write_out(out, Box::into_raw(Box::new(KkConfig { inner: b.config })), "out")
    })
}

/// Contracts a (-1)-curve.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_blow_down(c: *const KkConfig, curve: *const c_char, out: *mut *mut KkConfig) -> KkStatus {
    guard(|| {
        let b = blow_down(&ref_arg(c, "config")?.inner, str_arg(curve, "curve")?).map_err(domain)?;
        write_out(out, Box::into_raw(Box::new(KkConfig { inner: b.config })), "out")
    })
}

/// Catalog entry of a Kodaira fiber (`"I5"`, `"2I3"`, `"I0*"`, `"IV*"`, ...)
/// as JSON, with its property-(P) census when `with_census` is set.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_fiber_json(fiber_type: *const c_char, with_census: bool, out_json: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let t: FiberType = str_arg(fiber_type, "fiber_type")?.parse().map_err(parse)?;
        let rec = fiber(t).map_err(domain)?;
        let mut v = serde_json::to_value(&rec).map_err(domain)?;
        if with_census {
            v["census"] = serde_json::to_value(census(&rec).map_err(domain)?).map_err(domain)?;
        }
        write_json(out_json, &v)
    })
}

/// Runs the blow-down induction on a chain document. A failed verification
/// is reported as `KK_STATUS_DOMAIN_ERROR` with the reason in
/// [`kk_last_error`].
///
/// # Safety
/// Non-null pointers must be valid; `out_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn kk_discriminant(
    chain_json: *const c_char,
    out_verdict: *mut bool,
    out_json: *mut *mut c_char,
) -> KkStatus {
    guard(|| {
        let chain: BlowDownChain = serde_json::from_str(str_arg(chain_json, "chain_json")?).map_err(parse)?;
        let cert = verify_inductive(&chain).map_err(domain)?;
        write_out(out_verdict, cert.verdict, "out_verdict")?;
        if !out_json.is_null() {
            write_json(out_json, &cert)?;
        }
        Ok(())
    })
}

/// Recomputes `chi(T_X)` symbolically; `out_holds` is set when it matches
/// the closed form exactly. `out_json` may be null.
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_verify_riero(out_holds: *mut bool, out_json: *mut *mut c_char) -> KkStatus {
    guard(|| {
        let r = riero_report().map_err(domain)?;
        write_out(out_holds, r.holds(), "out_holds")?;
        if !out_json.is_null() {
            write_json(out_json, &r)?;
        }
        Ok(())
    })
}

/// `h^1(T_X) - h^2(T_X)` for a given `h^0(T_X)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_h1_minus_h2(s: *const KkSurface, e: *const KkBundle, h0: u64, out: *mut i64) -> KkStatus {
    guard(|| {
        let v = h1_minus_h2(&ref_arg(s, "surface")?.inner, &ref_arg(e, "bundle")?.inner, h0).map_err(domain)?;
        write_out(out, v, "out")
    })
}

/// Full deformation report as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kk_classify(
    s: *const KkSurface,
    e: *const KkBundle,
    h0: u64,
    out_json: *mut *mut c_char,
) -> KkStatus {
    guard(|| {
        let r = classify(&ref_arg(s, "surface")?.inner, &ref_arg(e, "bundle")?.inner, h0).map_err(domain)?;
        write_json(out_json, &r)
    })
}

//! C interface to `wsegre-core`.
//!
//! Exact values cross the boundary as opaque `WsegreRational` handles. Every
//! fallible function returns a `WsegreStatus`; on failure a message is kept per
//! thread and can be read with `wsegre_last_error_message`.
//!
//! Ownership: handles and strings returned through out-pointers belong to the
//! caller and must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::ptr;

use wsegre_core::{BoundaryData, Error, GeometryInput, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WsegreStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotInvertible = 4,
    UnsupportedDimension = 5,
    Parse = 6,
    NotFound = 7,
    Internal = 8,
}

/// Exact rational number.
pub struct WsegreRational(Rational);

/// Validated geometric input `(n, (K+D)^n, (-D)^n, components)`.
pub struct WsegreGeometry(GeometryInput);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: WsegreStatus, msg: impl Into<String>) -> WsegreStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> WsegreStatus {
    let status = match e {
        Error::DimensionMismatch(..) => WsegreStatus::DimensionMismatch,
        Error::NotInvertible => WsegreStatus::NotInvertible,
        Error::UnsupportedDimension(_) => WsegreStatus::UnsupportedDimension,
        Error::Parse(_) => WsegreStatus::Parse,
        _ => WsegreStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `WsegreStatus::Internal`.
fn guarded(f: impl FnOnce() -> WsegreStatus) -> WsegreStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            fail(WsegreStatus::Internal, msg)
        }
    }
}

fn positive(name: &str, v: u64) -> Result<(), WsegreStatus> {
    if v == 0 { Err(fail(WsegreStatus::InvalidArgument, format!("{name} must be at least 1"))) } else { Ok(()) }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, WsegreStatus> {
    // SAFETY: the caller guarantees `p` is null or a live handle.
    unsafe { p.as_ref() }.ok_or_else(|| fail(WsegreStatus::NullPointer, format!("{name} is null")))
}

fn check_out<T>(out: *mut T) -> Result<(), WsegreStatus> {
    if out.is_null() { Err(fail(WsegreStatus::NullPointer, "output pointer is null")) } else { Ok(()) }
}

unsafe fn emit_rational(out: *mut *mut WsegreRational, value: Rational) -> WsegreStatus {
    // SAFETY: `out` was checked non-null by the caller.
    unsafe { *out = Box::into_raw(Box::new(WsegreRational(value))) };
    WsegreStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn wsegre_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Creates `num/den`.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_rational_new(num: i64, den: i64, out: *mut *mut WsegreRational) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        if den == 0 {
            return fail(WsegreStatus::InvalidArgument, "zero denominator");
        }
        unsafe { emit_rational(out, Rational::new(num.into(), den.into())) }
    })
}

/// Parses `"P/Q"` or `"P"` with arbitrarily large integers.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_rational_parse(text: *const c_char, out: *mut *mut WsegreRational) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        if text.is_null() {
            return fail(WsegreStatus::NullPointer, "text is null");
        }
        let s = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(s) => s,
            Err(_) => return fail(WsegreStatus::Parse, "text is not UTF-8"),
        };
        match wsegre_core::cli::parse_rational(s) {
            Ok(q) => unsafe { emit_rational(out, q) },
            Err(e) => from_core(e),
        }
    })
}

/// Decimal `"P/Q"` (or `"P"`) form; free with `wsegre_string_free`.
///
/// # Safety
/// `q` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_rational_to_string(q: *const WsegreRational) -> *mut c_char {
    match unsafe { q.as_ref() } {
        Some(q) => CString::new(q.0.to_string()).expect("digits contain no nul").into_raw(),
        None => {
            set_error("rational is null");
            ptr::null_mut()
        }
    }
}

/// Nearest binary64 value; NaN for a null handle.
///
/// # Safety
/// `q` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_rational_to_f64(q: *const WsegreRational) -> f64 {
    unsafe { q.as_ref() }.map_or(f64::NAN, |q| wsegre_core::rational_to_f64(&q.0))
}

/// # Safety
/// `q` must be null or a handle from this library that has not been freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_rational_free(q: *mut WsegreRational) {
    if !q.is_null() {
        drop(unsafe { Box::from_raw(q) });
    }
}

/// Creates a geometry handle. The rationals are copied.
///
/// # Safety
/// `kd_n` and `neg_dn` must be live handles and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_geometry_new(
    n: usize,
    kd_n: *const WsegreRational,
    neg_dn: *const WsegreRational,
    components: u64,
    out: *mut *mut WsegreGeometry,
) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        let kd_n = try_status!(unsafe { deref(kd_n, "kd_n") });
        let neg_dn = try_status!(unsafe { deref(neg_dn, "neg_dn") });
        match GeometryInput::new(n, kd_n.0.clone(), neg_dn.0.clone(), components) {
            Ok(g) => {
                unsafe { *out = Box::into_raw(Box::new(WsegreGeometry(g))) };
                WsegreStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_geometry_free(g: *mut WsegreGeometry) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Sum of `1/(u_1...u_n)` over `n`-subsets of the multiset `S_{k,n}`.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_sum_skn(n: usize, k: u64, out: *mut *mut WsegreRational) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        try_status!(positive("n", n as u64));
        try_status!(positive("k", k));
        unsafe { emit_rational(out, wsegre_core::sum_skn(n, k)) }
    })
}

/// Sum of `1/(i_1...i_n)` over `1 <= i_1 <= ... <= i_n <= k`.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_sum_nondecreasing(n: usize, k: u64, out: *mut *mut WsegreRational) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        try_status!(positive("n", n as u64));
        try_status!(positive("k", k));
        unsafe { emit_rational(out, wsegre_core::sum_nondecreasing(n, k)) }
    })
}

/// `(-1)^n` times the top Segre class of the weighted sum of `k` copies of
/// the tangent bundle of `P^n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_weighted_tangent_top_segre(
    n: usize,
    k: u64,
    out: *mut *mut WsegreRational,
) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        try_status!(positive("n", n as u64));
        try_status!(positive("k", k));
        unsafe { emit_rational(out, wsegre_core::weighted_tangent_top_segre(n, k)) }
    })
}

/// Volume of logarithmic jet differentials of order `k`.
///
/// # Safety
/// `kd_n` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_volume_log(
    n: usize,
    k: u64,
    kd_n: *const WsegreRational,
    out: *mut *mut WsegreRational,
) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        let kd_n = try_status!(unsafe { deref(kd_n, "kd_n") });
        try_status!(positive("n", n as u64));
        try_status!(positive("k", k));
        unsafe { emit_rational(out, wsegre_core::volume_log(n, k, &kd_n.0)) }
    })
}

/// Lower bound on the volume of order-`k` Green-Griffiths jet differentials.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_theorem1_bound(
    g: *const WsegreGeometry,
    k: u64,
    out: *mut *mut WsegreRational,
) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        let g = try_status!(unsafe { deref(g, "geometry") });
        try_status!(positive("k", k));
        unsafe { emit_rational(out, wsegre_core::theorem1_bound(&g.0, k)) }
    })
}

/// Smallest `k <= k_max` with a positive bound, or `WSEGRE_STATUS_NOT_FOUND`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_find_min_k(g: *const WsegreGeometry, k_max: u64, out: *mut u64) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        let g = try_status!(unsafe { deref(g, "geometry") });
        match wsegre_core::bounds::find_min_k(&g.0, k_max) {
            Some(k) => {
                unsafe { *out = k };
                WsegreStatus::Ok
            }
            None => fail(WsegreStatus::NotFound, format!("bound is not positive for any k <= {k_max}")),
        }
    })
}

/// Threshold on `log k`. `neg_dn` may be null for `n >= 6`.
///
/// # Safety
/// `neg_dn` must be null or a live handle; `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_threshold_logk(n: usize, neg_dn: *const WsegreRational, out: *mut f64) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        let neg_dn = unsafe { neg_dn.as_ref() }.map(|q| &q.0);
        match wsegre_core::threshold_logk(n, neg_dn) {
            Ok(t) => {
                unsafe { *out = t };
                WsegreStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// The factor `A(k, n)` as a function of `log k`.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_a_of_kn(log_k: f64, n: usize, out: *mut f64) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        match wsegre_core::a_of_kn(log_k, n) {
            Ok(a) => {
                unsafe { *out = a };
                WsegreStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Rank of the degree-`m` graded piece of `E^GG_{k,m}` in dimension `n`, as
/// an integer-valued rational.
///
/// # Safety
/// `out` must be a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_rank_gr_e(n: usize, k: usize, m: u64, out: *mut *mut WsegreRational) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        try_status!(positive("n", n as u64));
        try_status!(positive("k", k as u64));
        let r = wsegre_core::rank_gr_e(n, k, m);
        unsafe { emit_rational(out, Rational::from_integer(r.into())) }
    })
}

/// Sections of the graded boundary sheaf in degree `m`, for a boundary with
/// `(-D)^n = -neg_dn_abs` spread over `components` components.
///
/// # Safety
/// `neg_dn_abs` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn wsegre_h0_gr_q(
    n: usize,
    k: usize,
    m: u64,
    neg_dn_abs: *const WsegreRational,
    components: u64,
    out: *mut *mut WsegreRational,
) -> WsegreStatus {
    guarded(|| {
        try_status!(check_out(out));
        let beta = try_status!(unsafe { deref(neg_dn_abs, "neg_dn_abs") });
        try_status!(positive("k", k as u64));
        match BoundaryData::new(n, beta.0.clone(), components) {
            Ok(b) => unsafe { emit_rational(out, wsegre_core::h0_gr_q(k, m, &b)) },
            Err(e) => from_core(e),
        }
    })
}

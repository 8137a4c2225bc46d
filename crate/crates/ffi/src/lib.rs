//! C interface to `robust_median`.
//!
//! Samples and designs are opaque handles created and destroyed through this
//! interface. Every fallible function returns an [`RmStatus`] and writes its
//! result through an out pointer; on failure [`rm_last_error_message`] gives
//! the reason. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use robust_median::{DesignSpec, Error, Extent, Sample, SelectionRule, TargetDistribution, Tolerance};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument is outside its mathematical domain.
    Domain = 2,
    /// The data are unusable (empty, non-finite, too short).
    Data = 3,
    /// An internal error was caught at the boundary.
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmRule {
    /// `k` whose worst-case level is closest to the target.
    Nearest = 0,
    /// Largest `k` whose worst-case level does not exceed the target.
    Conservative = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmFamily {
    Normal = 0,
    Laplace = 1,
    Cauchy = 2,
    Logistic = 3,
    Uniform = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmToleranceKind {
    NotSignificantEvenClean = 0,
    Value = 1,
    CappedAtHalf = 2,
}

/// Symmetric target distribution; `scale` is sigma, b, gamma, s or the half-width.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RmDistribution {
    /// An `RmFamily` value.
    pub family: u32,
    pub location: f64,
    pub scale: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RmDesignInfo {
    pub n: u64,
    pub k: u64,
    pub alpha_target: f64,
    pub alpha_achieved: f64,
    pub eps: f64,
    pub min_coverage: f64,
    pub warning_count: usize,
}

/// Half-open interval `lower <= theta < upper`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RmInterval {
    pub lower: f64,
    pub upper: f64,
    pub k: u64,
    pub min_coverage: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RmTolerance {
    pub kind: RmToleranceKind,
    /// The tolerance when `kind` is `Value`, NaN otherwise.
    pub tau: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RmTestOutcome {
    pub statistic: u64,
    pub r_n: u64,
    pub reject: bool,
    pub alpha_achieved: f64,
    pub ties_at_theta0: usize,
    pub tolerance: RmTolerance,
}

/// A length that may be infinite; `value` is +inf when unbounded.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RmExtent {
    pub bounded: bool,
    pub value: f64,
}

/// Opaque sample handle.
pub struct RmSample(Sample);

/// Opaque design handle.
pub struct RmDesign(DesignSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> RmStatus {
    match err {
        Error::Domain(_) => RmStatus::Domain,
        _ => RmStatus::Data,
    }
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), RmStatus>) -> RmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RmStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            RmStatus::Panic
        }
    }
}

fn lift<T>(r: robust_median::Result<T>) -> Result<T, RmStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> RmStatus {
    set_error(format!("{what} is null"));
    RmStatus::NullPointer
}

fn bad_enum(what: &str, value: u32) -> RmStatus {
    set_error(format!("{value} is not a valid {what}"));
    RmStatus::Domain
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), RmStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, RmStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

fn tolerance(t: Tolerance) -> RmTolerance {
    match t {
        Tolerance::NotSignificantEvenClean => {
            RmTolerance { kind: RmToleranceKind::NotSignificantEvenClean, tau: f64::NAN }
        }
        Tolerance::Value { tau } => RmTolerance { kind: RmToleranceKind::Value, tau },
        Tolerance::CappedAtHalf => RmTolerance { kind: RmToleranceKind::CappedAtHalf, tau: f64::NAN },
    }
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies `len` values into a new sample.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_sample_new(values: *const f64, len: usize, out: *mut *mut RmSample) -> RmStatus {
    guard(|| {
        if values.is_null() && len > 0 {
            return Err(null("values"));
        }
        let xs = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(values, len).to_vec() };
        let sample = lift(Sample::new(xs))?;
        write(out, Box::into_raw(Box::new(RmSample(sample))), "out")
    })
}

/// # Safety
/// `sample` must be null or a handle from [`rm_sample_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rm_sample_free(sample: *mut RmSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of values, or 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_sample_len(sample: *const RmSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

/// Selects `k` for sample size `n`, target level `alpha` and design
/// contamination `eps`; `rule` is an `RmRule` value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_design_select(
    n: u64,
    alpha: f64,
    eps: f64,
    rule: u32,
    out: *mut *mut RmDesign,
) -> RmStatus {
    guard(|| {
        let rule = match rule {
            r if r == RmRule::Nearest as u32 => SelectionRule::Nearest,
            r if r == RmRule::Conservative as u32 => SelectionRule::Conservative,
            other => return Err(bad_enum("rule", other)),
        };
        let spec = lift(robust_median::select_k_with(n, alpha, eps, rule))?;
        write(out, Box::into_raw(Box::new(RmDesign(spec))), "out")
    })
}

/// A design with a caller-chosen `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_design_with_k(n: u64, alpha: f64, eps: f64, k: u64, out: *mut *mut RmDesign) -> RmStatus {
    guard(|| {
        let spec = lift(DesignSpec::with_k(n, alpha, eps, k))?;
        write(out, Box::into_raw(Box::new(RmDesign(spec))), "out")
    })
}

/// # Safety
/// `design` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rm_design_free(design: *mut RmDesign) {
    if !design.is_null() {
        drop(Box::from_raw(design));
    }
}

/// # Safety
/// `design` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_design_info(design: *const RmDesign, out: *mut RmDesignInfo) -> RmStatus {
    guard(|| {
        let d = &get(design, "design")?.0;
        let info = RmDesignInfo {
            n: d.n,
            k: d.k,
            alpha_target: d.alpha_target,
            alpha_achieved: d.alpha_achieved,
            eps: d.eps,
            min_coverage: d.min_coverage(),
            warning_count: d.warnings.len(),
        };
        write(out, info, "out")
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_build_interval(
    sample: *const RmSample,
    design: *const RmDesign,
    out: *mut RmInterval,
) -> RmStatus {
    guard(|| {
        let (s, d) = (&get(sample, "sample")?.0, &get(design, "design")?.0);
        let iv = lift(robust_median::build_interval(s, d))?;
        write(out, RmInterval { lower: iv.lower, upper: iv.upper, k: iv.k, min_coverage: iv.min_coverage }, "out")
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_sign_test(
    sample: *const RmSample,
    theta0: f64,
    design: *const RmDesign,
    out: *mut RmTestOutcome,
) -> RmStatus {
    guard(|| {
        let (s, d) = (&get(sample, "sample")?.0, &get(design, "design")?.0);
        let t = lift(robust_median::robust_sign_test(s, theta0, d))?;
        let outcome = RmTestOutcome {
            statistic: t.statistic,
            r_n: t.r_n,
            reject: t.reject,
            alpha_achieved: t.alpha_achieved,
            ties_at_theta0: t.ties_at_theta0,
            tolerance: tolerance(t.tolerance),
        };
        write(out, outcome, "out")
    })
}

/// Worst-case two-sided level of the sign test with cutoff `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_alpha_star(n: u64, k: u64, eps: f64, out: *mut f64) -> RmStatus {
    guard(|| write(out, lift(robust_median::alpha_star(n, k, eps))?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_min_coverage(n: u64, k: u64, eps: f64, out: *mut f64) -> RmStatus {
    guard(|| write(out, lift(robust_median::min_coverage(n, k, eps))?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_contamination_tolerance(n: u64, t: u64, alpha: f64, out: *mut RmTolerance) -> RmStatus {
    guard(|| write(out, tolerance(lift(robust_median::contamination_tolerance(n, t, alpha))?), "out"))
}

/// Maximum asymptotic length of the interval designed for `eps` when a
/// fraction `delta` of the data is contaminated.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rm_max_asymptotic_length(
    dist: RmDistribution,
    eps: f64,
    delta: f64,
    out: *mut RmExtent,
) -> RmStatus {
    guard(|| {
        const FAMILIES: [(RmFamily, &str); 5] = [
            (RmFamily::Normal, "normal"),
            (RmFamily::Laplace, "laplace"),
            (RmFamily::Cauchy, "cauchy"),
            (RmFamily::Logistic, "logistic"),
            (RmFamily::Uniform, "uniform"),
        ];
        let family = FAMILIES
            .iter()
            .find(|(f, _)| *f as u32 == dist.family)
            .map(|(_, name)| *name)
            .ok_or_else(|| bad_enum("family", dist.family))?;
        let d = lift(TargetDistribution::from_name(family, dist.location, dist.scale))?;
        let extent = match lift(robust_median::max_asymptotic_length(&d, eps, delta))? {
            Extent::Finite(v) => RmExtent { bounded: true, value: v },
            Extent::Unbounded => RmExtent { bounded: false, value: f64::INFINITY },
        };
        write(out, extent, "out")
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

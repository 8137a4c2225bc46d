use std::ffi::CStr;
use std::ptr;

use robust_median_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rm_last_error_message()) }.to_string_lossy().into_owned()
}

fn sample(xs: &[f64]) -> *mut RmSample {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rm_sample_new(xs.as_ptr(), xs.len(), &mut s) }, RmStatus::Ok);
    s
}

fn design(n: u64, alpha: f64, eps: f64) -> *mut RmDesign {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { rm_design_select(n, alpha, eps, RmRule::Nearest as u32, &mut d) }, RmStatus::Ok);
    d
}

#[test]
fn interval_and_test_match_library() {
    let xs: Vec<f64> = (1..=40).map(|i| (i as f64 * 0.37).sin() * 10.0).collect();
    let s = sample(&xs);
    let d = design(40, 0.05, 0.05);
    let mut iv = RmInterval::default();
    assert_eq!(unsafe { rm_build_interval(s, d, &mut iv) }, RmStatus::Ok);

    let lib_sample = robust_median::Sample::new(xs.clone()).unwrap();
    let lib_design = robust_median::select_k(40, 0.05, 0.05).unwrap();
    let want = robust_median::build_interval(&lib_sample, &lib_design).unwrap();
    assert_eq!((iv.lower, iv.upper, iv.k, iv.min_coverage), (want.lower, want.upper, want.k, want.min_coverage));

    let mut info = RmDesignInfo::default();
    assert_eq!(unsafe { rm_design_info(d, &mut info) }, RmStatus::Ok);
    assert_eq!(info.k, lib_design.k);
    assert_eq!(info.alpha_achieved, lib_design.alpha_achieved);

    for theta0 in [iv.lower - 1.0, iv.lower, 0.5 * (iv.lower + iv.upper), iv.upper] {
        let mut t = std::mem::MaybeUninit::<RmTestOutcome>::uninit();
        assert_eq!(unsafe { rm_sign_test(s, theta0, d, t.as_mut_ptr()) }, RmStatus::Ok);
        let t = unsafe { t.assume_init() };
        assert_eq!(t.reject, !(iv.lower <= theta0 && theta0 < iv.upper));
        let lib = robust_median::robust_sign_test(&lib_sample, theta0, &lib_design).unwrap();
        assert_eq!(t.statistic, lib.statistic);
        assert_eq!(t.ties_at_theta0, lib.ties_at_theta0);
    }
    unsafe {
        rm_design_free(d);
        rm_sample_free(s);
    }
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    assert_eq!(unsafe { rm_alpha_star(100, 39, 0.05, &mut v) }, RmStatus::Ok);
    assert_eq!(v, robust_median::alpha_star(100, 39, 0.05).unwrap());
    assert_eq!(unsafe { rm_min_coverage(20, 5, 0.10, &mut v) }, RmStatus::Ok);
    assert!((v - 0.938).abs() < 5e-4);

    let mut tol = RmTolerance { kind: RmToleranceKind::Value, tau: 0.0 };
    assert_eq!(unsafe { rm_contamination_tolerance(20, 10, 0.05, &mut tol) }, RmStatus::Ok);
    assert_eq!(tol.kind, RmToleranceKind::NotSignificantEvenClean);
    assert!(tol.tau.is_nan());
    assert_eq!(unsafe { rm_contamination_tolerance(20, 0, 0.05, &mut tol) }, RmStatus::Ok);
    assert_eq!(tol.kind, RmToleranceKind::CappedAtHalf);
    assert_eq!(unsafe { rm_contamination_tolerance(20, 17, 0.05, &mut tol) }, RmStatus::Ok);
    assert_eq!(tol.kind, RmToleranceKind::Value);
    assert!(tol.tau > 0.0 && tol.tau < 0.5);

    let mut e = RmExtent { bounded: false, value: 0.0 };
    let normal = RmDistribution { family: RmFamily::Normal as u32, location: 0.0, scale: 1.0 };
    assert_eq!(unsafe { rm_max_asymptotic_length(normal, 0.10, 0.10, &mut e) }, RmStatus::Ok);
    assert!(e.bounded && (e.value - 0.282).abs() < 5e-4);
    let cauchy = RmDistribution { family: RmFamily::Cauchy as u32, location: 3.0, scale: 2.0 };
    assert_eq!(unsafe { rm_max_asymptotic_length(cauchy, 0.2, 0.45, &mut e) }, RmStatus::Ok);
    assert!(!e.bounded && e.value == f64::INFINITY);
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rm_sample_new(ptr::null(), 0, &mut s) }, RmStatus::Data);
    assert!(s.is_null());
    assert!(last_error().contains("empty"), "{}", last_error());
    assert_eq!(unsafe { rm_sample_new([1.0, f64::NAN].as_ptr(), 2, &mut s) }, RmStatus::Data);
    assert_eq!(unsafe { rm_sample_new(ptr::null(), 3, &mut s) }, RmStatus::NullPointer);
    assert_eq!(unsafe { rm_sample_new([1.0].as_ptr(), 1, ptr::null_mut()) }, RmStatus::NullPointer);

    let mut v = 0.0;
    assert_eq!(unsafe { rm_alpha_star(20, 5, 0.5, &mut v) }, RmStatus::Domain);
    assert!(last_error().contains("0.5"));
    assert_eq!(unsafe { rm_alpha_star(20, 5, 0.1, ptr::null_mut()) }, RmStatus::NullPointer);

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { rm_design_select(20, 0.05, 0.1, 7, &mut d) }, RmStatus::Domain);
    assert_eq!(unsafe { rm_design_with_k(20, 0.05, 0.1, 10, &mut d) }, RmStatus::Domain);
    let bad = RmDistribution { family: 99, location: 0.0, scale: 1.0 };
    let mut e = RmExtent { bounded: true, value: 0.0 };
    assert_eq!(unsafe { rm_max_asymptotic_length(bad, 0.1, 0.0, &mut e) }, RmStatus::Domain);

    let s = sample(&[1.0, 2.0, 3.0]);
    let d = design(20, 0.05, 0.1);
    let mut iv = RmInterval::default();
    assert_eq!(unsafe { rm_build_interval(s, d, &mut iv) }, RmStatus::Domain);
    assert_eq!(unsafe { rm_build_interval(ptr::null(), d, &mut iv) }, RmStatus::NullPointer);
    assert_eq!(unsafe { rm_sample_len(ptr::null()) }, 0);
    unsafe {
        rm_sample_free(ptr::null_mut());
        rm_design_free(ptr::null_mut());
        rm_design_free(d);
        rm_sample_free(s);
    }
}

#[test]
fn error_messages_are_per_thread() {
    let mut v = 0.0;
    assert_eq!(unsafe { rm_alpha_star(20, 5, 0.7, &mut v) }, RmStatus::Domain);
    let here = last_error();
    std::thread::spawn(|| assert_eq!(last_error(), "")).join().unwrap();
    assert_eq!(last_error(), here);
    assert!(!unsafe { CStr::from_ptr(rm_version()) }.to_bytes().is_empty());
}

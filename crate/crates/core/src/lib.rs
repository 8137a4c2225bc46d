//! Nonparametric confidence intervals and sign tests for the median that
//! keep their nominal coverage and level when a fraction of the data comes
//! from an arbitrary contaminating distribution.
//!
//! The interval `[x_(k+1), x_(n-k))` has exact minimum coverage
//! `1 - alpha_star(n, k, eps)` over the `eps`-contamination neighborhood of
//! any continuous target, where `alpha_star` is a two-sided tail of
//! `Binomial(n, (1 - eps)/2)`. Choosing `k` from that distribution instead of
//! `Binomial(n, 1/2)` gives an interval (and dual sign test) that is robust
//! and still distribution free.
//!
//! ```
//! use robust_median::{build_interval, select_k, Sample};
//!
//! let sample = Sample::new((1..=20).map(f64::from).collect()).unwrap();
//! let design = select_k(20, 0.05, 0.10).unwrap();
//! let iv = build_interval(&sample, &design).unwrap();
//! assert_eq!(design.k, 5);
//! assert_eq!((iv.lower, iv.upper), (6.0, 15.0));
//! assert!((iv.min_coverage - 0.938).abs() < 5e-4);
//! ```

pub mod asympt;
pub mod binom;
pub mod cli;
pub mod design;
pub mod dist;
mod error;
pub mod mc;
pub mod sample;
pub mod tables;

pub use asympt::{
    consistency_distance, is_length_robust, is_power_robust, length_breakdown, max_asymptotic_length,
    optimal_limit_bounds, parametric_length, power_breakdown, Extent,
};
pub use binom::{alpha_star, binom_cdf, classical_alpha, h_interior, Binomial};
pub use design::{
    build_interval, contamination_tolerance, min_coverage, robust_p_value, robust_sign_test, select_k, select_k_with,
    sign_statistic, DesignSpec, RobustInterval, SelectionRule, SignTestOutcome, Tolerance, Warning,
};
pub use dist::TargetDistribution;
pub use error::{Error, Result};
pub use mc::{ContaminationScenario, MCConfig, MCSummary, Mechanism, Placement};
pub use sample::Sample;

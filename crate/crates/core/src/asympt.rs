//! Asymptotic length and power robustness of the robust interval and test.
//!
//! All measures assume a target with a symmetric unimodal density; `eps` is
//! the design contamination and `delta` the contamination actually present.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::{std_normal_quantile, TargetDistribution};
use crate::error::{check_eps, domain, Result};

/// A length or distance that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Extent {
    Finite(f64),
    Unbounded,
}

impl Extent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extent::Finite(v) => Some(v),
            Extent::Unbounded => None,
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(v) => write!(f, "{v}"),
            Extent::Unbounded => f.write_str("unbounded"),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&delta) {
        return domain(format!("actual contamination {delta} not in [0, 1)"));
    }
    Ok(())
}

/// Quantile levels `(1 -+ eps) / (2 (1 - delta))` bounding the limiting interval.
fn limit_levels(eps: f64, delta: f64) -> (f64, f64) {
    let denom = 2.0 * (1.0 - delta);
    ((1.0 - eps) / denom, (1.0 + eps) / denom)
}

/// Maximum asymptotic length of the robust interval when a fraction `delta`
/// of the data is contaminated. Unbounded once `delta >= (1 - eps) / 2`.
pub fn max_asymptotic_length(dist: &TargetDistribution, eps: f64, delta: f64) -> Result<Extent> {
    check_eps(eps)?;
    check_delta(delta)?;
    if delta >= length_breakdown(eps)? {
        return Ok(Extent::Unbounded);
    }
    let (lo, hi) = limit_levels(eps, delta);
    Ok(Extent::Finite(dist.quantile(hi)? - dist.quantile(lo)?))
}

/// Actual contamination at which the maximum asymptotic length becomes infinite.
pub fn length_breakdown(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok((1.0 - eps) / 2.0)
}

/// Whether the interval stays bounded when the actual contamination equals
/// the design contamination.
pub fn is_length_robust(eps: f64) -> bool {
    eps < 1.0 / 3.0
}

/// Tightest limiting endpoints `(F^{-1}((1-eps)/2), F^{-1}((1+eps)/2))` any
/// nonparametric `eps`-robust interval with convergent endpoints can have.
pub fn optimal_limit_bounds(dist: &TargetDistribution, eps: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    if eps == 0.0 {
        let m = dist.median();
        return Ok((m, m));
    }
    Ok((dist.quantile((1.0 - eps) / 2.0)?, dist.quantile((1.0 + eps) / 2.0)?))
}

/// Smallest shift of the true median beyond which the robust test's power
/// tends to one uniformly over the `delta`-neighborhood, measured from the
/// median of `dist`.
pub fn consistency_distance(dist: &TargetDistribution, eps: f64, delta: f64) -> Result<Extent> {
    check_eps(eps)?;
    check_delta(delta)?;
    if delta >= power_breakdown(eps)? {
        return Ok(Extent::Unbounded);
    }
    let (_, hi) = limit_levels(eps, delta);
    Ok(Extent::Finite(dist.quantile(hi)? - dist.median()))
}

pub fn power_breakdown(eps: f64) -> Result<f64> {
    length_breakdown(eps)
}

pub fn is_power_robust(eps: f64) -> bool {
    is_length_robust(eps)
}

/// Limiting length `2 Phi^{-1}(1 / (2 (1 - eps)))` of the normal-model
/// parametric robust interval: twice the maximum asymptotic bias of the median.
pub fn parametric_length(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(2.0 * std_normal_quantile(1.0 / (2.0 * (1.0 - eps))))
}

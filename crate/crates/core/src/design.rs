//! Finite-sample robust interval and sign test for the median.
//!
//! For a sample of size `n` the interval `[x_(k+1), x_(n-k))` covers the
//! target median with probability at least `1 - alpha_star(n, k, eps)` under
//! every distribution in the `eps`-contamination neighborhood of any
//! continuous target. The sign test that rejects when `T <= k` or `T >= n - k`
//! is its exact dual.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::binom::{alpha_star, worst_case_level};
use crate::error::{check_eps, check_level, domain, Error, Result};
use crate::sample::Sample;

/// How `k` is chosen among the achievable discrete levels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionRule {
    /// `k` minimizing `|alpha_star(n, k, eps) - alpha|`; ties go to the smaller `k`.
    #[default]
    Nearest,
    /// Largest `k` with `alpha_star(n, k, eps) <= alpha`.
    Conservative,
}

impl FromStr for SelectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest" | "argmin" => Ok(SelectionRule::Nearest),
            "conservative" => Ok(SelectionRule::Conservative),
            other => domain(format!("unknown selection rule {other:?}")),
        }
    }
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionRule::Nearest => "nearest",
            SelectionRule::Conservative => "conservative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Observations equal to the hypothesized median; counted as non-positive.
    TiesAtTheta0 { theta0: f64, count: usize },
    /// The selected design guarantees less than 50% coverage.
    DegenerateDesign { min_coverage: f64 },
    /// No `k` reaches the requested level; `k = 0` is used.
    LevelUnattainable { alpha_target: f64, alpha_achieved: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::TiesAtTheta0 { theta0, count } => write!(
                f,
                "{count} observation(s) equal theta0 = {theta0}; the target is assumed continuous, ties counted as not above theta0"
            ),
            Warning::DegenerateDesign { min_coverage } => {
                write!(f, "degenerate design: guaranteed coverage {min_coverage:.4} is below 0.5")
            }
            Warning::LevelUnattainable { alpha_target, alpha_achieved } => write!(
                f,
                "level {alpha_target} unattainable; smallest worst-case level is {alpha_achieved:.6}"
            ),
        }
    }
}

/// A chosen acceptance index together with its exact worst-case level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub n: u64,
    pub alpha_target: f64,
    pub eps: f64,
    pub k: u64,
    pub alpha_achieved: f64,
    pub rule: SelectionRule,
    pub warnings: Vec<Warning>,
}

impl DesignSpec {
    /// A design with an explicitly given `k`.
    pub fn with_k(n: u64, alpha_target: f64, eps: f64, k: u64) -> Result<Self> {
        check_level(alpha_target)?;
        let alpha_achieved = alpha_star(n, k, eps)?;
        let mut spec =
            DesignSpec { n, alpha_target, eps, k, alpha_achieved, rule: SelectionRule::Nearest, warnings: Vec::new() };
        spec.flag_degenerate();
        Ok(spec)
    }

    pub fn min_coverage(&self) -> f64 {
        1.0 - self.alpha_achieved
    }

    fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if 2 * self.k + 2 > self.n {
            return domain(format!("k = {} leaves no acceptance region for n = {}", self.k, self.n));
        }
        Ok(())
    }

    fn flag_degenerate(&mut self) {
        if self.min_coverage() < 0.5 {
            self.warnings.push(Warning::DegenerateDesign { min_coverage: self.min_coverage() });
        }
    }
}

/// The robust interval `[lower, upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustInterval {
    pub lower: f64,
    pub upper: f64,
    pub k: u64,
    pub min_coverage: f64,
}

impl RobustInterval {
    /// Half-open membership `lower <= theta < upper`.
    pub fn contains(&self, theta: f64) -> bool {
        self.lower <= theta && theta < self.upper
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Contamination tolerance of a rejection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Tolerance {
    /// The classical (uncontaminated) sign test already accepts.
    NotSignificantEvenClean,
    /// Largest design contamination at which the robust test still rejects.
    Value { tau: f64 },
    /// The robust test rejects for every design contamination below 1/2.
    CappedAtHalf,
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::NotSignificantEvenClean => f.write_str("not significant even without contamination"),
            Tolerance::Value { tau } => write!(f, "{tau:.6}"),
            Tolerance::CappedAtHalf => f.write_str("at least 0.5 (rejects for every eps < 1/2)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignTestOutcome {
    pub statistic: u64,
    pub r_n: u64,
    pub reject: bool,
    pub alpha_achieved: f64,
    pub tolerance: Tolerance,
    pub ties_at_theta0: usize,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignStatistic {
    /// Observations strictly above `theta0`.
    pub t: u64,
    /// Observations exactly equal to `theta0`.
    pub ties: usize,
}

pub fn sign_statistic(sample: &Sample, theta0: f64) -> SignStatistic {
    SignStatistic { t: sample.count_above(theta0) as u64, ties: sample.tie_count_at(theta0) }
}

/// Chooses `k` by the nearest-level rule.
pub fn select_k(n: u64, alpha_target: f64, eps: f64) -> Result<DesignSpec> {
    select_k_with(n, alpha_target, eps, SelectionRule::Nearest)
}

pub fn select_k_with(n: u64, alpha_target: f64, eps: f64, rule: SelectionRule) -> Result<DesignSpec> {
    if n < 2 {
        return domain(format!("sample size {n} too small; need at least 2"));
    }
    check_level(alpha_target)?;
    check_eps(eps)?;
    let level = |k: u64| worst_case_level(n, k, eps);
    let top = n / 2 - 1;

    let mut warnings = Vec::new();
    let k = match rule {
        SelectionRule::Nearest => {
            // Levels increase with k, so the nearest level sits next to the
            // first k whose level reaches the target.
            let first_above = first_k_where(top, |k| level(k) >= alpha_target);
            let mut k = match first_above {
                None => top,
                Some(0) => 0,
                Some(j) => {
                    let below = alpha_target - level(j - 1);
                    let above = level(j) - alpha_target;
                    if above < below {
                        j
                    } else {
                        j - 1
                    }
                }
            };
            while k > 0 && level(k - 1) == level(k) {
                k -= 1;
            }
            k
        }
        SelectionRule::Conservative => match first_k_where(top, |k| level(k) > alpha_target) {
            None => top,
            Some(0) => {
                warnings.push(Warning::LevelUnattainable { alpha_target, alpha_achieved: level(0) });
                0
            }
            Some(j) => j - 1,
        },
    };

    let mut spec = DesignSpec { n, alpha_target, eps, k, alpha_achieved: level(k), rule, warnings };
    spec.flag_degenerate();
    Ok(spec)
}

/// Smallest `k` in `0..=top` satisfying a monotone predicate.
fn first_k_where(top: u64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    if !pred(top) {
        return None;
    }
    let (mut lo, mut hi) = (0u64, top);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

pub fn build_interval(sample: &Sample, spec: &DesignSpec) -> Result<RobustInterval> {
    spec.validate()?;
    let n = sample.len();
    if n as u64 != spec.n {
        return domain(format!("design is for n = {} but the sample has {n} values", spec.n));
    }
    let k = spec.k as usize;
    let sorted = sample.sorted();
    Ok(RobustInterval { lower: sorted[k], upper: sorted[n - k - 1], k: spec.k, min_coverage: spec.min_coverage() })
}

/// Two-sided sign test of `H0: median = theta0` at the design's worst-case level.
pub fn robust_sign_test(sample: &Sample, theta0: f64, spec: &DesignSpec) -> Result<SignTestOutcome> {
    spec.validate()?;
    let n = sample.len() as u64;
    if n != spec.n {
        return domain(format!("design is for n = {} but the sample has {n} values", spec.n));
    }
    if !theta0.is_finite() {
        return domain(format!("theta0 = {theta0} is not finite"));
    }
    let SignStatistic { t, ties } = sign_statistic(sample, theta0);
    let k = spec.k;
    let mut warnings = Vec::new();
    if ties > 0 {
        warnings.push(Warning::TiesAtTheta0 { theta0, count: ties });
    }
    Ok(SignTestOutcome {
        statistic: t,
        r_n: t.min(n - t),
        reject: t <= k || t >= n - k,
        alpha_achieved: spec.alpha_achieved,
        tolerance: contamination_tolerance(n, t, spec.alpha_target)?,
        ties_at_theta0: ties,
        warnings,
    })
}

/// Worst-case p-value of an observed sign statistic `t` over the
/// `eps`-neighborhood: `alpha_star(n, min(t, n - t), eps)`, or 1 when that
/// index leaves no acceptance region.
pub fn robust_p_value(n: u64, t: u64, eps: f64) -> Result<f64> {
    if t > n {
        return domain(format!("statistic {t} exceeds n = {n}"));
    }
    check_eps(eps)?;
    let r = t.min(n - t);
    if 2 * r + 2 > n {
        return Ok(1.0);
    }
    Ok(worst_case_level(n, r, eps))
}

const TOLERANCE_ABS: f64 = 1e-10;
const TOLERANCE_MAX_ITER: usize = 200;

/// Largest design contamination at which the level-`alpha` robust test still
/// rejects, the root in `eps` of `alpha_star(n, r_n, eps) = alpha`.
pub fn contamination_tolerance(n: u64, t: u64, alpha_target: f64) -> Result<Tolerance> {
    check_level(alpha_target)?;
    if n < 1 {
        return domain("sample size must be positive");
    }
    if t > n {
        return domain(format!("statistic {t} exceeds n = {n}"));
    }
    let r = t.min(n - t);
    if 2 * r + 2 > n {
        return Ok(Tolerance::NotSignificantEvenClean);
    }
    let excess = |eps: f64| worst_case_level(n, r, eps) - alpha_target;
    if excess(0.0) >= 0.0 {
        return Ok(Tolerance::NotSignificantEvenClean);
    }
    if excess(0.5) <= 0.0 {
        return Ok(Tolerance::CappedAtHalf);
    }
    // excess is continuous and increasing on [0, 1/2]
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..TOLERANCE_MAX_ITER {
        if hi - lo <= TOLERANCE_ABS {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Tolerance::Value { tau: 0.5 * (lo + hi) })
}

/// Exact infimum of the coverage of `[x_(k+1), x_(n-k))` over the
/// `eps`-neighborhood of any continuous target.
pub fn min_coverage(n: u64, k: u64, eps: f64) -> Result<f64> {
    Ok(1.0 - alpha_star(n, k, eps)?)
}

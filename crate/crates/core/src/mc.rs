//! Seeded Monte Carlo estimates of coverage and expected length under
//! point-mass contamination.
//!
//! Replication `i` of a run with seed `s` draws from ChaCha8 seeded with
//! `s` on stream `i`, so results do not depend on how replications are
//! split across threads. Reductions run in replication order.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{build_interval, select_k_with, DesignSpec, SelectionRule};
use crate::dist::TargetDistribution;
use crate::error::{check_eps, check_level, domain, Error, Result};
use crate::sample::Sample;

pub const DEFAULT_REPS: usize = 8000;
/// Default distance of the contamination point from the median, in scale units.
pub const DEFAULT_CONTAMINATION_OFFSET: f64 = 10.0;

/// Where the contaminating point mass sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Stand-in for `+inf`: the config's `contamination_value`.
    PlusLimit,
    /// Stand-in for `-inf`: `contamination_value` mirrored about the median.
    MinusLimit,
    Point(f64),
}

/// How contaminated observations are chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    /// Each observation is independently contaminated with probability `delta`.
    #[default]
    Bernoulli,
    /// Exactly `round(delta * n)` observations are contaminated.
    FixedCount,
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bernoulli" => Ok(Mechanism::Bernoulli),
            "fixed" | "fixed-count" => Ok(Mechanism::FixedCount),
            other => domain(format!("unknown contamination mechanism {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContaminationScenario {
    pub eps_design: f64,
    pub delta_actual: f64,
    pub placement: Placement,
}

impl ContaminationScenario {
    pub fn new(eps_design: f64, delta_actual: f64, placement: Placement) -> Result<Self> {
        check_eps(eps_design)?;
        if !(0.0..0.5).contains(&delta_actual) {
            return domain(format!("actual contamination {delta_actual} not in [0, 0.5)"));
        }
        Ok(ContaminationScenario { eps_design, delta_actual, placement })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub dist: TargetDistribution,
    pub scenario: ContaminationScenario,
    pub n: usize,
    pub alpha_target: f64,
    pub reps: usize,
    pub seed: u64,
    pub contamination_value: f64,
    pub mechanism: Mechanism,
    pub rule: SelectionRule,
}

impl MCConfig {
    /// Config with the default replication count, Bernoulli contamination and
    /// the contamination point ten scale units above the median.
    pub fn new(
        dist: TargetDistribution,
        scenario: ContaminationScenario,
        n: usize,
        alpha_target: f64,
        seed: u64,
    ) -> Self {
        MCConfig {
            dist,
            scenario,
            n,
            alpha_target,
            reps: DEFAULT_REPS,
            seed,
            contamination_value: dist.median() + DEFAULT_CONTAMINATION_OFFSET * dist.scale(),
            mechanism: Mechanism::Bernoulli,
            rule: SelectionRule::Nearest,
        }
    }

    pub fn contamination_point(&self) -> f64 {
        match self.scenario.placement {
            Placement::PlusLimit => self.contamination_value,
            Placement::MinusLimit => 2.0 * self.dist.median() - self.contamination_value,
            Placement::Point(y) => y,
        }
    }

    pub fn design(&self) -> Result<DesignSpec> {
        select_k_with(self.n as u64, self.alpha_target, self.scenario.eps_design, self.rule)
    }

    fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return domain("replication count must be at least 1");
        }
        if self.n < 2 {
            return domain(format!("sample size {} too small; need at least 2", self.n));
        }
        check_level(self.alpha_target)?;
        if !self.contamination_point().is_finite() {
            return domain("contamination value must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCSummary {
    pub n: usize,
    pub k: u64,
    pub alpha_achieved: f64,
    pub mean_length: f64,
    pub se_length: f64,
    pub coverage_freq: f64,
    pub se_coverage: f64,
    pub reps_used: usize,
    /// Replications where an interval endpoint landed on a contaminated
    /// observation, so the length reflects the finite stand-in value.
    pub infinite_length_count: usize,
}

/// The generator for replication `rep` of a run seeded with `seed`.
pub fn replication_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// `n` draws from `(1 - delta) dist + delta * point_mass(value)`. `delta` may
/// be anywhere in `[0, 1]`.
pub fn draw_contaminated<R: Rng + ?Sized>(
    dist: &TargetDistribution,
    n: usize,
    delta: f64,
    value: f64,
    mechanism: Mechanism,
    rng: &mut R,
) -> Vec<f64> {
    match mechanism {
        Mechanism::Bernoulli => {
            (0..n).map(|_| if rng.random::<f64>() < delta { value } else { dist.sample(rng) }).collect()
        }
        Mechanism::FixedCount => {
            let m = ((delta * n as f64).round() as usize).min(n);
            let mut xs: Vec<f64> = (0..n).map(|i| if i < m { value } else { dist.sample(rng) }).collect();
            // Positions do not affect order statistics, but keep raw order mixed.
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                xs.swap(i, j);
            }
            xs
        }
    }
}

pub fn sample_contaminated<R: Rng + ?Sized>(config: &MCConfig, rng: &mut R) -> Result<Sample> {
    Sample::new(draw_contaminated(
        &config.dist,
        config.n,
        config.scenario.delta_actual,
        config.contamination_point(),
        config.mechanism,
        rng,
    ))
}

/// Draws of replication `rep`, exactly as a full run would see them.
pub fn replication_sample(config: &MCConfig, rep: u64) -> Result<Sample> {
    sample_contaminated(config, &mut replication_rng(config.seed, rep))
}

/// Average interval length (and coverage of the target median).
pub fn estimate_expected_length(config: &MCConfig) -> Result<MCSummary> {
    run(config, config.dist.median(), None)
}

/// Frequency of `lower <= theta_true < upper`.
pub fn estimate_coverage(config: &MCConfig, theta_true: f64) -> Result<MCSummary> {
    run(config, theta_true, None)
}

/// As [`estimate_coverage`] on a dedicated pool of `workers` threads.
/// The result is identical for every worker count.
pub fn estimate_with_workers(config: &MCConfig, theta_true: f64, workers: usize) -> Result<MCSummary> {
    run(config, theta_true, Some(workers))
}

struct Replication {
    length: f64,
    covered: bool,
    hit: bool,
}

fn run(config: &MCConfig, theta_true: f64, workers: Option<usize>) -> Result<MCSummary> {
    config.validate()?;
    let spec = config.design()?;
    let point = config.contamination_point();

    let one = |rep: usize| -> Result<Replication> {
        let sample = replication_sample(config, rep as u64)?;
        let iv = build_interval(&sample, &spec)?;
        Ok(Replication {
            length: iv.length(),
            covered: iv.contains(theta_true),
            hit: config.scenario.delta_actual > 0.0 && (iv.upper == point || iv.lower == point),
        })
    };
    let collect = || (0..config.reps).into_par_iter().map(one).collect::<Result<Vec<_>>>();
    let reps = match workers {
        None => collect()?,
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot build thread pool: {e}")))?
            .install(collect)?,
    };

    let lengths: Vec<f64> = reps.iter().map(|r| r.length).collect();
    let (mean_length, se_length) = mean_and_se(&lengths);
    let covered = reps.iter().filter(|r| r.covered).count();
    let coverage_freq = covered as f64 / reps.len() as f64;
    Ok(MCSummary {
        n: config.n,
        k: spec.k,
        alpha_achieved: spec.alpha_achieved,
        mean_length,
        se_length,
        coverage_freq,
        se_coverage: (coverage_freq * (1.0 - coverage_freq) / reps.len() as f64).sqrt(),
        reps_used: reps.len(),
        infinite_length_count: reps.iter().filter(|r| r.hit).count(),
    })
}

fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + comp
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (m - 1.0);
    (mean, (var / m).sqrt())
}

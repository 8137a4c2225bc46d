//! Reproduction grids for minimum coverage, coverage/expected length, and
//! asymptotic length comparisons.
//!
//! Exact cells come straight from the binomial machinery. Expected lengths
//! are Monte Carlo estimates under a standard normal target and carry their
//! standard errors. Each simulated cell gets its own seed, derived from the
//! request seed and the cell coordinates.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::asympt::{max_asymptotic_length, parametric_length};
use crate::binom::classical_alpha;
use crate::design::{min_coverage, select_k};
use crate::dist::TargetDistribution;
use crate::error::{domain, Error, Result};
use crate::mc::{self, ContaminationScenario, MCConfig, Mechanism, Placement};

pub const TABLE1_N: [usize; 7] = [20, 40, 100, 200, 500, 1000, 2000];
pub const TABLE1_EPS: [f64; 4] = [0.0, 0.05, 0.10, 0.15];
pub const TABLE23_N: [usize; 9] = [20, 40, 60, 80, 100, 200, 500, 1000, 2000];
pub const TABLE23_EPS: [f64; 3] = [0.0, 0.05, 0.10];
pub const TABLE4_EPS: [f64; 4] = [0.05, 0.10, 0.15, 0.20];
/// Nominal levels of the two coverage blocks (about 95% and 90%).
pub const LEVELS: [f64; 2] = [0.05, 0.10];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => domain(format!("unknown output format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRequest {
    pub which: u8,
    pub n_grid: Vec<usize>,
    pub eps_grid: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// Location of the contaminating point mass (the target is N(0, 1)).
    pub contamination_value: f64,
    pub mechanism: Mechanism,
    /// Worker threads for simulated cells; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl TableRequest {
    /// A request for table `which` with its default grids.
    pub fn new(which: u8) -> Result<Self> {
        let (n_grid, eps_grid) = match which {
            1 => (TABLE1_N.to_vec(), TABLE1_EPS.to_vec()),
            2 | 3 => (TABLE23_N.to_vec(), TABLE23_EPS.to_vec()),
            4 => (Vec::new(), TABLE4_EPS.to_vec()),
            other => return domain(format!("no table {other}; expected 1, 2, 3 or 4")),
        };
        Ok(TableRequest {
            which,
            n_grid,
            eps_grid,
            reps: mc::DEFAULT_REPS,
            seed: 1,
            contamination_value: mc::DEFAULT_CONTAMINATION_OFFSET,
            mechanism: Mechanism::Bernoulli,
            workers: None,
        })
    }

    fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.which) {
            return domain(format!("no table {}; expected 1, 2, 3 or 4", self.which));
        }
        if self.eps_grid.is_empty() || (self.which != 4 && self.n_grid.is_empty()) {
            return domain("table grids must be nonempty");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub alpha_target: f64,
    pub n: usize,
    pub eps: f64,
    pub k: u64,
    pub alpha_classical: f64,
    pub min_coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table23Row {
    pub n: usize,
    pub eps: f64,
    pub k: u64,
    pub alpha_star: f64,
    pub cp_exact: f64,
    pub elu_mean: f64,
    pub elu_se: f64,
    pub elc_mean: Option<f64>,
    pub elc_se: Option<f64>,
    pub elc_endpoint_hits: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table4Row {
    pub distribution: &'static str,
    pub eps: f64,
    pub parametric: f64,
    pub nonparametric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TableRows {
    MinCoverage(Vec<Table1Row>),
    CoverageLength(Vec<Table23Row>),
    Comparison(Vec<Table4Row>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableOutput {
    pub table: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contamination_value: Option<f64>,
    pub rows: TableRows,
}

pub fn run_table(req: &TableRequest) -> Result<TableOutput> {
    req.validate()?;
    match req.which {
        1 => table1(req),
        2 => table23(req, LEVELS[0]),
        3 => table23(req, LEVELS[1]),
        _ => table4(req),
    }
}

/// Minimum coverage of the classical interval (k chosen at `eps = 0`) over
/// each contamination neighborhood in the grid.
pub fn table1(req: &TableRequest) -> Result<TableOutput> {
    let mut rows = Vec::new();
    for &alpha in &LEVELS {
        for &n in &sorted_usize(&req.n_grid) {
            let k = select_k(n as u64, alpha, 0.0)?.k;
            let alpha_classical = classical_alpha(n as u64, k)?;
            for &eps in &sorted_f64(&req.eps_grid) {
                rows.push(Table1Row {
                    alpha_target: alpha,
                    n,
                    eps,
                    k,
                    alpha_classical,
                    min_coverage: min_coverage(n as u64, k, eps)?,
                });
            }
        }
    }
    Ok(TableOutput {
        table: 1,
        alpha_target: None,
        reps: None,
        seed: None,
        contamination_value: None,
        rows: TableRows::MinCoverage(rows),
    })
}

/// Exact coverage and simulated expected length of the robust interval,
/// clean (ELU) and with `delta = eps` at the contamination point (ELC).
pub fn table23(req: &TableRequest, alpha: f64) -> Result<TableOutput> {
    let target = TargetDistribution::STANDARD_NORMAL;
    let mut rows = Vec::new();
    for &n in &sorted_usize(&req.n_grid) {
        for &eps in &sorted_f64(&req.eps_grid) {
            let spec = select_k(n as u64, alpha, eps)?;
            let simulate = |delta: f64, slot: u64| -> Result<mc::MCSummary> {
                let scenario = ContaminationScenario::new(eps, delta, Placement::PlusLimit)?;
                let mut cfg = MCConfig::new(target, scenario, n, alpha, 0);
                cfg.reps = req.reps;
                cfg.contamination_value = req.contamination_value;
                cfg.mechanism = req.mechanism;
                cfg.seed = derive_seed(req.seed, &[req.which as u64, n as u64, eps.to_bits(), slot]);
                match req.workers {
                    Some(w) => mc::estimate_with_workers(&cfg, target.median(), w),
                    None => mc::estimate_expected_length(&cfg),
                }
            };
            let elu = simulate(0.0, 0)?;
            let elc = if eps > 0.0 { Some(simulate(eps, 1)?) } else { None };
            rows.push(Table23Row {
                n,
                eps,
                k: spec.k,
                alpha_star: spec.alpha_achieved,
                cp_exact: spec.min_coverage(),
                elu_mean: elu.mean_length,
                elu_se: elu.se_length,
                elc_mean: elc.as_ref().map(|s| s.mean_length),
                elc_se: elc.as_ref().map(|s| s.se_length),
                elc_endpoint_hits: elc.as_ref().map(|s| s.infinite_length_count),
            });
        }
    }
    Ok(TableOutput {
        table: req.which,
        alpha_target: Some(alpha),
        reps: Some(req.reps),
        seed: Some(req.seed),
        contamination_value: Some(req.contamination_value),
        rows: TableRows::CoverageLength(rows),
    })
}

/// Limiting lengths of the parametric and nonparametric robust intervals
/// under the standard normal and under its least favorable contamination.
pub fn table4(req: &TableRequest) -> Result<TableOutput> {
    let normal = TargetDistribution::STANDARD_NORMAL;
    let eps_grid = sorted_f64(&req.eps_grid);
    let mut rows = Vec::new();
    for (name, least_favorable) in [("standard_normal", false), ("least_favorable", true)] {
        for &eps in &eps_grid {
            let delta = if least_favorable { eps } else { 0.0 };
            let np = max_asymptotic_length(&normal, eps, delta)?
                .finite()
                .ok_or_else(|| Error::Domain(format!("length unbounded at eps = {eps}")))?;
            rows.push(Table4Row { distribution: name, eps, parametric: parametric_length(eps)?, nonparametric: np });
        }
    }
    Ok(TableOutput {
        table: 4,
        alpha_target: None,
        reps: None,
        seed: None,
        contamination_value: None,
        rows: TableRows::Comparison(rows),
    })
}

fn sorted_usize(xs: &[usize]) -> Vec<usize> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn sorted_f64(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// SplitMix64 over the base seed and a list of cell coordinates.
pub fn derive_seed(base: u64, coords: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    coords.iter().fold(mix(base), |acc, &c| mix(acc ^ mix(c)))
}

impl TableOutput {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("table rows serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        match &self.rows {
            TableRows::MinCoverage(rows) => {
                out.push_str("alpha_target,n,eps,k,alpha_classical,min_coverage\n");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.alpha_target, r.n, r.eps, r.k, r.alpha_classical, r.min_coverage
                    );
                }
            }
            TableRows::CoverageLength(rows) => {
                out.push_str("n,eps,k,cp_exact,elu_mean,elu_se,elc_mean,elc_se\n");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        r.n,
                        r.eps,
                        r.k,
                        r.cp_exact,
                        r.elu_mean,
                        r.elu_se,
                        opt(r.elc_mean),
                        opt(r.elc_se)
                    );
                }
            }
            TableRows::Comparison(rows) => {
                out.push_str("distribution,eps,parametric,nonparametric\n");
                for r in rows {
                    let _ = writeln!(out, "{},{},{},{}", r.distribution, r.eps, r.parametric, r.nonparametric);
                }
            }
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        match &self.rows {
            TableRows::MinCoverage(rows) => {
                out.push_str("Minimum coverage of the classical sign-test interval under eps-contamination\n");
                for &alpha in &LEVELS {
                    let block: Vec<&Table1Row> = rows.iter().filter(|r| r.alpha_target == alpha).collect();
                    let Some(first) = block.first() else { continue };
                    let eps: Vec<f64> = block.iter().filter(|r| r.n == first.n).map(|r| r.eps).collect();
                    let _ = writeln!(out, "\nnominal coverage ~{:.0}%", 100.0 * (1.0 - alpha));
                    let _ = write!(out, "{:>6} {:>5} {:>10}", "n", "k", "alpha(k)");
                    for e in &eps {
                        let _ = write!(out, " {:>9}", format!("eps={e}"));
                    }
                    out.push('\n');
                    for chunk in block.chunks(eps.len()) {
                        let r0 = chunk[0];
                        let _ = write!(out, "{:>6} {:>5} {:>10.6}", r0.n, r0.k, r0.alpha_classical);
                        for r in chunk {
                            let _ = write!(out, " {:>9.3}", r.min_coverage);
                        }
                        out.push('\n');
                    }
                }
            }
            TableRows::CoverageLength(rows) => {
                let alpha = self.alpha_target.unwrap_or(f64::NAN);
                let _ = writeln!(
                    out,
                    "Coverage (CP, exact) and expected length (ELU clean, ELC contaminated) at nominal ~{:.0}%",
                    100.0 * (1.0 - alpha)
                );
                let _ = writeln!(
                    out,
                    "reps = {}, seed = {}, contamination at y = {}",
                    self.reps.unwrap_or(0),
                    self.seed.unwrap_or(0),
                    self.contamination_value.unwrap_or(f64::NAN)
                );
                let _ = writeln!(
                    out,
                    "{:>6} {:>5} {:>5} {:>9} {:>7} {:>16} {:>16}",
                    "n", "eps", "k", "alpha*", "CP", "ELU (se)", "ELC (se)"
                );
                for r in rows {
                    let elc = match (r.elc_mean, r.elc_se) {
                        (Some(m), Some(s)) => format!("{m:.3} ({s:.3})"),
                        _ => "-".to_string(),
                    };
                    let _ = writeln!(
                        out,
                        "{:>6} {:>5} {:>5} {:>9.6} {:>7.3} {:>16} {:>16}",
                        r.n,
                        r.eps,
                        r.k,
                        r.alpha_star,
                        r.cp_exact,
                        format!("{:.3} ({:.3})", r.elu_mean, r.elu_se),
                        elc
                    );
                }
            }
            TableRows::Comparison(rows) => {
                out.push_str("Limiting length of parametric (P) and nonparametric (NP) robust intervals\n");
                let _ = writeln!(out, "{:>16} {:>6} {:>8} {:>8}", "distribution", "eps", "P", "NP");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{:>16} {:>6} {:>8.3} {:>8.3}",
                        r.distribution, r.eps, r.parametric, r.nonparametric
                    );
                }
            }
        }
        out
    }
}

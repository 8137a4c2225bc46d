//! Data ingestion and report rendering behind the `robust-median` binary.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::asympt::{
    consistency_distance, is_length_robust, is_power_robust, length_breakdown, max_asymptotic_length,
    optimal_limit_bounds, parametric_length, power_breakdown, Extent,
};
use crate::binom::alpha_star;
use crate::design::{
    build_interval, contamination_tolerance, robust_p_value, robust_sign_test, select_k_with, SelectionRule, Tolerance,
};
use crate::dist::TargetDistribution;
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::tables::Format;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

pub const HALF_OPEN_NOTE: &str = "half-open: lower <= theta < upper";

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) => EXIT_DOMAIN,
        Error::Data(_) | Error::Parse { .. } | Error::Io(_) => EXIT_DATA,
    }
}

/// Parses one number per line, taking the first comma-separated field.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_data(text: &str) -> Result<Vec<f64>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or("").trim();
        let x: f64 = field.parse().map_err(|_| Error::Parse { line: i + 1, text: field.to_string() })?;
        if !x.is_finite() {
            return Err(Error::Data(format!("line {}: value {field:?} is not finite", i + 1)));
        }
        values.push(x);
    }
    Ok(values)
}

/// Reads a data file into a sample of at least two observations.
pub fn load_sample(path: &Path) -> Result<Sample> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Data(format!("{} is not valid UTF-8", path.display())))?;
    let values = parse_data(&text)?;
    if values.len() < 2 {
        return Err(Error::Data(format!(
            "{} has {} usable value(s); at least 2 are needed",
            path.display(),
            values.len()
        )));
    }
    Sample::new(values)
}

fn csv_record(fields: &[(&str, String)]) -> String {
    let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
    format!("{}\n{}\n", header.join(","), values.join(","))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn tolerance_fields(t: &Option<Tolerance>) -> (String, String) {
    match t {
        None => (String::new(), String::new()),
        Some(Tolerance::Value { tau }) => ("value".into(), tau.to_string()),
        Some(Tolerance::NotSignificantEvenClean) => ("not_significant_even_clean".into(), String::new()),
        Some(Tolerance::CappedAtHalf) => ("capped_at_half".into(), String::new()),
    }
}

/// Result of the `interval` and `test` subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub command: String,
    pub n: u64,
    pub alpha: f64,
    pub eps: f64,
    pub rule: SelectionRule,
    pub theta0: Option<f64>,
    pub k: u64,
    pub alpha_achieved: f64,
    pub min_coverage: f64,
    pub lower: f64,
    pub upper: f64,
    pub convention: String,
    pub statistic: Option<u64>,
    pub r_n: Option<u64>,
    pub reject: Option<bool>,
    pub tolerance: Option<Tolerance>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn interval(sample: &Sample, alpha: f64, eps: f64, rule: SelectionRule) -> Result<Self> {
        let spec = select_k_with(sample.len() as u64, alpha, eps, rule)?;
        let iv = build_interval(sample, &spec)?;
        Ok(AnalysisReport {
            command: "interval".into(),
            n: spec.n,
            alpha,
            eps,
            rule,
            theta0: None,
            k: spec.k,
            alpha_achieved: spec.alpha_achieved,
            min_coverage: iv.min_coverage,
            lower: iv.lower,
            upper: iv.upper,
            convention: HALF_OPEN_NOTE.into(),
            statistic: None,
            r_n: None,
            reject: None,
            tolerance: None,
            warnings: spec.warnings.iter().map(ToString::to_string).collect(),
        })
    }

    pub fn test(sample: &Sample, theta0: f64, alpha: f64, eps: f64, rule: SelectionRule) -> Result<Self> {
        let mut report = Self::interval(sample, alpha, eps, rule)?;
        let spec = select_k_with(sample.len() as u64, alpha, eps, rule)?;
        let out = robust_sign_test(sample, theta0, &spec)?;
        report.command = "test".into();
        report.theta0 = Some(theta0);
        report.statistic = Some(out.statistic);
        report.r_n = Some(out.r_n);
        report.reject = Some(out.reject);
        report.tolerance = Some(out.tolerance);
        report.warnings.extend(out.warnings.iter().map(ToString::to_string));
        Ok(report)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let (status, tau) = tolerance_fields(&self.tolerance);
                csv_record(&[
                    ("command", self.command.clone()),
                    ("n", self.n.to_string()),
                    ("alpha", self.alpha.to_string()),
                    ("eps", self.eps.to_string()),
                    ("rule", self.rule.to_string()),
                    ("theta0", opt(&self.theta0)),
                    ("k", self.k.to_string()),
                    ("alpha_achieved", self.alpha_achieved.to_string()),
                    ("min_coverage", self.min_coverage.to_string()),
                    ("lower", self.lower.to_string()),
                    ("upper", self.upper.to_string()),
                    ("statistic", opt(&self.statistic)),
                    ("r_n", opt(&self.r_n)),
                    ("reject", opt(&self.reject)),
                    ("tolerance_status", status),
                    ("tau", tau),
                    ("warnings", self.warnings.len().to_string()),
                ])
            }
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "robust median {}", self.command);
                let _ =
                    writeln!(s, "  n = {}, alpha = {}, eps = {}, rule = {}", self.n, self.alpha, self.eps, self.rule);
                if let Some(t0) = self.theta0 {
                    let _ = writeln!(s, "  theta0 = {t0}");
                }
                let _ = writeln!(s, "  k = {}, worst-case level alpha* = {:.6}", self.k, self.alpha_achieved);
                let _ = writeln!(
                    s,
                    "  interval [x_({}), x_({})) = [{}, {})",
                    self.k + 1,
                    self.n - self.k,
                    self.lower,
                    self.upper
                );
                let _ = writeln!(s, "  exact minimum coverage = {:.6}", self.min_coverage);
                if let (Some(t), Some(r), Some(rej)) = (self.statistic, self.r_n, self.reject) {
                    let _ = writeln!(s, "  sign statistic T = {t}, r_n = {r}");
                    let _ = writeln!(s, "  decision: {}", if rej { "reject H0" } else { "do not reject H0" });
                }
                if let Some(tol) = &self.tolerance {
                    let _ = writeln!(s, "  contamination tolerance: {tol}");
                }
                for w in &self.warnings {
                    let _ = writeln!(s, "  warning: {w}");
                }
                let _ = writeln!(s, "  note: {}", self.convention);
                s
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToleranceReport {
    pub n: u64,
    pub statistic: u64,
    pub r_n: u64,
    pub alpha: f64,
    /// Worst-case p-value with no contamination allowed.
    pub p_value_clean: f64,
    pub tolerance: Tolerance,
}

impl ToleranceReport {
    pub fn new(n: u64, statistic: u64, alpha: f64) -> Result<Self> {
        let tolerance = contamination_tolerance(n, statistic, alpha)?;
        Ok(ToleranceReport {
            n,
            statistic,
            r_n: statistic.min(n - statistic),
            alpha,
            p_value_clean: robust_p_value(n, statistic, 0.0)?,
            tolerance,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let (status, tau) = tolerance_fields(&Some(self.tolerance));
                csv_record(&[
                    ("n", self.n.to_string()),
                    ("statistic", self.statistic.to_string()),
                    ("r_n", self.r_n.to_string()),
                    ("alpha", self.alpha.to_string()),
                    ("p_value_clean", self.p_value_clean.to_string()),
                    ("tolerance_status", status),
                    ("tau", tau),
                ])
            }
            Format::Text => format!(
                "contamination tolerance\n  n = {}, T = {}, r_n = {}, alpha = {}\n  clean worst-case p-value = {:.6}\n  tolerance: {}\n",
                self.n, self.statistic, self.r_n, self.alpha, self.p_value_clean, self.tolerance
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub n: u64,
    pub k: u64,
    pub eps: f64,
    pub alpha_star: f64,
    pub min_coverage: f64,
}

impl CoverageReport {
    pub fn new(n: u64, k: u64, eps: f64) -> Result<Self> {
        let a = alpha_star(n, k, eps)?;
        Ok(CoverageReport { n, k, eps, alpha_star: a, min_coverage: 1.0 - a })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => csv_record(&[
                ("n", self.n.to_string()),
                ("k", self.k.to_string()),
                ("eps", self.eps.to_string()),
                ("alpha_star", self.alpha_star.to_string()),
                ("min_coverage", self.min_coverage.to_string()),
            ]),
            Format::Text => format!(
                "minimum coverage of [x_({}), x_({}))\n  n = {}, k = {}, eps = {}\n  alpha* = {:.6}\n  minimum coverage = {:.6}\n",
                self.k + 1,
                self.n - self.k,
                self.n,
                self.k,
                self.eps,
                self.alpha_star,
                self.min_coverage
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthReport {
    pub distribution: TargetDistribution,
    pub eps: f64,
    pub delta: f64,
    pub max_asymptotic_length: Extent,
    pub consistency_distance: Extent,
    pub length_breakdown: f64,
    pub power_breakdown: f64,
    pub is_length_robust: bool,
    pub is_power_robust: bool,
    pub optimal_lower: f64,
    pub optimal_upper: f64,
    /// Only defined for the normal family.
    pub parametric_length: Option<f64>,
}

impl LengthReport {
    pub fn new(dist: TargetDistribution, eps: f64, delta: f64) -> Result<Self> {
        let (optimal_lower, optimal_upper) = optimal_limit_bounds(&dist, eps)?;
        let parametric = match dist {
            TargetDistribution::Normal { sigma, .. } => Some(sigma * parametric_length(eps)?),
            _ => None,
        };
        Ok(LengthReport {
            distribution: dist,
            eps,
            delta,
            max_asymptotic_length: max_asymptotic_length(&dist, eps, delta)?,
            consistency_distance: consistency_distance(&dist, eps, delta)?,
            length_breakdown: length_breakdown(eps)?,
            power_breakdown: power_breakdown(eps)?,
            is_length_robust: is_length_robust(eps),
            is_power_robust: is_power_robust(eps),
            optimal_lower,
            optimal_upper,
            parametric_length: parametric,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let ext = |e: &Extent| e.finite().map(|v| v.to_string()).unwrap_or_else(|| "inf".into());
        match format {
            Format::Json => json(self),
            Format::Csv => csv_record(&[
                ("eps", self.eps.to_string()),
                ("delta", self.delta.to_string()),
                ("max_asymptotic_length", ext(&self.max_asymptotic_length)),
                ("consistency_distance", ext(&self.consistency_distance)),
                ("length_breakdown", self.length_breakdown.to_string()),
                ("power_breakdown", self.power_breakdown.to_string()),
                ("is_length_robust", self.is_length_robust.to_string()),
                ("is_power_robust", self.is_power_robust.to_string()),
                ("optimal_lower", self.optimal_lower.to_string()),
                ("optimal_upper", self.optimal_upper.to_string()),
                ("parametric_length", opt(&self.parametric_length)),
            ]),
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "asymptotic robustness of the robust median interval");
                let _ = writeln!(s, "  target = {:?}", self.distribution);
                let _ = writeln!(s, "  design eps = {}, actual delta = {}", self.eps, self.delta);
                let _ = writeln!(s, "  maximum asymptotic length = {}", self.max_asymptotic_length);
                let _ = writeln!(s, "  consistency distance = {}", self.consistency_distance);
                let _ = writeln!(
                    s,
                    "  length/power breakdown point = {} (robust at delta = eps: {})",
                    self.length_breakdown, self.is_length_robust
                );
                let _ = writeln!(s, "  optimal limiting endpoints = ({}, {})", self.optimal_lower, self.optimal_upper);
                if let Some(p) = self.parametric_length {
                    let _ = writeln!(s, "  parametric robust interval limiting length = {p}");
                }
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines_columns_and_comments() {
        let v = parse_data("# header\n1.5\n\n-2, a, b\n 3e2 \n").unwrap();
        assert_eq!(v, vec![1.5, -2.0, 300.0]);
    }

    #[test]
    fn parse_error_names_line() {
        match parse_data("1\n2\nthree\n") {
            Err(Error::Parse { line, text }) => {
                assert_eq!(line, 3);
                assert_eq!(text, "three");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_data("1\nNaN\n"), Err(Error::Data(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Domain("x".into())), EXIT_DOMAIN);
        assert_eq!(exit_code(&Error::Data("x".into())), EXIT_DATA);
        assert_eq!(exit_code(&Error::Parse { line: 1, text: "x".into() }), EXIT_DATA);
    }

    #[test]
    fn interval_and_test_agree() {
        let s = Sample::new((1..=10).map(f64::from).collect()).unwrap();
        let iv = AnalysisReport::interval(&s, 0.05, 0.0, SelectionRule::Nearest).unwrap();
        for theta0 in [0.5, 1.0, 2.5, 5.5, 9.0, 9.5, 10.0, 11.0] {
            let t = AnalysisReport::test(&s, theta0, 0.05, 0.0, SelectionRule::Nearest).unwrap();
            assert_eq!((t.lower, t.upper), (iv.lower, iv.upper));
            if s.tie_count_at(theta0) == 0 {
                assert_eq!(t.reject.unwrap(), !(iv.lower <= theta0 && theta0 < iv.upper));
            }
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use robust_median::cli::{exit_code, load_sample, AnalysisReport, CoverageReport, LengthReport, ToleranceReport};
use robust_median::mc::Mechanism;
use robust_median::tables::{run_table, Format, TableRequest};
use robust_median::{sign_statistic, Error, SelectionRule, TargetDistribution};

/// Contamination-robust confidence intervals and sign tests for the median.
#[derive(Parser)]
#[command(name = "robust-median", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Robust confidence interval for the median of a data file.
    Interval(IntervalArgs),
    /// Robust two-sided sign test of H0: median = theta0.
    Test(TestArgs),
    /// Contamination tolerance of a sign-test rejection.
    Tolerance(ToleranceArgs),
    /// Exact minimum coverage of [x_(k+1), x_(n-k)) under eps-contamination.
    Coverage(CoverageArgs),
    /// Asymptotic length, breakdown and power measures.
    Length(LengthArgs),
    /// Reproduce one of the coverage/length tables.
    Table(TableArgs),
}

#[derive(Args)]
struct DesignArgs {
    /// Nominal two-sided level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Design contamination fraction in [0, 0.5).
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// How k is chosen: nearest (closest achievable level) or conservative.
    #[arg(long, default_value = "nearest")]
    rule: SelectionRule,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct IntervalArgs {
    /// One number per line (or first CSV column); '#' lines are ignored.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    design: DesignArgs,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    theta0: f64,
    #[command(flatten)]
    design: DesignArgs,
}

#[derive(Args)]
struct ToleranceArgs {
    /// Data file; requires --theta0.
    #[arg(long, requires = "theta0", conflicts_with_all = ["n", "t"])]
    data: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    theta0: Option<f64>,
    /// Sample size, with --t instead of a data file.
    #[arg(long, requires = "t")]
    n: Option<u64>,
    /// Observed sign statistic.
    #[arg(long, requires = "n")]
    t: Option<u64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct LengthArgs {
    /// normal, laplace, cauchy, logistic or uniform.
    #[arg(long, default_value = "normal")]
    dist: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    loc: f64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Actual contamination fraction.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    which: u8,
    #[arg(long, default_value_t = robust_median::mc::DEFAULT_REPS)]
    reps: usize,
    #[arg(long, env = "ROBUST_MEDIAN_SEED", default_value_t = 1)]
    seed: u64,
    /// Location y of the point-mass contamination standing in for +infinity.
    #[arg(long, default_value_t = robust_median::mc::DEFAULT_CONTAMINATION_OFFSET, allow_negative_numbers = true)]
    contam_location: f64,
    /// bernoulli (each observation contaminated with probability eps) or fixed.
    #[arg(long, default_value = "bernoulli")]
    mechanism: Mechanism,
    /// Comma-separated sample sizes overriding the default grid.
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Comma-separated contamination fractions overriding the default grid.
    #[arg(long, value_delimiter = ',')]
    eps_grid: Option<Vec<f64>>,
    /// Worker threads for the simulations (results do not depend on it).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "text")]
    format: Format,
}

fn run(cli: Cli) -> Result<String, Error> {
    Ok(match cli.command {
        Command::Interval(a) => {
            let sample = load_sample(&a.data)?;
            AnalysisReport::interval(&sample, a.design.alpha, a.design.eps, a.design.rule)?.render(a.design.format)
        }
        Command::Test(a) => {
            let sample = load_sample(&a.data)?;
            AnalysisReport::test(&sample, a.theta0, a.design.alpha, a.design.eps, a.design.rule)?
                .render(a.design.format)
        }
        Command::Tolerance(a) => {
            let (n, t) = match (a.data, a.theta0, a.n, a.t) {
                (Some(path), Some(theta0), _, _) => {
                    let sample = load_sample(&path)?;
                    (sample.len() as u64, sign_statistic(&sample, theta0).t)
                }
                (None, _, Some(n), Some(t)) => (n, t),
                _ => return Err(Error::Domain("give either --data with --theta0, or --n with --t".into())),
            };
            ToleranceReport::new(n, t, a.alpha)?.render(a.format)
        }
        Command::Coverage(a) => CoverageReport::new(a.n, a.k, a.eps)?.render(a.format),
        Command::Length(a) => {
            let dist = TargetDistribution::from_name(&a.dist, a.loc, a.scale)?;
            LengthReport::new(dist, a.eps, a.delta)?.render(a.format)
        }
        Command::Table(a) => {
            let mut req = TableRequest::new(a.which)?;
            req.reps = a.reps;
            req.seed = a.seed;
            req.contamination_value = a.contam_location;
            req.mechanism = a.mechanism;
            req.workers = a.workers;
            if let Some(g) = a.n_grid {
                req.n_grid = g;
            }
            if let Some(g) = a.eps_grid {
                req.eps_grid = g;
            }
            run_table(&req)?.render(a.format)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

use thiserror::Error;

/// Errors produced by the inference routines and the data loader.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data could not be used (empty, too short, non-finite).
    #[error("data error: {0}")]
    Data(String),

    /// A line of a data file could not be parsed as a number.
    #[error("line {line}: cannot parse {text:?} as a number")]
    Parse { line: usize, text: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Checks a design contamination fraction lies in `[0, 1/2)`.
pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..0.5).contains(&eps) {
        return domain(format!("contamination fraction {eps} not in [0, 0.5)"));
    }
    Ok(())
}

pub(crate) fn check_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("level {alpha} not in (0, 1)"));
    }
    Ok(())
}

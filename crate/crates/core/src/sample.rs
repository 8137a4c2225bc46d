use crate::error::{Error, Result};

/// An immutable dataset with its order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    /// Requires at least one value and all values finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("sample is empty".into()));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::Data(format!("value {} at position {} is not finite", values[i], i + 1)));
        }
        let mut sorted = values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(Sample { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// The `i`-th order statistic, 1-based: `order_stat(1)` is the minimum.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.sorted[i - 1]
    }

    /// Number of observations exactly equal to `theta`.
    pub fn tie_count_at(&self, theta: f64) -> usize {
        let lo = self.sorted.partition_point(|&x| x < theta);
        let hi = self.sorted.partition_point(|&x| x <= theta);
        hi - lo
    }

    /// Number of observations strictly greater than `theta`.
    pub fn count_above(&self, theta: f64) -> usize {
        self.len() - self.sorted.partition_point(|&x| x <= theta)
    }
}

use serde::Serialize;

use super::StatsError;

/// Finite real-valued measurements with at least two entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Result<Self, StatsError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(StatsError::NonFinite { index, value });
        }
        if values.len() < 2 {
            return Err(StatsError::TooFewSamples {
                needed: 2,
                got: values.len(),
            });
        }
        Ok(SampleSet { values })
    }

    /// Keeps the finite values and reports how many were dropped.
    pub fn from_finite(values: impl IntoIterator<Item = f64>) -> (Result<Self, StatsError>, usize) {
        let mut dropped = 0;
        let kept = values
            .into_iter()
            .filter(|v| {
                let keep = v.is_finite();
                dropped += usize::from(!keep);
                keep
            })
            .collect();
        (Self::new(kept), dropped)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values).expect("sample sets are never empty")
    }

    pub fn variance(&self) -> f64 {
        variance(&self.values).expect("sample sets hold at least two values")
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Applies `f` to every value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, StatsError> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

pub fn mean(values: &[f64]) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Unbiased sample variance, two-pass with the rounding-error correction term.
pub fn variance(values: &[f64]) -> Result<f64, StatsError> {
    let n = values.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples { needed: 2, got: n });
    }
    let m = mean(values)?;
    let (sq, lin) = values.iter().fold((0.0, 0.0), |(sq, lin), &v| {
        let d = v - m;
        (sq + d * d, lin + d)
    });
    let n = n as f64;
    Ok(((sq - lin * lin / n) / (n - 1.0)).max(0.0))
}

//! Mean squared error and peak signal-to-noise ratio for 8-bit images.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::image::GrayImage;

/// Peak sample value of an 8-bit image.
pub const MAX_VALUE: f64 = 255.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("image dimensions differ: {}x{} vs {}x{}", .left.0, .left.1, .right.0, .right.1)]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
}

/// Which PSNR formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsnrVariant {
    /// `10 log10(MAX^2 / MSE)`.
    #[default]
    Standard,
    /// `20 log10(MAX^2 / sqrt(MSE))`, which exceeds the standard form by
    /// `20 log10(MAX)` dB.
    AsWritten,
}

impl fmt::Display for PsnrVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PsnrVariant::Standard => "standard",
            PsnrVariant::AsWritten => "as-written",
        })
    }
}

impl FromStr for PsnrVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(PsnrVariant::Standard),
            "as-written" => Ok(PsnrVariant::AsWritten),
            other => Err(format!(
                "unknown PSNR variant {other:?} (expected standard or as-written)"
            )),
        }
    }
}

fn check_dims(i: &GrayImage, k: &GrayImage) -> Result<(), MetricsError> {
    if i.dimensions() != k.dimensions() {
        return Err(MetricsError::DimensionMismatch {
            left: i.dimensions(),
            right: k.dimensions(),
        });
    }
    Ok(())
}

/// Sum of squared sample differences, exact in integers.
pub fn squared_error_sum(i: &GrayImage, k: &GrayImage) -> Result<u64, MetricsError> {
    check_dims(i, k)?;
    Ok(i.pixels()
        .iter()
        .zip(k.pixels())
        .map(|(&a, &b)| {
            let d = u64::from(a.abs_diff(b));
            d * d
        })
        .sum())
}

pub fn mse(i: impl AsRef<GrayImage>, k: impl AsRef<GrayImage>) -> Result<f64, MetricsError> {
    let (i, k) = (i.as_ref(), k.as_ref());
    let sum = squared_error_sum(i, k)?;
    Ok(sum as f64 / i.len() as f64)
}

/// PSNR in decibels; `f64::INFINITY` when the images are identical.
pub fn psnr(
    i: impl AsRef<GrayImage>,
    k: impl AsRef<GrayImage>,
    variant: PsnrVariant,
) -> Result<f64, MetricsError> {
    let err = mse(i, k)?;
    Ok(psnr_from_mse(err, variant))
}

pub fn psnr_from_mse(mse: f64, variant: PsnrVariant) -> f64 {
    if mse == 0.0 {
        return f64::INFINITY;
    }
    let standard = 10.0 * (MAX_VALUE * MAX_VALUE / mse).log10();
    match variant {
        PsnrVariant::Standard => standard,
        PsnrVariant::AsWritten => standard + 20.0 * MAX_VALUE.log10(),
    }
}

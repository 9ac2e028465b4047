use std::f64::consts::PI;

use serde::Serialize;

use super::{SampleSet, StatsError};

pub const KDE_GRID_POINTS: usize = 512;

/// Gaussian kernel density estimate evaluated on an even grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityCurve {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Grid point with the largest density.
    pub fn mode(&self) -> f64 {
        let idx = self
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("grid is never empty");
        self.grid[idx]
    }
}

/// Linear-interpolation sample quantile on sorted data (R's default, type 7).
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule of thumb, `0.9 min(sd, IQR / 1.34) n^(-1/5)`.
///
/// Falls back to the standard deviation when the interquartile range is zero.
pub fn silverman_bandwidth(s: &SampleSet) -> Result<f64, StatsError> {
    let sd = s.std_dev();
    if sd == 0.0 {
        return Err(StatsError::Degenerate(
            "density estimate needs nonzero spread",
        ));
    }
    let mut sorted = s.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (s.len() as f64).powf(-0.2))
}

/// Density over `[min - 3h, max + 3h]` at [`KDE_GRID_POINTS`] points.
pub fn kde(s: &SampleSet) -> Result<DensityCurve, StatsError> {
    let h = silverman_bandwidth(s)?;
    let (min, max) = s
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let lo = min - 3.0 * h;
    let step = (max + 3.0 * h - lo) / (KDE_GRID_POINTS - 1) as f64;
    let norm = 1.0 / (s.len() as f64 * h * (2.0 * PI).sqrt());

    let grid: Vec<f64> = (0..KDE_GRID_POINTS).map(|i| lo + i as f64 * step).collect();
    let density = grid
        .iter()
        .map(|&x| {
            norm * s
                .values()
                .iter()
                .map(|&v| {
                    let z = (x - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
        })
        .collect();
    Ok(DensityCurve {
        grid,
        density,
        bandwidth: h,
    })
}

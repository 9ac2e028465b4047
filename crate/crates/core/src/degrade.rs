//! Deterministic salt-and-pepper degradation of binary masks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::image::BinaryMask;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("noise density {0} is outside [0, 1]")]
    InvalidDensity(f64),
}

/// SplitMix64 generator.
///
/// Small, fully specified, and reproducible across languages, which is all
/// noise injection needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) from the top 53 bits of the next output.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Probability that a pixel is hit, and the generator seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub density: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn new(density: f64, seed: u64) -> Result<Self, NoiseError> {
        let cfg = NoiseConfig { density, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        if (0.0..=1.0).contains(&self.density) {
            Ok(())
        } else {
            Err(NoiseError::InvalidDensity(self.density))
        }
    }
}

/// Applies salt-and-pepper noise in row-major order.
///
/// Each pixel consumes exactly one draw `u`: `u < density/2` forces 0,
/// `u < density` forces 255, anything else leaves the pixel alone. The noise
/// field therefore depends only on seed, density and pixel count.
pub fn salt_pepper(mask: &BinaryMask, cfg: &NoiseConfig) -> Result<BinaryMask, NoiseError> {
    cfg.validate()?;
    let mut rng = Prng::new(cfg.seed);
    let half = cfg.density / 2.0;
    let mut out = mask.as_image().clone();
    for p in out.pixels_mut() {
        let u = rng.next_f64();
        if u < half {
            *p = BinaryMask::BACKGROUND;
        } else if u < cfg.density {
            *p = BinaryMask::FOREGROUND;
        }
    }
    Ok(BinaryMask::from_image_unchecked(out))
}

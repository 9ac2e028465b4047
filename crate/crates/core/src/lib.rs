//! Tests whether PSNR rewards good segmentation masks.
//!
//! A ground-truth contour drawing is filled into an ideal binary mask, a
//! degraded copy is produced with salt-and-pepper noise, and both are scored
//! by PSNR against the source image. Over a dataset the two score sets are
//! compared with a variance-gated two-sample t test.
//!
//! ```
//! use segpsnr::image::GrayImage;
//! use segpsnr::metrics::{psnr, PsnrVariant};
//!
//! let a = GrayImage::filled(4, 4, 0).unwrap();
//! let b = GrayImage::filled(4, 4, 255).unwrap();
//! assert_eq!(psnr(&a, &b, PsnrVariant::Standard).unwrap(), 0.0);
//! ```

pub mod degrade;
mod float_serde;
pub mod harness;
pub mod image;
pub mod maskgen;
pub mod metrics;
pub mod pnm;
pub mod stats;
pub mod synthetic;

pub use degrade::{salt_pepper, NoiseConfig, NoiseError, Prng};
pub use harness::{run_experiment, ExperimentConfig, ExperimentReport, HarnessError, Verdict};
pub use image::{as_binary, to_gray, BinaryMask, GrayImage, ImageError};
pub use maskgen::{binarize, fill_ground_truth, FillConfig};
pub use metrics::{mse, psnr, MetricsError, PsnrVariant};
pub use pnm::{read_pnm, write_pnm, PnmError, PnmFormat};
pub use stats::{Alternative, SampleSet, StatsError, TestName, TestReport};

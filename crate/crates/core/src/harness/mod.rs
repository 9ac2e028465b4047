//! Dataset ingestion, the per-image pipeline, experiment orchestration and
//! report files.
//!
//! For each image `I` with ground truth `G`: fill `G` into a region mask,
//! threshold it into the ideal mask `B`, corrupt `B` with salt-and-pepper
//! noise into `B'`, and record `psnr(I, B)` and `psnr(I, B')`. The two PSNR
//! sets are then compared with the variance-gated mean test.

mod dataset;
mod pipeline;
mod report;

pub use dataset::{scan_dataset, Dataset, DatasetEntry, GROUND_TRUTH_DIR, IMAGES_DIR};
pub use pipeline::{
    analyze, entry_seed, process_entry, run_experiment, Analysis, ExperimentConfig,
    ExperimentReport, ImageResult, SampleSummary, SkippedEntry, Verdict,
};
pub use report::{
    read_samples_csv, write_density_tsv, write_reports, DENSITY_P_FILE, DENSITY_P_PRIME_FILE,
    REPORT_FILE, SAMPLES_FILE,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::degrade::NoiseError;
use crate::metrics::MetricsError;
use crate::pnm::PnmError;
use crate::stats::StatsError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("dataset directory {} is missing", .0.display())]
    MissingDirectory(PathBuf),
    #[error("no image/ground-truth pairs found; {images_dir} holds [{images}], {gt_dir} holds [{ground_truth}]")]
    EmptyPairing {
        images_dir: String,
        gt_dir: String,
        images: String,
        ground_truth: String,
    },
    #[error("duplicate dataset id {id:?} in {}", .dir.display())]
    DuplicateId { id: String, dir: PathBuf },
    #[error("{}: {source}", .path.display())]
    Decode {
        path: PathBuf,
        #[source]
        source: PnmError,
    },
    #[error("entry {id}: image is {}x{} but ground truth is {}x{}", .image.0, .image.1, .ground_truth.0, .ground_truth.1)]
    DimensionMismatch {
        id: String,
        image: (usize, usize),
        ground_truth: (usize, usize),
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{}:{line}: {message}", .path.display())]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("serializing report: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

/// 64-bit FNV-1a over the bytes of `data`.
pub fn fnv1a64(data: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    data.iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

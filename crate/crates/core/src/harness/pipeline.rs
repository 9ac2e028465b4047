use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{scan_dataset, DatasetEntry};
use super::report::write_reports;
use super::{fnv1a64, HarnessError};
use crate::degrade::{salt_pepper, NoiseConfig};
use crate::float_serde;
use crate::image::GrayImage;
use crate::maskgen::{binarize, fill_ground_truth, FillConfig};
use crate::metrics::{psnr, PsnrVariant};
use crate::pnm::read_pnm;
use crate::stats::{
    kde, t_sf, variance_gated_mean_test, Alternative, DensityCurve, GatedComparison, SampleSet,
    StatsError, TestName, TestReport,
};

/// Everything that determines an experiment's outcome, plus where to write it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset_root: PathBuf,
    pub noise_density: f64,
    pub seed: u64,
    pub psnr_variant: PsnrVariant,
    pub alpha: f64,
    /// Alternative for the mean test, stated for the clean set relative to the noisy one.
    pub alternative: Alternative,
    pub fill: FillConfig,
    /// Not part of the experiment's identity, so it stays out of the report.
    #[serde(skip)]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(dataset_root: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            dataset_root: dataset_root.into(),
            noise_density: 0.5,
            seed: 1,
            psnr_variant: PsnrVariant::Standard,
            alpha: 0.05,
            alternative: Alternative::Less,
            fill: FillConfig::default(),
            output_dir: output_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(HarnessError::Config(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        NoiseConfig::new(self.noise_density, self.seed)?;
        Ok(())
    }
}

/// Noise seed for one entry: independent of processing order.
pub fn entry_seed(experiment_seed: u64, id: &str) -> u64 {
    experiment_seed ^ fnv1a64(id.as_bytes())
}

fn load(path: &Path) -> Result<GrayImage, HarnessError> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    read_pnm(&bytes).map_err(|source| HarnessError::Decode {
        path: path.to_path_buf(),
        source,
    })
}

/// PSNR of the ideal mask and of its degraded copy against the source image.
pub fn process_entry(
    entry: &DatasetEntry,
    cfg: &ExperimentConfig,
) -> Result<(f64, f64), HarnessError> {
    let image = load(&entry.image_path)?;
    let truth = load(&entry.gt_path)?;
    if image.dimensions() != truth.dimensions() {
        return Err(HarnessError::DimensionMismatch {
            id: entry.id.clone(),
            image: image.dimensions(),
            ground_truth: truth.dimensions(),
        });
    }
    let filled = fill_ground_truth(&truth, &cfg.fill);
    let ideal = binarize(&filled, cfg.fill.binarize_threshold);
    let noise = NoiseConfig::new(cfg.noise_density, entry_seed(cfg.seed, &entry.id))?;
    let degraded = salt_pepper(&ideal, &noise)?;
    Ok((
        psnr(&image, &ideal, cfg.psnr_variant)?,
        psnr(&image, &degraded, cfg.psnr_variant)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageResult {
    pub id: String,
    #[serde(with = "float_serde")]
    pub psnr_clean: f64,
    #[serde(with = "float_serde")]
    pub psnr_noisy: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedEntry {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    /// Finite samples kept.
    pub n: usize,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub excluded_infinite: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Clean masks score significantly higher than degraded ones.
    MetricConsistent,
    /// Degraded masks score significantly higher than clean ones.
    MetricParadoxical,
    Inconclusive,
}

/// Statistical comparison of the clean and degraded PSNR sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub p_summary: SampleSummary,
    pub p_prime_summary: SampleSummary,
    pub comparison: Option<GatedComparison>,
    #[serde(skip)]
    pub densities: Option<(DensityCurve, DensityCurve)>,
    pub verdict: Verdict,
    pub verdict_reason: String,
}

fn summarize(values: impl IntoIterator<Item = f64>) -> (Option<SampleSet>, SampleSummary) {
    let (set, excluded_infinite) = SampleSet::from_finite(values);
    match set {
        Ok(set) => {
            let summary = SampleSummary {
                n: set.len(),
                mean: Some(set.mean()),
                variance: Some(set.variance()),
                excluded_infinite,
            };
            (Some(set), summary)
        }
        Err(StatsError::TooFewSamples { got, .. }) => (
            None,
            SampleSummary {
                n: got,
                mean: None,
                variance: None,
                excluded_infinite,
            },
        ),
        Err(other) => unreachable!("finite filtering leaves only size errors: {other}"),
    }
}

fn decide(mean_test: &TestReport) -> Result<(Verdict, String), StatsError> {
    let (clean, noisy) = (mean_test.mean_x, mean_test.mean_y);
    if mean_test.reject_null && noisy > clean {
        return Ok((
            Verdict::MetricParadoxical,
            format!(
                "degraded masks score higher: mean {noisy:.6} dB vs {clean:.6} dB, p = {:.4e}",
                mean_test.p_value
            ),
        ));
    }
    // the clean-better direction, evaluated from the same statistic
    let p_clean_better = t_sf(mean_test.statistic, mean_test.df1)?;
    if clean > noisy && p_clean_better < mean_test.alpha {
        return Ok((
            Verdict::MetricConsistent,
            format!(
                "ideal masks score higher: mean {clean:.6} dB vs {noisy:.6} dB, one-sided p = {p_clean_better:.4e}"
            ),
        ));
    }
    Ok((
        Verdict::Inconclusive,
        format!(
            "no significant difference in the tested direction (p = {:.4}, means {clean:.6} / {noisy:.6})",
            mean_test.p_value
        ),
    ))
}

/// Builds both sample sets (dropping infinities), runs the gated mean test
/// and the density estimates, and reaches a verdict.
pub fn analyze(
    results: &[ImageResult],
    alpha: f64,
    alternative: Alternative,
) -> Result<Analysis, HarnessError> {
    let (p, p_summary) = summarize(results.iter().map(|r| r.psnr_clean));
    let (p_prime, p_prime_summary) = summarize(results.iter().map(|r| r.psnr_noisy));
    for (name, s) in [("P", &p_summary), ("P'", &p_prime_summary)] {
        if s.excluded_infinite > 0 {
            warn!(
                "{name}: excluded {} infinite PSNR values",
                s.excluded_infinite
            );
        }
    }
    let inconclusive = |reason: String| Analysis {
        p_summary: p_summary.clone(),
        p_prime_summary: p_prime_summary.clone(),
        comparison: None,
        densities: None,
        verdict: Verdict::Inconclusive,
        verdict_reason: reason,
    };

    let (Some(p), Some(p_prime)) = (p, p_prime) else {
        return Ok(inconclusive(format!(
            "need at least 2 finite samples per set, have {} and {}",
            p_summary.n, p_prime_summary.n
        )));
    };
    let comparison = match variance_gated_mean_test(&p, &p_prime, alpha, alternative) {
        Ok(c) => c,
        Err(StatsError::Degenerate(why)) => return Ok(inconclusive(why.to_owned())),
        Err(e) => return Err(e.into()),
    };
    let densities = match (kde(&p), kde(&p_prime)) {
        (Ok(a), Ok(b)) => Some((a, b)),
        (a, b) => {
            let why = a
                .err()
                .or(b.err())
                .map(|e| e.to_string())
                .unwrap_or_default();
            warn!("density curves skipped: {why}");
            None
        }
    };
    let (verdict, verdict_reason) = decide(&comparison.mean_test)?;
    Ok(Analysis {
        p_summary,
        p_prime_summary,
        comparison: Some(comparison),
        densities,
        verdict,
        verdict_reason,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Successfully processed entries, sorted by id.
    pub per_image: Vec<ImageResult>,
    pub skipped: Vec<SkippedEntry>,
    pub unpaired: Vec<PathBuf>,
    pub analysis: Analysis,
}

impl ExperimentReport {
    pub fn f_report(&self) -> Option<&TestReport> {
        self.analysis.comparison.as_ref().map(|c| &c.f_test)
    }

    pub fn mean_report(&self) -> Option<&TestReport> {
        self.analysis.comparison.as_ref().map(|c| &c.mean_test)
    }

    pub fn chosen_mean_test(&self) -> Option<TestName> {
        self.analysis
            .comparison
            .as_ref()
            .map(|c| c.chosen_mean_test)
    }

    pub fn verdict(&self) -> Verdict {
        self.analysis.verdict
    }
}

/// Runs the whole protocol over a dataset and writes every artifact to
/// `cfg.output_dir`.
///
/// Entries are processed in parallel; results are a pure function of the
/// configuration and dataset bytes.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let dataset = scan_dataset(&cfg.dataset_root)?;
    info!("processing {} image pairs", dataset.entries.len());

    let outcomes: Vec<_> = dataset
        .entries
        .par_iter()
        .map(|e| (e, process_entry(e, cfg)))
        .collect();

    let mut per_image = Vec::with_capacity(outcomes.len());
    let mut skipped = Vec::new();
    for (entry, outcome) in outcomes {
        match outcome {
            Ok((psnr_clean, psnr_noisy)) => per_image.push(ImageResult {
                id: entry.id.clone(),
                psnr_clean,
                psnr_noisy,
            }),
            Err(e) => {
                warn!("skipping {}: {e}", entry.id);
                skipped.push(SkippedEntry {
                    id: entry.id.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }

    let analysis = analyze(&per_image, cfg.alpha, cfg.alternative)?;
    let report = ExperimentReport {
        config: cfg.clone(),
        per_image,
        skipped,
        unpaired: dataset.unpaired,
        analysis,
    };
    write_reports(&report, &cfg.output_dir)?;
    Ok(report)
}

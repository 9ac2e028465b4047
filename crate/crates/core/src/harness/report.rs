use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::pipeline::{
    ExperimentConfig, ExperimentReport, ImageResult, SampleSummary, SkippedEntry, Verdict,
};
use super::HarnessError;
use crate::float_serde;
use crate::stats::{DensityCurve, TestName, TestReport};

pub const SAMPLES_FILE: &str = "samples.csv";
pub const REPORT_FILE: &str = "report.json";
pub const DENSITY_P_FILE: &str = "density_p.tsv";
pub const DENSITY_P_PRIME_FILE: &str = "density_pprime.tsv";

const SAMPLES_HEADER: [&str; 3] = ["id", "psnr_clean", "psnr_noisy"];

fn format_sample(v: f64) -> String {
    match float_serde::format(v) {
        Some(s) => s.to_owned(),
        None => format!("{v:.6}"),
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    config: &'a ExperimentConfig,
    p_summary: &'a SampleSummary,
    p_prime_summary: &'a SampleSummary,
    f_test: Option<&'a TestReport>,
    chosen_mean_test: Option<TestName>,
    mean_test: Option<&'a TestReport>,
    verdict: Verdict,
    verdict_reason: &'a str,
    processed: usize,
    skipped: &'a [SkippedEntry],
    unpaired: Vec<String>,
}

fn report_json(report: &ExperimentReport) -> Result<String, HarnessError> {
    let root = &report.config.dataset_root;
    let unpaired = report
        .unpaired
        .iter()
        .map(|p| p.strip_prefix(root).unwrap_or(p).display().to_string())
        .collect();
    let view = ReportJson {
        config: &report.config,
        p_summary: &report.analysis.p_summary,
        p_prime_summary: &report.analysis.p_prime_summary,
        f_test: report.f_report(),
        chosen_mean_test: report.chosen_mean_test(),
        mean_test: report.mean_report(),
        verdict: report.analysis.verdict,
        verdict_reason: &report.analysis.verdict_reason,
        processed: report.per_image.len(),
        skipped: &report.skipped,
        unpaired,
    };
    let mut text = serde_json::to_string_pretty(&view)?;
    text.push('\n');
    Ok(text)
}

fn write_samples_csv(path: &Path, rows: &[ImageResult]) -> Result<(), HarnessError> {
    let csv_err = |e: csv::Error| HarnessError::Csv {
        path: path.to_path_buf(),
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(SAMPLES_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.id.clone(),
            format_sample(r.psnr_clean),
            format_sample(r.psnr_noisy),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Writes `x<TAB>density` rows; an absent curve leaves only the header.
pub fn write_density_tsv(path: &Path, curve: Option<&DensityCurve>) -> Result<(), HarnessError> {
    let mut text = String::from("x\tdensity\n");
    if let Some(c) = curve {
        for (x, d) in c.grid.iter().zip(&c.density) {
            text.push_str(&format!("{x}\t{d}\n"));
        }
    }
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

/// Writes all four artifacts into `dir`, creating it if needed.
pub fn write_reports(report: &ExperimentReport, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    write_samples_csv(&dir.join(SAMPLES_FILE), &report.per_image)?;
    let json_path = dir.join(REPORT_FILE);
    fs::write(&json_path, report_json(report)?).map_err(|e| HarnessError::io(&json_path, e))?;
    let (p, p_prime) = match &report.analysis.densities {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    write_density_tsv(&dir.join(DENSITY_P_FILE), p)?;
    write_density_tsv(&dir.join(DENSITY_P_PRIME_FILE), p_prime)?;
    Ok(())
}

/// Reads a `samples.csv` back; `inf`, `-inf` and `nan` are accepted.
pub fn read_samples_csv(path: &Path) -> Result<Vec<ImageResult>, HarnessError> {
    let fail = |line: u64, message: String| HarnessError::Csv {
        path: PathBuf::from(path),
        line,
        message,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(io) => HarnessError::io(path, io),
            _ => unreachable!(),
        },
        _ => fail(0, e.to_string()),
    })?;
    let header = r.headers().map_err(|e| fail(1, e.to_string()))?;
    if header.iter().ne(SAMPLES_HEADER) {
        return Err(fail(
            1,
            format!(
                "expected header {}, got {}",
                SAMPLES_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record =
            record.map_err(|e| fail(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let number = |i: usize| -> Result<f64, HarnessError> {
            let field = record[i].trim();
            float_serde::parse(field)
                .or_else(|| field.parse().ok())
                .ok_or_else(|| {
                    fail(
                        line,
                        format!("{}: not a number: {field:?}", SAMPLES_HEADER[i]),
                    )
                })
        };
        out.push(ImageResult {
            id: record[0].to_owned(),
            psnr_clean: number(1)?,
            psnr_noisy: number(2)?,
        });
    }
    Ok(out)
}

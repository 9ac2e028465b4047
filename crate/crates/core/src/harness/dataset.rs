use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::HarnessError;

pub const IMAGES_DIR: &str = "images";
pub const GROUND_TRUTH_DIR: &str = "groundtruth";

const PNM_EXTENSIONS: [&str; 3] = ["pgm", "ppm", "pnm"];

/// One source image and its ground-truth contour drawing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub id: String,
    pub image_path: PathBuf,
    pub gt_path: PathBuf,
}

/// Result of scanning a dataset root.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    /// Paired entries, sorted by id.
    pub entries: Vec<DatasetEntry>,
    /// Files present on only one side.
    pub unpaired: Vec<PathBuf>,
}

fn list_pnm(dir: &Path) -> Result<BTreeMap<String, PathBuf>, HarnessError> {
    if !dir.is_dir() {
        return Err(HarnessError::MissingDirectory(dir.to_path_buf()));
    }
    let mut out = BTreeMap::new();
    for item in fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))? {
        let path = item.map_err(|e| HarnessError::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        let is_pnm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| PNM_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
        if !is_pnm {
            continue;
        }
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            warn!("skipping non-UTF-8 file name {}", path.display());
            continue;
        };
        if out.insert(stem.to_owned(), path.clone()).is_some() {
            return Err(HarnessError::DuplicateId {
                id: stem.to_owned(),
                dir: dir.to_path_buf(),
            });
        }
    }
    Ok(out)
}

fn describe(listing: &BTreeMap<String, PathBuf>) -> String {
    listing
        .values()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Pairs `root/images/*` with `root/groundtruth/*` by file stem.
pub fn scan_dataset(root: &Path) -> Result<Dataset, HarnessError> {
    let images_dir = root.join(IMAGES_DIR);
    let gt_dir = root.join(GROUND_TRUTH_DIR);
    let images = list_pnm(&images_dir)?;
    let gt_listing = list_pnm(&gt_dir)?;
    let mut truths = gt_listing.clone();

    let mut dataset = Dataset::default();
    for (id, image_path) in &images {
        match truths.remove(id) {
            Some(gt_path) => dataset.entries.push(DatasetEntry {
                id: id.clone(),
                image_path: image_path.clone(),
                gt_path,
            }),
            None => {
                warn!("{} has no ground truth", image_path.display());
                dataset.unpaired.push(image_path.clone());
            }
        }
    }
    for gt_path in truths.into_values() {
        warn!("{} has no source image", gt_path.display());
        dataset.unpaired.push(gt_path);
    }
    dataset.unpaired.sort();

    if dataset.entries.is_empty() {
        return Err(HarnessError::EmptyPairing {
            images_dir: images_dir.display().to_string(),
            gt_dir: gt_dir.display().to_string(),
            images: describe(&images),
            ground_truth: describe(&gt_listing),
        });
    }
    Ok(dataset)
}

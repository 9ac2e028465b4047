//! Small deterministic datasets for tests, benchmarks and demos.
//!
//! Each pair is a grey ellipse on a gradient background with mild pixel
//! noise, plus a one-pixel contour tracing the ellipse's inner boundary.

use std::fs;
use std::path::Path;

use crate::degrade::Prng;
use crate::harness::{HarnessError, GROUND_TRUTH_DIR, IMAGES_DIR};
use crate::image::GrayImage;
use crate::pnm::{write_pnm, PnmFormat};

pub const WIDTH: usize = 64;
pub const HEIGHT: usize = 48;

fn uniform(rng: &mut Prng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.next_f64()
}

/// One `(image, ground_truth)` pair drawn from `rng`.
pub fn generate_pair(rng: &mut Prng) -> (GrayImage, GrayImage) {
    let cx = uniform(rng, 22.0, 42.0);
    let cy = uniform(rng, 16.0, 32.0);
    let ax = uniform(rng, 8.0, 18.0);
    let ay = uniform(rng, 6.0, 13.0);
    let object = uniform(rng, 20.0, 235.0);
    let base = uniform(rng, 30.0, 200.0);
    let gx = uniform(rng, -1.0, 1.0);
    let gy = uniform(rng, -1.0, 1.0);

    let inside = |x: i64, y: i64| {
        let dx = (x as f64 - cx) / ax;
        let dy = (y as f64 - cy) / ay;
        dx * dx + dy * dy <= 1.0
    };

    let mut jitter = Vec::with_capacity(WIDTH * HEIGHT);
    for _ in 0..WIDTH * HEIGHT {
        jitter.push(uniform(rng, -6.0, 6.0));
    }
    let image = GrayImage::from_fn(WIDTH, HEIGHT, |x, y| {
        let (xi, yi) = (x as i64, y as i64);
        let level = if inside(xi, yi) {
            object
        } else {
            base + gx * x as f64 + gy * y as f64
        };
        (level + jitter[y * WIDTH + x]).round().clamp(0.0, 255.0) as u8
    })
    .expect("fixed nonzero dimensions");

    let truth = GrayImage::from_fn(WIDTH, HEIGHT, |x, y| {
        let (xi, yi) = (x as i64, y as i64);
        let edge = inside(xi, yi)
            && [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .any(|(dx, dy)| !inside(xi + dx, yi + dy));
        if edge {
            255
        } else {
            0
        }
    })
    .expect("fixed nonzero dimensions");
    (image, truth)
}

/// Writes `count` pairs as `root/images/syn_NNN.pgm` and
/// `root/groundtruth/syn_NNN.pgm`.
pub fn write_dataset(root: &Path, count: usize, seed: u64) -> Result<(), HarnessError> {
    let images = root.join(IMAGES_DIR);
    let truths = root.join(GROUND_TRUTH_DIR);
    for dir in [&images, &truths] {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let mut rng = Prng::new(seed);
    for i in 0..count {
        let (image, truth) = generate_pair(&mut rng);
        let name = format!("syn_{i:03}.pgm");
        for (dir, img) in [(&images, &image), (&truths, &truth)] {
            let path = dir.join(&name);
            fs::write(&path, write_pnm(img, PnmFormat::P5))
                .map_err(|e| HarnessError::io(&path, e))?;
        }
    }
    Ok(())
}

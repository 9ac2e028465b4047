//! Ground-truth contour filling and thresholding into binary masks.

use serde::{Deserialize, Serialize};

use crate::image::{BinaryMask, GrayImage};

/// Parameters for turning a contour drawing into a region mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillConfig {
    /// Pixels at or above this value are contour (at or below when inverted).
    pub contour_threshold: u8,
    pub invert_contours: bool,
    /// Threshold applied to the filled mask to obtain the ideal segmentation.
    pub binarize_threshold: u8,
}

impl Default for FillConfig {
    fn default() -> Self {
        FillConfig {
            contour_threshold: 128,
            invert_contours: false,
            binarize_threshold: 127,
        }
    }
}

impl FillConfig {
    fn is_contour(&self, v: u8) -> bool {
        if self.invert_contours {
            v <= self.contour_threshold
        } else {
            v >= self.contour_threshold
        }
    }
}

/// Fills every region enclosed by contours with 255.
///
/// Non-contour pixels 4-connected to the image border become background (0);
/// contour pixels and every enclosed non-contour pixel become 255. Nested
/// contours do not alternate parity.
pub fn fill_ground_truth(g: &GrayImage, cfg: &FillConfig) -> GrayImage {
    let (w, h) = g.dimensions();
    let contour: Vec<bool> = g.pixels().iter().map(|&v| cfg.is_contour(v)).collect();
    let mut outside = vec![false; w * h];
    let mut stack = Vec::new();

    let seed = |idx: usize, outside: &mut [bool], stack: &mut Vec<usize>| {
        if !contour[idx] && !outside[idx] {
            outside[idx] = true;
            stack.push(idx);
        }
    };
    for x in 0..w {
        seed(x, &mut outside, &mut stack);
        seed((h - 1) * w + x, &mut outside, &mut stack);
    }
    for y in 0..h {
        seed(y * w, &mut outside, &mut stack);
        seed(y * w + w - 1, &mut outside, &mut stack);
    }

    while let Some(idx) = stack.pop() {
        let (x, y) = (idx % w, idx / w);
        if x > 0 {
            seed(idx - 1, &mut outside, &mut stack);
        }
        if x + 1 < w {
            seed(idx + 1, &mut outside, &mut stack);
        }
        if y > 0 {
            seed(idx - w, &mut outside, &mut stack);
        }
        if y + 1 < h {
            seed(idx + w, &mut outside, &mut stack);
        }
    }

    let pixels = outside
        .into_iter()
        .map(|out| if out { 0 } else { 255 })
        .collect();
    GrayImage::new(w, h, pixels).expect("same dimensions as the input")
}

/// Pixels strictly above `t` become 255, the rest 0.
pub fn binarize(img: &GrayImage, t: u8) -> BinaryMask {
    let mut out = img.clone();
    for p in out.pixels_mut() {
        *p = if *p > t { 255 } else { 0 };
    }
    BinaryMask::from_image_unchecked(out)
}

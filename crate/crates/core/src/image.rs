//! 8-bit grayscale images and two-valued masks.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("pixel buffer has {actual} samples, expected {width}x{height} = {expected}")]
    BufferLength {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("pixel at (x={x}, y={y}) has value {value}; binary masks only hold 0 or 255")]
    NotBinary { x: usize, y: usize, value: u8 },
}

/// Row-major grid of 8-bit luminance samples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(ImageError::EmptyDimensions { width, height })?;
        if pixels.len() != expected {
            return Err(ImageError::BufferLength {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    /// Image with every sample set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        let len = width.checked_mul(height).unwrap_or(0);
        Self::new(width, height, vec![value; len])
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; images have at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        (x < self.width && y < self.height).then(|| self.pixels[y * self.width + x])
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }
}

impl AsRef<GrayImage> for GrayImage {
    fn as_ref(&self) -> &GrayImage {
        self
    }
}

/// A [`GrayImage`] whose samples are all exactly 0 (background) or 255 (foreground).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask(GrayImage);

impl BinaryMask {
    pub const BACKGROUND: u8 = 0;
    pub const FOREGROUND: u8 = 255;

    /// Wraps an image the caller has already constrained to {0, 255}.
    pub(crate) fn from_image_unchecked(img: GrayImage) -> Self {
        debug_assert!(img.pixels().iter().all(|&p| p == 0 || p == 255));
        BinaryMask(img)
    }

    pub fn as_image(&self) -> &GrayImage {
        &self.0
    }

    pub fn into_image(self) -> GrayImage {
        self.0
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.0.pixels
    }

    pub fn foreground_count(&self) -> usize {
        self.0
            .pixels
            .iter()
            .filter(|&&p| p == Self::FOREGROUND)
            .count()
    }
}

impl AsRef<GrayImage> for BinaryMask {
    fn as_ref(&self) -> &GrayImage {
        &self.0
    }
}

impl TryFrom<GrayImage> for BinaryMask {
    type Error = ImageError;

    fn try_from(img: GrayImage) -> Result<Self, Self::Error> {
        as_binary(img)
    }
}

/// Retypes `img` as a mask, rejecting the first sample (row-major) outside {0, 255}.
pub fn as_binary(img: GrayImage) -> Result<BinaryMask, ImageError> {
    if let Some(idx) = img.pixels.iter().position(|&p| p != 0 && p != 255) {
        return Err(ImageError::NotBinary {
            x: idx % img.width,
            y: idx / img.width,
            value: img.pixels[idx],
        });
    }
    Ok(BinaryMask(img))
}

/// Rec.601 luma, rounded half-up: `round(0.299 r + 0.587 g + 0.114 b)`.
///
/// Evaluated in integer thousandths so the rounding is exact.
pub fn to_gray(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b);
    // weights sum to 1000, so the result never exceeds 255
    ((weighted + 500) / 1000) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gray_conversion_examples() {
        assert_eq!(to_gray(0, 0, 0), 0);
        assert_eq!(to_gray(255, 255, 255), 255);
        assert_eq!(to_gray(0, 255, 0), 150);
        assert_eq!(to_gray(255, 0, 0), 76);
        assert_eq!(to_gray(0, 0, 255), 29);
    }

    #[test]
    fn gray_conversion_is_nearest_integer() {
        for r in (0..=255u8).step_by(3) {
            for g in (0..=255u8).step_by(17) {
                for b in (0..=255u8).step_by(15) {
                    let exact = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
                    let got = f64::from(to_gray(r, g, b));
                    assert!(
                        (got - exact).abs() <= 0.5 + 1e-9,
                        "({r},{g},{b}) -> {got}, exact {exact}"
                    );
                }
            }
        }
        // 0.114 * 250 = 28.5 and 0.587 * 4 + 0.114 * 168 = 21.5 sit exactly on .5
        assert_eq!(to_gray(0, 0, 250), 29);
        assert_eq!(to_gray(0, 4, 168), 22);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(
            GrayImage::new(0, 3, vec![]),
            Err(ImageError::EmptyDimensions { .. })
        ));
        assert!(matches!(
            GrayImage::new(2, 2, vec![0; 3]),
            Err(ImageError::BufferLength {
                expected: 4,
                actual: 3,
                ..
            })
        ));
    }

    #[test]
    fn binary_accepts_zero_and_full() {
        let zeros = GrayImage::filled(4, 3, 0).unwrap();
        assert!(as_binary(zeros).is_ok());

        let img = GrayImage::new(2, 2, vec![0, 255, 255, 0]).unwrap();
        let mask = as_binary(img.clone()).unwrap();
        assert_eq!(mask.as_image(), &img);
        assert_eq!(mask.foreground_count(), 2);
    }

    #[test]
    fn binary_names_first_offending_pixel() {
        let img = GrayImage::new(3, 2, vec![0, 255, 0, 255, 128, 7]).unwrap();
        assert_eq!(
            as_binary(img).unwrap_err(),
            ImageError::NotBinary {
                x: 1,
                y: 1,
                value: 128
            }
        );
    }

    proptest! {
        #[test]
        fn gray_of_equal_channels_is_identity(v in any::<u8>()) {
            prop_assert_eq!(to_gray(v, v, v), v);
        }

        #[test]
        fn gray_is_monotone_per_channel(r in 0u8..255, g in any::<u8>(), b in any::<u8>()) {
            prop_assert!(to_gray(r, g, b) <= to_gray(r + 1, g, b));
            prop_assert!(to_gray(g, r, b) <= to_gray(g, r + 1, b));
            prop_assert!(to_gray(g, b, r) <= to_gray(g, b, r + 1));
        }
    }
}

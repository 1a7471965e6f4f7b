//! Synthetic source dataset, image value spaces, and image file I/O.
//!
//! Images carry an explicit value-space tag: storage space `[0,1]` for
//! datasets and files, diffusion space `[-1,1]` for everything the diffusion
//! kernels and denoiser touch. Conversions are the only way to move between
//! the two, so accidental space mixing fails loudly.

mod idx;
mod pgm;
mod shapes;

pub use idx::{load_idx, save_idx};
pub use pgm::{load_pgm, save_pgm};
pub use shapes::gen_shapes_dataset;

use crate::{Error, Result};

/// Value space an image's pixels live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Storage space, values in `[0, 1]`.
    Unit,
    /// Diffusion space, values in `[-1, 1]`.
    Diffusion,
}

/// 2-D grayscale raster with an explicit value-space tag.
///
/// Pixels are stored row-major. Operations with block structure (low-pass
/// pooling, blockwise corruptions) check their own divisibility
/// preconditions; the generated datasets use sides divisible by both the
/// pooling factor and the 8x8 corruption blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    values: Vec<f64>,
    space: Space,
}

impl Image {
    /// Build an image from row-major values.
    ///
    /// Panics if the dimensions are zero or inconsistent with the value count.
    pub fn from_vec(height: usize, width: usize, values: Vec<f64>, space: Space) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        assert_eq!(values.len(), height * width, "value count mismatch");
        Image {
            height,
            width,
            values,
            space,
        }
    }

    /// Constant image of the given value.
    pub fn constant(height: usize, width: usize, value: f64, space: Space) -> Self {
        Image::from_vec(height, width, vec![value; height * width], space)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn pixel(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn pixel_mut(&mut self, row: usize, col: usize) -> &mut f64 {
        &mut self.values[row * self.width + col]
    }

    /// Panic unless the image is in `space`. Call at every space-sensitive
    /// entry point.
    pub fn expect_space(&self, space: Space, what: &str) {
        assert!(
            self.space == space,
            "{what} requires {space:?}-space input, got {:?}",
            self.space
        );
    }

    /// Elementwise map, keeping dimensions and space.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image {
            height: self.height,
            width: self.width,
            values: self.values.iter().map(|&v| f(v)).collect(),
            space: self.space,
        }
    }

    /// Clamp all values into the declared space's interval.
    pub fn clamp_to_space(&self) -> Image {
        let (lo, hi) = match self.space {
            Space::Unit => (0.0, 1.0),
            Space::Diffusion => (-1.0, 1.0),
        };
        self.map(|v| v.clamp(lo, hi))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Map a unit-space image to diffusion space via `v -> 2v - 1`.
pub fn to_diffusion_space(img: &Image) -> Image {
    img.expect_space(Space::Unit, "to_diffusion_space");
    Image {
        height: img.height,
        width: img.width,
        values: img.values.iter().map(|&v| 2.0 * v - 1.0).collect(),
        space: Space::Diffusion,
    }
}

/// Map a diffusion-space image back to unit space via `v -> (v + 1) / 2`,
/// clamping into `[0, 1]`.
pub fn from_diffusion_space(img: &Image) -> Image {
    img.expect_space(Space::Diffusion, "from_diffusion_space");
    Image {
        height: img.height,
        width: img.width,
        values: img
            .values
            .iter()
            .map(|&v| ((v + 1.0) / 2.0).clamp(0.0, 1.0))
            .collect(),
        space: Space::Unit,
    }
}

/// Labeled image set with a fixed class count.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub images: Vec<Image>,
    pub labels: Vec<usize>,
    pub class_count: usize,
}

impl LabeledDataset {
    /// Panics if images/labels lengths differ or any label is out of range.
    pub fn new(images: Vec<Image>, labels: Vec<usize>, class_count: usize) -> Self {
        assert_eq!(images.len(), labels.len(), "images/labels length mismatch");
        assert!(
            labels.iter().all(|&l| l < class_count),
            "label out of range"
        );
        LabeledDataset {
            images,
            labels,
            class_count,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Mean pixel value over all images.
    pub fn mean_pixel(&self) -> f64 {
        let total: f64 = self.images.iter().map(|img| img.mean()).sum();
        total / self.images.len() as f64
    }

    /// First `n` images/labels as a new dataset.
    pub fn take(&self, n: usize) -> LabeledDataset {
        LabeledDataset {
            images: self.images[..n.min(self.len())].to_vec(),
            labels: self.labels[..n.min(self.len())].to_vec(),
            class_count: self.class_count,
        }
    }
}

pub(crate) fn validate_side(side: usize) -> Result<()> {
    if !matches!(side, 16 | 32 | 64) {
        return Err(Error::config(format!(
            "side must be one of 16/32/64, got {side}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn to_diffusion_endpoints() {
        let img = Image::from_vec(4, 4, vec![0.0; 16], Space::Unit);
        assert_eq!(to_diffusion_space(&img).values()[0], -1.0);
        let img = Image::constant(4, 4, 0.5, Space::Unit);
        assert_eq!(to_diffusion_space(&img).values()[0], 0.0);
        let img = Image::constant(4, 4, 1.0, Space::Unit);
        assert_eq!(to_diffusion_space(&img).values()[0], 1.0);
    }

    #[test]
    #[should_panic(expected = "requires Unit")]
    fn to_diffusion_rejects_wrong_space() {
        let img = Image::constant(4, 4, 0.0, Space::Diffusion);
        to_diffusion_space(&img);
    }

    #[test]
    #[should_panic(expected = "requires Diffusion")]
    fn from_diffusion_rejects_wrong_space() {
        let img = Image::constant(4, 4, 0.5, Space::Unit);
        from_diffusion_space(&img);
    }

    #[test]
    fn clamp_to_space_bounds() {
        let img = Image::from_vec(4, 4, vec![-0.5; 16], Space::Unit).clamp_to_space();
        assert!(img.values().iter().all(|&v| v == 0.0));
    }

    proptest! {
        #[test]
        fn space_round_trip_is_identity(vals in proptest::collection::vec(0.0f64..=1.0, 16)) {
            let img = Image::from_vec(4, 4, vals, Space::Unit);
            let back = from_diffusion_space(&to_diffusion_space(&img));
            for (a, b) in img.values().iter().zip(back.values()) {
                prop_assert!((a - b).abs() <= 1e-7);
            }
        }
    }
}

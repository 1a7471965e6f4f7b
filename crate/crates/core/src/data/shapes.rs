//! Deterministic synthetic shape dataset.
//!
//! Each image renders one anti-aliased shape on a dark background. Rendering
//! rasterizes at 4x resolution and box-downsamples, so class boundaries are
//! smooth enough that blur corruptions change them meaningfully.

use rand::Rng;

use super::{validate_side, Image, LabeledDataset, Space};
use crate::par::par_map;
use crate::rng::{derive_seed, substream};
use crate::{Error, Result};

/// Class order; `class_count` truncates this list.
const SHAPES: [Shape; 8] = [
    Shape::Disk,
    Shape::Square,
    Shape::Triangle,
    Shape::Cross,
    Shape::Ring,
    Shape::Bar,
    Shape::Plus,
    Shape::Diamond,
];

#[derive(Debug, Clone, Copy)]
enum Shape {
    Disk,
    Square,
    Triangle,
    Cross,
    Ring,
    Bar,
    Plus,
    Diamond,
}

const SUPERSAMPLE: usize = 4;

/// Generate `n` labeled shape images, balanced across `class_count` classes.
///
/// Labels cycle through the classes (`label = i mod C`), so counts differ by
/// at most one. Identical seeds produce bit-identical datasets.
pub fn gen_shapes_dataset(
    n: usize,
    class_count: usize,
    side: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    if n == 0 {
        return Err(Error::config("dataset size must be positive"));
    }
    if !(2..=8).contains(&class_count) {
        return Err(Error::config(format!(
            "class_count must be in 2..=8, got {class_count}"
        )));
    }
    validate_side(side)?;

    let images = par_map(n, |i| {
        let label = i % class_count;
        render_shape(SHAPES[label], side, derive_seed(seed, i as u64))
    });
    let labels = (0..n).map(|i| i % class_count).collect();
    Ok(LabeledDataset::new(images, labels, class_count))
}

fn render_shape(shape: Shape, side: usize, seed: u64) -> Image {
    let mut rng = substream(seed, 0);
    let s = side as f64;

    let background: f64 = rng.gen_range(0.02..0.12);
    let foreground: f64 = rng.gen_range(0.75..1.0);
    let cx = s * rng.gen_range(0.40..0.60);
    let cy = s * rng.gen_range(0.40..0.60);
    let radius = s * rng.gen_range(0.26..0.38);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (sin_a, cos_a) = angle.sin_cos();

    let step = 1.0 / SUPERSAMPLE as f64;
    let mut values = vec![0.0; side * side];
    for row in 0..side {
        for col in 0..side {
            let mut hits = 0usize;
            for sy in 0..SUPERSAMPLE {
                for sx in 0..SUPERSAMPLE {
                    let y = row as f64 + (sy as f64 + 0.5) * step;
                    let x = col as f64 + (sx as f64 + 0.5) * step;
                    if inside(shape, x - cx, y - cy, radius, sin_a, cos_a) {
                        hits += 1;
                    }
                }
            }
            let coverage = hits as f64 / (SUPERSAMPLE * SUPERSAMPLE) as f64;
            values[row * side + col] = background + (foreground - background) * coverage;
        }
    }
    Image::from_vec(side, side, values, Space::Unit)
}

fn inside(shape: Shape, dx: f64, dy: f64, r: f64, sin_a: f64, cos_a: f64) -> bool {
    match shape {
        Shape::Disk => dx * dx + dy * dy <= r * r,
        Shape::Square => dx.abs() <= 0.85 * r && dy.abs() <= 0.85 * r,
        Shape::Triangle => {
            // Isoceles triangle: apex up, base at 0.8r below center.
            let top = -r;
            let bottom = 0.8 * r;
            if dy < top || dy > bottom {
                return false;
            }
            let half_width = 0.9 * r * (dy - top) / (bottom - top);
            dx.abs() <= half_width
        }
        Shape::Cross => {
            // Diagonal X: a plus rotated 45 degrees.
            let u = (dx + dy) * std::f64::consts::FRAC_1_SQRT_2;
            let v = (dx - dy) * std::f64::consts::FRAC_1_SQRT_2;
            (u.abs() <= 0.28 * r && v.abs() <= r) || (v.abs() <= 0.28 * r && u.abs() <= r)
        }
        Shape::Ring => {
            let d2 = dx * dx + dy * dy;
            d2 <= r * r && d2 >= (0.55 * r) * (0.55 * r)
        }
        Shape::Bar => {
            let u = dx * cos_a + dy * sin_a;
            let v = -dx * sin_a + dy * cos_a;
            u.abs() <= r && v.abs() <= 0.28 * r
        }
        Shape::Plus => {
            (dx.abs() <= 0.28 * r && dy.abs() <= r) || (dy.abs() <= 0.28 * r && dx.abs() <= r)
        }
        Shape::Diamond => dx.abs() + dy.abs() <= r,
    }
}

//! Desk-scale analogs of the common corruption families, each acting as a
//! distinct target domain.
//!
//! Every corruption is deterministic given `(image, spec)`: stochastic kinds
//! draw exclusively from the spec's seed, never from global state. Outputs
//! are clamped to `[0, 1]`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::data::{Image, LabeledDataset, Space};
use crate::par::par_map;
use crate::rng::{derive_seed, substream, Stream};
use crate::{Error, Result};

/// Corruption family, used for grouped reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Noise,
    Blur,
    Weather,
    Digital,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Noise => "noise",
            Family::Blur => "blur",
            Family::Weather => "weather",
            Family::Digital => "digital",
        }
    }
}

/// The thirteen corruption kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptionKind {
    GaussianNoise,
    ShotNoise,
    ImpulseNoise,
    DefocusBlur,
    MotionBlur,
    GlassBlur,
    Fog,
    Snow,
    Brightness,
    Contrast,
    Pixelate,
    JpegDct,
    Elastic,
}

/// All kinds, in table order.
pub const ALL_KINDS: [CorruptionKind; 13] = [
    CorruptionKind::GaussianNoise,
    CorruptionKind::ShotNoise,
    CorruptionKind::ImpulseNoise,
    CorruptionKind::DefocusBlur,
    CorruptionKind::MotionBlur,
    CorruptionKind::GlassBlur,
    CorruptionKind::Fog,
    CorruptionKind::Snow,
    CorruptionKind::Brightness,
    CorruptionKind::Contrast,
    CorruptionKind::Pixelate,
    CorruptionKind::JpegDct,
    CorruptionKind::Elastic,
];

impl CorruptionKind {
    pub fn family(&self) -> Family {
        use CorruptionKind::*;
        match self {
            GaussianNoise | ShotNoise | ImpulseNoise => Family::Noise,
            DefocusBlur | MotionBlur | GlassBlur => Family::Blur,
            Fog | Snow => Family::Weather,
            Brightness | Contrast | Pixelate | JpegDct | Elastic => Family::Digital,
        }
    }

    pub fn name(&self) -> &'static str {
        use CorruptionKind::*;
        match self {
            GaussianNoise => "gaussian_noise",
            ShotNoise => "shot_noise",
            ImpulseNoise => "impulse_noise",
            DefocusBlur => "defocus_blur",
            MotionBlur => "motion_blur",
            GlassBlur => "glass_blur",
            Fog => "fog",
            Snow => "snow",
            Brightness => "brightness",
            Contrast => "contrast",
            Pixelate => "pixelate",
            JpegDct => "jpeg_dct",
            Elastic => "elastic",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        ALL_KINDS
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::config(format!("unknown corruption kind \"{name}\"")))
    }

    /// Whether the kind operates on 8x8 blocks and needs divisible sides.
    pub fn is_blockwise(&self) -> bool {
        matches!(self, CorruptionKind::JpegDct | CorruptionKind::Pixelate)
    }
}

/// Corruption kind plus severity level and RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorruptionSpec {
    pub kind: CorruptionKind,
    pub severity: u8,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn new(kind: CorruptionKind, severity: u8, seed: u64) -> Result<Self> {
        if !(1..=5).contains(&severity) {
            return Err(Error::config(format!(
                "severity must be in 1..=5, got {severity}"
            )));
        }
        Ok(CorruptionSpec {
            kind,
            severity,
            seed,
        })
    }
}

// Severity parameter tables, index = severity - 1.
const GAUSSIAN_SIGMA: [f64; 5] = [0.04, 0.08, 0.12, 0.18, 0.26];
const SHOT_PHOTONS: [f64; 5] = [250.0, 100.0, 50.0, 25.0, 12.0];
const IMPULSE_FRACTION: [f64; 5] = [0.01, 0.03, 0.06, 0.10, 0.17];
const DEFOCUS_RADIUS: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];
const MOTION_LENGTH: [usize; 5] = [3, 5, 7, 9, 11];
const GLASS_RADIUS: [usize; 5] = [1, 1, 2, 2, 3];
const GLASS_PASSES: [usize; 5] = [1, 2, 2, 3, 3];
const FOG_WEIGHT: [f64; 5] = [0.15, 0.25, 0.35, 0.45, 0.55];
const SNOW_COVERAGE: [f64; 5] = [0.01, 0.02, 0.04, 0.06, 0.09];
const BRIGHTNESS_SHIFT: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
const CONTRAST_SCALE: [f64; 5] = [0.75, 0.6, 0.45, 0.3, 0.2];
/// Effective downscale factors; fractional entries keep the PSNR degradation
/// strictly monotone where integer factors would repeat.
const PIXELATE_FACTOR: [f64; 5] = [2.0, 2.5, 3.2, 4.0, 8.0];
const JPEG_QUANT: [f64; 5] = [4.0, 8.0, 12.0, 18.0, 26.0];
const ELASTIC_OFFSET: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

/// Apply a corruption to a unit-space image.
pub fn apply_corruption(img: &Image, spec: &CorruptionSpec) -> Result<Image> {
    img.expect_space(Space::Unit, "apply_corruption");
    if !(1..=5).contains(&spec.severity) {
        return Err(Error::config(format!(
            "severity must be in 1..=5, got {}",
            spec.severity
        )));
    }
    if spec.kind.is_blockwise() && (img.height() % 8 != 0 || img.width() % 8 != 0) {
        return Err(Error::config(format!(
            "{} requires dimensions divisible by 8, got {}x{}",
            spec.kind.name(),
            img.height(),
            img.width()
        )));
    }
    let i = (spec.severity - 1) as usize;
    let mut rng = substream(spec.seed, 0);
    let out = match spec.kind {
        CorruptionKind::GaussianNoise => gaussian_noise(img, GAUSSIAN_SIGMA[i], &mut rng),
        CorruptionKind::ShotNoise => shot_noise(img, SHOT_PHOTONS[i], &mut rng),
        CorruptionKind::ImpulseNoise => impulse_noise(img, IMPULSE_FRACTION[i], &mut rng),
        CorruptionKind::DefocusBlur => defocus_blur(img, DEFOCUS_RADIUS[i]),
        CorruptionKind::MotionBlur => motion_blur(img, MOTION_LENGTH[i], &mut rng),
        CorruptionKind::GlassBlur => glass_blur(img, GLASS_RADIUS[i], GLASS_PASSES[i], &mut rng),
        CorruptionKind::Fog => fog(img, FOG_WEIGHT[i], &mut rng),
        CorruptionKind::Snow => snow(img, SNOW_COVERAGE[i], &mut rng),
        CorruptionKind::Brightness => brightness(img, BRIGHTNESS_SHIFT[i]),
        CorruptionKind::Contrast => contrast(img, CONTRAST_SCALE[i]),
        CorruptionKind::Pixelate => pixelate(img, PIXELATE_FACTOR[i]),
        CorruptionKind::JpegDct => jpeg_dct(img, JPEG_QUANT[i] / 255.0),
        CorruptionKind::Elastic => elastic(img, ELASTIC_OFFSET[i], &mut rng),
    };
    Ok(out.clamp_to_space())
}

/// Corrupt every image with per-image sub-seeds; labels pass through.
pub fn corrupt_dataset(ds: &LabeledDataset, spec: &CorruptionSpec) -> Result<LabeledDataset> {
    // Validate once on the first image so errors surface before parallel work.
    if let Some(first) = ds.images.first() {
        apply_corruption(first, spec)?;
    }
    let images: Vec<Image> = par_map(ds.len(), |i| {
        let sub = CorruptionSpec {
            seed: derive_seed(spec.seed, i as u64),
            ..*spec
        };
        apply_corruption(&ds.images[i], &sub).expect("validated above")
    });
    Ok(LabeledDataset::new(
        images,
        ds.labels.clone(),
        ds.class_count,
    ))
}

/// Peak signal-to-noise ratio between two unit-space images, in dB.
pub fn psnr(a: &Image, b: &Image) -> f64 {
    let mse: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.values().len() as f64;
    -10.0 * mse.log10()
}

fn gaussian_noise(img: &Image, sigma: f64, rng: &mut Stream) -> Image {
    img.map_with_rng(rng, |v, r| {
        v + sigma * r.sample::<f64, _>(rand_distr::StandardNormal)
    })
}

fn shot_noise(img: &Image, photons: f64, rng: &mut Stream) -> Image {
    img.map_with_rng(rng, |v, r| {
        let lam = photons * v.max(0.0);
        if lam <= 0.0 {
            0.0
        } else {
            Poisson::new(lam).expect("positive lambda").sample(r) / photons
        }
    })
}

fn impulse_noise(img: &Image, fraction: f64, rng: &mut Stream) -> Image {
    img.map_with_rng(rng, |v, r| {
        if r.gen::<f64>() < fraction {
            if r.gen::<bool>() {
                1.0
            } else {
                0.0
            }
        } else {
            v
        }
    })
}

fn defocus_blur(img: &Image, radius: f64) -> Image {
    let half = radius.ceil() as isize;
    let size = (2 * half + 1) as usize;
    let mut kernel = vec![0.0; size * size];
    for dy in -half..=half {
        for dx in -half..=half {
            let d = ((dy * dy + dx * dx) as f64).sqrt();
            // Anti-aliased disk: full weight inside, linear falloff at edge.
            kernel[((dy + half) as usize) * size + (dx + half) as usize] =
                (radius + 0.5 - d).clamp(0.0, 1.0);
        }
    }
    convolve_replicate(img, &kernel, size)
}

fn motion_blur(img: &Image, length: usize, rng: &mut Stream) -> Image {
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (sin_a, cos_a) = angle.sin_cos();
    let half = (length / 2) as isize;
    let size = (2 * half + 1) as usize;
    let mut kernel = vec![0.0; size * size];
    // Bilinear splat of points along the line through the kernel center.
    let steps = length * 4;
    for i in 0..=steps {
        let s = (i as f64 / steps as f64 - 0.5) * (length - 1) as f64;
        let x = half as f64 + s * cos_a;
        let y = half as f64 + s * sin_a;
        let (x0, y0) = (x.floor(), y.floor());
        let (fx, fy) = (x - x0, y - y0);
        for (oy, ox, w) in [
            (0, 0, (1.0 - fx) * (1.0 - fy)),
            (0, 1, fx * (1.0 - fy)),
            (1, 0, (1.0 - fx) * fy),
            (1, 1, fx * fy),
        ] {
            let yy = y0 as isize + oy;
            let xx = x0 as isize + ox;
            if (0..size as isize).contains(&yy) && (0..size as isize).contains(&xx) {
                kernel[yy as usize * size + xx as usize] += w;
            }
        }
    }
    convolve_replicate(img, &kernel, size)
}

fn glass_blur(img: &Image, radius: usize, passes: usize, rng: &mut Stream) -> Image {
    let (h, w) = (img.height(), img.width());
    let mut values = img.values().to_vec();
    let r = radius as isize;
    for _ in 0..passes {
        for y in 0..h as isize {
            for x in 0..w as isize {
                let dy = rng.gen_range(-r..=r);
                let dx = rng.gen_range(-r..=r);
                let sy = (y + dy).clamp(0, h as isize - 1) as usize;
                let sx = (x + dx).clamp(0, w as isize - 1) as usize;
                values.swap(y as usize * w + x as usize, sy * w + sx);
            }
        }
    }
    Image::from_vec(h, w, values, Space::Unit)
}

fn fog(img: &Image, weight: f64, rng: &mut Stream) -> Image {
    let field = plasma_field(img.height(), img.width(), rng);
    let values = img
        .values()
        .iter()
        .zip(&field)
        .map(|(&v, &f)| (1.0 - weight) * v + weight * f)
        .collect();
    Image::from_vec(img.height(), img.width(), values, Space::Unit)
}

fn snow(img: &Image, coverage: f64, rng: &mut Stream) -> Image {
    let (h, w) = (img.height(), img.width());
    // Mild global whitening, independent of severity.
    let mut values: Vec<f64> = img.values().iter().map(|&v| 0.9 * v + 0.08).collect();
    let target = (coverage * (h * w) as f64).round() as usize;
    let mut mask = vec![false; h * w];
    let mut covered = 0usize;
    // Streaks share a global fall direction with per-streak jitter.
    let base_angle: f64 = rng.gen_range(1.0..2.1); // roughly downward
    let mut guard = 0;
    while covered < target && guard < 10_000 {
        guard += 1;
        let len = rng.gen_range(h as f64 / 8.0..h as f64 / 3.0);
        let angle = base_angle + rng.gen_range(-0.15..0.15);
        let (sin_a, cos_a) = angle.sin_cos();
        let sy = rng.gen_range(0.0..h as f64);
        let sx = rng.gen_range(0.0..w as f64);
        let steps = (len * 2.0) as usize + 1;
        for i in 0..steps {
            let t = i as f64 / 2.0;
            let y = (sy + t * sin_a).round() as isize;
            let x = (sx + t * cos_a).round() as isize;
            if (0..h as isize).contains(&y) && (0..w as isize).contains(&x) {
                let idx = y as usize * w + x as usize;
                if !mask[idx] {
                    mask[idx] = true;
                    covered += 1;
                    if covered >= target {
                        break;
                    }
                }
            }
        }
    }
    for (v, &m) in values.iter_mut().zip(&mask) {
        if m {
            *v += 0.7;
        }
    }
    Image::from_vec(h, w, values, Space::Unit)
}

fn brightness(img: &Image, shift: f64) -> Image {
    img.map(|v| v + shift)
}

fn contrast(img: &Image, scale: f64) -> Image {
    if scale == 1.0 {
        return img.clone();
    }
    img.map(|v| (v - 0.5) * scale + 0.5)
}

fn pixelate(img: &Image, factor: f64) -> Image {
    let (h, w) = (img.height(), img.width());
    let th = ((h as f64 / factor).round() as usize).max(1);
    let tw = ((w as f64 / factor).round() as usize).max(1);
    let small = box_downsample(img, th, tw);
    // Nearest-neighbor replication back to full size.
    let mut values = vec![0.0; h * w];
    for y in 0..h {
        let sy = (y * th) / h;
        for x in 0..w {
            let sx = (x * tw) / w;
            values[y * w + x] = small[sy * tw + sx];
        }
    }
    Image::from_vec(h, w, values, Space::Unit)
}

fn jpeg_dct(img: &Image, q: f64) -> Image {
    let (h, w) = (img.height(), img.width());
    let basis = dct8_basis();
    let mut values = img.values().to_vec();
    for by in (0..h).step_by(8) {
        for bx in (0..w).step_by(8) {
            let mut block = [[0.0f64; 8]; 8];
            for y in 0..8 {
                for x in 0..8 {
                    block[y][x] = values[(by + y) * w + bx + x];
                }
            }
            let coefs = dct2d(&block, &basis);
            let mut quant = [[0.0f64; 8]; 8];
            for y in 0..8 {
                for x in 0..8 {
                    quant[y][x] = (coefs[y][x] / q).round() * q;
                }
            }
            let rec = idct2d(&quant, &basis);
            for y in 0..8 {
                for x in 0..8 {
                    values[(by + y) * w + bx + x] = rec[y][x];
                }
            }
        }
    }
    Image::from_vec(h, w, values, Space::Unit)
}

fn elastic(img: &Image, max_offset: f64, rng: &mut Stream) -> Image {
    let (h, w) = (img.height(), img.width());
    // Coarse random offset grid, bilinearly upsampled for smoothness.
    let gh = (h / 8).max(2) + 1;
    let gw = (w / 8).max(2) + 1;
    let mut grid_dy = vec![0.0; gh * gw];
    let mut grid_dx = vec![0.0; gh * gw];
    for v in grid_dy.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    for v in grid_dx.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    let sample_grid = |grid: &[f64], y: f64, x: f64| -> f64 {
        let gy = y / (h - 1) as f64 * (gh - 1) as f64;
        let gx = x / (w - 1) as f64 * (gw - 1) as f64;
        let (y0, x0) = (gy.floor() as usize, gx.floor() as usize);
        let (y1, x1) = ((y0 + 1).min(gh - 1), (x0 + 1).min(gw - 1));
        let (fy, fx) = (gy - y0 as f64, gx - x0 as f64);
        grid[y0 * gw + x0] * (1.0 - fy) * (1.0 - fx)
            + grid[y0 * gw + x1] * (1.0 - fy) * fx
            + grid[y1 * gw + x0] * fy * (1.0 - fx)
            + grid[y1 * gw + x1] * fy * fx
    };
    // Normalize so the largest displacement magnitude equals max_offset.
    let mut peak = 0.0f64;
    for y in 0..h {
        for x in 0..w {
            let dy = sample_grid(&grid_dy, y as f64, x as f64);
            let dx = sample_grid(&grid_dx, y as f64, x as f64);
            peak = peak.max((dy * dy + dx * dx).sqrt());
        }
    }
    let scale = if peak > 0.0 { max_offset / peak } else { 0.0 };
    let mut values = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            let dy = scale * sample_grid(&grid_dy, y as f64, x as f64);
            let dx = scale * sample_grid(&grid_dx, y as f64, x as f64);
            values[y * w + x] = bilinear_sample(img, y as f64 + dy, x as f64 + dx);
        }
    }
    Image::from_vec(h, w, values, Space::Unit)
}

// ---- shared raster helpers ----

impl Image {
    fn map_with_rng(&self, rng: &mut Stream, mut f: impl FnMut(f64, &mut Stream) -> f64) -> Image {
        let values = self.values().iter().map(|&v| f(v, rng)).collect();
        Image::from_vec(self.height(), self.width(), values, self.space())
    }
}

/// Convolve with a (normalized here) square kernel, replicating borders.
fn convolve_replicate(img: &Image, kernel: &[f64], size: usize) -> Image {
    let total: f64 = kernel.iter().sum();
    let (h, w) = (img.height(), img.width());
    let half = (size / 2) as isize;
    let mut values = vec![0.0; h * w];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for ky in 0..size as isize {
                for kx in 0..size as isize {
                    let sy = (y + ky - half).clamp(0, h as isize - 1) as usize;
                    let sx = (x + kx - half).clamp(0, w as isize - 1) as usize;
                    acc += kernel[ky as usize * size + kx as usize] * img.pixel(sy, sx);
                }
            }
            values[y as usize * w + x as usize] = acc / total;
        }
    }
    Image::from_vec(h, w, values, img.space())
}

/// Area-weighted box downsample to an arbitrary target size.
fn box_downsample(img: &Image, th: usize, tw: usize) -> Vec<f64> {
    let (h, w) = (img.height(), img.width());
    let mut out = vec![0.0; th * tw];
    let sy = h as f64 / th as f64;
    let sx = w as f64 / tw as f64;
    for ty in 0..th {
        let y0 = ty as f64 * sy;
        let y1 = y0 + sy;
        for tx in 0..tw {
            let x0 = tx as f64 * sx;
            let x1 = x0 + sx;
            let mut acc = 0.0;
            let mut area = 0.0;
            let mut y = y0;
            while y < y1 - 1e-12 {
                let ynext = (y.floor() + 1.0).min(y1);
                let hy = ynext - y;
                let row = (y.floor() as usize).min(h - 1);
                let mut x = x0;
                while x < x1 - 1e-12 {
                    let xnext = (x.floor() + 1.0).min(x1);
                    let hx = xnext - x;
                    let col = (x.floor() as usize).min(w - 1);
                    acc += img.pixel(row, col) * hy * hx;
                    area += hy * hx;
                    x = xnext;
                }
                y = ynext;
            }
            out[ty * tw + tx] = acc / area;
        }
    }
    out
}

fn bilinear_sample(img: &Image, y: f64, x: f64) -> f64 {
    let (h, w) = (img.height() as isize, img.width() as isize);
    let yc = y.clamp(0.0, (h - 1) as f64);
    let xc = x.clamp(0.0, (w - 1) as f64);
    let y0 = yc.floor() as isize;
    let x0 = xc.floor() as isize;
    let y1 = (y0 + 1).min(h - 1);
    let x1 = (x0 + 1).min(w - 1);
    let (fy, fx) = (yc - y0 as f64, xc - x0 as f64);
    let p = |yy: isize, xx: isize| img.pixel(yy as usize, xx as usize);
    p(y0, x0) * (1.0 - fy) * (1.0 - fx)
        + p(y0, x1) * (1.0 - fy) * fx
        + p(y1, x0) * fy * (1.0 - fx)
        + p(y1, x1) * fy * fx
}

/// Midpoint-displacement (diamond-square) low-frequency field in [0, 1].
fn plasma_field(h: usize, w: usize, rng: &mut Stream) -> Vec<f64> {
    let side = h.max(w).next_power_of_two();
    let n = side + 1;
    let mut grid = vec![0.0f64; n * n];
    for corner in [0, side, side * n, side * n + side] {
        grid[corner] = rng.gen_range(0.0..1.0);
    }
    let mut step = side;
    let mut amp = 0.5f64;
    while step > 1 {
        let half = step / 2;
        // Diamond step.
        for y in (half..n).step_by(step) {
            for x in (half..n).step_by(step) {
                let avg = (grid[(y - half) * n + x - half]
                    + grid[(y - half) * n + x + half]
                    + grid[(y + half) * n + x - half]
                    + grid[(y + half) * n + x + half])
                    / 4.0;
                grid[y * n + x] = avg + rng.gen_range(-amp..amp);
            }
        }
        // Square step.
        for y in (0..n).step_by(half) {
            let x_start = if (y / half) % 2 == 0 { half } else { 0 };
            for x in (x_start..n).step_by(step) {
                let mut sum = 0.0;
                let mut count = 0.0;
                if y >= half {
                    sum += grid[(y - half) * n + x];
                    count += 1.0;
                }
                if y + half < n {
                    sum += grid[(y + half) * n + x];
                    count += 1.0;
                }
                if x >= half {
                    sum += grid[y * n + x - half];
                    count += 1.0;
                }
                if x + half < n {
                    sum += grid[y * n + x + half];
                    count += 1.0;
                }
                grid[y * n + x] = sum / count + rng.gen_range(-amp..amp);
            }
        }
        step = half;
        amp *= 0.55;
    }
    // Crop and normalize to [0, 1].
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in 0..h {
        for x in 0..w {
            let v = grid[y * n + x];
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let span = (hi - lo).max(1e-12);
    (0..h * w)
        .map(|i| (grid[(i / w) * n + (i % w)] - lo) / span)
        .collect()
}

fn dct8_basis() -> [[f64; 8]; 8] {
    let mut basis = [[0.0f64; 8]; 8];
    for (k, row) in basis.iter_mut().enumerate() {
        let s = if k == 0 {
            (1.0f64 / 8.0).sqrt()
        } else {
            (2.0f64 / 8.0).sqrt()
        };
        for (n, v) in row.iter_mut().enumerate() {
            *v = s * (std::f64::consts::PI * (2.0 * n as f64 + 1.0) * k as f64 / 16.0).cos();
        }
    }
    basis
}

fn dct2d(block: &[[f64; 8]; 8], c: &[[f64; 8]; 8]) -> [[f64; 8]; 8] {
    // C * B * C^T
    let mut tmp = [[0.0f64; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            tmp[i][j] = (0..8).map(|k| c[i][k] * block[k][j]).sum();
        }
    }
    let mut out = [[0.0f64; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            out[i][j] = (0..8).map(|k| tmp[i][k] * c[j][k]).sum();
        }
    }
    out
}

fn idct2d(coefs: &[[f64; 8]; 8], c: &[[f64; 8]; 8]) -> [[f64; 8]; 8] {
    // C^T * F * C
    let mut tmp = [[0.0f64; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            tmp[i][j] = (0..8).map(|k| c[k][i] * coefs[k][j]).sum();
        }
    }
    let mut out = [[0.0f64; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            out[i][j] = (0..8).map(|k| tmp[i][k] * c[k][j]).sum();
        }
    }
    out
}

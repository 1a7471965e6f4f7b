//! Low-pass structural guidance.
//!
//! The low-pass operator is a block-average downsample by `k` followed by
//! nearest-neighbor replication back to full size. As a linear map it is
//! self-adjoint and idempotent, which gives the guidance energy a closed-form
//! gradient that finite differences can verify.
//!
//! The gradient treats the denoiser output as constant with respect to the
//! diffusion state (a frozen-network surrogate); it never differentiates
//! through the network.

use crate::data::{Image, Space};
use crate::diffusion::predict_x0;
use crate::schedule::NoiseSchedule;

/// Conditioning signal and scale for guided reverse steps.
#[derive(Debug, Clone)]
pub struct GuidanceContext {
    c: Image,
    lambda: f64,
    k: usize,
}

impl GuidanceContext {
    /// Build a context from a diffusion-space conditioning image.
    ///
    /// Panics if `c` is not in the range of the projector (`P c == c`), if
    /// `lambda` is negative, or if `k` does not divide the image sides.
    pub fn new(c: Image, lambda: f64, k: usize) -> Self {
        c.expect_space(Space::Diffusion, "GuidanceContext");
        assert!(lambda >= 0.0, "lambda must be nonnegative");
        let projected = lpf(&c, k);
        let max_dev = projected
            .values()
            .iter()
            .zip(c.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(
            max_dev <= 1e-6,
            "conditioning signal is not low-pass (max deviation {max_dev})"
        );
        GuidanceContext { c, lambda, k }
    }

    /// Low-pass the given diffusion-space image and wrap it as a context.
    pub fn from_image(x: &Image, lambda: f64, k: usize) -> Self {
        GuidanceContext::new(lpf(x, k), lambda, k)
    }

    pub fn conditioning(&self) -> &Image {
        &self.c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn pooling_factor(&self) -> usize {
        self.k
    }
}

/// Block-average by `k`, then replicate each block value back up.
///
/// Panics if `k` does not divide both image sides.
pub fn lpf(img: &Image, k: usize) -> Image {
    assert!(k >= 1, "pooling factor must be at least 1");
    assert!(
        img.height() % k == 0 && img.width() % k == 0,
        "pooling factor {k} must divide image dimensions {}x{}",
        img.height(),
        img.width()
    );
    let (h, w) = (img.height(), img.width());
    let mut out = vec![0.0; h * w];
    let norm = 1.0 / (k * k) as f64;
    for by in (0..h).step_by(k) {
        for bx in (0..w).step_by(k) {
            let mut sum = 0.0;
            for dy in 0..k {
                for dx in 0..k {
                    sum += img.pixel(by + dy, bx + dx);
                }
            }
            let mean = sum * norm;
            for dy in 0..k {
                for dx in 0..k {
                    out[(by + dy) * w + bx + dx] = mean;
                }
            }
        }
    }
    Image::from_vec(h, w, out, img.space())
}

/// Structural energy `0.5 * || P(x0_hat) - c ||^2`.
pub fn structural_energy(x0_hat: &Image, ctx: &GuidanceContext) -> f64 {
    assert!(
        x0_hat.height() == ctx.c.height() && x0_hat.width() == ctx.c.width(),
        "shape mismatch between estimate and conditioning signal"
    );
    let low = lpf(x0_hat, ctx.k);
    0.5 * low
        .values()
        .iter()
        .zip(ctx.c.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
}

/// Gradient of the structural energy with respect to the diffusion state.
///
/// With the denoiser output held constant, the chain rule through
/// `x0_hat = (x_t - sqrt(1-abar) eps_hat) / sqrt(abar)` and the self-adjoint
/// idempotent projector collapses to
/// `(1 / sqrt(abar_t)) * (P(x0_hat) - c)`.
pub fn guidance_gradient(
    x_t: &Image,
    eps_hat: &Image,
    t: usize,
    s: &NoiseSchedule,
    ctx: &GuidanceContext,
) -> Image {
    assert!(
        x_t.height() == ctx.c.height() && x_t.width() == ctx.c.width(),
        "shape mismatch between state and conditioning signal"
    );
    let x0_hat = predict_x0(x_t, eps_hat, t, s);
    let low = lpf(&x0_hat, ctx.k);
    let scale = 1.0 / s.alpha_bar(t).sqrt();
    let values = low
        .values()
        .iter()
        .zip(ctx.c.values())
        .map(|(&p, &c)| scale * (p - c))
        .collect();
    Image::from_vec(x_t.height(), x_t.width(), values, Space::Diffusion)
}

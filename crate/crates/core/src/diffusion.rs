//! Forward noising kernels, reverse denoising step, clean-image prediction,
//! and unconditional sampling.
//!
//! Images stay unclamped through the chain; only the terminal output of
//! unconditional sampling is clamped to diffusion space. Clamping mid-chain
//! would bias the Gaussian marginals the tests verify.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::{Image, Space};
use crate::guidance::{guidance_gradient, GuidanceContext};
use crate::rng::Stream;
use crate::schedule::NoiseSchedule;

/// A field of independent standard-normal samples shaped like an image.
#[derive(Debug, Clone)]
pub struct GaussianDraw {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl GaussianDraw {
    /// Draw a fresh field from the stream.
    pub fn sample(height: usize, width: usize, rng: &mut Stream) -> Self {
        let values = (0..height * width)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        GaussianDraw {
            height,
            width,
            values,
        }
    }

    /// All-zero field (the deterministic branch of a kernel).
    pub fn zero(height: usize, width: usize) -> Self {
        GaussianDraw {
            height,
            width,
            values: vec![0.0; height * width],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_shape(&self, img: &Image, what: &str) {
        assert!(
            self.height == img.height() && self.width == img.width(),
            "{what}: draw shape {}x{} does not match image {}x{}",
            self.height,
            self.width,
            img.height(),
            img.width()
        );
    }
}

/// Predicts the noise component of a diffusion-space image at timestep `t`.
///
/// Implemented by the trained denoiser and by test oracles.
pub trait NoisePredictor {
    fn predict_noise(&self, x: &Image, t: usize) -> Image;
}

/// Closed-form forward marginal:
/// `x_t = sqrt(abar_t) * x0 + sqrt(1 - abar_t) * eps`.
pub fn q_sample(x0: &Image, t: usize, eps: &GaussianDraw, s: &NoiseSchedule) -> Image {
    x0.expect_space(Space::Diffusion, "q_sample");
    eps.check_shape(x0, "q_sample");
    let abar = s.alpha_bar(t);
    let (sa, sn) = (abar.sqrt(), (1.0 - abar).sqrt());
    let values = x0
        .values()
        .iter()
        .zip(&eps.values)
        .map(|(&x, &e)| sa * x + sn * e)
        .collect();
    Image::from_vec(x0.height(), x0.width(), values, Space::Diffusion)
}

/// Single forward step:
/// `x_t = sqrt(1 - beta_t) * x_{t-1} + sqrt(beta_t) * eps`.
pub fn forward_step(x_prev: &Image, t: usize, eps: &GaussianDraw, s: &NoiseSchedule) -> Image {
    x_prev.expect_space(Space::Diffusion, "forward_step");
    eps.check_shape(x_prev, "forward_step");
    let beta = s.beta(t);
    let (sa, sn) = ((1.0 - beta).sqrt(), beta.sqrt());
    let values = x_prev
        .values()
        .iter()
        .zip(&eps.values)
        .map(|(&x, &e)| sa * x + sn * e)
        .collect();
    Image::from_vec(x_prev.height(), x_prev.width(), values, Space::Diffusion)
}

/// Clean-image estimate implied by a state and a noise prediction:
/// `x0_hat = (x_t - sqrt(1 - abar_t) * eps_hat) / sqrt(abar_t)`.
pub fn predict_x0(x_t: &Image, eps_hat: &Image, t: usize, s: &NoiseSchedule) -> Image {
    let abar = s.alpha_bar(t);
    assert!(t >= 1, "predict_x0 needs t >= 1");
    let (sa, sn) = (abar.sqrt(), (1.0 - abar).sqrt());
    let values = x_t
        .values()
        .iter()
        .zip(eps_hat.values())
        .map(|(&x, &e)| (x - sn * e) / sa)
        .collect();
    Image::from_vec(x_t.height(), x_t.width(), values, Space::Diffusion)
}

/// One reverse denoising step from `x_t` to `x_{t-1}`.
///
/// The mean is `(x_t - beta_t / sqrt(1 - abar_t) * eps_hat) / sqrt(alpha_t)`;
/// with guidance present it is shifted by `-lambda * g` before the posterior
/// noise `sqrt(beta_tilde_t) * z` is added. `beta_tilde_1 == 0`, so the final
/// step is deterministic and consumes no draw.
pub fn reverse_step(
    x_t: &Image,
    t: usize,
    denoiser: &dyn NoisePredictor,
    s: &NoiseSchedule,
    guidance: Option<&GuidanceContext>,
    rng: &mut Stream,
) -> Image {
    x_t.expect_space(Space::Diffusion, "reverse_step");
    let eps_hat = denoiser.predict_noise(x_t, t);
    let beta = s.beta(t);
    let alpha = s.alpha(t);
    let abar = s.alpha_bar(t);
    let coef = beta / (1.0 - abar).sqrt();
    let inv_sqrt_alpha = 1.0 / alpha.sqrt();

    let mut mu: Vec<f64> = x_t
        .values()
        .iter()
        .zip(eps_hat.values())
        .map(|(&x, &e)| inv_sqrt_alpha * (x - coef * e))
        .collect();

    if let Some(ctx) = guidance {
        let g = guidance_gradient(x_t, &eps_hat, t, s, ctx);
        for (m, &gv) in mu.iter_mut().zip(g.values()) {
            *m -= ctx.lambda() * gv;
        }
    }

    let sigma = s.posterior_var(t).sqrt();
    if t > 1 {
        let z = GaussianDraw::sample(x_t.height(), x_t.width(), rng);
        for (m, &zv) in mu.iter_mut().zip(&z.values) {
            *m += sigma * zv;
        }
    }
    Image::from_vec(x_t.height(), x_t.width(), mu, Space::Diffusion)
}

/// Run the full reverse chain from pure noise, clamping only the result.
pub fn sample_unconditional(
    denoiser: &dyn NoisePredictor,
    s: &NoiseSchedule,
    height: usize,
    width: usize,
    rng: &mut Stream,
) -> Image {
    let init = GaussianDraw::sample(height, width, rng);
    let mut x = Image::from_vec(height, width, init.values, Space::Diffusion);
    for t in (1..=s.len()).rev() {
        x = reverse_step(&x, t, denoiser, s, None, rng);
    }
    x.clamp_to_space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::schedule::{linear_schedule, rescale};

    fn toy_schedule() -> NoiseSchedule {
        rescale(&linear_schedule(1000, 1e-4, 0.02).unwrap(), 100).unwrap()
    }

    fn random_image(h: usize, w: usize, rng: &mut Stream) -> Image {
        let values = (0..h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Image::from_vec(h, w, values, Space::Diffusion)
    }

    /// Exact-noise oracle: predicts the eps that reconstructs the stored x0.
    pub(crate) struct ExactNoiseOracle {
        pub x0: Image,
        pub schedule: NoiseSchedule,
    }

    impl NoisePredictor for ExactNoiseOracle {
        fn predict_noise(&self, x: &Image, t: usize) -> Image {
            let abar = self.schedule.alpha_bar(t);
            let (sa, sn) = (abar.sqrt(), (1.0 - abar).sqrt());
            let values = x
                .values()
                .iter()
                .zip(self.x0.values())
                .map(|(&xt, &x0)| (xt - sa * x0) / sn)
                .collect();
            Image::from_vec(x.height(), x.width(), values, Space::Diffusion)
        }
    }

    #[test]
    fn q_sample_zero_noise_branch() {
        let s = toy_schedule();
        let mut rng = substream(1, 0);
        let x0 = random_image(8, 8, &mut rng);
        let t = 40;
        let out = q_sample(&x0, t, &GaussianDraw::zero(8, 8), &s);
        let sa = s.alpha_bar(t).sqrt();
        for (o, x) in out.values().iter().zip(x0.values()) {
            assert!((o - sa * x).abs() < 1e-15);
        }
    }

    #[test]
    fn q_sample_zero_signal_branch() {
        let s = toy_schedule();
        let mut rng = substream(2, 0);
        let x0 = Image::constant(8, 8, 0.0, Space::Diffusion);
        let eps = GaussianDraw::sample(8, 8, &mut rng);
        let t = 70;
        let out = q_sample(&x0, t, &eps, &s);
        let sn = (1.0 - s.alpha_bar(t)).sqrt();
        for (o, e) in out.values().iter().zip(eps.values()) {
            assert!((o - sn * e).abs() < 1e-15);
        }
    }

    #[test]
    fn q_sample_monte_carlo_moments() {
        let s = toy_schedule();
        let mut rng = substream(3, 0);
        let x0 = random_image(8, 8, &mut rng);
        let t = 50;
        let n = 10_000usize;
        let npix = 64;
        let mut sums = vec![0.0; npix];
        let mut sq = vec![0.0; npix];
        for i in 0..n {
            let mut r = substream(33, i as u64);
            let eps = GaussianDraw::sample(8, 8, &mut r);
            let xt = q_sample(&x0, t, &eps, &s);
            for (p, &v) in xt.values().iter().enumerate() {
                sums[p] += v;
                sq[p] += v * v;
            }
        }
        let abar = s.alpha_bar(t);
        let mean_tol = 4.0 * ((1.0 - abar) / n as f64).sqrt();
        for p in 0..npix {
            let mean = sums[p] / n as f64;
            let expect = abar.sqrt() * x0.values()[p];
            assert!(
                (mean - expect).abs() <= mean_tol,
                "pixel {p}: mean {mean} vs {expect} (tol {mean_tol})"
            );
            let var = sq[p] / n as f64 - mean * mean;
            assert!(
                (var - (1.0 - abar)).abs() <= 0.05 * (1.0 - abar),
                "pixel {p}: var {var} vs {}",
                1.0 - abar
            );
        }
    }

    #[test]
    fn forward_step_zero_branches() {
        let mut betas = vec![0.1; 4];
        betas[2] = 1e-12; // effectively beta = 0 within range constraints
        let s = crate::schedule::NoiseSchedule::from_betas_for_tests(betas);
        let mut rng = substream(4, 0);
        let x = random_image(8, 8, &mut rng);
        let out = forward_step(&x, 3, &GaussianDraw::zero(8, 8), &s);
        for (o, xv) in out.values().iter().zip(x.values()) {
            assert!((o - xv).abs() < 1e-9);
        }

        let zero = Image::constant(8, 8, 0.0, Space::Diffusion);
        let eps = GaussianDraw::sample(8, 8, &mut rng);
        let out = forward_step(&zero, 1, &eps, &s);
        let sb = s.beta(1).sqrt();
        for (o, e) in out.values().iter().zip(eps.values()) {
            assert!((o - sb * e).abs() < 1e-15);
        }
    }

    #[test]
    fn stepwise_composition_matches_closed_form_marginal() {
        let s = toy_schedule();
        let mut rng = substream(5, 0);
        let x0 = random_image(8, 8, &mut rng);
        let t_end = 50;
        let n = 10_000usize;
        let npix = 64;
        let mut sums = vec![0.0; npix];
        let mut sq = vec![0.0; npix];
        for i in 0..n {
            let mut r = substream(55, i as u64);
            let mut x = x0.clone();
            for t in 1..=t_end {
                let eps = GaussianDraw::sample(8, 8, &mut r);
                x = forward_step(&x, t, &eps, &s);
            }
            for (p, &v) in x.values().iter().enumerate() {
                sums[p] += v;
                sq[p] += v * v;
            }
        }
        let abar = s.alpha_bar(t_end);
        let mean_tol = 4.0 * ((1.0 - abar) / n as f64).sqrt();
        for p in 0..npix {
            let mean = sums[p] / n as f64;
            let expect = abar.sqrt() * x0.values()[p];
            assert!((mean - expect).abs() <= mean_tol, "pixel {p}");
            let var = sq[p] / n as f64 - mean * mean;
            assert!((var - (1.0 - abar)).abs() <= 0.05 * (1.0 - abar), "pixel {p}: var {var}");
        }
    }

    #[test]
    fn predict_x0_inverts_q_sample_at_every_t() {
        let s = toy_schedule();
        let mut rng = substream(6, 0);
        let x0 = random_image(8, 8, &mut rng);
        for t in 1..=s.len() {
            let eps = GaussianDraw::sample(8, 8, &mut rng);
            let xt = q_sample(&x0, t, &eps, &s);
            let eps_img =
                Image::from_vec(8, 8, eps.values().to_vec(), Space::Diffusion);
            let rec = predict_x0(&xt, &eps_img, t, &s);
            for (r, x) in rec.values().iter().zip(x0.values()) {
                assert!((r - x).abs() <= 1e-5, "t={t}");
            }
        }
    }

    #[test]
    fn predict_x0_algebraic_branches() {
        let s = toy_schedule();
        let mut rng = substream(7, 0);
        let x = random_image(8, 8, &mut rng);
        let t = 30;
        let zero = Image::constant(8, 8, 0.0, Space::Diffusion);
        let out = predict_x0(&x, &zero, t, &s);
        let sa = s.alpha_bar(t).sqrt();
        for (o, xv) in out.values().iter().zip(x.values()) {
            assert!((o - xv / sa).abs() < 1e-12);
        }

        // x_t built purely from eps_hat cancels to zero.
        let eps = random_image(8, 8, &mut rng);
        let sn = (1.0 - s.alpha_bar(t)).sqrt();
        let xt = eps.map(|v| sn * v);
        let out = predict_x0(&xt, &eps, t, &s);
        for o in out.values() {
            assert!(o.abs() < 1e-12);
        }
    }

    #[test]
    fn reverse_step_recovers_x0_exactly_at_t1() {
        let s = toy_schedule();
        let mut rng = substream(8, 0);
        let x0 = random_image(8, 8, &mut rng);
        let eps = GaussianDraw::sample(8, 8, &mut rng);
        let x1 = q_sample(&x0, 1, &eps, &s);
        let oracle = ExactNoiseOracle {
            x0: x0.clone(),
            schedule: s.clone(),
        };
        let mut rng2 = substream(8, 1);
        let rec = reverse_step(&x1, 1, &oracle, &s, None, &mut rng2);
        for (r, x) in rec.values().iter().zip(x0.values()) {
            assert!((r - x).abs() <= 1e-5);
        }
    }

    #[test]
    fn reverse_terminal_mean_matches_x0() {
        let s = toy_schedule();
        let mut rng = substream(9, 0);
        let x0 = random_image(8, 8, &mut rng);
        let oracle = ExactNoiseOracle {
            x0: x0.clone(),
            schedule: s.clone(),
        };
        let n = 10_000usize;
        let mut sums = vec![0.0; 64];
        for i in 0..n {
            let mut r = substream(99, i as u64);
            let eps = GaussianDraw::sample(8, 8, &mut r);
            let x2 = q_sample(&x0, 2, &eps, &s);
            let x1 = reverse_step(&x2, 2, &oracle, &s, None, &mut r);
            let out = reverse_step(&x1, 1, &oracle, &s, None, &mut r);
            for (p, &v) in out.values().iter().enumerate() {
                sums[p] += v;
            }
        }
        // sigma_1 = 0 and the oracle cancels the t=1 noise algebraically, so
        // every run lands on x0; the Monte-Carlo bound is a formality.
        let tol = 4.0 / (n as f64).sqrt();
        for p in 0..64 {
            assert!((sums[p] / n as f64 - x0.values()[p]).abs() <= tol);
        }
    }

    #[test]
    fn unconditional_sample_shape_and_stochasticity() {
        struct ZeroPredictor;
        impl NoisePredictor for ZeroPredictor {
            fn predict_noise(&self, x: &Image, _t: usize) -> Image {
                Image::constant(x.height(), x.width(), 0.0, Space::Diffusion)
            }
        }
        let s = toy_schedule();
        let a = sample_unconditional(&ZeroPredictor, &s, 8, 8, &mut substream(10, 0));
        let b = sample_unconditional(&ZeroPredictor, &s, 8, 8, &mut substream(10, 1));
        assert_eq!((a.height(), a.width()), (8, 8));
        assert!(a.values().iter().all(|&v| (-1.0..=1.0).contains(&v)));
        assert_ne!(a.values(), b.values());
    }

    #[test]
    #[should_panic(expected = "outside schedule")]
    fn q_sample_rejects_out_of_range_t() {
        let s = toy_schedule();
        let x0 = Image::constant(8, 8, 0.0, Space::Diffusion);
        q_sample(&x0, 101, &GaussianDraw::zero(8, 8), &s);
    }
}

//! Diffusion noise schedule and its derived per-step quantities.
//!
//! Timesteps are 1-based: `beta(t)` for `t in 1..=T`, and `alpha_bar(0) == 1`
//! denotes the clean image. The reverse process uses the posterior variance
//! `beta_tilde(t)`, which is exactly zero at `t = 1`, making the final
//! reverse step deterministic.

use crate::{Error, Result};

/// Per-timestep noise rates and their cumulative products.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    betas: Vec<f64>,
    alphas: Vec<f64>,
    alpha_bars: Vec<f64>,
    posterior_vars: Vec<f64>,
}

impl NoiseSchedule {
    fn from_betas(betas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::config("schedule needs at least one step"));
        }
        if betas.iter().any(|&b| !(0.0..1.0).contains(&b) || b <= 0.0) {
            return Err(Error::config("every beta must satisfy 0 < beta < 1"));
        }
        let alphas: Vec<f64> = betas.iter().map(|&b| 1.0 - b).collect();
        let mut alpha_bars = Vec::with_capacity(alphas.len());
        let mut prod = 1.0;
        for &a in &alphas {
            prod *= a;
            alpha_bars.push(prod);
        }
        // beta_tilde(t) = (1 - abar_{t-1}) / (1 - abar_t) * beta_t, abar_0 = 1.
        let posterior_vars = (0..betas.len())
            .map(|i| {
                let prev = if i == 0 { 1.0 } else { alpha_bars[i - 1] };
                (1.0 - prev) / (1.0 - alpha_bars[i]) * betas[i]
            })
            .collect();
        Ok(NoiseSchedule {
            betas,
            alphas,
            alpha_bars,
            posterior_vars,
        })
    }

    #[cfg(test)]
    pub(crate) fn from_betas_for_tests(betas: Vec<f64>) -> Self {
        Self::from_betas(betas).unwrap()
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_t(&self, t: usize) {
        assert!(
            (1..=self.len()).contains(&t),
            "timestep {t} outside schedule 1..={}",
            self.len()
        );
    }

    /// `beta_t`, `t` in `1..=T`.
    pub fn beta(&self, t: usize) -> f64 {
        self.check_t(t);
        self.betas[t - 1]
    }

    /// `alpha_t = 1 - beta_t`.
    pub fn alpha(&self, t: usize) -> f64 {
        self.check_t(t);
        self.alphas[t - 1]
    }

    /// Cumulative product of alphas up to `t`; `alpha_bar(0) == 1`.
    pub fn alpha_bar(&self, t: usize) -> f64 {
        assert!(t <= self.len(), "timestep {t} outside schedule 0..={}", self.len());
        if t == 0 {
            1.0
        } else {
            self.alpha_bars[t - 1]
        }
    }

    /// Posterior variance `beta_tilde(t)`; zero at `t = 1`.
    pub fn posterior_var(&self, t: usize) -> f64 {
        self.check_t(t);
        self.posterior_vars[t - 1]
    }
}

/// Linearly interpolated beta schedule from `beta_start` (t=1) to `beta_end`
/// (t=T_base).
pub fn linear_schedule(t_base: usize, beta_start: f64, beta_end: f64) -> Result<NoiseSchedule> {
    if t_base < 1 {
        return Err(Error::config("T_base must be at least 1"));
    }
    if !(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0) {
        return Err(Error::config(format!(
            "beta endpoints must satisfy 0 < start <= end < 1, got ({beta_start}, {beta_end})"
        )));
    }
    let betas = (0..t_base)
        .map(|i| {
            if t_base == 1 {
                beta_start
            } else {
                beta_start + (beta_end - beta_start) * i as f64 / (t_base - 1) as f64
            }
        })
        .collect();
    NoiseSchedule::from_betas(betas)
}

/// Subsample a schedule to `t_new` steps, preserving the cumulative products:
/// the new `alpha_bar'(t)` equals `alpha_bar(t * T / T_new)` exactly.
pub fn rescale(s: &NoiseSchedule, t_new: usize) -> Result<NoiseSchedule> {
    if t_new == 0 || s.len() % t_new != 0 {
        return Err(Error::config(format!(
            "T_new {t_new} must divide T {}",
            s.len()
        )));
    }
    let stride = s.len() / t_new;
    let betas = (1..=t_new)
        .map(|t| {
            let bar = s.alpha_bar(t * stride);
            let prev = s.alpha_bar((t - 1) * stride);
            1.0 - bar / prev
        })
        .collect();
    NoiseSchedule::from_betas(betas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_products_t2() {
        let s = NoiseSchedule::from_betas(vec![0.1, 0.2]).unwrap();
        assert!((s.alpha(1) - 0.9).abs() < 1e-15);
        assert!((s.alpha(2) - 0.8).abs() < 1e-15);
        assert!((s.alpha_bar(1) - 0.9).abs() < 1e-15);
        assert!((s.alpha_bar(2) - 0.72).abs() < 1e-15);
    }

    #[test]
    fn single_step_alpha_bar() {
        let s = NoiseSchedule::from_betas(vec![0.3]).unwrap();
        assert!((s.alpha_bar(1) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn default_schedule_terminal_alpha_bar() {
        let s = linear_schedule(1000, 1e-4, 0.02).unwrap();
        let terminal = s.alpha_bar(1000);
        assert!(terminal < 5e-5, "terminal alpha_bar {terminal}");
        // Regression pin computed from this construction.
        let pinned = 4.0358297653756754e-5;
        assert!(
            (terminal - pinned).abs() / pinned < 1e-12,
            "terminal alpha_bar drifted: {terminal}"
        );
    }

    #[test]
    fn alpha_bar_matches_running_product() {
        let s = linear_schedule(200, 1e-4, 0.02).unwrap();
        let mut prod = 1.0;
        for t in 1..=200 {
            prod *= s.alpha(t);
            assert!(((s.alpha_bar(t) - prod) / prod).abs() <= 1e-12);
        }
    }

    #[test]
    fn alpha_bar_is_strictly_decreasing() {
        let s = linear_schedule(100, 1e-4, 0.02).unwrap();
        for t in 1..=100 {
            assert!(s.alpha_bar(t) < s.alpha_bar(t - 1));
        }
    }

    #[test]
    fn posterior_var_zero_at_first_step() {
        let s = linear_schedule(100, 1e-4, 0.02).unwrap();
        assert_eq!(s.posterior_var(1), 0.0);
        assert!(s.posterior_var(2) > 0.0);
    }

    #[test]
    fn rescale_identity() {
        let s = linear_schedule(100, 1e-4, 0.02).unwrap();
        let r = rescale(&s, 100).unwrap();
        for t in 1..=100 {
            assert!((r.beta(t) - s.beta(t)).abs() <= 1e-12);
            assert!((r.alpha_bar(t) - s.alpha_bar(t)).abs() <= 1e-12);
        }
    }

    #[test]
    fn rescale_1000_to_100_subsamples_alpha_bar_exactly() {
        let s = linear_schedule(1000, 1e-4, 0.02).unwrap();
        let r = rescale(&s, 100).unwrap();
        for t in 1..=100 {
            assert_eq!(r.alpha_bar(t), s.alpha_bar(10 * t));
        }
    }

    #[test]
    fn rescale_hand_values_4_to_2() {
        let s = NoiseSchedule::from_betas(vec![0.1, 0.1, 0.1, 0.1]).unwrap();
        let r = rescale(&s, 2).unwrap();
        assert!((r.alpha_bar(1) - 0.81).abs() < 1e-12);
        assert!((r.alpha_bar(2) - 0.6561).abs() < 1e-12);
        assert!((r.beta(1) - 0.19).abs() < 1e-12);
        assert!((r.beta(2) - 0.19).abs() < 1e-12);
    }

    #[test]
    fn rescale_composes() {
        let s = linear_schedule(1000, 1e-4, 0.02).unwrap();
        let via_100 = rescale(&rescale(&s, 100).unwrap(), 50).unwrap();
        let direct = rescale(&s, 50).unwrap();
        for t in 1..=50 {
            assert!((via_100.alpha_bar(t) - direct.alpha_bar(t)).abs() <= 1e-14);
            assert!((via_100.beta(t) - direct.beta(t)).abs() <= 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(linear_schedule(0, 1e-4, 0.02).is_err());
        assert!(linear_schedule(10, 0.0, 0.02).is_err());
        assert!(linear_schedule(10, 0.03, 0.02).is_err());
        assert!(linear_schedule(10, 1e-4, 1.0).is_err());
        let s = linear_schedule(100, 1e-4, 0.02).unwrap();
        assert!(rescale(&s, 30).is_err());
        assert!(rescale(&s, 0).is_err());
    }

    #[test]
    #[should_panic(expected = "outside schedule")]
    fn out_of_range_timestep_panics() {
        let s = linear_schedule(10, 1e-4, 0.02).unwrap();
        s.beta(11);
    }
}

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Significance level of the Gaussian-limit check.
pub const GAUSSIAN_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonCheck {
    /// `λ(q) = Σ λ_i`, which is also the theoretical variance.
    pub lambda_total: f64,
    pub samples: usize,
    pub sample_mean: f64,
    /// Unbiased sample variance of the totals.
    pub sample_variance: f64,
    pub mean_variance_ratio: f64,
    /// Kolmogorov-Smirnov distance of the totals from `N(λ, λ)`.
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    pub gaussian: bool,
}

/// Draws `iterations × samples_per_iteration` totals, each a sum of
/// independent Poisson(`λ_i`) draws, and compares them with the Poisson and
/// Gaussian-limit predictions.
pub fn poisson_aggregate_check(
    lambdas: &[f64],
    samples_per_iteration: usize,
    iterations: usize,
    rng: &mut RngStream,
) -> Result<PoissonCheck> {
    if lambdas.is_empty() {
        return Err(Error::Empty("poisson means"));
    }
    if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "poisson means must be positive, got {l}"
        )));
    }
    if iterations < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 iterations, got {iterations}"
        )));
    }
    if samples_per_iteration == 0 {
        return Err(Error::InvalidArgument("samples_per_iteration must be positive".into()));
    }
    let lambda_total: f64 = lambdas.iter().sum();
    let n = iterations * samples_per_iteration;
    let totals: Vec<f64> = (0..n)
        .map(|_| lambdas.iter().map(|&l| rng.poisson(l)).sum::<u64>() as f64)
        .collect();
    let mean = totals.iter().sum::<f64>() / n as f64;
    let variance = totals.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let ks = ks_statistic(&totals, lambda_total, lambda_total.sqrt());
    let p = kolmogorov_p_value(ks, n);
    Ok(PoissonCheck {
        lambda_total,
        samples: n,
        sample_mean: mean,
        sample_variance: variance,
        mean_variance_ratio: mean / variance,
        ks_statistic: ks,
        ks_p_value: p,
        gaussian: p > GAUSSIAN_ALPHA,
    })
}

/// Two-sided KS distance between the empirical distribution of `sample` and
/// `N(mean, sd²)`.
pub fn ks_statistic(sample: &[f64], mean: f64, sd: f64) -> f64 {
    let normal = Normal::new(mean, sd).expect("normal parameters are finite");
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = normal.cdf(x);
        d = d.max((j as f64 / n - f).abs()).max((f - i as f64 / n).abs());
        i = j;
    }
    d
}

/// Asymptotic p-value of a KS distance `d` over `n` samples, with the
/// small-sample correction `(√n + 0.12 + 0.11/√n)·d`.
pub fn kolmogorov_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let t = (sn + 0.12 + 0.11 / sn) * d;
    if t <= 0.0 {
        return 1.0;
    }
    let p = if t < 1.18 {
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * t * t)).exp();
        let s: f64 = (1..=8)
            .map(|k| y.powi((2 * k - 1) * (2 * k - 1)))
            .sum();
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (k * k) as f64 * t * t).exp()
            })
            .sum();
        2.0 * s
    };
    p.clamp(0.0, 1.0)
}

//! Deterministic seismic operators. Each takes plain fitness values or
//! coordinates; callers own the population bookkeeping.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::euclidean;

use super::SeismicParams;

/// Raw and clamped location budgets for one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    pub raw: Vec<f64>,
    pub counts: Vec<usize>,
    /// Total number of locations, `q = Σ counts`.
    pub total: usize,
}

/// Splits the budget `m` across epicenters so that lower fitness (better)
/// receives more locations. Counts are rounded and clamped to `[d_min, d_max]`.
pub fn dispersion_counts(fitness: &[f64], params: &SeismicParams) -> Result<Dispersion> {
    if fitness.is_empty() {
        return Err(Error::Empty("population"));
    }
    positive_vartheta(params)?;
    let worst = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let numer: Vec<f64> = fitness
        .iter()
        .map(|f| (worst - f) + params.vartheta)
        .collect();
    let denom: f64 = numer.iter().sum();
    let raw: Vec<f64> = numer.iter().map(|n| params.m * n / denom).collect();
    let counts: Vec<usize> = raw
        .iter()
        .map(|d| (d.round().max(0.0) as usize).clamp(params.d_min, params.d_max))
        .collect();
    let total = counts.iter().sum();
    Ok(Dispersion { raw, counts, total })
}

/// Distance scale factor along a direction of slope `tan_alpha` inside the
/// ellipse around an epicenter. Vertical directions (infinite slope) give 1.
pub fn ellipse_distance(params: &SeismicParams, tan_alpha: f64) -> f64 {
    let t2 = tan_alpha * tan_alpha;
    if !t2.is_finite() {
        return 1.0;
    }
    let inv_a2 = params.ellipse_a.powi(-2);
    ((1.0 + t2) / (inv_a2 + t2)).sqrt()
}

pub fn seismic_power(dist: f64, magnitude: f64, params: &SeismicParams) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(Error::NonPositiveDistance(dist));
    }
    Ok((magnitude / dist).powf(params.b1) * params.b0 * params.sigma_ln_p.exp())
}

/// Inverse of [`seismic_power`] in the magnitude at fixed distance.
pub fn magnitude_from_power(power: f64, dist: f64, params: &SeismicParams) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(Error::NonPositiveDistance(dist));
    }
    if !(params.b0 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "b0 must be positive, got {}",
            params.b0
        )));
    }
    if !(power >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "power must be nonnegative, got {power}"
        )));
    }
    let scale = params.b0 * params.sigma_ln_p.exp();
    Ok((power / scale).powf(1.0 / params.b1) * dist)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakPower {
    /// `P*(E_i)` for every epicenter.
    pub per_epicenter: Vec<f64>,
    /// Index of the strongest location of each epicenter.
    pub argmax_location: Vec<usize>,
    /// Index of `E'`, the epicenter with the largest peak power.
    pub strongest: usize,
}

/// Per-epicenter maximum location power. Ties resolve to the lowest index.
pub fn peak_power(powers: &[Vec<f64>]) -> Result<PeakPower> {
    if powers.is_empty() {
        return Err(Error::Empty("population"));
    }
    let mut per_epicenter = Vec::with_capacity(powers.len());
    let mut argmax_location = Vec::with_capacity(powers.len());
    for (i, row) in powers.iter().enumerate() {
        if row.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "epicenter {i} has no locations"
            )));
        }
        let (j, p) = argmax(row);
        per_epicenter.push(p);
        argmax_location.push(j);
    }
    let (strongest, _) = argmax(&per_epicenter);
    Ok(PeakPower {
        per_epicenter,
        argmax_location,
        strongest,
    })
}

fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (j, v);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeMagnitudes {
    /// Control parameter `M = Σ_i M(E_i, L^{E_i})`.
    pub total: f64,
    pub values: Vec<f64>,
}

/// Shares `M_ctl` across epicenters in proportion to their fitness excess over
/// the population minimum, so higher fitness gets a wider hypocentral range.
pub fn cumulative_magnitudes(
    fitness: &[f64],
    magnitudes_at_peak: &[f64],
    params: &SeismicParams,
) -> Result<CumulativeMagnitudes> {
    if fitness.is_empty() {
        return Err(Error::Empty("population"));
    }
    positive_vartheta(params)?;
    if let Some(m) = magnitudes_at_peak.iter().find(|m| !m.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite magnitude {m}")));
    }
    let total: f64 = magnitudes_at_peak.iter().sum();
    Ok(CumulativeMagnitudes {
        total,
        values: split_control(fitness, total, params.vartheta),
    })
}

/// `total · ((f_i − min f) + ϑ) / Σ((f_i − min f) + ϑ)`.
pub fn split_control(fitness: &[f64], total: f64, vartheta: f64) -> Vec<f64> {
    let best = fitness.iter().copied().fold(f64::INFINITY, f64::min);
    let numer: Vec<f64> = fitness.iter().map(|f| (f - best) + vartheta).collect();
    let denom: f64 = numer.iter().sum();
    numer.iter().map(|n| total * n / denom).collect()
}

/// Relevance radius `χ · 10^{Q1·2M̃ − Q2}` with `M̃` the mean peak magnitude.
pub fn relevance_radius(magnitudes_at_peak: &[f64], params: &SeismicParams) -> Result<f64> {
    if magnitudes_at_peak.is_empty() {
        return Err(Error::Empty("magnitudes"));
    }
    let mean = magnitudes_at_peak.iter().sum::<f64>() / magnitudes_at_peak.len() as f64;
    Ok(radius_from_mean(mean, params))
}

pub fn radius_from_mean(mean_magnitude: f64, params: &SeismicParams) -> f64 {
    params.chi * 10f64.powf(params.q1 * (2.0 * mean_magnitude) - params.q2)
}

/// Poisson range identifier of epicenter `e` against references `r_k`, `r_l`.
/// `θ` is the angle at `r_k` between the lines to `e` and to `r_l`.
pub fn range_identifier(
    e: &[f64],
    r_k: &[f64],
    r_l: &[f64],
    c_w_ik: f64,
    c_w_kl: f64,
) -> Result<f64> {
    if !(c_w_ik > 0.0 && c_w_kl > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "weights must be positive, got ({c_w_ik}, {c_w_kl})"
        )));
    }
    let d_ik = euclidean(e, r_k);
    let d_kl = euclidean(r_k, r_l);
    let d_il = euclidean(e, r_l);
    if d_ik == 0.0 || d_kl == 0.0 || d_il == 0.0 {
        return Err(Error::DegenerateGeometry("coincident points"));
    }
    let cos = ((d_ik * d_ik + d_kl * d_kl - d_il * d_il) / (2.0 * d_ik * d_kl)).clamp(-1.0, 1.0);
    if cos.abs() < 1e-9 {
        return Err(Error::DegenerateGeometry("right angle between reference lines"));
    }
    Ok((d_ik * c_w_kl) / (cos * d_kl * c_w_ik))
}

/// Number of coordinates displaced around a hypocenter, uniform on `1..=dim`.
pub fn displacement_dim_count(dim: usize, rng: &mut RngStream) -> usize {
    rng.int_range(1, dim.max(1))
}

/// Hypocentral displacement of coordinate `x_k` with noise drawn from
/// `U(−c_val, c_val)`.
pub fn hypocentral_displace(x_k: f64, c_val: f64, mag_k: f64, rng: &mut RngStream) -> Result<f64> {
    if !(c_val >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hypocentral range must be nonnegative, got {c_val}"
        )));
    }
    let u = rng.uniform(-c_val, c_val);
    hypocentral_with_noise(x_k, mag_k, u)
}

/// Hypocentral displacement for a given noise value `u`.
pub fn hypocentral_with_noise(x_k: f64, mag_k: f64, u: f64) -> Result<f64> {
    if !(mag_k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "magnitude must be positive, got {mag_k}"
        )));
    }
    Ok((x_k / mag_k).hypot(u))
}

/// Multiplies `x_k` by a Poisson(`lambda_loc`) integer and wraps into `[low, up)`.
pub fn poisson_location(
    x_k: f64,
    low: f64,
    up: f64,
    params: &SeismicParams,
    rng: &mut RngStream,
) -> f64 {
    let w = rng.poisson(params.lambda_loc);
    poisson_location_with_draw(x_k, w, low, up)
}

pub fn poisson_location_with_draw(x_k: f64, w: u64, low: f64, up: f64) -> f64 {
    normalize_coordinate(x_k * w as f64, low, up)
}

/// Wraps `v` into `[low, up)` by Euclidean remainder. Non-finite input maps
/// to `low`.
pub fn normalize_coordinate(v: f64, low: f64, up: f64) -> f64 {
    if !v.is_finite() {
        return low;
    }
    let out = (v - low).rem_euclid(up - low) + low;
    // rem_euclid can round up to the modulus for tiny negative offsets.
    if out >= up || out < low {
        low
    } else {
        out
    }
}

fn positive_vartheta(params: &SeismicParams) -> Result<()> {
    if params.vartheta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "vartheta must be positive, got {}",
            params.vartheta
        )))
    }
}

//! Poisson epicenter spawning around a reference pair.

use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::{euclidean, Bounds};

use super::operators::{normalize_coordinate, range_identifier, seismic_power};
use super::SeismicParams;

/// Pair re-draws before falling back to the running mean of `Φ`.
pub const MAX_PAIR_ATTEMPTS: usize = 16;

/// Running mean of the range identifiers observed in one generation.
#[derive(Debug, Clone, Default)]
pub struct PhiTracker {
    sum: f64,
    count: usize,
}

impl PhiTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, phi: f64) {
        self.sum += phi;
        self.count += 1;
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Generation-level inputs shared by every spawn.
#[derive(Debug, Clone, Copy)]
pub struct SpawnContext<'a> {
    pub bounds: &'a Bounds,
    /// Relevance radius in coordinate units.
    pub radius: f64,
    /// Mean peak magnitude `M̃`.
    pub mean_magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spawned {
    pub position: Vec<f64>,
    pub phi: f64,
    pub lambda: f64,
    pub step: f64,
    /// True when the pair draws were exhausted and `Φ` came from the tracker.
    pub fallback: bool,
}

/// `pmf(k; λ) / pmf(mode; λ)`, which lies in `[0, 1]`.
pub fn modal_pmf_ratio(k: u64, lambda: f64) -> f64 {
    let mode = lambda.floor();
    let ln_pmf = |x: f64| x * lambda.ln() - ln_gamma(x + 1.0);
    (ln_pmf(k as f64) - ln_pmf(mode)).exp().min(1.0)
}

/// New epicenter position drawn from `e` toward a weighted pair of references
/// inside the relevance radius.
pub fn spawn_epicenter(
    e: &[f64],
    references: &[Vec<f64>],
    ctx: &SpawnContext<'_>,
    params: &SeismicParams,
    tracker: &mut PhiTracker,
    rng: &mut RngStream,
) -> Result<Spawned> {
    let dim = ctx.bounds.dim();
    if e.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: e.len(),
        });
    }
    let in_range: Vec<&[f64]> = references
        .iter()
        .map(Vec::as_slice)
        .filter(|r| {
            let d = euclidean(e, r);
            d > 0.0 && d <= ctx.radius
        })
        .collect();
    let sampled;
    let pool: Vec<&[f64]> = if in_range.len() >= 2 {
        in_range
    } else {
        if !(ctx.radius > 0.0) {
            return Err(Error::PoolTooSmall {
                needed: 2,
                found: in_range.len(),
            });
        }
        sampled = [ball_point(e, ctx.radius, rng), ball_point(e, ctx.radius, rng)];
        sampled.iter().map(Vec::as_slice).collect()
    };

    let weight = |a: &[f64], b: &[f64]| -> f64 {
        seismic_power(euclidean(a, b), ctx.mean_magnitude, params).unwrap_or(f64::NAN)
    };

    let mut pair = (0, 1);
    let mut phi = None;
    for _ in 0..MAX_PAIR_ATTEMPTS {
        let idx = rng.distinct_indices(pool.len(), 2);
        pair = (idx[0], idx[1]);
        let (rk, rl) = (pool[pair.0], pool[pair.1]);
        let (c_ik, c_kl) = (weight(e, rk), weight(rk, rl));
        if let Ok(v) = range_identifier(e, rk, rl, c_ik, c_kl) {
            if v.is_finite() && v > 0.0 {
                phi = Some(v);
                break;
            }
        }
    }
    let fallback = phi.is_none();
    let phi = match phi {
        Some(v) => {
            tracker.push(v);
            v
        }
        None => tracker.mean().unwrap_or(1.0),
    };
    let lambda = tracker.mean().unwrap_or(phi);

    let step = ctx.radius * modal_pmf_ratio(phi.round() as u64, lambda);

    let (rk, rl) = (pool[pair.0], pool[pair.1]);
    let (wk, wl) = (weight(e, rk), weight(e, rl));
    let (wk, wl) = if wk.is_finite() && wl.is_finite() && wk + wl > 0.0 {
        (wk, wl)
    } else {
        (1.0, 1.0)
    };
    let target: Vec<f64> = rk
        .iter()
        .zip(rl)
        .map(|(a, b)| (wk * a + wl * b) / (wk + wl))
        .collect();
    let delta: Vec<f64> = target.iter().zip(e).map(|(t, x)| t - x).collect();
    let norm = delta.iter().map(|d| d * d).sum::<f64>().sqrt();

    let position = e
        .iter()
        .zip(&delta)
        .enumerate()
        .map(|(k, (x, d))| {
            let moved = if norm > 0.0 { x + step * d / norm } else { *x };
            normalize_coordinate(moved, ctx.bounds.low[k], ctx.bounds.up[k])
        })
        .collect();

    Ok(Spawned {
        position,
        phi,
        lambda,
        step,
        fallback,
    })
}

/// Uniform point in the ball of radius `r` around `center`.
fn ball_point(center: &[f64], r: f64, rng: &mut RngStream) -> Vec<f64> {
    loop {
        let dir: Vec<f64> = (0..center.len())
            .map(|_| StandardNormal.sample(rng))
            .collect();
        let norm = dir.iter().map(|d: &f64| d * d).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let u: f64 = rng.uniform(0.0, 1.0);
        let rho = r * u.powf(1.0 / center.len() as f64);
        if rho == 0.0 {
            continue;
        }
        return center
            .iter()
            .zip(&dir)
            .map(|(c, d)| c + rho * d / norm)
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Discrete, Poisson};

    fn unit_box(d: usize) -> Bounds {
        Bounds::new(vec![0.0; d], vec![1.0; d]).unwrap()
    }

    #[test]
    fn pmf_ratio_never_exceeds_one() {
        let mut lambda = 0.05;
        while lambda <= 60.0 {
            let oracle = Poisson::new(lambda).unwrap();
            let mode = lambda.floor() as u64;
            for k in 0..200u64 {
                let r = modal_pmf_ratio(k, lambda);
                assert!((0.0..=1.0).contains(&r), "k={k} lambda={lambda} r={r}");
                let direct = oracle.pmf(k) / oracle.pmf(mode);
                assert!((r - direct).abs() <= 1e-9 * direct.max(1.0), "k={k} λ={lambda}");
            }
            lambda += 0.05;
        }
    }

    #[test]
    fn spawn_is_deterministic_and_bounded() {
        let b = unit_box(3);
        let ctx = SpawnContext {
            bounds: &b,
            radius: 0.4,
            mean_magnitude: 1.2,
        };
        let refs: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![0.1 * i as f64, 0.05 * i as f64, 0.9 - 0.07 * i as f64])
            .collect();
        let p = SeismicParams::default();
        let run = |seed| {
            let mut t = PhiTracker::new();
            let mut rng = RngStream::new(seed);
            spawn_epicenter(&[0.5, 0.5, 0.5], &refs, &ctx, &p, &mut t, &mut rng).unwrap()
        };
        let a = run(9);
        assert_eq!(a, run(9));
        assert!(b.contains(&a.position));
        assert!(a.step <= ctx.radius);
    }

    #[test]
    fn falls_back_to_ball_samples() {
        let b = unit_box(2);
        let ctx = SpawnContext {
            bounds: &b,
            radius: 0.05,
            mean_magnitude: 1.0,
        };
        let refs = vec![vec![0.9, 0.9], vec![0.95, 0.1]];
        let mut t = PhiTracker::new();
        let mut rng = RngStream::new(1);
        let s = spawn_epicenter(&[0.2, 0.2], &refs, &ctx, &SeismicParams::default(), &mut t, &mut rng)
            .unwrap();
        assert!(b.contains(&s.position));
        assert!(euclidean(&s.position, &[0.2, 0.2]) <= 0.05 + 1e-12);

        let zero = SpawnContext { radius: 0.0, ..ctx };
        assert!(spawn_epicenter(&[0.2, 0.2], &refs, &zero, &SeismicParams::default(), &mut t, &mut rng)
            .is_err());
    }

    #[test]
    fn tracker_mean() {
        let mut t = PhiTracker::new();
        assert_eq!(t.mean(), None);
        t.push(1.0);
        t.push(3.0);
        assert_eq!(t.mean(), Some(2.0));
        assert_eq!(t.count(), 2);
    }
}

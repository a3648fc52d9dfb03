use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equal-width magnitude bins over the observed range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeHistogram {
    /// `m + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Total number of magnitudes, `q = Σ n_i`.
    pub total: u64,
}

impl MagnitudeHistogram {
    /// Histogram from explicit edges and counts.
    pub fn from_parts(edges: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() || edges.len() != counts.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} edges do not bound {} bins",
                edges.len(),
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Self {
            edges,
            counts,
            total,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

/// Bins `magnitudes` into `m` equal-width ranges spanning `[min, max]`. The
/// maximum falls in the last bin; identical inputs all land in the first.
pub fn magnitude_histogram(magnitudes: &[f64], m: usize) -> Result<MagnitudeHistogram> {
    if magnitudes.is_empty() {
        return Err(Error::Empty("magnitude trace"));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 bins, got {m}")));
    }
    if let Some(v) = magnitudes.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite magnitude {v}")));
    }
    let lo = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = magnitudes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / m as f64;
    let edges: Vec<f64> = (0..=m)
        .map(|k| if k == m { hi } else { lo + width * k as f64 })
        .collect();
    let mut counts = vec![0u64; m];
    for &v in magnitudes {
        let bin = if width > 0.0 {
            (((v - lo) / width) as usize).min(m - 1)
        } else {
            0
        };
        counts[bin] += 1;
    }
    MagnitudeHistogram::from_parts(edges, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn equal_magnitudes_single_bin() {
        let h = magnitude_histogram(&[2.5; 10], 5).unwrap();
        assert_eq!(h.counts.iter().filter(|c| **c > 0).count(), 1);
        assert_eq!(h.total, 10);
    }

    #[test]
    fn uniform_fill() {
        let mut rng = RngStream::new(8);
        let n = 100_000;
        let v: Vec<f64> = (0..n).map(|_| rng.uniform(1.0, 10.0)).collect();
        let h = magnitude_histogram(&v, 9).unwrap();
        assert_eq!(h.total, n as u64);
        let expect = n as f64 / 9.0;
        for c in &h.counts {
            assert!((*c as f64 - expect).abs() / expect < 0.05, "{c}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(magnitude_histogram(&[], 3).is_err());
        assert!(magnitude_histogram(&[1.0], 1).is_err());
        assert!(MagnitudeHistogram::from_parts(vec![0.0, 1.0], vec![1, 2]).is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::MagnitudeHistogram;

/// Least-squares fit of `log10 n = a − b·x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrFit {
    pub a: f64,
    pub b: f64,
    /// Sum of squared residuals in `log10 n`.
    pub residual: f64,
    pub bins_used: usize,
    /// Whether the regressor was `log10` of the bin midpoint.
    pub log_midpoints: bool,
}

impl GrFit {
    pub fn predict(&self, x: f64) -> f64 {
        10f64.powf(self.a - self.b * x)
    }

    /// Fitted count at a bin midpoint, applying the same regressor transform.
    pub fn fitted_count(&self, midpoint: f64) -> f64 {
        let x = if self.log_midpoints { midpoint.log10() } else { midpoint };
        self.predict(x)
    }
}

/// Fits the histogram's positive-count bins against their midpoints.
pub fn gutenberg_richter_fit(hist: &MagnitudeHistogram, log_midpoints: bool) -> Result<GrFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (mid, &n) in hist.midpoints().into_iter().zip(&hist.counts) {
        if n == 0 {
            continue;
        }
        let x = if log_midpoints {
            if mid <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "log-scaled fit needs positive midpoints, got {mid}"
                )));
            }
            mid.log10()
        } else {
            mid
        };
        xs.push(x);
        ys.push((n as f64).log10());
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 bins with positive counts, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("bin midpoints coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let a = my - slope * mx;
    let b = -slope;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (a - b * x)).powi(2))
        .sum();
    Ok(GrFit {
        a,
        b,
        residual,
        bins_used: xs.len(),
        log_midpoints,
    })
}

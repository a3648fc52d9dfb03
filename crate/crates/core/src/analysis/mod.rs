//! Magnitude histograms, Gutenberg-Richter fits and Poisson aggregation
//! checks over optimizer traces.

mod gr;
mod histogram;
mod poisson;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use gr::{gutenberg_richter_fit, GrFit};
pub use histogram::{magnitude_histogram, MagnitudeHistogram};
pub use poisson::{
    kolmogorov_p_value, ks_statistic, poisson_aggregate_check, PoissonCheck, GAUSSIAN_ALPHA,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub histogram: MagnitudeHistogram,
    pub gr_fit: Option<GrFit>,
    pub poisson: Option<PoissonCheck>,
}

impl AnalysisReport {
    /// Plot-ready rows: bin range, midpoint, count and fitted count (empty
    /// when no fit is present).
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,midpoint,count,fitted\n");
        let h = &self.histogram;
        for (k, mid) in h.midpoints().into_iter().enumerate() {
            let fitted = self
                .gr_fit
                .as_ref()
                .map(|f| f.fitted_count(mid).to_string())
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                h.edges[k],
                h.edges[k + 1],
                mid,
                h.counts[k],
                fitted
            );
        }
        out
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tunables of the seismic operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeismicParams {
    /// Dispersion control: total raw location budget per generation.
    pub m: f64,
    /// Residual quantity keeping dispersion and cumulative-magnitude shares positive.
    pub vartheta: f64,
    /// Power-law regression coefficients linking distance, magnitude and power.
    pub b0: f64,
    pub b1: f64,
    /// Log-power standard deviation term.
    pub sigma_ln_p: f64,
    /// Ellipse semi-axes around an epicenter. `ellipse_b` is carried but
    /// does not enter the projected distance.
    pub ellipse_a: f64,
    pub ellipse_b: f64,
    /// Relevance-radius normalization. The engine interprets it as a
    /// fraction of the search-box diagonal.
    pub chi: f64,
    pub q1: f64,
    pub q2: f64,
    /// Clamp for per-epicenter location counts.
    pub d_min: usize,
    pub d_max: usize,
    /// Poisson mean of the location multiplier.
    pub lambda_loc: f64,
    /// Size of the reference-point pool offered to each spawn.
    pub n_ref: usize,
}

impl Default for SeismicParams {
    fn default() -> Self {
        Self {
            m: 50.0,
            vartheta: 1e-3,
            b0: 1.0,
            b1: 1.0,
            sigma_ln_p: 0.0,
            ellipse_a: 1.0,
            ellipse_b: 1.0,
            chi: 0.1,
            q1: 0.414,
            q2: 1.696,
            d_min: 1,
            d_max: 50,
            lambda_loc: 1.0,
            n_ref: 32,
        }
    }
}

impl SeismicParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("seismic params: {what}")));
        if !(self.m.is_finite() && self.m > 0.0) {
            return bad("m must be positive");
        }
        if !(self.vartheta.is_finite() && self.vartheta > 0.0) {
            return bad("vartheta must be positive");
        }
        if !(self.b0.is_finite() && self.b0 > 0.0) {
            return bad("b0 must be positive");
        }
        if !(self.b1.is_finite() && self.b1 != 0.0) {
            return bad("b1 must be nonzero");
        }
        if !self.sigma_ln_p.is_finite() {
            return bad("sigma_ln_p must be finite");
        }
        if !(self.ellipse_a.is_finite() && self.ellipse_a > 0.0) {
            return bad("ellipse_a must be positive");
        }
        if !(self.chi.is_finite() && self.chi > 0.0) {
            return bad("chi must be positive");
        }
        if !(self.q1.is_finite() && self.q2.is_finite()) {
            return bad("q1, q2 must be finite");
        }
        if self.d_min < 1 || self.d_max < self.d_min {
            return bad("need 1 <= d_min <= d_max");
        }
        if !(self.lambda_loc.is_finite() && self.lambda_loc > 0.0) {
            return bad("lambda_loc must be positive");
        }
        if self.n_ref < 2 {
            return bad("n_ref must be at least 2");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = SeismicParams::default();
        p.validate().unwrap();
        assert_eq!((p.q1, p.q2), (0.414, 1.696));
    }

    #[test]
    fn invariants_enforced() {
        for tweak in [
            |p: &mut SeismicParams| p.vartheta = 0.0,
            |p: &mut SeismicParams| p.b1 = 0.0,
            |p: &mut SeismicParams| p.d_min = 0,
            |p: &mut SeismicParams| p.chi = 0.0,
        ] {
            let mut p = SeismicParams::default();
            tweak(&mut p);
            assert!(p.validate().is_err());
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box constraints of the search space, one `[low, up)` interval per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub low: Vec<f64>,
    pub up: Vec<f64>,
}

impl Bounds {
    pub fn new(low: Vec<f64>, up: Vec<f64>) -> Result<Self> {
        if low.len() != up.len() {
            return Err(Error::DimensionMismatch {
                expected: low.len(),
                found: up.len(),
            });
        }
        if low.is_empty() {
            return Err(Error::Empty("bounds"));
        }
        for (k, (l, u)) in low.iter().zip(&up).enumerate() {
            if !(l.is_finite() && u.is_finite() && u > l) {
                return Err(Error::InfeasibleConfig(format!(
                    "bounds collapse in dimension {k}: [{l}, {u})"
                )));
            }
        }
        Ok(Self { low, up })
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn width(&self, k: usize) -> f64 {
        self.up[k] - self.low[k]
    }

    /// Euclidean length of the box diagonal.
    pub fn diagonal(&self) -> f64 {
        (0..self.dim())
            .map(|k| self.width(k).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.low.iter().zip(&self.up))
                .all(|(v, (l, u))| *v >= *l && *v < *u)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// How fitness maps to selection weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    /// Weight `1 / (1 + f̃)`, favoring small fitness.
    #[default]
    Inverted,
    /// Weight `f̃`, proportional to fitness as printed.
    Literal,
}

impl std::str::FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverted" => Ok(Self::Inverted),
            "literal" => Ok(Self::Literal),
            other => Err(Error::InvalidArgument(format!(
                "unknown selection mode `{other}` (expected inverted or literal)"
            ))),
        }
    }
}

/// Normalized selection probabilities. Falls back to uniform when every
/// weight is zero.
pub fn selection_probabilities(fitness: &[f64], mode: SelectionMode) -> Vec<f64> {
    let w: Vec<f64> = fitness.iter().map(|&f| weight(f, mode)).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 && total.is_finite() {
        w.iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / fitness.len() as f64; fitness.len()]
    }
}

fn weight(f: f64, mode: SelectionMode) -> f64 {
    let w = match mode {
        SelectionMode::Inverted => 1.0 / (1.0 + f.max(0.0)),
        SelectionMode::Literal => f.max(0.0),
    };
    if w.is_finite() { w } else { 0.0 }
}

/// Draws `count` distinct indices with probability proportional to the
/// selection weights.
pub fn select(
    fitness: &[f64],
    count: usize,
    mode: SelectionMode,
    rng: &mut RngStream,
) -> Result<Vec<usize>> {
    if count > fitness.len() {
        return Err(Error::PoolTooSmall {
            needed: count,
            found: fitness.len(),
        });
    }
    let probs = selection_probabilities(fitness, mode);
    // Zero weights stay selectable once positive weights run out.
    let floor = f64::MIN_POSITIVE;
    rand::seq::index::sample_weighted(rng, fitness.len(), |i| probs[i].max(floor), count)
        .map(|v| v.into_vec())
        .map_err(|e| Error::InvalidArgument(format!("selection weights: {e}")))
}

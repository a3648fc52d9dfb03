use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seismic::SeismicParams;

use super::SelectionMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Number of epicenters `|P|`.
    pub population_size: usize,
    /// Generation cap `G`.
    pub max_generations: usize,
    /// Solutions selected per generation; `None` means `|P|`.
    pub selection_count: Option<usize>,
    pub p_cross: f64,
    /// Differential-evolution scale `ϑ`.
    pub vartheta_de: f64,
    pub seed: u64,
    pub selection: SelectionMode,
    /// Stop after this many generations without an archive change.
    pub stall_gens: usize,
    pub archive_capacity: usize,
    /// Hypocentral noise half-width as a fraction of each dimension's width,
    /// scaled by the epicenter's share of the control magnitude.
    pub hypocentral_scale: f64,
    /// Indices of the searched throughput entries; `None` searches all.
    pub active_dims: Option<Vec<usize>>,
    pub seismic: SeismicParams,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            max_generations: 300,
            selection_count: None,
            p_cross: 0.9,
            vartheta_de: 0.5,
            seed: 0,
            selection: SelectionMode::Inverted,
            stall_gens: 50,
            archive_capacity: 100,
            hypocentral_scale: 0.05,
            active_dims: None,
            seismic: SeismicParams::default(),
        }
    }
}

impl EngineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("engine config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn selection_count(&self) -> usize {
        self.selection_count.unwrap_or(self.population_size)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(format!("engine config: {m}")));
        if self.population_size < 4 {
            return bad(format!(
                "population_size must be at least 4, got {}",
                self.population_size
            ));
        }
        if self.max_generations == 0 {
            return bad("max_generations must be positive".into());
        }
        let p = self.selection_count();
        if p == 0 {
            return bad("selection_count must be positive".into());
        }
        if !(self.p_cross > 0.0 && self.p_cross < 1.0) {
            return bad(format!("p_cross must lie in (0, 1), got {}", self.p_cross));
        }
        if !(self.vartheta_de.is_finite() && self.vartheta_de > 0.0) {
            return bad(format!("vartheta_de must be positive, got {}", self.vartheta_de));
        }
        if self.stall_gens == 0 {
            return bad("stall_gens must be positive".into());
        }
        if self.archive_capacity == 0 {
            return bad("archive_capacity must be positive".into());
        }
        if !(self.hypocentral_scale.is_finite() && self.hypocentral_scale >= 0.0) {
            return bad("hypocentral_scale must be nonnegative".into());
        }
        self.seismic.validate()
    }
}

//! Scenario configuration: the resonance, background, grid and initial pair
//! that fully determine a synthetic dataset.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelState;
use crate::error::{Error, Result};
use crate::grid::AngleGrid;
use crate::io::{malformed, read_text};
use crate::kinematics::reduced_mass;
use crate::resonance::{synth_table, BackgroundSpec, ResonanceSpec};
use crate::scalar::Real;
use crate::table::AmplitudeTable;

pub const DEFAULT_GRID_ORDER: usize = 64;

fn default_grid_order() -> usize {
    DEFAULT_GRID_ORDER
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub resonance: ResonanceSpec<f64>,
    pub background: BackgroundSpec<f64>,
    /// Weight of the resonant term; the background gets `1 − mix`.
    pub mix: f64,
    /// Gauss–Legendre order of the angle grid.
    #[serde(default = "default_grid_order")]
    pub grid_order: usize,
    pub initial_pair: [ChannelState; 2],
    /// Species masses in amu, keyed by label.
    #[serde(default)]
    pub masses: BTreeMap<String, f64>,
    /// Offset of the scenario's energy zero, in eV. Labelling only.
    #[serde(default)]
    pub energy_offset_label: f64,
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str, origin: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| malformed(origin, &e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json_str(&read_text(path)?, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(Error::InvalidInput(format!(
                "mix = {} outside [0, 1]",
                self.mix
            )));
        }
        if self.grid_order == 0 {
            return Err(Error::InvalidInput("grid_order must be at least 1".into()));
        }
        for (label, &m) in &self.masses {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "mass of '{label}' must be positive (got {m})"
                )));
            }
        }
        let [a, b] = &self.initial_pair;
        for s in [a, b] {
            if let Some(why) = s.check() {
                return Err(Error::InvalidInput(format!("initial state {s}: {why}")));
            }
        }
        if a == b || a.arrangement != b.arrangement {
            return Err(Error::InvalidInput(
                "initial pair must be two distinct states of one arrangement".into(),
            ));
        }
        self.resonance.check()?;
        self.background.check()?;
        Ok(())
    }

    pub fn grid<T: Real>(&self) -> Result<AngleGrid<T>> {
        AngleGrid::gauss_legendre(self.grid_order)
    }

    /// Amplitude table at one energy.
    pub fn synth<T: Real>(&self, energy: T) -> Result<AmplitudeTable<T>> {
        synth_table(
            &self.resonance.cast(),
            &self.background.cast(),
            &self.grid()?,
            energy,
            self.initial_pair.clone(),
            T::lit(self.mix),
        )
    }

    /// Reduced mass of two labelled species from `masses`.
    pub fn reduced_mass(&self, a: &str, b: &str) -> Result<f64> {
        let get = |k: &str| {
            self.masses
                .get(k)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("no mass for '{k}' in scenario")))
        };
        reduced_mass(get(a)?, get(b)?)
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Run configuration: one TOML file fully determines a run.
//!
//! ```toml
//! [run]
//! seed = 1
//! cell_count = 262144
//! output_dir = "out"
//! created_at = "1970-01-01T00:00:00Z"
//! af_override = 11.03
//! literal_af = false
//!
//! [model]       # simulator population
//! [selection]   # N, rt_k, ht_k
//! [stress]      # oven conditions
//! [simulate]    # readout counts and stress duration
//! ```
//!
//! Missing keys take their defaults; unknown keys are rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use chrono::{DateTime, Utc};
use pufage_core::agingmodel::acceleration_factor;
use pufage_core::{ModelConfig, SelectionConfig, StressProfile};
use serde::{Deserialize, Serialize};

use crate::reference::PUBLISHED_AF;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub cell_count: usize,
    pub output_dir: PathBuf,
    /// Stamped into profiles so reruns are byte-identical.
    pub created_at: DateTime<Utc>,
    /// Acceleration factor used downstream in place of the closed form.
    pub af_override: f64,
    /// Use the closed-form acceleration factor instead of `af_override`.
    pub literal_af: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 1,
            cell_count: 262_144,
            output_dir: PathBuf::from("out"),
            created_at: DateTime::<Utc>::UNIX_EPOCH,
            af_override: PUBLISHED_AF,
            literal_af: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionSection {
    #[serde(rename = "N")]
    pub n_reevals: usize,
    pub rt_k: f64,
    pub ht_k: f64,
}

impl Default for SelectionSection {
    fn default() -> Self {
        let s = SelectionConfig::default();
        Self {
            n_reevals: s.n_reevals,
            rt_k: s.rt_k,
            ht_k: s.ht_k,
        }
    }
}

impl From<&SelectionSection> for SelectionConfig {
    fn from(s: &SelectionSection) -> Self {
        SelectionConfig {
            n_reevals: s.n_reevals,
            rt_k: s.rt_k,
            ht_k: s.ht_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    /// Oven hours.
    pub stress_hours: f64,
    /// Pre-aging corners; empty means the selection RT and HT.
    pub temps_k: Vec<f64>,
    /// Pre-aging readouts per corner.
    pub repeats: usize,
    /// Extra RT readouts for an out-of-sample p_intra.
    pub held_out: usize,
    /// Post-aging RT readouts.
    pub post_repeats: usize,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            stress_hours: 48.0,
            temps_k: Vec::new(),
            repeats: 9,
            held_out: 4,
            post_repeats: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub model: ModelConfig,
    pub selection: SelectionSection,
    pub stress: StressProfile,
    pub simulate: SimulateSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate().with_context(|| format!("in {}", path.display()))?;
        Ok(cfg)
    }

    pub fn load_or_default(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        toml::to_string(self).context("serializing config")
    }

    pub fn selection(&self) -> SelectionConfig {
        (&self.selection).into()
    }

    /// Pre-aging corners, defaulting to the selection RT and HT.
    pub fn temperatures(&self) -> Vec<f64> {
        if self.simulate.temps_k.is_empty() {
            vec![self.selection.rt_k, self.selection.ht_k]
        } else {
            self.simulate.temps_k.clone()
        }
    }

    /// Acceleration factor used downstream, and the closed-form value.
    pub fn acceleration(&self) -> anyhow::Result<(f64, f64)> {
        let literal = acceleration_factor(&self.stress)?;
        let used = if self.run.literal_af {
            literal
        } else {
            self.run.af_override
        };
        Ok((used, literal))
    }

    /// Checks every field, naming the first offender.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.run.seed > i64::MAX as u64 {
            bail!("run.seed must be at most {}", i64::MAX);
        }
        if self.run.cell_count == 0 || self.run.cell_count > u32::MAX as usize {
            bail!("run.cell_count must lie in 1..={}", u32::MAX);
        }
        let af = self.run.af_override;
        if !(af > 0.0 && af.is_finite()) {
            bail!("run.af_override must be positive, got {af}");
        }
        self.model.validate().context("[model]")?;
        self.stress.validate().context("[stress]")?;
        self.selection().validate().context("[selection]")?;
        let s = &self.simulate;
        if !(s.stress_hours >= 0.0 && s.stress_hours.is_finite()) {
            bail!(
                "simulate.stress_hours must be non-negative, got {}",
                s.stress_hours
            );
        }
        if let Some(t) = s.temps_k.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            bail!("simulate.temps_k contains non-physical temperature {t}");
        }
        for (name, v) in [("repeats", s.repeats), ("post_repeats", s.post_repeats)] {
            if v == 0 || v > u16::MAX as usize {
                bail!("simulate.{name} must lie in 1..={}", u16::MAX);
            }
        }
        if s.held_out > u16::MAX as usize {
            bail!("simulate.held_out must be at most {}", u16::MAX);
        }
        if self.selection.n_reevals > s.repeats {
            bail!(
                "selection.N = {} exceeds simulate.repeats = {}",
                self.selection.n_reevals,
                s.repeats
            );
        }
        Ok(())
    }
}

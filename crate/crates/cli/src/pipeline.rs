// SPDX-License-Identifier: Apache-2.0

//! Simulated provisioning and aging runs.

use std::fs;
use std::path::Path;

use anyhow::Context;
use pufage_core::agingmodel::{readout_set, temperature_readout_set};
use pufage_core::bitcore::{ReadoutSet, Role};
use pufage_core::dataio::Manifest;
use pufage_core::DeviceModel;

use crate::config::RunConfig;
use crate::units::millikelvin_tag;

/// Evaluation slot of the held-out RT readouts; pre-aging corners use
/// slots `0..temps`.
pub const SLOT_HELD_OUT: u64 = 1_000;
/// First evaluation slot of post-aging readouts.
pub const SLOT_POST: u64 = 2_000;

pub struct Dataset {
    pub fresh: DeviceModel,
    pub aged: DeviceModel,
    /// One set per pre-aging corner, in config order.
    pub pre: Vec<ReadoutSet>,
    pub held_out: Option<ReadoutSet>,
    pub post: ReadoutSet,
    pub af: f64,
    pub literal_af: f64,
}

impl Dataset {
    pub fn pre_at(&self, temperature_k: f64) -> Option<&ReadoutSet> {
        let mk = pufage_core::bitcore::kelvin_to_mk(temperature_k);
        self.pre.iter().find(|s| s.meta().temperature_mk == mk)
    }
}

/// Post-aging RT readouts of `device`; a device aged by zero hours still
/// produces post-aging records.
pub fn post_readouts(cfg: &RunConfig, device: &DeviceModel, slot: u64) -> anyhow::Result<ReadoutSet> {
    let set = readout_set(
        device,
        cfg.selection.rt_k,
        cfg.simulate.post_repeats,
        cfg.run.seed,
        SLOT_POST + slot,
    )?;
    Ok(set.with_role(Role::PostAging)?)
}

pub fn simulate(cfg: &RunConfig) -> anyhow::Result<Dataset> {
    cfg.validate()?;
    let seed = cfg.run.seed;
    let fresh = DeviceModel::new(seed, cfg.model, cfg.run.cell_count)?;
    let pre = temperature_readout_set(&fresh, &cfg.temperatures(), cfg.simulate.repeats, seed)?;
    let held_out = match cfg.simulate.held_out {
        0 => None,
        k => Some(readout_set(&fresh, cfg.selection.rt_k, k, seed, SLOT_HELD_OUT)?),
    };
    let (af, literal_af) = cfg.acceleration()?;
    let aged = fresh.age_with_factor(cfg.simulate.stress_hours, af)?;
    let post = post_readouts(cfg, &aged, 0)?;
    Ok(Dataset {
        fresh,
        aged,
        pre,
        held_out,
        post,
        af,
        literal_af,
    })
}

pub const MANIFEST: &str = "manifest.json";
pub const REPLAY_CONFIG: &str = "config.toml";

/// Writes every readout set, the manifest and the replay config to `dir`.
pub fn write_dataset(cfg: &RunConfig, ds: &Dataset, dir: &Path) -> anyhow::Result<Manifest> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let id = ds.fresh.id();
    let mut manifest = Manifest::default();
    for set in &ds.pre {
        let name = format!("pre_{}.srpf", millikelvin_tag(set.meta().temperature_k()));
        manifest.add_readouts(dir, &name, set, &id)?;
    }
    if let Some(set) = &ds.held_out {
        let name = format!("holdout_{}.srpf", millikelvin_tag(set.meta().temperature_k()));
        manifest.add_readouts(dir, &name, set, &id)?;
    }
    let name = format!("post_{}.srpf", millikelvin_tag(ds.post.meta().temperature_k()));
    manifest.add_readouts(dir, &name, &ds.post, &id)?;
    manifest.write(&dir.join(MANIFEST))?;
    let replay = dir.join(REPLAY_CONFIG);
    fs::write(&replay, cfg.to_toml()?).with_context(|| format!("writing {}", replay.display()))?;
    Ok(manifest)
}

// SPDX-License-Identifier: Apache-2.0

//! Statistical SRAM PUF simulator.
//!
//! Each cell is reduced to a signed threshold mismatch. At power-up the cell
//! reads 1 when
//!
//! ```text
//! mismatch + temp_sensitivity (T - T_ref) - sign(mismatch) shift + noise > 0
//! ```
//!
//! where `shift = aging_rate * t_eff^m` is the NBTI degradation after `t_eff`
//! hours of nominal-condition aging. The shift always works against the
//! cell's zero-age preference.
//!
//! All randomness comes from counter-based ChaCha streams addressed by
//! `(domain, seed, stream, cell)`, so any subset of cells can be drawn in any
//! order and gives the same values as a full sequential pass.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcore::{
    hamming_distance, CellAddress, DeviceId, ReadoutMeta, ReadoutSet, ResponseVector, Role,
};

const DOMAIN_DEVICE: &[u8; 8] = b"pufdevic";
const DOMAIN_NOISE: &[u8; 8] = b"pufnoise";
const DOMAIN_EVAL: &[u8; 8] = b"pufevals";
const DOMAIN_CALIBRATE: &[u8; 8] = b"pufcalib";

/// Words of keystream reserved per cell. Normal sampling is rejection based,
/// so a cell needs a variable number of words; 32 u64 is far beyond any
/// realistic draw.
const WORDS_PER_CELL: u128 = 64;

/// Seed of the synthetic population the calibration routines fit against.
const CALIBRATION_SEED: u64 = 0x5eed_ca11_b7a7_e001;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgingError {
    #[error("cell count must be at least 1")]
    ZeroCells,
    #[error("temperature must be positive, got {0} K")]
    Temperature(f64),
    #[error("stress hours must be finite and non-negative, got {0}")]
    StressHours(f64),
    #[error("invalid model config: {0}")]
    Config(String),
    #[error("invalid stress profile: {0}")]
    Profile(String),
    #[error("calibration failed: target {target} unreachable (closest {reached})")]
    Calibration { target: f64, reached: f64 },
}

/// Per-device population parameters of the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// Volts.
    pub sigma_mismatch: f64,
    /// Volts, per evaluation.
    pub sigma_noise: f64,
    /// Volts per kelvin.
    pub sigma_temp_sens: f64,
    /// Volts per hour^m.
    pub sigma_aging_rate: f64,
    pub time_exponent: f64,
    pub reference_temperature_k: f64,
    pub reference_voltage_mv: u16,
}

impl Default for ModelConfig {
    /// Calibrated to a fresh-device p_intra of 0.06 at 25 °C and a
    /// population-wide aging gap of about 0.017 after 529.44 effective hours.
    fn default() -> Self {
        Self {
            sigma_mismatch: 0.010,
            sigma_noise: 1.3754e-3,
            sigma_temp_sens: 4.0e-5,
            sigma_aging_rate: 1.6753e-4,
            time_exponent: 0.25,
            reference_temperature_k: 298.15,
            reference_voltage_mv: 3250,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), AgingError> {
        let sigmas = [
            ("sigma_mismatch", self.sigma_mismatch),
            ("sigma_noise", self.sigma_noise),
            ("sigma_temp_sens", self.sigma_temp_sens),
            ("sigma_aging_rate", self.sigma_aging_rate),
        ];
        for (name, v) in sigmas {
            if !(v > 0.0 && v.is_finite()) {
                return Err(AgingError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.time_exponent > 0.0 && self.time_exponent < 1.0) {
            return Err(AgingError::Config(format!(
                "time_exponent must lie in (0, 1), got {}",
                self.time_exponent
            )));
        }
        if !(self.reference_temperature_k > 0.0 && self.reference_temperature_k.is_finite()) {
            return Err(AgingError::Config(format!(
                "reference_temperature_k must be positive, got {}",
                self.reference_temperature_k
            )));
        }
        Ok(())
    }
}

/// Accelerated-aging conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StressProfile {
    pub v_stress_mv: f64,
    pub v_nominal_mv: f64,
    pub t_stress_k: f64,
    pub t_nominal_k: f64,
    /// Gate voltage exponent.
    pub alpha: f64,
    /// Time exponent.
    pub m: f64,
    /// Apparent activation energy, eV.
    pub e_aa_ev: f64,
    /// Boltzmann constant, eV/K.
    pub k_ev_per_k: f64,
}

impl Default for StressProfile {
    /// Oven bake at 80 °C against a 25 °C nominal, supply unchanged.
    fn default() -> Self {
        Self {
            v_stress_mv: 3250.0,
            v_nominal_mv: 3250.0,
            t_stress_k: 353.15,
            t_nominal_k: 298.15,
            alpha: 3.5,
            m: 0.25,
            e_aa_ev: -0.02,
            k_ev_per_k: 8.62e-5,
        }
    }
}

impl StressProfile {
    pub fn validate(&self) -> Result<(), AgingError> {
        for v in [self.t_stress_k, self.t_nominal_k] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(AgingError::Temperature(v));
            }
        }
        if !(self.v_nominal_mv > 0.0 && self.v_stress_mv > 0.0) {
            return Err(AgingError::Profile("voltages must be positive".into()));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(AgingError::Profile(format!("m must be positive, got {}", self.m)));
        }
        if self.k_ev_per_k.is_nan() || self.k_ev_per_k <= 0.0 {
            return Err(AgingError::Profile("k must be positive".into()));
        }
        Ok(())
    }
}

/// `(V_s/V_n)^(alpha/m) * exp(E_aa/k * (1/T_s - 1/T_n) / m)`.
pub fn acceleration_factor(profile: &StressProfile) -> Result<f64, AgingError> {
    profile.validate()?;
    let p = profile;
    let voltage = (p.v_stress_mv / p.v_nominal_mv).powf(p.alpha / p.m);
    let thermal = (p.e_aa_ev / p.k_ev_per_k * (1.0 / p.t_stress_k - 1.0 / p.t_nominal_k) / p.m).exp();
    Ok(voltage * thermal)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellParams {
    /// Volts, signed.
    pub mismatch: f64,
    /// Volts per kelvin, signed.
    pub temp_sensitivity: f64,
    /// Volts per hour^m, non-negative.
    pub aging_rate: f64,
    /// Volts, non-negative.
    pub accumulated_shift: f64,
}

impl CellParams {
    fn margin(&self, delta_t: f64) -> f64 {
        let preference = if self.mismatch > 0.0 {
            1.0
        } else if self.mismatch < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.mismatch + self.temp_sensitivity * delta_t - preference * self.accumulated_shift
    }
}

fn stream(domain: &[u8; 8], seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(domain);
    key[8..16].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream_id);
    rng
}

fn at_cell(rng: &mut ChaCha8Rng, index: usize) {
    rng.set_word_pos(index as u128 * WORDS_PER_CELL);
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// A simulated SRAM PUF instance. Immutable; aging returns a new model.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceModel {
    seed: u64,
    config: ModelConfig,
    effective_age_h: f64,
    cells: Vec<CellParams>,
}

pub fn new_device(seed: u64, config: ModelConfig, cell_count: usize) -> Result<DeviceModel, AgingError> {
    DeviceModel::new(seed, config, cell_count)
}

impl DeviceModel {
    pub fn new(seed: u64, config: ModelConfig, cell_count: usize) -> Result<Self, AgingError> {
        if cell_count == 0 {
            return Err(AgingError::ZeroCells);
        }
        config.validate()?;
        let cells = (0..cell_count)
            .into_par_iter()
            .with_min_len(4096)
            .map_init(
                || stream(DOMAIN_DEVICE, seed, 0),
                |rng, i| {
                    at_cell(rng, i);
                    CellParams {
                        mismatch: config.sigma_mismatch * normal(rng),
                        temp_sensitivity: config.sigma_temp_sens * normal(rng),
                        aging_rate: (config.sigma_aging_rate * normal(rng)).abs(),
                        accumulated_shift: 0.0,
                    }
                },
            )
            .collect();
        Ok(Self {
            seed,
            config,
            effective_age_h: 0.0,
            cells,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn id(&self) -> DeviceId {
        DeviceId::from_seed(self.seed)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[CellParams] {
        &self.cells
    }

    /// Hours of aging under nominal conditions.
    pub fn effective_age_h(&self) -> f64 {
        self.effective_age_h
    }

    /// Role a readout of this device carries.
    pub fn role(&self) -> Role {
        if self.effective_age_h == 0.0 {
            Role::PreAging
        } else {
            Role::PostAging
        }
    }

    fn check_temperature(t: f64) -> Result<(), AgingError> {
        if t > 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(AgingError::Temperature(t))
        }
    }

    fn bit(&self, rng: &mut ChaCha8Rng, index: usize, delta_t: f64) -> bool {
        at_cell(rng, index);
        let noise = self.config.sigma_noise * normal(rng);
        self.cells[index].margin(delta_t) + noise > 0.0
    }

    /// One power-up of the whole array.
    pub fn power_up(&self, temperature_k: f64, eval_seed: u64) -> Result<ResponseVector, AgingError> {
        Self::check_temperature(temperature_k)?;
        let delta_t = temperature_k - self.config.reference_temperature_k;
        let n = self.cells.len();
        let mut bytes = vec![0u8; n.div_ceil(8)];
        bytes.par_chunks_mut(1024).enumerate().for_each_init(
            || stream(DOMAIN_NOISE, eval_seed, self.seed),
            |rng, (chunk, out)| {
                let base = chunk * 1024 * 8;
                for (j, byte) in out.iter_mut().enumerate() {
                    for b in 0..8 {
                        let i = base + j * 8 + b;
                        if i < n && self.bit(rng, i, delta_t) {
                            *byte |= 1 << b;
                        }
                    }
                }
            },
        );
        Ok(ResponseVector::from_packed(bytes, n).expect("padding bits are never set"))
    }

    /// The bits `power_up` would give at `addresses`, in that order.
    pub fn power_up_cells(
        &self,
        temperature_k: f64,
        eval_seed: u64,
        addresses: &[CellAddress],
    ) -> Result<ResponseVector, AgingError> {
        Self::check_temperature(temperature_k)?;
        if addresses.is_empty() {
            return Err(AgingError::ZeroCells);
        }
        if let Some(a) = addresses.iter().find(|a| a.index() >= self.cells.len()) {
            return Err(AgingError::Config(format!(
                "address {} outside a {}-cell device",
                a.0,
                self.cells.len()
            )));
        }
        let delta_t = temperature_k - self.config.reference_temperature_k;
        let mut rng = stream(DOMAIN_NOISE, eval_seed, self.seed);
        let bits: Vec<bool> = addresses
            .iter()
            .map(|a| self.bit(&mut rng, a.index(), delta_t))
            .collect();
        Ok(ResponseVector::from_bits(&bits).expect("non-empty"))
    }

    /// Ages the device by `stress_hours` under `profile`, converted to
    /// nominal hours with the literal acceleration factor.
    pub fn age(&self, stress_hours: f64, profile: &StressProfile) -> Result<Self, AgingError> {
        let af = acceleration_factor(profile)?;
        self.age_with_factor(stress_hours, af)
    }

    /// Ages the device by `stress_hours * af` nominal hours.
    pub fn age_with_factor(&self, stress_hours: f64, af: f64) -> Result<Self, AgingError> {
        if !(stress_hours >= 0.0 && stress_hours.is_finite()) {
            return Err(AgingError::StressHours(stress_hours));
        }
        if !(af > 0.0 && af.is_finite()) {
            return Err(AgingError::Profile(format!(
                "acceleration factor must be positive, got {af}"
            )));
        }
        self.age_effective(stress_hours * af)
    }

    /// Ages the device by `hours` of nominal-condition operation.
    pub fn age_effective(&self, hours: f64) -> Result<Self, AgingError> {
        if !(hours >= 0.0 && hours.is_finite()) {
            return Err(AgingError::StressHours(hours));
        }
        if hours == 0.0 {
            return Ok(self.clone());
        }
        let age = self.effective_age_h + hours;
        let growth = age.powf(self.config.time_exponent);
        let cells = self
            .cells
            .iter()
            .map(|c| CellParams {
                accumulated_shift: c.aging_rate * growth,
                ..*c
            })
            .collect();
        Ok(Self {
            effective_age_h: age,
            cells,
            ..*self
        })
    }
}

/// Evaluation seeds for `repeats` power-ups at temperature slot `slot`.
///
/// Later repeats extend earlier ones, so a set of `N + 1` readouts starts
/// with the `N` readouts drawn for the same `(seed, slot)`.
pub fn eval_seeds(seed: u64, slot: u64, repeats: usize) -> Vec<u64> {
    let mut rng = stream(DOMAIN_EVAL, seed, slot);
    (0..repeats).map(|_| rng.next_u64()).collect()
}

/// `repeats` power-ups at one temperature, evaluation seeds taken from
/// `(seed, slot)`. Distinct slots give independent noise.
pub fn readout_set(
    device: &DeviceModel,
    temperature_k: f64,
    repeats: usize,
    seed: u64,
    slot: u64,
) -> Result<ReadoutSet, AgingError> {
    if repeats == 0 {
        return Err(AgingError::Config("repeats must be at least 1".into()));
    }
    let readouts = eval_seeds(seed, slot, repeats)
        .into_iter()
        .map(|s| device.power_up(temperature_k, s))
        .collect::<Result<Vec<_>, _>>()?;
    let meta = ReadoutMeta::new(
        temperature_k,
        device.config.reference_voltage_mv,
        device.effective_age_h,
        device.role(),
    );
    Ok(ReadoutSet::new(device.cell_count(), readouts, meta).expect("equal-length readouts"))
}

/// One readout set per temperature, `repeats` power-ups each; temperature
/// `i` uses slot `i`.
pub fn temperature_readout_set(
    device: &DeviceModel,
    temperatures_k: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<Vec<ReadoutSet>, AgingError> {
    if repeats == 0 {
        return Err(AgingError::Config("repeats must be at least 1".into()));
    }
    temperatures_k
        .iter()
        .enumerate()
        .map(|(slot, &t)| readout_set(device, t, repeats, seed, slot as u64))
        .collect()
}

/// Common random numbers for calibration: the same draws are reused for
/// every trial value so the measured statistic is monotone in the parameter.
struct CalibrationPopulation {
    /// Unit-variance mismatch.
    mismatch: Vec<f64>,
    unit_rate: Vec<f64>,
    noise: [Vec<f64>; 3],
}

impl CalibrationPopulation {
    fn new(trials: usize) -> Self {
        let draw = |stream_id: u64, abs: bool| -> Vec<f64> {
            let mut rng = stream(DOMAIN_CALIBRATE, CALIBRATION_SEED, stream_id);
            (0..trials)
                .map(|_| {
                    let z = normal(&mut rng);
                    if abs {
                        z.abs()
                    } else {
                        z
                    }
                })
                .collect()
        };
        Self {
            mismatch: draw(0, false),
            unit_rate: draw(1, true),
            noise: [draw(2, false), draw(3, false), draw(4, false)],
        }
    }

    fn len(&self) -> usize {
        self.mismatch.len()
    }

    /// Fraction of cells whose noisy reads `a` and `b` disagree; `b` may be aged.
    fn disagreement(&self, sigma_noise: f64, shift_scale: f64, a: usize, b: usize) -> f64 {
        let mut flips = 0usize;
        for i in 0..self.len() {
            let m = self.mismatch[i];
            let aged = m - m.signum() * self.unit_rate[i] * shift_scale;
            let x = m + sigma_noise * self.noise[a][i] > 0.0;
            let y = aged + sigma_noise * self.noise[b][i] > 0.0;
            flips += (x != y) as usize;
        }
        flips as f64 / self.len() as f64
    }
}

/// Bisection for an increasing statistic `f` on `[0, inf)`. Runs to
/// convergence and returns the best point, provided it lies within
/// `tolerance` of `target`.
fn bisect_increasing(target: f64, tolerance: f64, mut f: impl FnMut(f64) -> f64) -> Result<f64, AgingError> {
    let mut best = (f64::NAN, f64::INFINITY);
    let mut eval = |x: f64| {
        let v = f(x);
        if (v - target).abs() < (best.1 - target).abs() {
            best = (x, v);
        }
        v
    };
    let mut hi = 1.0;
    let mut steps = 0;
    while eval(hi) < target {
        hi *= 2.0;
        steps += 1;
        if steps == 64 {
            return Err(AgingError::Calibration {
                target,
                reached: best.1,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (best.1 - target).abs() <= tolerance {
        Ok(best.0)
    } else {
        Err(AgingError::Calibration {
            target,
            reached: best.1,
        })
    }
}

/// Fits `sigma_noise` so that two power-ups of a fresh device at the
/// reference temperature disagree on a fraction `target_p_intra` of `trials`
/// cells, to within 0.005.
pub fn calibrate(
    config: &ModelConfig,
    target_p_intra: f64,
    trials: usize,
) -> Result<ModelConfig, AgingError> {
    config.validate()?;
    if !(target_p_intra > 0.0 && target_p_intra < 0.5) || trials == 0 {
        return Err(AgingError::Calibration {
            target: target_p_intra,
            reached: f64::NAN,
        });
    }
    let pop = CalibrationPopulation::new(trials);
    let sm = config.sigma_mismatch;
    let ratio = bisect_increasing(target_p_intra, 0.005, |r| pop.disagreement(r, 0.0, 0, 1))?;
    Ok(ModelConfig {
        sigma_noise: ratio * sm,
        ..*config
    })
}

/// Fits `sigma_aging_rate` so that, after `effective_hours` of aging, the
/// population-wide pre/post disagreement exceeds the pre/pre disagreement by
/// `target_gap`, to within 0.001.
pub fn calibrate_aging_gap(
    config: &ModelConfig,
    target_gap: f64,
    effective_hours: f64,
    trials: usize,
) -> Result<ModelConfig, AgingError> {
    config.validate()?;
    if !(target_gap > 0.0 && target_gap < 0.5)
        || trials == 0
        || effective_hours.is_nan()
        || effective_hours <= 0.0
    {
        return Err(AgingError::Calibration {
            target: target_gap,
            reached: f64::NAN,
        });
    }
    let pop = CalibrationPopulation::new(trials);
    // the population has unit mismatch, so everything is in units of sigma_mismatch
    let sm = config.sigma_mismatch;
    let ratio = config.sigma_noise / sm;
    let growth = effective_hours.powf(config.time_exponent);
    let intra = pop.disagreement(ratio, 0.0, 0, 1);
    let scale = bisect_increasing(target_gap, 0.001, |s| pop.disagreement(ratio, s, 0, 2) - intra)?;
    Ok(ModelConfig {
        sigma_aging_rate: scale * sm / growth,
        ..*config
    })
}

/// Mean fractional distance between `reference` and each of `others`.
pub fn mean_fractional_distance(reference: &ResponseVector, others: &[ResponseVector]) -> f64 {
    let total: usize = others
        .iter()
        .map(|o| hamming_distance(reference, o).expect("equal lengths"))
        .sum();
    total as f64 / (others.len() * reference.len()) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::fractional_hamming;
    use proptest::prelude::*;

    const CELLS: usize = 1 << 16;
    const T_REF: f64 = 298.15;

    fn fresh(seed: u64) -> DeviceModel {
        DeviceModel::new(seed, ModelConfig::default(), CELLS).unwrap()
    }

    #[test]
    fn device_generation_is_deterministic() {
        let a = DeviceModel::new(7, ModelConfig::default(), 1000).unwrap();
        let b = DeviceModel::new(7, ModelConfig::default(), 1000).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, DeviceModel::new(8, ModelConfig::default(), 1000).unwrap());
        // a cell depends only on (seed, index)
        let big = DeviceModel::new(7, ModelConfig::default(), 5000).unwrap();
        assert_eq!(&big.cells()[..1000], a.cells());
        assert!(a
            .cells()
            .iter()
            .all(|c| c.aging_rate >= 0.0 && c.accumulated_shift == 0.0));
    }

    #[test]
    fn device_rejects_bad_input() {
        assert_eq!(
            DeviceModel::new(1, ModelConfig::default(), 0),
            Err(AgingError::ZeroCells)
        );
        let bad = ModelConfig {
            time_exponent: 1.0,
            ..ModelConfig::default()
        };
        assert!(DeviceModel::new(1, bad, 10).is_err());
        let bad = ModelConfig {
            sigma_noise: 0.0,
            ..ModelConfig::default()
        };
        assert!(DeviceModel::new(1, bad, 10).is_err());
    }

    #[test]
    fn paper_sized_device() {
        let d = DeviceModel::new(3, ModelConfig::default(), 262_144).unwrap();
        assert_eq!(d.cell_count(), 262_144);
        assert_eq!(d.power_up(T_REF, 1).unwrap().len(), 262_144);
    }

    #[test]
    fn distinct_devices_are_uncorrelated() {
        let mut total = 0.0;
        for s in 0..10u64 {
            let a = fresh(2 * s).power_up(T_REF, 99).unwrap();
            let b = fresh(2 * s + 1).power_up(T_REF, 99).unwrap();
            total += fractional_hamming(&a, &b).unwrap();
        }
        let mean = total / 10.0;
        assert!((mean - 0.5).abs() <= 0.02, "{mean}");
    }

    #[test]
    fn noiseless_limit_reads_the_mismatch_sign() {
        let cfg = ModelConfig {
            sigma_noise: 1e-300,
            ..ModelConfig::default()
        };
        let d = DeviceModel::new(11, cfg, 4096).unwrap();
        let r = d.power_up(T_REF, 5).unwrap();
        for (i, c) in d.cells().iter().enumerate() {
            assert_eq!(r.get(i), c.mismatch > 0.0, "cell {i}");
        }
    }

    #[test]
    fn power_up_is_deterministic_and_seed_dependent() {
        let d = fresh(1);
        assert_eq!(d.power_up(T_REF, 3).unwrap(), d.power_up(T_REF, 3).unwrap());
        assert_ne!(d.power_up(T_REF, 3).unwrap(), d.power_up(T_REF, 4).unwrap());
        assert!(d.power_up(0.0, 3).is_err());
        assert!(d.power_up(-1.0, 3).is_err());
    }

    #[test]
    fn subset_evaluation_is_a_projection() {
        let d = fresh(4).age_effective(500.0).unwrap();
        let full = d.power_up(340.0, 17).unwrap();
        let addrs: Vec<CellAddress> = [65535u32, 0, 9, 8, 31_000, 9, 12_345]
            .into_iter()
            .map(CellAddress)
            .collect();
        let part = d.power_up_cells(340.0, 17, &addrs).unwrap();
        assert_eq!(part, full.project(&addrs).unwrap());
        assert!(d.power_up_cells(340.0, 17, &[CellAddress(CELLS as u32)]).is_err());
    }

    #[test]
    fn default_config_gives_six_percent_intra() {
        let d = fresh(21);
        let reference = d.power_up(T_REF, 0).unwrap();
        let reads: Vec<_> = (1..=4).map(|s| d.power_up(T_REF, s).unwrap()).collect();
        let p = mean_fractional_distance(&reference, &reads);
        assert!((p - 0.06).abs() <= 0.01, "{p}");
    }

    #[test]
    fn calibrate_hits_target() {
        let start = ModelConfig {
            sigma_noise: 1e-4,
            ..ModelConfig::default()
        };
        let cal = calibrate(&start, 0.06, CELLS).unwrap();
        assert_eq!(
            ModelConfig {
                sigma_noise: start.sigma_noise,
                ..cal
            },
            start
        );
        let d = DeviceModel::new(33, cal, CELLS).unwrap();
        let p = mean_fractional_distance(
            &d.power_up(T_REF, 1).unwrap(),
            &[d.power_up(T_REF, 2).unwrap(), d.power_up(T_REF, 3).unwrap()],
        );
        assert!((p - 0.06).abs() <= 0.005, "{p}");
        // the shipped default is this procedure's output
        let rel = (cal.sigma_noise / ModelConfig::default().sigma_noise - 1.0).abs();
        assert!(rel < 1e-4, "{} vs default", cal.sigma_noise);
    }

    #[test]
    fn calibrate_rejects_unreachable_targets() {
        let c = ModelConfig::default();
        assert!(matches!(
            calibrate(&c, 0.0, 1000),
            Err(AgingError::Calibration { .. })
        ));
        assert!(matches!(
            calibrate(&c, 0.5, 1000),
            Err(AgingError::Calibration { .. })
        ));
        assert!(calibrate(&c, 0.06, 0).is_err());
    }

    #[test]
    fn more_noise_means_more_flips() {
        let c = ModelConfig::default();
        let double = ModelConfig {
            sigma_noise: 2.0 * c.sigma_noise,
            ..c
        };
        let p = |cfg: ModelConfig| {
            let d = DeviceModel::new(5, cfg, CELLS).unwrap();
            fractional_hamming(&d.power_up(T_REF, 1).unwrap(), &d.power_up(T_REF, 2).unwrap()).unwrap()
        };
        assert!(p(double) > p(c));
    }

    #[test]
    fn calibrate_aging_gap_hits_target() {
        let cal = calibrate_aging_gap(&ModelConfig::default(), 0.017, 529.44, CELLS).unwrap();
        let rel = (cal.sigma_aging_rate / ModelConfig::default().sigma_aging_rate - 1.0).abs();
        assert!(rel < 1e-4, "{}", cal.sigma_aging_rate);
        assert!(calibrate_aging_gap(&ModelConfig::default(), 0.0, 529.44, 100).is_err());
    }

    #[test]
    fn literal_acceleration_factor() {
        // 50-digit evaluation of the closed form at the default profile
        let af = acceleration_factor(&StressProfile::default()).unwrap();
        assert!((af - 1.623_829_859_659_670_4).abs() < 1e-14, "{af}");
        let none = StressProfile {
            t_stress_k: 298.15,
            ..StressProfile::default()
        };
        assert_eq!(acceleration_factor(&none).unwrap(), 1.0);
        let cold = StressProfile {
            t_stress_k: 0.0,
            ..StressProfile::default()
        };
        assert_eq!(acceleration_factor(&cold), Err(AgingError::Temperature(0.0)));
    }

    #[test]
    fn aging_examples() {
        let d = DeviceModel::new(9, ModelConfig::default(), 2048).unwrap();
        assert_eq!(d.age(0.0, &StressProfile::default()).unwrap(), d);
        let aged = d.age_with_factor(48.0, 11.03).unwrap();
        assert!((aged.effective_age_h() - 529.44).abs() < 1e-9);
        assert!((aged.effective_age_h() / 24.0 - 22.06).abs() < 1e-9);
        assert_eq!(aged.role(), Role::PostAging);
        let twice = d
            .age_with_factor(24.0, 11.03)
            .unwrap()
            .age_with_factor(24.0, 11.03)
            .unwrap();
        assert_eq!(twice, aged);
        assert!(d.age_with_factor(-1.0, 11.03).is_err());
        assert!(d.age_with_factor(f64::NAN, 11.03).is_err());
    }

    #[test]
    fn temperature_sets() {
        let d = fresh(2);
        let corners: Vec<f64> = [-5.0, 15.0, 25.0, 35.0, 45.0, 55.0, 65.0, 75.0, 85.0]
            .iter()
            .map(|c| c + 273.15)
            .collect();
        let sets = temperature_readout_set(&d, &corners, 2, 77).unwrap();
        assert_eq!(sets.len(), 9);
        assert!(sets.iter().all(|s| s.len() == 2 && s.role() == Role::PreAging));
        assert_eq!(sets[8].meta().temperature_k(), 358.15);
        assert!(temperature_readout_set(&d, &[], 3, 1).unwrap().is_empty());
        let one = temperature_readout_set(&d, &[T_REF], 1, 1).unwrap();
        assert_eq!(one[0].len(), 1);
        // more repeats extend, never reshuffle
        let five = temperature_readout_set(&d, &[T_REF], 5, 1).unwrap();
        assert_eq!(&five[0].readouts()[..1], one[0].readouts());
    }

    #[test]
    fn intra_grows_away_from_room_temperature() {
        let d = fresh(12);
        let reference = d.power_up(T_REF, 1000).unwrap();
        let p = |c: f64| {
            let sets = temperature_readout_set(&d, &[c + 273.15], 3, 5).unwrap();
            mean_fractional_distance(&reference, sets[0].readouts())
        };
        let ladder = [25.0, 45.0, 65.0, 85.0].map(p);
        assert!(ladder.windows(2).all(|w| w[0] < w[1]), "{ladder:?}");
        let cold = [25.0, 5.0, -15.0].map(p);
        assert!(cold.windows(2).all(|w| w[0] < w[1]), "{cold:?}");
    }

    #[test]
    fn longer_aging_widens_the_gap() {
        let d = fresh(13);
        let reference = d.power_up(T_REF, 1).unwrap();
        let gap = |hours: f64| {
            let aged = d.age_effective(hours).unwrap();
            let post: Vec<_> = (10..13).map(|s| aged.power_up(T_REF, s).unwrap()).collect();
            mean_fractional_distance(&reference, &post)
        };
        let series = [199.2, 529.44, 1190.4].map(gap);
        assert!(series.windows(2).all(|w| w[0] < w[1]), "{series:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn shift_is_monotone_under_repeated_aging(steps in prop::collection::vec(0.0f64..300.0, 1..5)) {
            let mut d = DeviceModel::new(1, ModelConfig::default(), 256).unwrap();
            for h in steps {
                let next = d.age_effective(h).unwrap();
                for (a, b) in d.cells().iter().zip(next.cells()) {
                    prop_assert!(b.accumulated_shift >= a.accumulated_shift && b.accumulated_shift >= 0.0);
                }
                d = next;
            }
        }
    }
}

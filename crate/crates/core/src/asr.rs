// SPDX-License-Identifier: Apache-2.0

//! Aging-sensitive response selection, enrollment and the detection-phase
//! verdict.
//!
//! A cell is aging sensitive when its `N` room-temperature readouts agree,
//! its `N` high-temperature readouts agree, and the two agreed values differ.
//! Heating shifts the cell's threshold the way aging would, so these cells
//! are the ones most likely to flip once the device has been used.

use chrono::{DateTime, Utc};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcore::{BitError, CellAddress, DeviceId, ReadoutSet, ResponseVector, Role};
use crate::detection::{classify, Classification, DetectionError, DetectionPlan, ErrorModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsrError {
    #[error("expected {expected} {which} readouts, found {found}")]
    ReadoutCount {
        which: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("no aging-sensitive cells: lower N or widen the cell region")]
    NoAsrs,
    #[error("plan needs {needed} aging-sensitive cells but the profile has {available}")]
    InsufficientAsrs { needed: u64, available: usize },
    #[error("profile has no p_inter estimate; characterize it first")]
    MissingInterEstimate,
    #[error("readout set is empty")]
    EmptyReadouts,
    #[error("invalid selection config: {0}")]
    Selection(String),
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error(transparent)]
    Detection(#[from] DetectionError),
}

/// Provisioning parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionConfig {
    /// Re-evaluations per temperature.
    #[serde(rename = "N")]
    pub n_reevals: usize,
    pub rt_k: f64,
    pub ht_k: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            n_reevals: 9,
            rt_k: 298.15,
            ht_k: 353.15,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<(), AsrError> {
        if self.n_reevals == 0 {
            return Err(AsrError::Selection("N must be at least 1".into()));
        }
        if !(self.rt_k > 0.0 && self.ht_k > self.rt_k && self.ht_k.is_finite()) {
            return Err(AsrError::Selection(format!(
                "need 0 < rt < ht, got rt = {} K, ht = {} K",
                self.rt_k, self.ht_k
            )));
        }
        Ok(())
    }
}

/// A selected cell and its agreed room-temperature value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AsrRecord {
    pub address: CellAddress,
    pub reference_bit: bool,
}

impl Serialize for AsrRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.address.0, self.reference_bit as u8).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AsrRecord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (address, bit) = <(u32, u8)>::deserialize(d)?;
        if bit > 1 {
            return Err(de::Error::custom(format!(
                "reference bit must be 0 or 1, got {bit}"
            )));
        }
        Ok(Self {
            address: CellAddress(address),
            reference_bit: bit == 1,
        })
    }
}

/// Selected cells in strictly increasing address order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AsrList(Vec<AsrRecord>);

impl AsrList {
    pub fn new(records: Vec<AsrRecord>) -> Result<Self, String> {
        if let Some(w) = records.windows(2).find(|w| w[0].address >= w[1].address) {
            return Err(if w[0].address == w[1].address {
                format!("duplicate address {}", w[0].address.0)
            } else {
                format!(
                    "addresses out of order: {} before {}",
                    w[0].address.0, w[1].address.0
                )
            });
        }
        Ok(Self(records))
    }

    pub fn records(&self) -> &[AsrRecord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Addresses of the first `n` records.
    pub fn addresses(&self, n: usize) -> Vec<CellAddress> {
        self.0[..n].iter().map(|r| r.address).collect()
    }

    /// Enrolled bits of the first `n` records.
    pub fn reference(&self, n: usize) -> ResponseVector {
        ResponseVector::from_fn(n, |i| self.0[i].reference_bit).expect("n >= 1")
    }
}

impl Serialize for AsrList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for r in &self.0 {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for AsrList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ListVisitor;
        impl<'de> Visitor<'de> for ListVisitor {
            type Value = AsrList;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an array of [address, bit] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<AsrList, A::Error> {
                let mut out: Vec<AsrRecord> = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(r) = seq.next_element::<AsrRecord>()? {
                    if let Some(prev) = out.last() {
                        if prev.address >= r.address {
                            let pair = vec![*prev, r];
                            return Err(de::Error::custom(AsrList::new(pair).unwrap_err()));
                        }
                    }
                    out.push(r);
                }
                Ok(AsrList(out))
            }
        }
        d.deserialize_seq(ListVisitor)
    }
}

/// Where the enrollment-time p_intra estimate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateSource {
    /// Room-temperature readouts taken apart from the selection readouts.
    HeldOut,
    /// The selection readouts themselves. Unanimity makes this zero.
    Selection,
}

/// Provisioning-time record of a device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnrollmentProfile {
    pub device_id: DeviceId,
    pub selection: SelectionConfig,
    pub p_intra_est: f64,
    pub p_inter_est: Option<f64>,
    pub p_intra_source: EstimateSource,
    pub asrs: AsrList,
    pub created_at: DateTime<Utc>,
}

impl EnrollmentProfile {
    /// Estimators for planning; needs a characterized profile.
    pub fn error_model(&self) -> Result<ErrorModel, AsrError> {
        let p_inter = self.p_inter_est.ok_or(AsrError::MissingInterEstimate)?;
        Ok(ErrorModel::new(self.p_intra_est, p_inter)?)
    }
}

fn check_set(set: &ReadoutSet, which: &'static str, n: usize) -> Result<(), AsrError> {
    if set.len() != n {
        return Err(AsrError::ReadoutCount {
            which,
            expected: n,
            found: set.len(),
        });
    }
    if set.role() != Role::PreAging {
        return Err(BitError::RoleMismatch {
            expected: Role::PreAging,
            found: set.role(),
        }
        .into());
    }
    Ok(())
}

/// Per byte: bits where every readout agrees, and the agreed value.
fn unanimity(set: &ReadoutSet, byte: usize) -> (u8, u8) {
    let mut all = 0xffu8;
    let mut any = 0u8;
    for r in set.readouts() {
        let b = r.as_bytes()[byte];
        all &= b;
        any |= b;
    }
    (all | !any, all)
}

/// Cells whose `N` RT bits agree, whose `N` HT bits agree, and whose two
/// agreed values differ. Sorted by address.
pub fn select_asrs(
    rt: &ReadoutSet,
    ht: &ReadoutSet,
    config: &SelectionConfig,
) -> Result<Vec<AsrRecord>, AsrError> {
    config.validate()?;
    check_set(rt, "RT", config.n_reevals)?;
    check_set(ht, "HT", config.n_reevals)?;
    if rt.cell_count() != ht.cell_count() {
        return Err(BitError::LengthMismatch {
            left: rt.cell_count(),
            right: ht.cell_count(),
        }
        .into());
    }
    let cells = rt.cell_count();
    let mut out = Vec::new();
    for byte in 0..cells.div_ceil(8) {
        let (rt_same, rt_val) = unanimity(rt, byte);
        let (ht_same, ht_val) = unanimity(ht, byte);
        let mut hit = rt_same & ht_same & (rt_val ^ ht_val);
        while hit != 0 {
            let bit = hit.trailing_zeros() as usize;
            hit &= hit - 1;
            let index = byte * 8 + bit;
            // padding bits are zero in every readout, so they never oppose
            debug_assert!(index < cells);
            out.push(AsrRecord {
                address: CellAddress(index as u32),
                reference_bit: rt_val >> bit & 1 == 1,
            });
        }
    }
    Ok(out)
}

/// Mean over readouts of the fraction of ASR positions that disagree with
/// the enrolled bits.
pub fn disagreement_rate(asrs: &AsrList, readouts: &ReadoutSet) -> Result<f64, AsrError> {
    if readouts.is_empty() {
        return Err(AsrError::EmptyReadouts);
    }
    if asrs.is_empty() {
        return Err(AsrError::NoAsrs);
    }
    let cells = readouts.cell_count();
    if let Some(last) = asrs.records().last() {
        if last.address.index() >= cells {
            return Err(BitError::AddressOutOfRange {
                index: last.address.0,
                len: cells,
            }
            .into());
        }
    }
    let flips: usize = readouts
        .readouts()
        .iter()
        .map(|r| {
            asrs.records()
                .iter()
                .filter(|a| r.get(a.address.index()) != a.reference_bit)
                .count()
        })
        .sum();
    Ok(flips as f64 / (readouts.len() * asrs.len()) as f64)
}

/// Selects ASRs and estimates p_intra over them.
///
/// With `held_out` readouts (pre-aging, room temperature, not used for
/// selection) the estimate is out of sample. Without them it falls back to
/// the RT selection readouts, which the unanimity filter forces to zero; the
/// profile records which one was used.
pub fn enroll(
    device_id: DeviceId,
    rt: &ReadoutSet,
    ht: &ReadoutSet,
    held_out: Option<&ReadoutSet>,
    config: &SelectionConfig,
    created_at: DateTime<Utc>,
) -> Result<EnrollmentProfile, AsrError> {
    let asrs = select_asrs(rt, ht, config)?;
    if asrs.is_empty() {
        return Err(AsrError::NoAsrs);
    }
    let asrs = AsrList(asrs);
    let (p_intra_est, p_intra_source) = match held_out {
        Some(set) => {
            if set.role() != Role::PreAging {
                return Err(BitError::RoleMismatch {
                    expected: Role::PreAging,
                    found: set.role(),
                }
                .into());
            }
            (disagreement_rate(&asrs, set)?, EstimateSource::HeldOut)
        }
        None => (disagreement_rate(&asrs, rt)?, EstimateSource::Selection),
    };
    Ok(EnrollmentProfile {
        device_id,
        selection: *config,
        p_intra_est,
        p_inter_est: None,
        p_intra_source,
        asrs,
        created_at,
    })
}

/// Fills in p_inter from post-aging room-temperature readouts.
pub fn characterize(
    profile: &EnrollmentProfile,
    post_aging: &ReadoutSet,
) -> Result<EnrollmentProfile, AsrError> {
    if post_aging.role() != Role::PostAging {
        return Err(BitError::RoleMismatch {
            expected: Role::PostAging,
            found: post_aging.role(),
        }
        .into());
    }
    let p_inter = disagreement_rate(&profile.asrs, post_aging)?;
    Ok(EnrollmentProfile {
        p_inter_est: Some(p_inter),
        ..profile.clone()
    })
}

/// Classifies a full-length probe against the first `plan.n` ASRs.
pub fn detect_device(
    profile: &EnrollmentProfile,
    probe: &ResponseVector,
    plan: &DetectionPlan,
) -> Result<Classification, AsrError> {
    let n = planned_len(profile, plan)?;
    let projected = probe.project(&profile.asrs.addresses(n))?;
    detect_projected(profile, &projected, plan)
}

/// As [`detect_device`], for a probe already read at the first `plan.n` ASR
/// addresses in profile order.
pub fn detect_projected(
    profile: &EnrollmentProfile,
    projected: &ResponseVector,
    plan: &DetectionPlan,
) -> Result<Classification, AsrError> {
    let n = planned_len(profile, plan)?;
    let reference = profile.asrs.reference(n);
    Ok(classify(&reference, projected, plan.n_eer, &plan.error_model)?)
}

fn planned_len(profile: &EnrollmentProfile, plan: &DetectionPlan) -> Result<usize, AsrError> {
    if plan.n as usize > profile.asrs.len() {
        return Err(AsrError::InsufficientAsrs {
            needed: plan.n,
            available: profile.asrs.len(),
        });
    }
    Ok(plan.n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agingmodel::{temperature_readout_set, DeviceModel, ModelConfig};
    use crate::bitcore::ReadoutMeta;
    use crate::detection::{minimal_n, Verdict};
    use proptest::prelude::*;

    fn set(rows: &[&str], role: Role) -> ReadoutSet {
        let readouts: Vec<_> = rows
            .iter()
            .map(|r| ResponseVector::from_bit_str(r).unwrap())
            .collect();
        let age = if role == Role::PreAging { 0.0 } else { 1.0 };
        ReadoutSet::new(
            readouts[0].len(),
            readouts,
            ReadoutMeta::new(298.15, 3250, age, role),
        )
        .unwrap()
    }

    fn cfg(n: usize) -> SelectionConfig {
        SelectionConfig {
            n_reevals: n,
            ..SelectionConfig::default()
        }
    }

    fn epoch() -> DateTime<Utc> {
        DateTime::<Utc>::UNIX_EPOCH
    }

    #[test]
    fn selection_examples() {
        // cells: RT 111/HT 111, RT 000/HT 111, RT 001/HT 111, RT 111/HT 000, RT 011/HT 000
        let rt = set(&["10010", "10011", "10111"], Role::PreAging);
        let ht = set(&["11100", "11100", "11100"], Role::PreAging);
        let got = select_asrs(&rt, &ht, &cfg(3)).unwrap();
        assert_eq!(
            got,
            vec![
                AsrRecord {
                    address: CellAddress(1),
                    reference_bit: false
                },
                AsrRecord {
                    address: CellAddress(3),
                    reference_bit: true
                },
            ]
        );
    }

    #[test]
    fn selection_rejects_bad_input() {
        let rt = set(&["10", "10"], Role::PreAging);
        let ht = set(&["01", "01"], Role::PreAging);
        assert!(matches!(
            select_asrs(&rt, &ht, &cfg(3)),
            Err(AsrError::ReadoutCount {
                expected: 3,
                found: 2,
                ..
            })
        ));
        let short = set(&["0", "0"], Role::PreAging);
        assert!(select_asrs(&rt, &short, &cfg(2)).is_err());
        let post = set(&["01", "01"], Role::PostAging);
        assert!(select_asrs(&rt, &post, &cfg(2)).is_err());
        let inverted = SelectionConfig {
            rt_k: 360.0,
            ..cfg(2)
        };
        assert!(select_asrs(&rt, &ht, &inverted).is_err());
    }

    #[test]
    fn enrollment_examples() {
        let rt = set(&["1001", "1001"], Role::PreAging);
        let ht = set(&["0111", "0111"], Role::PreAging);
        let held = set(&["0001", "1011"], Role::PreAging);
        let p = enroll(DeviceId::from_seed(1), &rt, &ht, Some(&held), &cfg(2), epoch()).unwrap();
        assert_eq!(p.asrs.len(), 3);
        assert_eq!(p.p_intra_source, EstimateSource::HeldOut);
        // ASRs at 0, 1, 2 with bits 1, 0, 0: one flip in each held-out readout
        assert!((p.p_intra_est - 2.0 / 6.0).abs() < 1e-15);
        assert_eq!(p.p_inter_est, None);

        let p = enroll(DeviceId::from_seed(1), &rt, &ht, None, &cfg(2), epoch()).unwrap();
        assert_eq!(
            (p.p_intra_est, p.p_intra_source),
            (0.0, EstimateSource::Selection)
        );

        let stable = set(&["1001", "1001"], Role::PreAging);
        assert_eq!(
            enroll(DeviceId::from_seed(1), &rt, &stable, None, &cfg(2), epoch()),
            Err(AsrError::NoAsrs)
        );
    }

    #[test]
    fn characterize_examples() {
        let rt = set(&["1001", "1001"], Role::PreAging);
        let ht = set(&["0111", "0111"], Role::PreAging);
        let p = enroll(DeviceId::from_seed(1), &rt, &ht, None, &cfg(2), epoch()).unwrap();
        let same = characterize(&p, &set(&["1000", "1001"], Role::PostAging)).unwrap();
        assert_eq!(same.p_inter_est, Some(0.0));
        let flipped = characterize(&p, &set(&["0110"], Role::PostAging)).unwrap();
        assert_eq!(flipped.p_inter_est, Some(1.0));
        assert!(characterize(&p, &set(&["1001"], Role::PreAging)).is_err());
        let empty = ReadoutSet::new(4, vec![], ReadoutMeta::new(298.15, 3250, 1.0, Role::PostAging)).unwrap();
        assert_eq!(characterize(&p, &empty), Err(AsrError::EmptyReadouts));
    }

    fn random_set(bits: &[Vec<bool>]) -> ReadoutSet {
        let readouts: Vec<_> = bits
            .iter()
            .map(|b| ResponseVector::from_bits(b).unwrap())
            .collect();
        ReadoutSet::new(
            bits[0].len(),
            readouts,
            ReadoutMeta::new(298.15, 3250, 0.0, Role::PreAging),
        )
        .unwrap()
    }

    /// Readouts where each cell is stable with high probability, so that
    /// all three predicates are exercised.
    fn readouts(n: usize, cells: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
        prop::collection::vec(prop::bool::weighted(0.5), cells).prop_flat_map(move |base| {
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.1), base.len()), n).prop_map(
                move |noise| {
                    noise
                        .into_iter()
                        .map(|row| row.iter().zip(&base).map(|(f, b)| f ^ b).collect())
                        .collect()
                },
            )
        })
    }

    fn predicates(rt: &[Vec<bool>], ht: &[Vec<bool>], i: usize) -> bool {
        let rt_same = rt.iter().all(|r| r[i] == rt[0][i]);
        let ht_same = ht.iter().all(|r| r[i] == ht[0][i]);
        rt_same && ht_same && rt[0][i] != ht[0][i]
    }

    proptest! {
        #[test]
        fn selection_is_exactly_the_predicate(
            (rt, ht) in (1usize..6, 1usize..200).prop_flat_map(|(n, c)| (readouts(n, c), readouts(n, c)))
        ) {
            let n = rt.len();
            let got = select_asrs(&random_set(&rt), &random_set(&ht), &cfg(n)).unwrap();
            let want: Vec<AsrRecord> = (0..rt[0].len())
                .filter(|&i| predicates(&rt, &ht, i))
                .map(|i| AsrRecord { address: CellAddress(i as u32), reference_bit: rt[0][i] })
                .collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn more_reevaluations_select_a_subset(
            (rt, ht) in (2usize..8, 1usize..200).prop_flat_map(|(n, c)| (readouts(n, c), readouts(n, c)))
        ) {
            let n = rt.len();
            let wide = select_asrs(&random_set(&rt), &random_set(&ht), &cfg(n)).unwrap();
            let narrow = select_asrs(&random_set(&rt[..n - 1]), &random_set(&ht[..n - 1]), &cfg(n - 1)).unwrap();
            prop_assert!(wide.iter().all(|a| narrow.contains(a)));
        }

        #[test]
        fn selection_ignores_readout_order(
            (rt, ht) in (1usize..6, 1usize..100).prop_flat_map(|(n, c)| (readouts(n, c), readouts(n, c))),
            rot in 0usize..6,
        ) {
            let n = rt.len();
            let mut rt2 = rt.clone();
            rt2.rotate_left(rot % n);
            let mut ht2 = ht.clone();
            ht2.reverse();
            let a = select_asrs(&random_set(&rt), &random_set(&ht), &cfg(n)).unwrap();
            let b = select_asrs(&random_set(&rt2), &random_set(&ht2), &cfg(n)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    struct Pipeline {
        profile: EnrollmentProfile,
        aged: DeviceModel,
    }

    fn pipeline(seed: u64, n: usize, cells: usize) -> Pipeline {
        let device = DeviceModel::new(seed, ModelConfig::default(), cells).unwrap();
        let sel = cfg(n);
        let pre = temperature_readout_set(&device, &[sel.rt_k, sel.ht_k], n, 1).unwrap();
        let held = temperature_readout_set(&device, &[sel.rt_k], 4, 2).unwrap();
        let profile = enroll(device.id(), &pre[0], &pre[1], Some(&held[0]), &sel, epoch()).unwrap();
        let aged = device.age_with_factor(48.0, 11.03).unwrap();
        let post = temperature_readout_set(&aged, &[sel.rt_k], 4, 3).unwrap();
        Pipeline {
            profile: characterize(&profile, &post[0]).unwrap(),
            aged,
        }
    }

    #[test]
    fn simulated_estimators_land_near_table_values() {
        let nine = pipeline(40, 9, 1 << 18);
        let three = pipeline(40, 3, 1 << 18);
        let (pi, pe) = (nine.profile.p_intra_est, nine.profile.p_inter_est.unwrap());
        assert!((pi - 0.0926).abs() <= 0.02, "{pi}");
        assert!((pe - 0.1578).abs() <= 0.03, "{pe}");
        assert!(three.profile.p_intra_est > pi);
        assert!(three.profile.asrs.len() > nine.profile.asrs.len());
    }

    #[test]
    fn asrs_age_faster_than_random_cells() {
        let p = pipeline(41, 9, 1 << 16);
        let k = p.profile.asrs.len();
        assert!(k > 50);
        // a random subset of the same size, enrolled from one fresh readout
        let device = DeviceModel::new(41, ModelConfig::default(), 1 << 16).unwrap();
        let stride = (1 << 16) / k;
        let fresh_ref = device.power_up(298.15, 1234).unwrap();
        let random = AsrList::new(
            (0..k)
                .map(|i| {
                    let a = (i * stride) as u32;
                    AsrRecord {
                        address: CellAddress(a),
                        reference_bit: fresh_ref.get(a as usize),
                    }
                })
                .collect(),
        )
        .unwrap();
        let held = temperature_readout_set(&device, &[298.15], 4, 2).unwrap();
        let post = temperature_readout_set(&p.aged, &[298.15], 4, 3).unwrap();
        let random_gap =
            disagreement_rate(&random, &post[0]).unwrap() - disagreement_rate(&random, &held[0]).unwrap();
        let asr_gap = p.profile.p_inter_est.unwrap() - p.profile.p_intra_est;
        assert!(asr_gap > random_gap, "{asr_gap} vs {random_gap}");
    }

    #[test]
    fn detection_examples() {
        let p = pipeline(42, 9, 1 << 18);
        let k = p.profile.asrs.len();
        let plan = minimal_n(&ErrorModel::new(0.0926, 0.1578).unwrap(), 1e-2).unwrap();
        assert!(plan.n as usize <= k, "{k} ASRs");

        let mut probe = ResponseVector::zeros(1 << 18).unwrap();
        let flips: Vec<usize> = p
            .profile
            .asrs
            .records()
            .iter()
            .filter(|a| a.reference_bit)
            .map(|a| a.address.index())
            .collect();
        probe = probe.with_flipped(&flips);
        let c = detect_device(&p.profile, &probe, &plan).unwrap();
        assert_eq!((c.verdict, c.hd, c.n, c.n_th), (Verdict::New, 0, 551, 68));

        let aged = p.aged.power_up(298.15, 555).unwrap();
        assert_eq!(
            detect_device(&p.profile, &aged, &plan).unwrap().verdict,
            Verdict::Recycled
        );

        let big = minimal_n(&ErrorModel::new(0.0926, 0.1578).unwrap(), 1e-4).unwrap();
        let tiny = DetectionPlan {
            n: k as u64 + 1,
            ..big
        };
        assert!(matches!(
            detect_device(&p.profile, &probe, &tiny),
            Err(AsrError::InsufficientAsrs { .. })
        ));
        assert!(detect_device(&p.profile, &ResponseVector::zeros(100).unwrap(), &plan).is_err());
    }
}

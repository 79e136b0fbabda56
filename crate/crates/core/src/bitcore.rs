// SPDX-License-Identifier: Apache-2.0

//! Packed SRAM power-up readouts and distance primitives.
//!
//! Bit `i` of a [`ResponseVector`] lives in byte `i / 8` at bit position
//! `i % 8` (least significant bit first). The layout is part of the readout
//! file format, so it never depends on the host.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitError {
    #[error("length mismatch: {left} bits vs {right} bits")]
    LengthMismatch { left: usize, right: usize },
    #[error("response vectors must hold at least one bit")]
    ZeroLength,
    #[error("expected a {expected} readout, got a {found} readout")]
    RoleMismatch { expected: Role, found: Role },
    #[error("observation set is empty")]
    EmptyObservations,
    #[error("cell address {index} out of range for {len} cells")]
    AddressOutOfRange { index: u32, len: usize },
    #[error("packed buffer holds {actual} bytes, {expected} needed for {bits} bits")]
    BufferSize {
        expected: usize,
        actual: usize,
        bits: usize,
    },
    #[error("padding bits beyond bit {bits} are not zero")]
    NonZeroPadding { bits: usize },
    #[error("pre-aging readout sets must have zero effective age (got {centihours} centihours)")]
    AgedPreAgingSet { centihours: u64 },
    #[error("invalid device id {0:?}: expected 32 hex digits")]
    DeviceId(String),
}

/// Position of a cell within the scanned SRAM region (the PUF challenge).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellAddress(pub u32);

impl CellAddress {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fixed-length packed bit vector holding one power-up readout.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResponseVector {
    len: usize,
    bytes: Vec<u8>,
}

pub(crate) fn packed_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

impl ResponseVector {
    pub fn zeros(len: usize) -> Result<Self, BitError> {
        if len == 0 {
            return Err(BitError::ZeroLength);
        }
        Ok(Self {
            len,
            bytes: vec![0; packed_len(len)],
        })
    }

    pub fn from_fn(len: usize, mut bit: impl FnMut(usize) -> bool) -> Result<Self, BitError> {
        let mut v = Self::zeros(len)?;
        for i in 0..len {
            if bit(i) {
                v.bytes[i / 8] |= 1 << (i % 8);
            }
        }
        Ok(v)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, BitError> {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    /// Parses a string of `0`/`1` characters; `_` and whitespace are ignored.
    pub fn from_bit_str(s: &str) -> Result<Self, BitError> {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| *c != '_' && !c.is_whitespace())
            .map(|c| c == '1')
            .collect();
        Self::from_bits(&bits)
    }

    /// Wraps an already packed buffer. Unused high bits of the last byte must be zero.
    pub fn from_packed(bytes: Vec<u8>, len: usize) -> Result<Self, BitError> {
        if len == 0 {
            return Err(BitError::ZeroLength);
        }
        let expected = packed_len(len);
        if bytes.len() != expected {
            return Err(BitError::BufferSize {
                expected,
                actual: bytes.len(),
                bits: len,
            });
        }
        let tail = len % 8;
        if tail != 0 && bytes[expected - 1] >> tail != 0 {
            return Err(BitError::NonZeroPadding { bits: len });
        }
        Ok(Self { len, bytes })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; zero-length vectors cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for {} bits", self.len);
        self.bytes[i / 8] >> (i % 8) & 1 == 1
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copy of this vector with the listed bit positions inverted.
    pub fn with_flipped(&self, positions: &[usize]) -> Self {
        let mut out = self.clone();
        for &i in positions {
            assert!(i < self.len, "bit {i} out of range for {} bits", self.len);
            out.bytes[i / 8] ^= 1 << (i % 8);
        }
        out
    }

    /// Bitwise complement, keeping padding bits zero.
    pub fn complement(&self) -> Self {
        Self::from_fn(self.len, |i| !self.get(i)).expect("non-empty")
    }

    /// Gathers the bits at `addresses`, in list order.
    pub fn project(&self, addresses: &[CellAddress]) -> Result<Self, BitError> {
        if let Some(bad) = addresses.iter().find(|a| a.index() >= self.len) {
            return Err(BitError::AddressOutOfRange {
                index: bad.0,
                len: self.len,
            });
        }
        Self::from_fn(addresses.len(), |i| self.get(addresses[i].index()))
    }
}

impl fmt::Debug for ResponseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
            write!(f, "ResponseVector({s})")
        } else {
            write!(f, "ResponseVector({} bits, {} ones)", self.len, self.count_ones())
        }
    }
}

/// Whether a readout was taken before or after the device was aged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    PreAging,
    PostAging,
}

impl Role {
    pub fn code(self) -> u8 {
        match self {
            Role::PreAging => 0,
            Role::PostAging => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Role::PreAging),
            1 => Some(Role::PostAging),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::PreAging => "pre-aging",
            Role::PostAging => "post-aging",
        })
    }
}

/// Opaque 16-byte device identifier, printed as 32 lowercase hex digits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DeviceId(pub [u8; 16]);

impl DeviceId {
    /// Identifier for a simulated device: an ASCII tag followed by the seed.
    pub fn from_seed(seed: u64) -> Self {
        let mut id = *b"simdev\0\0\0\0\0\0\0\0\0\0";
        id[8..].copy_from_slice(&seed.to_be_bytes());
        DeviceId(id)
    }
}

impl fmt::Display for DeviceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for DeviceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeviceId({self})")
    }
}

impl FromStr for DeviceId {
    type Err = BitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut id = [0u8; 16];
        hex::decode_to_slice(s, &mut id).map_err(|_| BitError::DeviceId(s.to_string()))?;
        Ok(DeviceId(id))
    }
}

impl Serialize for DeviceId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DeviceId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Acquisition metadata shared by every readout in a [`ReadoutSet`].
///
/// Stored in the fixed-point units of the readout file header so that a
/// set survives a file round-trip exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReadoutMeta {
    pub temperature_mk: u32,
    pub voltage_mv: u16,
    pub effective_age_ch: u64,
    pub role: Role,
}

impl ReadoutMeta {
    pub fn new(temperature_k: f64, voltage_mv: u16, effective_age_h: f64, role: Role) -> Self {
        Self {
            temperature_mk: kelvin_to_mk(temperature_k),
            voltage_mv,
            effective_age_ch: hours_to_centihours(effective_age_h),
            role,
        }
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_mk as f64 / 1000.0
    }

    pub fn effective_age_h(&self) -> f64 {
        self.effective_age_ch as f64 / 100.0
    }
}

pub fn kelvin_to_mk(kelvin: f64) -> u32 {
    (kelvin * 1000.0).round().clamp(0.0, u32::MAX as f64) as u32
}

pub fn hours_to_centihours(hours: f64) -> u64 {
    (hours * 100.0).round().max(0.0) as u64
}

/// Repeated power-up readouts of one device under one condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutSet {
    cell_count: usize,
    readouts: Vec<ResponseVector>,
    meta: ReadoutMeta,
}

impl ReadoutSet {
    pub fn new(
        cell_count: usize,
        readouts: Vec<ResponseVector>,
        meta: ReadoutMeta,
    ) -> Result<Self, BitError> {
        if cell_count == 0 {
            return Err(BitError::ZeroLength);
        }
        if let Some(r) = readouts.iter().find(|r| r.len() != cell_count) {
            return Err(BitError::LengthMismatch {
                left: cell_count,
                right: r.len(),
            });
        }
        if meta.role == Role::PreAging && meta.effective_age_ch != 0 {
            return Err(BitError::AgedPreAgingSet {
                centihours: meta.effective_age_ch,
            });
        }
        Ok(Self {
            cell_count,
            readouts,
            meta,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn len(&self) -> usize {
        self.readouts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.readouts.is_empty()
    }

    pub fn readouts(&self) -> &[ResponseVector] {
        &self.readouts
    }

    pub fn meta(&self) -> ReadoutMeta {
        self.meta
    }

    pub fn role(&self) -> Role {
        self.meta.role
    }

    pub fn readout(&self, i: usize) -> Readout<'_> {
        Readout {
            bits: &self.readouts[i],
            role: self.meta.role,
        }
    }

    /// The first `n` readouts under the same metadata.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            cell_count: self.cell_count,
            readouts: self.readouts[..n.min(self.readouts.len())].to_vec(),
            meta: self.meta,
        }
    }

    pub fn with_role(mut self, role: Role) -> Result<Self, BitError> {
        self.meta.role = role;
        Self::new(self.cell_count, self.readouts, self.meta)
    }
}

/// A readout borrowed together with its aging role.
#[derive(Debug, Clone, Copy)]
pub struct Readout<'a> {
    pub bits: &'a ResponseVector,
    pub role: Role,
}

impl<'a> Readout<'a> {
    pub fn new(bits: &'a ResponseVector, role: Role) -> Self {
        Self { bits, role }
    }
}

pub fn hamming_distance(a: &ResponseVector, b: &ResponseVector) -> Result<usize, BitError> {
    if a.len != b.len {
        return Err(BitError::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    let mut words_a = a.bytes.chunks_exact(8);
    let mut words_b = b.bytes.chunks_exact(8);
    let mut hd: usize = words_a
        .by_ref()
        .zip(words_b.by_ref())
        .map(|(x, y)| {
            let x = u64::from_le_bytes(x.try_into().unwrap());
            let y = u64::from_le_bytes(y.try_into().unwrap());
            (x ^ y).count_ones() as usize
        })
        .sum();
    hd += words_a
        .remainder()
        .iter()
        .zip(words_b.remainder())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum::<usize>();
    Ok(hd)
}

pub fn fractional_hamming(a: &ResponseVector, b: &ResponseVector) -> Result<f64, BitError> {
    let hd = hamming_distance(a, b)?;
    Ok(hd as f64 / a.len() as f64)
}

fn expect_role(r: &Readout<'_>, expected: Role) -> Result<(), BitError> {
    if r.role != expected {
        return Err(BitError::RoleMismatch {
            expected,
            found: r.role,
        });
    }
    Ok(())
}

/// Distance between two pre-aging re-evaluations of the same challenges.
pub fn intra_a_distance(reference: Readout<'_>, reeval: Readout<'_>) -> Result<usize, BitError> {
    expect_role(&reference, Role::PreAging)?;
    expect_role(&reeval, Role::PreAging)?;
    hamming_distance(reference.bits, reeval.bits)
}

/// Distance between a pre-aging and a post-aging response to the same challenges.
pub fn inter_a_distance(pre: Readout<'_>, post: Readout<'_>) -> Result<usize, BitError> {
    expect_role(&pre, Role::PreAging)?;
    expect_role(&post, Role::PostAging)?;
    hamming_distance(pre.bits, post.bits)
}

/// Mean fractional Hamming distance between `reference` and every observation.
///
/// With pre-aging observations this is the intraA estimator, with
/// post-aging observations the interA estimator.
pub fn estimate_p(reference: &ResponseVector, observations: &ReadoutSet) -> Result<f64, BitError> {
    if observations.is_empty() {
        return Err(BitError::EmptyObservations);
    }
    let mut total = 0usize;
    for obs in observations.readouts() {
        total += hamming_distance(reference, obs)?;
    }
    Ok(total as f64 / (reference.len() as f64 * observations.len() as f64))
}

// SPDX-License-Identifier: Apache-2.0

//! Readout dumps, enrollment profiles and dataset manifests.
//!
//! Readout file layout, all integers little-endian:
//!
//! | offset | size | field                      |
//! |-------:|-----:|----------------------------|
//! |      0 |    4 | magic `SRPF`               |
//! |      4 |    2 | version (1)                |
//! |      6 |   16 | device id                  |
//! |     22 |    4 | temperature, millikelvin   |
//! |     26 |    2 | supply voltage, millivolts |
//! |     28 |    1 | role (0 pre, 1 post aging) |
//! |     29 |    8 | effective age, centihours  |
//! |     37 |    2 | readout count              |
//! |     39 |    4 | cell count                 |
//! |     43 |      | payload                    |
//!
//! The payload is `readout_count` readouts of `ceil(cell_count / 8)` bytes,
//! cell `i` at bit `i % 8` of byte `i / 8`. Unused high bits of the last byte
//! are zero.

use std::fs;
use std::hash::Hasher;
use std::path::{Path, PathBuf};

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asr::EnrollmentProfile;
use crate::bitcore::{packed_len, BitError, DeviceId, ReadoutMeta, ReadoutSet, ResponseVector, Role};

pub const MAGIC: &[u8; 4] = b"SRPF";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 43;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not a readout file")]
    NotReadoutFile,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u16),
    #[error("truncated header: {actual} of {HEADER_LEN} bytes")]
    TruncatedHeader { actual: usize },
    #[error("payload length mismatch: expected {expected} bytes, found {actual}")]
    PayloadLength { expected: usize, actual: usize },
    #[error("invalid role code {0}")]
    Role(u8),
    #[error("cannot write an empty readout set")]
    EmptySet,
    #[error("{what} {value} does not fit the header field")]
    Overflow { what: &'static str, value: usize },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("checksum mismatch for {path}: manifest {expected}, file {actual}")]
    Checksum {
        path: String,
        expected: String,
        actual: String,
    },
    #[error(transparent)]
    Bits(#[from] BitError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
    move |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Serialized form of a readout set.
pub fn encode_readouts(set: &ReadoutSet, device_id: &DeviceId) -> Result<Vec<u8>, DataError> {
    if set.is_empty() {
        return Err(DataError::EmptySet);
    }
    let count = u16::try_from(set.len()).map_err(|_| DataError::Overflow {
        what: "readout count",
        value: set.len(),
    })?;
    let cells = u32::try_from(set.cell_count()).map_err(|_| DataError::Overflow {
        what: "cell count",
        value: set.cell_count(),
    })?;
    let meta = set.meta();
    let mut out = Vec::with_capacity(HEADER_LEN + set.len() * packed_len(set.cell_count()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&device_id.0);
    out.extend_from_slice(&meta.temperature_mk.to_le_bytes());
    out.extend_from_slice(&meta.voltage_mv.to_le_bytes());
    out.push(meta.role.code());
    out.extend_from_slice(&meta.effective_age_ch.to_le_bytes());
    out.extend_from_slice(&count.to_le_bytes());
    out.extend_from_slice(&cells.to_le_bytes());
    debug_assert_eq!(out.len(), HEADER_LEN);
    for r in set.readouts() {
        out.extend_from_slice(r.as_bytes());
    }
    Ok(out)
}

fn le<const N: usize>(bytes: &[u8], at: usize) -> [u8; N] {
    bytes[at..at + N].try_into().expect("header length checked")
}

/// Inverse of [`encode_readouts`].
pub fn decode_readouts(bytes: &[u8]) -> Result<(ReadoutSet, DeviceId), DataError> {
    if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
        return Err(DataError::NotReadoutFile);
    }
    if bytes.len() < HEADER_LEN {
        return Err(DataError::TruncatedHeader { actual: bytes.len() });
    }
    let version = u16::from_le_bytes(le(bytes, 4));
    if version != VERSION {
        return Err(DataError::UnsupportedVersion(version));
    }
    let device_id = DeviceId(le(bytes, 6));
    let role_code = bytes[28];
    let meta = ReadoutMeta {
        temperature_mk: u32::from_le_bytes(le(bytes, 22)),
        voltage_mv: u16::from_le_bytes(le(bytes, 26)),
        role: Role::from_code(role_code).ok_or(DataError::Role(role_code))?,
        effective_age_ch: u64::from_le_bytes(le(bytes, 29)),
    };
    let count = u16::from_le_bytes(le(bytes, 37)) as usize;
    let cells = u32::from_le_bytes(le(bytes, 39)) as usize;
    let stride = packed_len(cells);
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != count * stride {
        return Err(DataError::PayloadLength {
            expected: count * stride,
            actual: payload.len(),
        });
    }
    let readouts = payload
        .chunks_exact(stride.max(1))
        .take(count)
        .map(|chunk| ResponseVector::from_packed(chunk.to_vec(), cells))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((ReadoutSet::new(cells, readouts, meta)?, device_id))
}

pub fn write_readouts(set: &ReadoutSet, device_id: &DeviceId, path: &Path) -> Result<(), DataError> {
    let bytes = encode_readouts(set, device_id)?;
    fs::write(path, bytes).map_err(io_err(path))
}

pub fn read_readouts(path: &Path) -> Result<(ReadoutSet, DeviceId), DataError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    decode_readouts(&bytes)
}

/// 64-bit FNV-1a over a readout file's payload.
pub fn payload_checksum(file_bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(file_bytes.get(HEADER_LEN..).unwrap_or(&[]));
    h.finish()
}

fn schema_error<E: std::fmt::Display>(err: serde_path_to_error::Error<E>) -> DataError {
    DataError::Schema {
        path: err.path().to_string(),
        message: err.into_inner().to_string(),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DataError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(schema_error)?;
    Ok(value)
}

fn check_probability(path: &str, v: f64) -> Result<(), DataError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(DataError::Schema {
            path: path.into(),
            message: format!("{v} is not a probability"),
        })
    }
}

pub fn profile_to_json(profile: &EnrollmentProfile) -> String {
    let mut text = serde_json::to_string_pretty(profile).expect("profiles always serialize");
    text.push('\n');
    text
}

pub fn profile_from_json(text: &str) -> Result<EnrollmentProfile, DataError> {
    let profile: EnrollmentProfile = from_json(text)?;
    check_probability("p_intra_est", profile.p_intra_est)?;
    if let Some(p) = profile.p_inter_est {
        check_probability("p_inter_est", p)?;
    }
    Ok(profile)
}

pub fn write_profile(profile: &EnrollmentProfile, path: &Path) -> Result<(), DataError> {
    fs::write(path, profile_to_json(profile)).map_err(io_err(path))
}

pub fn read_profile(path: &Path) -> Result<EnrollmentProfile, DataError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    profile_from_json(&text)
}

/// One readout file of a dataset. `path` is relative to the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub path: String,
    pub role: Role,
    pub temperature_k: f64,
    pub device_id: DeviceId,
    /// FNV-1a of the payload, 16 hex digits.
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Writes `set` next to the manifest at `dir/name` and records it.
    pub fn add_readouts(
        &mut self,
        dir: &Path,
        name: &str,
        set: &ReadoutSet,
        device_id: &DeviceId,
    ) -> Result<PathBuf, DataError> {
        let bytes = encode_readouts(set, device_id)?;
        let path = dir.join(name);
        fs::write(&path, &bytes).map_err(io_err(&path))?;
        self.entries.push(ManifestEntry {
            path: name.to_string(),
            role: set.role(),
            temperature_k: set.meta().temperature_k(),
            device_id: *device_id,
            checksum: format!("{:016x}", payload_checksum(&bytes)),
        });
        Ok(path)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifests always serialize");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        fs::write(path, self.to_json()).map_err(io_err(path))
    }

    /// Reads a manifest and verifies every listed file against its checksum.
    pub fn read(path: &Path) -> Result<Self, DataError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let manifest: Manifest = from_json(&text)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for e in &manifest.entries {
            let file = dir.join(&e.path);
            let bytes = fs::read(&file).map_err(io_err(&file))?;
            let actual = format!("{:016x}", payload_checksum(&bytes));
            if actual != e.checksum {
                return Err(DataError::Checksum {
                    path: e.path.clone(),
                    expected: e.checksum.clone(),
                    actual,
                });
            }
        }
        Ok(manifest)
    }

    /// First entry matching `role` and `temperature_k` (to the millikelvin).
    pub fn find(&self, role: Role, temperature_k: f64) -> Option<&ManifestEntry> {
        let mk = crate::bitcore::kelvin_to_mk(temperature_k);
        self.entries
            .iter()
            .find(|e| e.role == role && crate::bitcore::kelvin_to_mk(e.temperature_k) == mk)
    }
}

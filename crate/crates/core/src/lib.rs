// SPDX-License-Identifier: Apache-2.0

//! Recycled-SoC detection from aging-induced SRAM PUF unreliability.
//!
//! The crate is split along the lines of the detection workflow:
//!
//! - [`bitcore`]: packed power-up readouts and the Hamming-distance family of
//!   primitives (interA/intraA distances and the binomial estimator).
//! - [`detection`]: binomial FAR/FRR tails, equal-error threshold search and
//!   minimal response-length planning.
//! - [`agingmodel`]: a statistical SRAM PUF simulator with temperature
//!   sensitivity and NBTI aging driven by an acceleration factor.
//! - [`asr`]: aging-sensitive response selection, enrollment and the
//!   detection-phase verdict.
//! - [`dataio`]: bit-exact readout dumps, JSON profiles and manifests.

pub mod agingmodel;
pub mod asr;
pub mod bitcore;
pub mod dataio;
pub mod detection;

pub use agingmodel::{DeviceModel, ModelConfig, StressProfile};
pub use asr::{EnrollmentProfile, SelectionConfig};
pub use bitcore::{CellAddress, ReadoutSet, ResponseVector, Role};
pub use detection::{DetectionPlan, ErrorModel, OperatingPoint};

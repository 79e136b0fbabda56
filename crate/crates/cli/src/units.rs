// SPDX-License-Identifier: Apache-2.0

//! Temperature arguments: `80C`, `353.15K` or a bare number of kelvin.

use std::fmt;
use std::str::FromStr;

const ZERO_CELSIUS_K: f64 = 273.15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kelvin(pub f64);

impl FromStr for Kelvin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (number, offset) = if let Some(c) = s.strip_suffix(['C', 'c']) {
            (c, ZERO_CELSIUS_K)
        } else if let Some(k) = s.strip_suffix(['K', 'k']) {
            (k, 0.0)
        } else {
            (s, 0.0)
        };
        let v: f64 = number
            .trim()
            .parse()
            .map_err(|_| format!("not a temperature: {s:?} (use e.g. 80C or 353.15K)"))?;
        let k = v + offset;
        if !(k > 0.0 && k.is_finite()) {
            return Err(format!("temperature {s} is not above absolute zero"));
        }
        Ok(Kelvin(k))
    }
}

impl fmt::Display for Kelvin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} K ({:.2} °C)", self.0, self.0 - ZERO_CELSIUS_K)
    }
}

/// `298150mK`, used in file names.
pub fn millikelvin_tag(kelvin: f64) -> String {
    format!("{}mK", pufage_core::bitcore::kelvin_to_mk(kelvin))
}

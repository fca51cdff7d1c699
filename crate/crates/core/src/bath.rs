//! Ohmic bosonic bath: spectral densities, Bose occupation and the
//! detailed-balance flip rate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// High-frequency cutoff applied to the Ohmic density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffKind {
    /// `η ω e^{−ω/ω_c}`
    Exponential,
    /// `η ω ω_c / (ω² + ω_c²)`
    DrudeLorentz,
}

impl FromStr for CutoffKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" => Ok(Self::Exponential),
            "drude-lorentz" => Ok(Self::DrudeLorentz),
            _ => Err(Error::InvalidParameter(format!(
                "unknown cutoff `{s}` (expected exponential or drude-lorentz)"
            ))),
        }
    }
}

impl fmt::Display for CutoffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exponential => "exponential",
            Self::DrudeLorentz => "drude-lorentz",
        })
    }
}

/// Bath parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Spectral strength `η`.
    pub strength: f64,
    /// Cutoff frequency `ω_c`.
    pub cutoff_frequency: f64,
    pub cutoff: CutoffKind,
    /// Inverse temperature `β`.
    pub beta: f64,
}

impl BathSpec {
    pub fn new(strength: f64, cutoff_frequency: f64, cutoff: CutoffKind, beta: f64) -> Result<Self> {
        for (name, v) in [("eta", strength), ("omega_c", cutoff_frequency), ("beta", beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { strength, cutoff_frequency, cutoff, beta })
    }

    /// Spectral density `J(ω)`, extended to negative frequencies as an odd
    /// function.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        if omega < 0.0 {
            return -self.spectral_density(-omega);
        }
        let (eta, wc) = (self.strength, self.cutoff_frequency);
        match self.cutoff {
            CutoffKind::Exponential => eta * omega * (-omega / wc).exp(),
            CutoffKind::DrudeLorentz => eta * omega * wc / (omega * omega + wc * wc),
        }
    }

    /// `lim_{ω→0} J(ω)/ω`.
    fn ohmic_slope(&self) -> f64 {
        match self.cutoff {
            CutoffKind::Exponential => self.strength,
            CutoffKind::DrudeLorentz => self.strength / self.cutoff_frequency,
        }
    }

    /// Flip rate for a transition that changes the system energy by
    /// `omega = E(final) − E(initial)`.
    ///
    /// Absorption (`ω > 0`) goes as `2π J(ω) n̄(ω)`, emission as
    /// `2π J(|ω|) (n̄(|ω|) + 1)`, so `γ(ω) = e^{−βω} γ(−ω)`. A zero gap
    /// is rejected; see [`BathSpec::transition_rate`].
    pub fn rate(&self, omega: f64) -> Result<f64> {
        if omega == 0.0 {
            return Err(Error::InvalidParameter(
                "rate is undefined at zero energy change".into(),
            ));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite frequency {omega}")));
        }
        Ok(self.transition_rate(omega))
    }

    /// Like [`BathSpec::rate`] but total: a zero gap gets the continuous
    /// limit `2π β⁻¹ lim_{ω→0} J(ω)/ω` in both directions.
    pub fn transition_rate(&self, omega: f64) -> f64 {
        let x = self.beta * omega.abs();
        if x == 0.0 {
            return 2.0 * PI * self.ohmic_slope() / self.beta;
        }
        let j = self.spectral_density(omega.abs());
        if omega > 0.0 {
            // n̄(ω) = 1/(e^{βω} − 1)
            2.0 * PI * j / x.exp_m1()
        } else {
            // n̄(|ω|) + 1 = 1/(1 − e^{−β|ω|})
            2.0 * PI * j / -(-x).exp_m1()
        }
    }
}

/// Bose–Einstein occupation `1/(e^{βω} − 1)`; negative for `ω < 0`.
pub fn bose_occupation(beta: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::InvalidParameter("Bose occupation diverges at ω = 0".into()));
    }
    Ok(1.0 / (beta * omega).exp_m1())
}

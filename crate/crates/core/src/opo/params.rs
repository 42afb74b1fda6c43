use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

fn default_pair_exponent() -> f64 {
    0.5
}

fn open_fraction(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} not in (0, 1)")))
    }
}

fn efficiency(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} not in (0, 1]")))
    }
}

fn fraction(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} not in [0, 1]")))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} must be positive")))
    }
}

/// OPO cavity parameters. Frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpoParams {
    /// Output-coupler transmission `T`.
    pub t_out: f64,
    /// Intracavity loss `L`.
    pub l_intra: f64,
    /// Cavity bandwidth.
    pub gamma: f64,
    /// Free spectral range; spacing of the emission comb.
    pub delta_fsr: f64,
    /// Pump power over threshold power.
    pub pump_ratio: f64,
    /// Pair amplitude `lambda = pump_ratio^pair_exponent`.
    #[serde(default = "default_pair_exponent")]
    pub pair_exponent: f64,
}

impl OpoParams {
    pub fn reference() -> Self {
        Self {
            t_out: 0.10,
            l_intra: 0.004,
            gamma: 60e6,
            delta_fsr: 4.3e9,
            pump_ratio: 1.0 / 80.0,
            pair_exponent: default_pair_exponent(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        open_fraction("t_out", self.t_out)?;
        if !(0.0..1.0).contains(&self.l_intra) {
            return Err(Error::param("l_intra", format!("{} not in [0, 1)", self.l_intra)));
        }
        positive("gamma", self.gamma)?;
        positive("delta_fsr", self.delta_fsr)?;
        positive("pair_exponent", self.pair_exponent)?;
        if !(self.pump_ratio > 0.0 && self.pump_ratio < 1.0) {
            return Err(Error::param(
                "pump_ratio",
                format!("{} must lie in (0, 1): the model holds below threshold only", self.pump_ratio),
            ));
        }
        Ok(())
    }

    /// Squared pair amplitude `lambda^2`.
    pub fn lambda_sq(&self) -> f64 {
        self.pump_ratio.powf(2.0 * self.pair_exponent)
    }
}

/// Detection-side efficiencies. The mode-overlap efficiency is `visibility^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyBudget {
    pub eta_noise: f64,
    pub eta_phot: f64,
    pub eta_prop: f64,
    pub visibility: f64,
}

impl EfficiencyBudget {
    pub fn reference() -> Self {
        Self {
            eta_noise: 0.96,
            eta_phot: 0.97,
            eta_prop: 0.95,
            visibility: 0.98,
        }
    }

    pub fn validate(&self) -> Result<()> {
        efficiency("eta_noise", self.eta_noise)?;
        efficiency("eta_phot", self.eta_phot)?;
        efficiency("eta_prop", self.eta_prop)?;
        efficiency("visibility", self.visibility)
    }

    pub fn eta_vis(&self) -> f64 {
        self.visibility * self.visibility
    }
}

/// Heralding arm: filters, switch and single-photon detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditioningPath {
    pub eta_det: f64,
    pub transmission: f64,
    /// Detector dark-count rate, Hz.
    pub dark_rate: f64,
    /// Observed heralding rate, Hz.
    pub herald_rate: f64,
    /// Heralds from non-degenerate comb modes per wanted herald
    /// (see [`super::cascade_rejection`]).
    #[serde(default)]
    pub leakage: f64,
}

impl ConditioningPath {
    pub fn reference() -> Self {
        Self {
            eta_det: 0.07,
            transmission: 0.40,
            dark_rate: 1.0,
            herald_rate: 30e3,
            leakage: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fraction("eta_det", self.eta_det)?;
        fraction("transmission", self.transmission)?;
        for (name, v) in [("dark_rate", self.dark_rate), ("herald_rate", self.herald_rate), ("leakage", self.leakage)] {
            if !(v >= 0.0) || v.is_nan() {
                return Err(Error::param(name, format!("{v} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Overall heralding efficiency `eta_c`.
    pub fn eta_c(&self) -> f64 {
        self.eta_det * self.transmission
    }

    /// False heralds per true herald: dark counts plus comb leakage.
    pub fn false_herald_ratio(&self) -> f64 {
        let dark = if self.dark_rate == 0.0 {
            0.0
        } else {
            self.dark_rate / self.herald_rate
        };
        dark + self.leakage
    }
}

/// Two-stage spectral filter on the heralding arm. Frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    /// Interferential-filter FWHM.
    pub if_bandwidth: f64,
    pub fp_fsr: f64,
    /// Fabry-Perot FWHM.
    pub fp_bandwidth: f64,
}

impl FilterSpec {
    pub fn reference() -> Self {
        Self {
            if_bandwidth: wavelength_to_frequency_width(0.5e-9, 1064e-9),
            fp_fsr: 330e9,
            fp_bandwidth: 320e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("if_bandwidth", self.if_bandwidth)?;
        positive("fp_bandwidth", self.fp_bandwidth)?;
        if !(self.fp_fsr > self.fp_bandwidth) {
            return Err(Error::param("fp_fsr", "must exceed fp_bandwidth"));
        }
        Ok(())
    }

    pub fn finesse(&self) -> f64 {
        self.fp_fsr / self.fp_bandwidth
    }
}

/// Converts a spectral width `d_lambda` at wavelength `lambda` (both m) to Hz.
pub fn wavelength_to_frequency_width(d_lambda: f64, lambda: f64) -> f64 {
    SPEED_OF_LIGHT * d_lambda / (lambda * lambda)
}

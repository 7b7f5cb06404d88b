use serde::Serialize;

use crate::error::{Error, Result};

/// Node-count cap for the exhaustive longest-simple-path search.
pub const DEFAULT_PATH_SEARCH_CAP: usize = 20;

/// How the destination's `T`-slot observation window lines up with the
/// source's transmissions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockMode {
    /// Destination observes the same slots the source transmits in; block
    /// `(t2, t1)` of the equivalent channel is `H_{t2 - t1}`.
    Causal,
    /// Layered networks only: the window is delayed by the common number of
    /// relay hops `d`, so block `(t2, t1)` is `H_{d + t2 - t1}` and the
    /// channel is block diagonal. With `T = 1` this is the single-block
    /// `N_dst x N_src` channel.
    Layered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AFConfig {
    /// Common power constraint `P` (linear).
    pub power: f64,
    /// Relay amplification, `1 / sqrt(log2 P)` by default.
    pub gain: f64,
    /// Activation threshold on received power, `P log2 P` by default.
    pub threshold: f64,
    pub time_slots: usize,
    pub block: BlockMode,
}

impl AFConfig {
    pub fn new(power: f64, time_slots: usize) -> Result<Self> {
        if !power.is_finite() || power <= 1.0 {
            return Err(Error::Config(format!("power P = {power} must exceed 1 so that log2 P > 0")));
        }
        if time_slots == 0 {
            return Err(Error::Config("time slots T must be at least 1".into()));
        }
        let log_p = power.log2();
        Ok(AFConfig {
            power,
            gain: 1.0 / log_p.sqrt(),
            threshold: power * log_p,
            time_slots,
            block: BlockMode::Causal,
        })
    }

    /// Power given in dB: `P = 10^(dB / 10)`.
    pub fn from_db(power_db: f64, time_slots: usize) -> Result<Self> {
        AFConfig::new(10f64.powf(power_db / 10.0), time_slots)
    }

    pub fn with_gain(mut self, gain: f64) -> Result<Self> {
        if !gain.is_finite() || gain <= 0.0 {
            return Err(Error::Config(format!("gain {gain} must be positive")));
        }
        self.gain = gain;
        Ok(self)
    }

    pub fn with_threshold(mut self, threshold: f64) -> Result<Self> {
        if threshold.is_nan() || threshold <= 0.0 {
            return Err(Error::Config(format!("threshold {threshold} must be positive")));
        }
        self.threshold = threshold;
        Ok(self)
    }

    pub fn with_block(mut self, block: BlockMode) -> Self {
        self.block = block;
        self
    }
}

//! Channel realizations: distance path loss with unit-mean Rayleigh fading.
//!
//! Every trial draws from its own ChaCha8 stream, selected by the trial
//! index, so trial `k` is the same regardless of how many trials run or in
//! which order they are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Generator family recorded in output metadata.
pub const GENERATOR_FAMILY: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = trial index";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Source to backscatter-node distance (m).
    pub d0: f64,
    /// Backscatter-node to receiver distance (m).
    pub d1: f64,
    pub path_loss_exponent: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            d0: 10.0,
            d1: 15.0,
            path_loss_exponent: 3.0,
            seed: 2019,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("d0", self.d0), ("d1", self.d1)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidArgument {
                    name,
                    value,
                    reason: "distance must be finite and > 0",
                });
            }
        }
        if !(self.path_loss_exponent >= 0.0 && self.path_loss_exponent.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "path_loss_exponent",
                value: self.path_loss_exponent,
                reason: "must be finite and >= 0",
            });
        }
        Ok(())
    }

    fn path_gain(&self, distance: f64) -> f64 {
        distance.powf(-self.path_loss_exponent)
    }

    /// Instance with the given fading powers on top of this scenario's path loss.
    pub fn instance(&self, g0_sq: f64, g1_sq: f64) -> ChannelInstance {
        ChannelInstance {
            g0_sq,
            g1_sq,
            h0: g0_sq * self.path_gain(self.d0),
            h1: g1_sq * self.path_gain(self.d1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelInstance {
    /// `|g0|^2`, fading power of the source link.
    pub g0_sq: f64,
    /// `|g1|^2`, fading power of the backscatter link.
    pub g1_sq: f64,
    pub h0: f64,
    pub h1: f64,
}

/// Link constants that do not depend on the channel or the power budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamsTemplate {
    pub sigma2: f64,
    pub eta: f64,
    pub xi: f64,
    pub p_sc: f64,
    pub p_rc: f64,
    pub p_tc: f64,
}

impl Default for ParamsTemplate {
    /// sigma2 = -100 dBm, eta = 0.6, xi = 0.9, Psc = 100 mW, Prc = 10 mW, Ptc = 1 mW.
    fn default() -> Self {
        ParamsTemplate {
            sigma2: 1e-13,
            eta: 0.6,
            xi: 0.9,
            p_sc: 0.1,
            p_rc: 0.01,
            p_tc: 1e-3,
        }
    }
}

impl ParamsTemplate {
    pub fn with_channel(&self, channel: &ChannelInstance, p_max: f64) -> SystemParams {
        SystemParams {
            h0: channel.h0,
            h1: channel.h1,
            sigma2: self.sigma2,
            eta: self.eta,
            xi: self.xi,
            p_sc: self.p_sc,
            p_rc: self.p_rc,
            p_tc: self.p_tc,
            p_max,
        }
    }
}

/// Generator for one trial.
pub fn trial_rng(seed: u64, stream_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_index);
    rng
}

/// Unit-mean exponential sample by inversion, `-ln(U)` with `U` in `(0, 1]`.
pub fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    -u.ln()
}

/// Rayleigh-faded instance for trial `stream_index`.
pub fn draw_instance(config: &ScenarioConfig, stream_index: u64) -> ChannelInstance {
    let mut rng = trial_rng(config.seed, stream_index);
    let g0_sq = unit_exponential(&mut rng);
    let g1_sq = unit_exponential(&mut rng);
    config.instance(g0_sq, g1_sq)
}

/// Instance with both fading powers set to one.
pub fn fixed_instance(config: &ScenarioConfig) -> ChannelInstance {
    config.instance(1.0, 1.0)
}

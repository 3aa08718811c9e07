#![allow(dead_code)]

pub mod stationary;

use backcom_ee::{channel, units, ParamsTemplate, ScenarioConfig, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn default_link(g0_sq: f64, g1_sq: f64, p_max: f64) -> SystemParams {
    let channel = ScenarioConfig::default().instance(g0_sq, g1_sq);
    ParamsTemplate::default().with_channel(&channel, p_max)
}

pub fn unit_fading(p_max: f64) -> SystemParams {
    default_link(1.0, 1.0, p_max)
}

pub fn sweep_dbm() -> Vec<f64> {
    (1..=9).map(|i| 5.0 * i as f64).collect()
}

/// Default link constants with a random fading draw and a random Pmax in [0, 50] dBm.
pub fn random_default_instance(rng: &mut ChaCha8Rng) -> SystemParams {
    let g0 = channel::unit_exponential(rng);
    let g1 = channel::unit_exponential(rng);
    default_link(g0, g1, units::dbm_to_watts(rng.random_range(0.0..50.0)))
}

/// Random link constants away from the default operating point.
pub fn random_generic_instance(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams {
        h0: 10f64.powf(rng.random_range(-4.0..0.0)),
        h1: 10f64.powf(rng.random_range(-5.0..0.0)),
        sigma2: 10f64.powf(rng.random_range(-14.0..-9.0)),
        eta: rng.random_range(0.1..=1.0),
        xi: rng.random_range(0.2..=1.0),
        p_sc: rng.random_range(0.0..0.5),
        p_rc: rng.random_range(0.0..0.1),
        p_tc: 10f64.powf(rng.random_range(-5.0..-2.0)),
        p_max: 10f64.powf(rng.random_range(-3.0..1.5)),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

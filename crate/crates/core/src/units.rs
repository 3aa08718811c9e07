//! dBm/watt conversion. Everything inside the crate is linear SI; these are
//! only called when reading configuration and when writing CSV columns.

/// `P[W] = 10^((dBm - 30) / 10)`
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

//! Experiment configuration, stored as TOML.
//!
//! Schema version 1. Every key is optional; missing keys take the values of
//! [`ExperimentConfig::default`]. Powers in the file are in dBm and are
//! converted to watts here, nowhere else.
//!
//! ```toml
//! schema_version = 1
//! output_dir = "results"
//! pmax_dbm = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0]
//! n_trials = 500
//!
//! [scenario]
//! d0 = 10.0
//! d1 = 15.0
//! path_loss_exponent = 3.0
//! seed = 2019
//!
//! [link]
//! sigma2_dbm = -100.0
//! eta = 0.6
//! xi = 0.9
//! p_sc = 0.1
//! p_rc = 0.01
//! p_tc = 0.001
//!
//! [solver]
//! eps = 1e-6
//! l_max = 50
//!
//! [convergence]
//! draws = 5
//! pmax_dbm = 30.0
//!
//! [oracle]
//! n_p0 = 200
//! n_tau = 200
//! threshold = 0.01
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{ParamsTemplate, ScenarioConfig};
use crate::error::{Error, Result};
use crate::oracle::GridSpec;
use crate::solver::{SolverOptions, DEFAULT_EPS, DEFAULT_MAX_ITERATIONS};
use crate::units::dbm_to_watts;

pub const SCHEMA_VERSION: u32 = 1;

/// Link constants; the noise power is given in dBm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    pub sigma2_dbm: f64,
    pub eta: f64,
    pub xi: f64,
    /// Watts.
    pub p_sc: f64,
    /// Watts.
    pub p_rc: f64,
    /// Watts.
    pub p_tc: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        let t = ParamsTemplate::default();
        LinkConfig {
            sigma2_dbm: -100.0,
            eta: t.eta,
            xi: t.xi,
            p_sc: t.p_sc,
            p_rc: t.p_rc,
            p_tc: t.p_tc,
        }
    }
}

impl LinkConfig {
    pub fn template(&self) -> ParamsTemplate {
        ParamsTemplate {
            sigma2: dbm_to_watts(self.sigma2_dbm),
            eta: self.eta,
            xi: self.xi,
            p_sc: self.p_sc,
            p_rc: self.p_rc,
            p_tc: self.p_tc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub eps: f64,
    pub l_max: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps: DEFAULT_EPS,
            l_max: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Settings of the convergence experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    /// Number of channel draws, each traced separately.
    pub draws: u64,
    pub pmax_dbm: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            draws: 5,
            pmax_dbm: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub n_p0: usize,
    pub n_tau: usize,
    /// Largest accepted `|solver - oracle| / oracle`.
    pub threshold: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_p0: 200,
            n_tau: 200,
            threshold: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub output_dir: PathBuf,
    /// Sweep of maximum source powers (dBm), ascending.
    pub pmax_dbm: Vec<f64>,
    /// Monte Carlo trials per sweep point.
    pub n_trials: u64,
    pub scenario: ScenarioConfig,
    pub link: LinkConfig,
    pub solver: SolverConfig,
    pub convergence: ConvergenceConfig,
    pub oracle: OracleConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            output_dir: PathBuf::from("results"),
            pmax_dbm: (1..=9).map(|i| 5.0 * i as f64).collect(),
            n_trials: 500,
            scenario: ScenarioConfig::default(),
            link: LinkConfig::default(),
            solver: SolverConfig::default(),
            convergence: ConvergenceConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|source| Error::ConfigParse {
            path: origin.to_string(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.pmax_dbm.is_empty() {
            return Err(Error::Config("pmax_dbm sweep is empty".into()));
        }
        if !self.pmax_dbm.iter().all(|p| p.is_finite()) || !self.pmax_dbm.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(format!(
                "pmax_dbm must be finite and strictly ascending: {:?}",
                self.pmax_dbm
            )));
        }
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be >= 1".into()));
        }
        if self.convergence.draws == 0 {
            return Err(Error::Config("convergence.draws must be >= 1".into()));
        }
        if !(self.oracle.threshold >= 0.0) {
            return Err(Error::Config("oracle.threshold must be >= 0".into()));
        }
        self.scenario.validate()?;
        self.grid().validate()?;
        // Parameters are checked against a unit-gain channel at the first sweep point.
        let unit = crate::channel::fixed_instance(&self.scenario);
        self.link
            .template()
            .with_channel(&unit, dbm_to_watts(self.pmax_dbm[0]))
            .validate()?;
        if !(self.solver.eps > 0.0) || self.solver.l_max == 0 {
            return Err(Error::Config("solver needs eps > 0 and l_max >= 1".into()));
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions::new(self.solver.eps, self.solver.l_max)
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::reduced(self.oracle.n_p0, self.oracle.n_tau)
    }

    pub fn template(&self) -> ParamsTemplate {
        self.link.template()
    }

    /// SHA-256 of the canonical TOML form, ignoring `output_dir`.
    pub fn fingerprint(&self) -> String {
        let canonical = ExperimentConfig {
            output_dir: PathBuf::new(),
            ..self.clone()
        };
        let digest = Sha256::digest(canonical.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

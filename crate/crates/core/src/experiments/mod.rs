//! Experiment runners and their CSV output.
//!
//! Each runner returns its rows in `(sweep point, trial)` order; trials are
//! evaluated in parallel but the order of the output never depends on it.
//!
//! CSV layout: `#`-prefixed metadata lines, one header row, then data rows.
//! Columns per experiment are the fields of the row types below, in order.

pub mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::Scheme;
use crate::channel::{self, ChannelInstance, GENERATOR_FAMILY};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::oracle::{self, GridSpec};
use crate::solver::{dinkelbach_solve, SolveOutcome};
use crate::units::dbm_to_watts;

pub use config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Convergence,
    ModeSwitch,
    EeSweep,
    OracleCheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Convergence => "convergence",
            Experiment::ModeSwitch => "mode-switch",
            Experiment::EeSweep => "ee-sweep",
            Experiment::OracleCheck => "oracle-check",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Experiment::Convergence => "convergence.csv",
            Experiment::ModeSwitch => "mode_switch.csv",
            Experiment::EeSweep => "ee_sweep.csv",
            Experiment::OracleCheck => "oracle_check.csv",
        }
    }
}

/// One iteration of one traced solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub draw: u64,
    pub g0_sq: f64,
    pub g1_sq: f64,
    pub pmax_dbm: f64,
    pub iteration: usize,
    pub q: f64,
    pub objective: f64,
    pub numerator_over_z: f64,
    /// 1 on the iteration where the stopping rule fired, else 0.
    pub converged: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSwitchRow {
    pub pmax_dbm: f64,
    pub pmax_w: f64,
    pub solver_ee: f64,
    pub oracle_ee: f64,
    pub rel_gap: f64,
    pub mode: &'static str,
    pub p0_w: f64,
    pub tau_s: f64,
    pub tau_a: f64,
    pub beta: f64,
    pub iterations: usize,
    /// EE with `P0 = Pmax`; empty when infeasible.
    pub mode1_ee: Option<f64>,
    /// EE with `tau_s = 0`; empty when infeasible.
    pub mode2_ee: Option<f64>,
}

/// Trial-averaged EE per scheme at one sweep point. Infeasible trials count
/// as zero EE (nothing is transmitted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EeSweepRow {
    pub pmax_dbm: f64,
    pub pmax_w: f64,
    pub trials: u64,
    pub optimal_ee: f64,
    pub optimal_se: f64,
    pub fixed_max_power: f64,
    pub no_sleep: f64,
    pub optimal_ee_sem: f64,
    pub optimal_se_sem: f64,
    pub fixed_max_power_sem: f64,
    pub no_sleep_sem: f64,
    pub optimal_se_infeasible: u64,
    pub fixed_max_power_infeasible: u64,
    pub no_sleep_infeasible: u64,
}

impl EeSweepRow {
    pub fn mean(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::OptimalEe => self.optimal_ee,
            Scheme::OptimalSe => self.optimal_se,
            Scheme::FixedMaxPower => self.fixed_max_power,
            Scheme::NoSleep => self.no_sleep,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheckRow {
    pub trial: u64,
    pub pmax_dbm: f64,
    pub g0_sq: f64,
    pub g1_sq: f64,
    pub solver_ee: f64,
    pub oracle_ee: Option<f64>,
    pub rel_gap: f64,
    pub pass: u8,
}

fn params_for(config: &ExperimentConfig, channel: &ChannelInstance, pmax_dbm: f64) -> SystemParams {
    config.template().with_channel(channel, dbm_to_watts(pmax_dbm))
}

/// Traces the Dinkelbach iteration on `convergence.draws` channel draws.
pub fn run_convergence(config: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    config.validate()?;
    let pmax_dbm = config.convergence.pmax_dbm;
    let per_draw: Vec<Result<Vec<ConvergenceRow>>> = (0..config.convergence.draws)
        .into_par_iter()
        .map(|draw| {
            let channel = channel::draw_instance(&config.scenario, draw);
            let outcome = dinkelbach_solve(&params_for(config, &channel, pmax_dbm), config.solver_options())?;
            let last = outcome.trace.len() - 1;
            Ok(outcome
                .trace
                .iter()
                .map(|step| ConvergenceRow {
                    draw,
                    g0_sq: channel.g0_sq,
                    g1_sq: channel.g1_sq,
                    pmax_dbm,
                    iteration: step.iteration,
                    q: step.q,
                    objective: step.objective,
                    numerator_over_z: step.numerator_over_z,
                    converged: u8::from(outcome.converged && step.iteration == last),
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for draw in per_draw {
        rows.extend(draw?);
    }
    Ok(rows)
}

/// Unit-fading sweep over `Pmax`: solver against oracle, plus both
/// single-mode solves.
pub fn run_mode_switch(config: &ExperimentConfig) -> Result<Vec<ModeSwitchRow>> {
    config.validate()?;
    let channel = channel::fixed_instance(&config.scenario);
    let grid = config.grid();
    config
        .pmax_dbm
        .par_iter()
        .map(|&pmax_dbm| {
            let params = params_for(config, &channel, pmax_dbm);
            let options = config.solver_options();
            let outcome = dinkelbach_solve(&params, options)?;
            let oracle_ee = oracle::grid_search_p1(&params, &grid)?.ee;
            let ee_of = |scheme: Scheme| scheme.solve(&params, options).ok().map(|o| o.ee);
            let a = outcome.allocation;
            Ok(ModeSwitchRow {
                pmax_dbm,
                pmax_w: params.p_max,
                solver_ee: outcome.ee,
                oracle_ee,
                rel_gap: (outcome.ee - oracle_ee).abs() / oracle_ee,
                mode: outcome.mode.label(),
                p0_w: a.p0,
                tau_s: a.tau_s,
                tau_a: a.tau_a,
                beta: a.beta,
                iterations: outcome.iterations,
                mode1_ee: ee_of(Scheme::FixedMaxPower),
                mode2_ee: ee_of(Scheme::NoSleep),
            })
        })
        .collect()
}

/// EE of every scheme for one trial at every sweep point; `None` where the
/// scheme is infeasible.
fn trial_sweep(config: &ExperimentConfig, trial: u64) -> Vec<[Option<f64>; 4]> {
    let channel = channel::draw_instance(&config.scenario, trial);
    config
        .pmax_dbm
        .iter()
        .map(|&pmax_dbm| {
            let params = params_for(config, &channel, pmax_dbm);
            Scheme::ALL.map(|scheme| scheme.solve(&params, config.solver_options()).ok().map(|o| o.ee))
        })
        .collect()
}

fn mean_and_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Average EE of the four schemes against `Pmax`. The same `n_trials` draws
/// are used at every sweep point and for every scheme.
pub fn run_ee_vs_pmax(config: &ExperimentConfig) -> Result<Vec<EeSweepRow>> {
    config.validate()?;
    let trials: Vec<Vec<[Option<f64>; 4]>> = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| trial_sweep(config, trial))
        .collect();

    let rows = config
        .pmax_dbm
        .iter()
        .enumerate()
        .map(|(point, &pmax_dbm)| {
            let stats: Vec<((f64, f64), u64)> = (0..Scheme::ALL.len())
                .map(|s| {
                    let values: Vec<f64> = trials.iter().map(|t| t[point][s].unwrap_or(0.0)).collect();
                    let infeasible = trials.iter().filter(|t| t[point][s].is_none()).count() as u64;
                    (mean_and_sem(&values), infeasible)
                })
                .collect();
            EeSweepRow {
                pmax_dbm,
                pmax_w: dbm_to_watts(pmax_dbm),
                trials: config.n_trials,
                optimal_ee: stats[0].0 .0,
                optimal_se: stats[1].0 .0,
                fixed_max_power: stats[2].0 .0,
                no_sleep: stats[3].0 .0,
                optimal_ee_sem: stats[0].0 .1,
                optimal_se_sem: stats[1].0 .1,
                fixed_max_power_sem: stats[2].0 .1,
                no_sleep_sem: stats[3].0 .1,
                optimal_se_infeasible: stats[1].1,
                fixed_max_power_infeasible: stats[2].1,
                no_sleep_infeasible: stats[3].1,
            }
        })
        .collect();
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub rows: Vec<OracleCheckRow>,
    pub threshold: f64,
}

impl OracleCheck {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass == 1)
    }

    pub fn worst_gap(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_gap).fold(0.0, f64::max)
    }
}

/// Sweep point used by oracle-check trial `trial`: trials cycle through the sweep.
pub fn oracle_check_pmax_dbm(config: &ExperimentConfig, trial: u64) -> f64 {
    config.pmax_dbm[(trial % config.pmax_dbm.len() as u64) as usize]
}

pub fn oracle_check_trial(
    config: &ExperimentConfig,
    trial: u64,
    grid: &GridSpec,
    threshold: f64,
) -> Result<(OracleCheckRow, SolveOutcome)> {
    let channel = channel::draw_instance(&config.scenario, trial);
    let pmax_dbm = oracle_check_pmax_dbm(config, trial);
    let params = params_for(config, &channel, pmax_dbm);
    let outcome = dinkelbach_solve(&params, config.solver_options())?;
    let report = oracle::verify_outcome(&params, &outcome, grid, threshold);
    Ok((
        OracleCheckRow {
            trial,
            pmax_dbm,
            g0_sq: channel.g0_sq,
            g1_sq: channel.g1_sq,
            solver_ee: report.solver_ee,
            oracle_ee: report.oracle_ee,
            rel_gap: report.rel_gap,
            pass: u8::from(report.passed),
        },
        outcome,
    ))
}

/// Solver against grid oracle on `n_trials` random instances.
pub fn run_oracle_check(config: &ExperimentConfig, threshold: f64) -> Result<OracleCheck> {
    config.validate()?;
    let grid = config.grid();
    let rows = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| oracle_check_trial(config, trial, &grid, threshold).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleCheck { rows, threshold })
}

/// Key/value lines written before the CSV header.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn for_experiment(experiment: Experiment, config: &ExperimentConfig) -> Self {
        let entries = vec![
            ("tool".into(), format!("backcom-ee {}", env!("CARGO_PKG_VERSION"))),
            ("experiment".into(), experiment.name().into()),
            ("config_schema".into(), config::SCHEMA_VERSION.to_string()),
            ("config_sha256".into(), config.fingerprint()),
            ("seed".into(), config.scenario.seed.to_string()),
            ("generator".into(), GENERATOR_FAMILY.into()),
        ];
        Metadata { entries }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }
}

/// Writes metadata, header and rows to any sink.
pub fn write_csv_to<W: Write, T: Serialize>(mut sink: W, metadata: &Metadata, rows: &[T]) -> Result<W> {
    let io = |source| Error::Io {
        path: "<csv sink>".into(),
        source,
    };
    for (key, value) in &metadata.entries {
        writeln!(sink, "# {key}: {value}").map_err(io)?;
    }
    let mut writer = csv::Writer::from_writer(sink);
    for row in rows {
        writer.serialize(row).map_err(|source| Error::Csv {
            path: "<csv sink>".into(),
            source,
        })?;
    }
    writer.flush().map_err(io)?;
    writer.into_inner().map_err(|e| io(e.into_error()))
}

/// Writes a CSV file, creating parent directories as needed.
pub fn write_csv<T: Serialize>(path: &Path, metadata: &Metadata, rows: &[T]) -> Result<()> {
    let with_path = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(with_path)?;
    }
    let file = File::create(path).map_err(with_path)?;
    write_csv_to(BufWriter::new(file), metadata, rows)
        .map_err(|e| match e {
            Error::Io { source, .. } => with_path(source),
            Error::Csv { source, .. } => Error::Csv {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })?
        .flush()
        .map_err(with_path)
}

/// Runs one experiment and writes its CSV into `config.output_dir`.
/// Returns the written path; for the oracle check also whether every row passed.
pub fn run_to_file(config: &ExperimentConfig, experiment: Experiment, threshold: Option<f64>) -> Result<(PathBuf, bool)> {
    let path = config.output_dir.join(experiment.file_name());
    let mut metadata = Metadata::for_experiment(experiment, config);
    let passed = match experiment {
        Experiment::Convergence => {
            write_csv(&path, &metadata, &run_convergence(config)?)?;
            true
        }
        Experiment::ModeSwitch => {
            write_csv(&path, &metadata, &run_mode_switch(config)?)?;
            true
        }
        Experiment::EeSweep => {
            write_csv(&path, &metadata, &run_ee_vs_pmax(config)?)?;
            true
        }
        Experiment::OracleCheck => {
            let threshold = threshold.unwrap_or(config.oracle.threshold);
            let check = run_oracle_check(config, threshold)?;
            metadata.push("threshold", threshold);
            write_csv(&path, &metadata, &check.rows)?;
            check.all_passed()
        }
    };
    Ok((path, passed))
}

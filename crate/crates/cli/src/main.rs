//! Command-line front end: solves single instances and runs the experiment
//! sweeps, writing one CSV per experiment.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use backcom_ee::experiments::{self, Experiment, ExperimentConfig};
use backcom_ee::units::dbm_to_watts;
use backcom_ee::{channel, Scheme};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "backcom-ee", version, about = "Energy-efficient resource allocation for wirelessly powered backscatter links")]
struct Cli {
    /// TOML experiment configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `scenario.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides `output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `solver.eps`.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Overrides `n_trials`.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance and print the outcome as JSON.
    Solve {
        #[arg(long)]
        pmax_dbm: f64,
        /// Channel stream (trial index); unit fading when omitted.
        #[arg(long)]
        stream: Option<u64>,
        #[arg(long, value_enum, default_value_t = SchemeArg::OptimalEe)]
        scheme: SchemeArg,
    },
    /// Dinkelbach traces for a few channel draws.
    Convergence,
    /// Unit-fading sweep over Pmax with the operating mode of each point.
    ModeSwitch,
    /// Average EE of every scheme against Pmax.
    EeSweep,
    /// Solver against the grid oracle; exits non-zero if any trial fails.
    OracleCheck {
        /// Overrides `oracle.threshold`.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Run all four experiments.
    All,
    /// Print the default configuration as TOML.
    DefaultConfig,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    OptimalEe,
    OptimalSe,
    FixedMaxPower,
    NoSleep,
}

impl From<SchemeArg> for Scheme {
    fn from(arg: SchemeArg) -> Self {
        match arg {
            SchemeArg::OptimalEe => Scheme::OptimalEe,
            SchemeArg::OptimalSe => Scheme::OptimalSe,
            SchemeArg::FixedMaxPower => Scheme::FixedMaxPower,
            SchemeArg::NoSleep => Scheme::NoSleep,
        }
    }
}

impl Cli {
    fn load_config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.scenario.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(eps) = self.eps {
            config.solver.eps = eps;
        }
        if let Some(trials) = self.trials {
            config.n_trials = trials;
        }
        config.validate()?;
        Ok(config)
    }
}

fn run_experiment(config: &ExperimentConfig, experiment: Experiment, threshold: Option<f64>) -> Result<bool> {
    let (path, passed) = experiments::run_to_file(config, experiment, threshold)
        .with_context(|| format!("running {}", experiment.name()))?;
    println!("{}: wrote {}", experiment.name(), path.display());
    if !passed {
        eprintln!("{}: at least one trial exceeded the threshold", experiment.name());
    }
    Ok(passed)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Command::DefaultConfig = cli.command {
        print!("{}", ExperimentConfig::default().to_toml());
        return Ok(true);
    }
    let config = cli.load_config()?;
    match &cli.command {
        Command::Solve {
            pmax_dbm,
            stream,
            scheme,
        } => {
            let instance = match stream {
                Some(k) => channel::draw_instance(&config.scenario, *k),
                None => channel::fixed_instance(&config.scenario),
            };
            let params = config.template().with_channel(&instance, dbm_to_watts(*pmax_dbm));
            let outcome = Scheme::from(*scheme).solve(&params, config.solver_options())?;
            let report = serde_json::json!({
                "params": params,
                "channel": instance,
                "outcome": outcome,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Convergence => run_experiment(&config, Experiment::Convergence, None),
        Command::ModeSwitch => run_experiment(&config, Experiment::ModeSwitch, None),
        Command::EeSweep => run_experiment(&config, Experiment::EeSweep, None),
        Command::OracleCheck { threshold } => run_experiment(&config, Experiment::OracleCheck, *threshold),
        Command::All => {
            let mut passed = true;
            for experiment in [
                Experiment::Convergence,
                Experiment::ModeSwitch,
                Experiment::EeSweep,
                Experiment::OracleCheck,
            ] {
                passed &= run_experiment(&config, experiment, None)?;
            }
            Ok(passed)
        }
        Command::DefaultConfig => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

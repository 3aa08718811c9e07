//! Comparison schemes: throughput-optimal operation and the two
//! energy-efficiency solvers restricted to a single operating mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line_search::golden_section_max;
use crate::model::{self, Allocation, OptimalBeta, SystemParams};
use crate::solver::{self, Mode, Restriction, SolveOutcome, SolverOptions, Subproblem, SubproblemSolution};

/// Number of coarse sleep-fraction samples before golden-section refinement.
pub const SE_GRID_POINTS: usize = 1024;
/// Width of the final golden-section bracket on `tau_s`.
pub const SE_TAU_TOLERANCE: f64 = 1e-9;
/// Final bracket width relative to the active fraction, which matters once
/// `tau_a` itself is far below [`SE_TAU_TOLERANCE`].
pub const SE_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Joint optimum over power, time split and reflection.
    OptimalEe,
    /// Throughput maximization.
    OptimalSe,
    /// Energy-efficiency optimum with `P0 = Pmax`.
    FixedMaxPower,
    /// Energy-efficiency optimum with `tau_s = 0`.
    NoSleep,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::OptimalEe,
        Scheme::OptimalSe,
        Scheme::FixedMaxPower,
        Scheme::NoSleep,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::OptimalEe => "optimal_ee",
            Scheme::OptimalSe => "optimal_se",
            Scheme::FixedMaxPower => "fixed_max_power",
            Scheme::NoSleep => "no_sleep",
        }
    }

    /// Runs this scheme on one instance.
    pub fn solve(self, params: &SystemParams, options: SolverOptions) -> Result<SolveOutcome> {
        match self {
            Scheme::OptimalEe => solver::dinkelbach_solve(params, options),
            Scheme::OptimalSe => solve_se_optimal(params),
            Scheme::FixedMaxPower => solve_fixed_maxpower(params, options),
            Scheme::NoSleep => solve_no_sleep(params, options),
        }
    }
}

/// Energy-efficiency optimum with the source pinned at `Pmax`.
pub fn solve_fixed_maxpower(params: &SystemParams, options: SolverOptions) -> Result<SolveOutcome> {
    solver::dinkelbach(params, options, Restriction::MaxPower, Scheme::FixedMaxPower)
}

/// Energy-efficiency optimum with the node active for the whole slot.
pub fn solve_no_sleep(params: &SystemParams, options: SolverOptions) -> Result<SolveOutcome> {
    solver::dinkelbach(params, options, Restriction::NoSleep, Scheme::NoSleep)
}

/// Throughput at `P0 = Pmax` for a sleep fraction, with the best feasible
/// reflection coefficient. `None` when no `beta > 0` is feasible.
fn max_power_allocation(params: &SystemParams, tau_a: f64) -> Option<Allocation> {
    let tau_s = 1.0 - tau_a;
    match model::optimal_beta(params, params.p_max, tau_s, tau_a).ok()? {
        OptimalBeta::Transmit(beta) => Some(Allocation {
            p0: params.p_max,
            tau_s,
            tau_a,
            beta,
        }),
        OptimalBeta::InfeasibleForTransmission => None,
    }
}

fn max_power_throughput(params: &SystemParams, tau_a: f64) -> f64 {
    max_power_allocation(params, tau_a)
        .and_then(|alloc| model::compute_throughput(params, &alloc).ok())
        .unwrap_or(f64::NEG_INFINITY)
}

/// Throughput-maximizing allocation.
///
/// Throughput grows with both `P0` and `beta`, so `P0 = Pmax` and `beta` takes
/// its closed form; the remaining search over `tau_s` samples
/// [`SE_GRID_POINTS`] points of the feasible range and refines the best one
/// by golden-section search. The search runs on `tau_a = 1 - tau_s` so that
/// sleep fractions close to one keep full precision.
pub fn solve_se_optimal(params: &SystemParams) -> Result<SolveOutcome> {
    params.validate()?;
    // beta > 0 needs 1 / (1 - tau_s) > Ptc / (eta Pmax h0).
    let floor = (1.0 - params.p_max / params.circuit_threshold()).max(0.0);
    let span = 1.0 - floor;
    let tau_a_at = |i: usize| span * (1.0 - i as f64 / SE_GRID_POINTS as f64);

    let mut best: Option<(usize, f64)> = None;
    for i in 0..SE_GRID_POINTS {
        let r = max_power_throughput(params, tau_a_at(i));
        if r.is_finite() && best.is_none_or(|(_, b)| r > b) {
            best = Some((i, r));
        }
    }
    let Some((i, _)) = best else {
        return Err(Error::Infeasible("no sleep fraction powers the node at Pmax"));
    };

    let lo = if i + 1 < SE_GRID_POINTS { tau_a_at(i + 1) } else { 0.0 };
    let hi = tau_a_at(i.saturating_sub(1));
    let tol = SE_TAU_TOLERANCE.min(SE_RELATIVE_TOLERANCE * tau_a_at(i));
    let refined = golden_section_max(|x| max_power_throughput(params, x), lo, hi, tol);
    let allocation = max_power_allocation(params, refined.x)
        .ok_or(Error::Infeasible("no sleep fraction powers the node at Pmax"))?;
    let tau_s = allocation.tau_s;
    let t = 1.0 / allocation.tau_a;
    let which = if tau_s > 0.0 { Subproblem::P6 } else { Subproblem::P5 };
    Ok(SolveOutcome {
        scheme: Scheme::OptimalSe,
        ee: model::compute_ee(params, &allocation)?,
        mode: Mode::from(which),
        solution: SubproblemSolution {
            z: params.p_max * t,
            t,
            objective: 0.0,
            which,
        },
        allocation,
        trace: Vec::new(),
        iterations: refined.iterations,
        converged: true,
    })
}

//! Dinkelbach iteration for the energy-efficiency ratio.
//!
//! With the reflection coefficient fixed at its closed form and the
//! substitutions `t = 1 + tau_s / tau_a`, `z = P0 * t`, the parametric
//! problem for a given ratio `q` becomes a one-dimensional concave
//! maximization of
//!
//! ```text
//! log2(k + lambda * z) - q * (z / xi + Psc * t + Prc)
//! ```
//!
//! split in two pieces: `t = 1` with `z <= Pmax` (the node never sleeps) and
//! `t = z / Pmax` with `z > Pmax` (the source runs at full power). Each piece
//! is solved by projecting its stationary point onto the feasible interval.
//! The outer loop updates `q` to the ratio achieved by the winner until the
//! subtractive objective drops below `eps`.
//!
//! Every outer iteration costs `O(1)`; the whole solve is `O(K)` for `K`
//! outer iterations, typically two or three.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::baselines::Scheme;
use crate::error::{Error, Result};
use crate::model::{Allocation, SystemParams};

/// Relative margin used to keep solutions off open interval ends.
pub const OPEN_BOUNDARY_MARGIN: f64 = 1e-12;

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Stop once the subtractive objective is below this value.
    pub eps: f64,
    /// Maximum number of outer iterations.
    pub l_max: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps: DEFAULT_EPS,
            l_max: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl SolverOptions {
    pub fn new(eps: f64, l_max: usize) -> Self {
        SolverOptions { eps, l_max }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "eps",
                value: self.eps,
                reason: "must be finite and > 0",
            });
        }
        if self.l_max == 0 {
            return Err(Error::InvalidArgument {
                name: "l_max",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        Ok(())
    }
}

/// Which piece of the parametric problem a solution comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subproblem {
    /// Always active: `t = 1`, `z = P0 <= Pmax`.
    P5,
    /// Full power with sleep: `t = z / Pmax`, `z > Pmax`.
    P6,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubproblemSolution {
    /// `P0 * (1 + tau_s / tau_a)` (W).
    pub z: f64,
    /// `1 + tau_s / tau_a`.
    pub t: f64,
    /// Value of the subtractive objective at `(z, t)`.
    pub objective: f64,
    pub which: Subproblem,
}

/// Operating regime of an optimal allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Source at maximum power, node sleeps for part of the slot.
    Mode1MaxPower,
    /// Node active for the whole slot, source power possibly reduced.
    Mode2AlwaysActive,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Mode1MaxPower => "mode1",
            Mode::Mode2AlwaysActive => "mode2",
        }
    }
}

impl From<Subproblem> for Mode {
    fn from(which: Subproblem) -> Self {
        match which {
            Subproblem::P5 => Mode::Mode2AlwaysActive,
            Subproblem::P6 => Mode::Mode1MaxPower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    /// Outer iteration index, starting at 0.
    pub iteration: usize,
    /// Ratio the parametric problem was solved for.
    pub q: f64,
    /// Winning subtractive objective at `q`.
    pub objective: f64,
    /// `log2(k + lambda * z) / z` at the winner. Only recorded for
    /// comparison: the iteration itself uses the full energy denominator.
    pub numerator_over_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub scheme: Scheme,
    pub allocation: Allocation,
    /// Energy efficiency of `allocation` (bits/J).
    pub ee: f64,
    pub mode: Mode,
    /// Winner of the last outer iteration.
    pub solution: SubproblemSolution,
    pub trace: Vec<TraceStep>,
    /// Number of outer iterations run.
    pub iterations: usize,
    /// `false` when `l_max` was reached before the objective fell below `eps`.
    pub converged: bool,
}

fn open_lower(bound: f64) -> f64 {
    if bound > 0.0 {
        bound * (1.0 + OPEN_BOUNDARY_MARGIN)
    } else {
        f64::MIN_POSITIVE
    }
}

fn log2_rate(params: &SystemParams, z: f64) -> f64 {
    (params.lambda() * (z - params.circuit_threshold())).ln_1p() / LN_2
}

fn energy(params: &SystemParams, z: f64, t: f64) -> f64 {
    z / params.xi + params.p_sc * t + params.p_rc
}

/// Subtractive objective `log2(k + lambda z) - q (z / xi + Psc t + Prc)`.
pub fn subtractive_objective(params: &SystemParams, q: f64, z: f64, t: f64) -> f64 {
    log2_rate(params, z) - q * energy(params, z, t)
}

/// Energy efficiency achieved at `(z, t)`.
pub fn ratio(params: &SystemParams, z: f64, t: f64) -> f64 {
    log2_rate(params, z) / energy(params, z, t)
}

fn check_q(q: f64) -> Result<()> {
    if q >= 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name: "q",
            value: q,
            reason: "must be finite and >= 0",
        })
    }
}

/// Feasible `z` range of the always-active piece, if non-empty.
pub fn p5_interval(params: &SystemParams) -> Option<(f64, f64)> {
    let lo = open_lower(params.circuit_threshold());
    let hi = params.p_max;
    (lo <= hi).then_some((lo, hi))
}

/// Feasible `z` range of the full-power piece, if non-empty.
pub fn p6_interval(params: &SystemParams) -> Option<(f64, f64)> {
    let c = params.circuit_threshold();
    let lo = open_lower(params.p_max.max(c));
    let hi = params.p_max + c;
    (lo <= hi).then_some((lo, hi))
}

/// Always-active piece: maximize `log2(k + lambda z) - q (z / xi + Psc + Prc)`
/// over `Ptc / (eta h0) < z <= Pmax`. `None` when the interval is empty.
pub fn solve_p5(params: &SystemParams, q: f64) -> Result<Option<SubproblemSolution>> {
    params.validate()?;
    check_q(q)?;
    let Some((lo, hi)) = p5_interval(params) else {
        return Ok(None);
    };
    let z = if q == 0.0 {
        hi
    } else {
        let stationary = params.xi / (q * LN_2) - 1.0 / params.lambda() + params.circuit_threshold();
        stationary.clamp(lo, hi)
    };
    Ok(Some(SubproblemSolution {
        z,
        t: 1.0,
        objective: subtractive_objective(params, q, z, 1.0),
        which: Subproblem::P5,
    }))
}

/// Full-power piece: maximize `log2(k + lambda z) - q (z / xi + z Psc / Pmax + Prc)`
/// over `max(Pmax, Ptc / (eta h0)) < z <= Pmax + Ptc / (eta h0)`, with
/// `t = z / Pmax`. `None` when the interval is empty (only for `Ptc = 0`).
pub fn solve_p6(params: &SystemParams, q: f64) -> Result<Option<SubproblemSolution>> {
    params.validate()?;
    check_q(q)?;
    let Some((lo, hi)) = p6_interval(params) else {
        return Ok(None);
    };
    let z = if q == 0.0 {
        hi
    } else {
        let slope = 1.0 / params.xi + params.p_sc / params.p_max;
        let stationary = 1.0 / (q * LN_2 * slope) - 1.0 / params.lambda() + params.circuit_threshold();
        stationary.clamp(lo, hi)
    };
    let t = z / params.p_max;
    Ok(Some(SubproblemSolution {
        z,
        t,
        objective: subtractive_objective(params, q, z, t),
        which: Subproblem::P6,
    }))
}

/// Maps a subproblem solution back to `(P0, tau_s, tau_a, beta)`.
pub fn recover_allocation(params: &SystemParams, sol: &SubproblemSolution) -> Result<Allocation> {
    let p0 = match sol.which {
        Subproblem::P5 => sol.z / sol.t,
        Subproblem::P6 => params.p_max,
    };
    let tau_s = 1.0 - 1.0 / sol.t;
    let tau_a = 1.0 - tau_s;
    // 1 + tau_s / tau_a - c / P0 with tau_s / tau_a = t - 1 and P0 = z / t,
    // written without the cancellation between t and c / P0.
    let bound = (sol.z - params.circuit_threshold()) / p0;
    if !(bound > 0.0) {
        return Err(Error::InvalidAllocation(format!(
            "recovered reflection coefficient {bound} is not positive for {sol:?}"
        )));
    }
    Ok(Allocation {
        p0,
        tau_s,
        tau_a,
        beta: bound.min(1.0),
    })
}

/// Which pieces of the parametric problem an outer iteration may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Restriction {
    None,
    /// Only allocations with `P0 = Pmax`: the full-power piece plus the
    /// single always-active point `z = Pmax`.
    MaxPower,
    /// Only the always-active piece.
    NoSleep,
}

fn candidates(
    params: &SystemParams,
    q: f64,
    restriction: Restriction,
) -> Result<(Option<SubproblemSolution>, Option<SubproblemSolution>)> {
    Ok(match restriction {
        Restriction::None => (solve_p5(params, q)?, solve_p6(params, q)?),
        Restriction::NoSleep => (solve_p5(params, q)?, None),
        Restriction::MaxPower => {
            let at_max = p5_interval(params).map(|_| SubproblemSolution {
                z: params.p_max,
                t: 1.0,
                objective: subtractive_objective(params, q, params.p_max, 1.0),
                which: Subproblem::P5,
            });
            (at_max, solve_p6(params, q)?)
        }
    })
}

pub(crate) fn dinkelbach(
    params: &SystemParams,
    options: SolverOptions,
    restriction: Restriction,
    scheme: Scheme,
) -> Result<SolveOutcome> {
    params.validate()?;
    options.validate()?;

    let mut q = 0.0;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut winner = None;

    for iteration in 0..options.l_max {
        // Ties go to the full-power piece.
        let best = match candidates(params, q, restriction)? {
            (Some(p5), Some(p6)) => {
                if p5.objective > p6.objective {
                    p5
                } else {
                    p6
                }
            }
            (Some(only), None) | (None, Some(only)) => only,
            (None, None) => {
                return Err(Error::Infeasible(
                    "no source power lets the node power its circuit",
                ))
            }
        };
        trace.push(TraceStep {
            iteration,
            q,
            objective: best.objective,
            numerator_over_z: log2_rate(params, best.z) / best.z,
        });
        winner = Some(best);
        if best.objective < options.eps {
            converged = true;
            break;
        }
        q = ratio(params, best.z, best.t);
    }

    let solution = winner.expect("l_max >= 1");
    let allocation = recover_allocation(params, &solution)?;
    Ok(SolveOutcome {
        scheme,
        allocation,
        ee: ratio(params, solution.z, solution.t),
        mode: solution.which.into(),
        solution,
        iterations: trace.len(),
        trace,
        converged,
    })
}

/// Energy-efficiency optimal allocation over `(P0, tau_s, tau_a, beta)`.
pub fn dinkelbach_solve(params: &SystemParams, options: SolverOptions) -> Result<SolveOutcome> {
    dinkelbach(params, options, Restriction::None, Scheme::OptimalEe)
}

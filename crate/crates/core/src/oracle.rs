//! Brute-force grid search over the original allocation variables.
//!
//! This is the reference the solvers are checked against. It shares only the
//! closed-form link model with them: no substitution, no Dinkelbach loop.
//!
//! Axes:
//! - `P0`: log-spaced over `[max(1e-6 Pmax, MIN_POSITIVE), Pmax]`, both ends included.
//! - `tau_s`: linear over `[tau_min(P0), 1 - 1e-4 * (1 - tau_min(P0))]`,
//!   where `tau_min(P0)` is the sleep fraction below which energy causality
//!   fails for every `beta > 0` (zero when the active state alone can power
//!   the node).
//! - `beta`: linear `j / n` for `j = 1..=n`, or the closed-form optimum.
//!
//! Doubling the number of intervals on every axis (`n -> 2n - 1`, or
//! `n -> 2n` for `beta`) yields a superset of the grid, so refinement never
//! lowers the best value found.

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::Scheme;
use crate::error::{Error, Result};
use crate::model::{self, Allocation, Constraint, OptimalBeta, SystemParams};
use crate::solver::SolveOutcome;

/// Gap kept between the largest sleep fraction and one, relative to the
/// feasible sleep range.
pub const TAU_UPPER_GAP: f64 = 1e-4;
/// Smallest grid power relative to `Pmax`.
pub const P0_MIN_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BetaGrid {
    /// `n` points `1/n, 2/n, ..., 1`.
    Linear(usize),
    /// Closed-form optimal reflection coefficient for each `(P0, tau_s)`.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n_p0: usize,
    pub n_tau: usize,
    pub beta: BetaGrid,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_p0: 200,
            n_tau: 200,
            beta: BetaGrid::ClosedForm,
        }
    }
}

impl GridSpec {
    pub fn full(n_p0: usize, n_tau: usize, n_beta: usize) -> Self {
        GridSpec {
            n_p0,
            n_tau,
            beta: BetaGrid::Linear(n_beta),
        }
    }

    pub fn reduced(n_p0: usize, n_tau: usize) -> Self {
        GridSpec {
            n_p0,
            n_tau,
            beta: BetaGrid::ClosedForm,
        }
    }

    /// Grid with every axis spacing halved; contains every point of `self`.
    pub fn refined(&self) -> Self {
        GridSpec {
            n_p0: 2 * self.n_p0 - 1,
            n_tau: 2 * self.n_tau - 1,
            beta: match self.beta {
                BetaGrid::Linear(n) => BetaGrid::Linear(2 * n),
                BetaGrid::ClosedForm => BetaGrid::ClosedForm,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut counts = vec![("n_p0", self.n_p0), ("n_tau", self.n_tau)];
        if let BetaGrid::Linear(n) = self.beta {
            counts.push(("n_beta", n));
        }
        for (name, n) in counts {
            if n < 2 {
                return Err(Error::InvalidArgument {
                    name,
                    value: n as f64,
                    reason: "grid needs at least 2 points",
                });
            }
        }
        Ok(())
    }
}

/// Index of a grid point, `(P0, tau_s, beta)`; the `beta` index is zero
/// when the closed form is used.
pub type GridIndex = (usize, usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridBest {
    pub allocation: Allocation,
    /// Energy efficiency at the best point.
    pub ee: f64,
    /// Value of the searched objective (EE, or throughput for the SE scheme).
    pub objective: f64,
    pub index: GridIndex,
    /// Number of feasible points evaluated.
    pub feasible_points: usize,
}

/// What the grid maximizes and over which slice of the variables.
#[derive(Debug, Clone, Copy)]
struct Search {
    fixed_max_power: bool,
    no_sleep: bool,
    maximize_throughput: bool,
}

impl From<Scheme> for Search {
    fn from(scheme: Scheme) -> Self {
        Search {
            fixed_max_power: matches!(scheme, Scheme::FixedMaxPower | Scheme::OptimalSe),
            no_sleep: scheme == Scheme::NoSleep,
            maximize_throughput: scheme == Scheme::OptimalSe,
        }
    }
}

fn p0_axis(params: &SystemParams, n: usize, fixed: bool) -> Vec<f64> {
    if fixed {
        return vec![params.p_max];
    }
    let lo = (P0_MIN_RATIO * params.p_max).max(f64::MIN_POSITIVE);
    let span = (params.p_max / lo).ln();
    let mut axis: Vec<f64> = (0..n)
        .map(|i| lo * (span * i as f64 / (n - 1) as f64).exp())
        .collect();
    axis[0] = lo;
    axis[n - 1] = params.p_max;
    axis
}

/// Smallest sleep fraction leaving any `beta > 0` feasible at `p0`.
fn tau_floor(params: &SystemParams, p0: f64) -> f64 {
    (1.0 - p0 * params.eta * params.h0 / params.p_tc).max(0.0)
}

fn tau_axis(params: &SystemParams, p0: f64, n: usize, no_sleep: bool) -> Vec<f64> {
    if no_sleep {
        return vec![0.0];
    }
    let lo = tau_floor(params, p0);
    if lo >= 1.0 {
        return Vec::new();
    }
    let hi = 1.0 - TAU_UPPER_GAP * (1.0 - lo);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn better(a: &(f64, GridIndex), b: &(f64, GridIndex)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn search(params: &SystemParams, spec: &GridSpec, how: Search) -> Result<GridBest> {
    params.validate()?;
    spec.validate()?;
    let p0s = p0_axis(params, spec.n_p0, how.fixed_max_power);

    let row = |(i, &p0): (usize, &f64)| -> (Option<(f64, GridIndex, Allocation)>, usize) {
        let mut best: Option<(f64, GridIndex, Allocation)> = None;
        let mut feasible = 0;
        for (j, &tau_s) in tau_axis(params, p0, spec.n_tau, how.no_sleep).iter().enumerate() {
            let tau_a = 1.0 - tau_s;
            let betas: Vec<(usize, f64)> = match spec.beta {
                BetaGrid::Linear(n) => (1..=n).map(|l| (l - 1, l as f64 / n as f64)).collect(),
                BetaGrid::ClosedForm => match model::optimal_beta(params, p0, tau_s, tau_a) {
                    Ok(OptimalBeta::Transmit(beta)) => vec![(0, beta)],
                    _ => Vec::new(),
                },
            };
            for (l, beta) in betas {
                let alloc = Allocation { p0, tau_s, tau_a, beta };
                if !model::check_feasibility(params, &alloc).is_feasible() {
                    continue;
                }
                let Ok(q) = model::evaluate(params, &alloc) else {
                    continue;
                };
                let value = if how.maximize_throughput { q.throughput } else { q.ee };
                if !value.is_finite() {
                    continue;
                }
                feasible += 1;
                let candidate = (value, (i, j, l));
                if best.as_ref().is_none_or(|b| better(&candidate, &(b.0, b.1))) {
                    best = Some((value, (i, j, l), alloc));
                }
            }
        }
        (best, feasible)
    };

    let rows: Vec<_> = p0s.par_iter().enumerate().map(row).collect();
    let feasible_points = rows.iter().map(|r| r.1).sum();
    let best = rows
        .into_iter()
        .filter_map(|r| r.0)
        .reduce(|a, b| if better(&(b.0, b.1), &(a.0, a.1)) { b } else { a });

    let (objective, index, allocation) =
        best.ok_or(Error::Infeasible("no grid point satisfies the constraints"))?;
    Ok(GridBest {
        allocation,
        ee: model::compute_ee(params, &allocation)?,
        objective,
        index,
        feasible_points,
    })
}

/// Best energy efficiency over the grid in `(P0, tau_s, beta)`.
pub fn grid_search_p1(params: &SystemParams, spec: &GridSpec) -> Result<GridBest> {
    search(params, spec, Scheme::OptimalEe.into())
}

/// Grid search restricted to the slice a scheme optimizes over: `P0 = Pmax`
/// for the fixed-power scheme, `tau_s = 0` for the no-sleep scheme, and
/// throughput at `P0 = Pmax` for the spectral-efficiency scheme.
pub fn grid_search_scheme(params: &SystemParams, spec: &GridSpec, scheme: Scheme) -> Result<GridBest> {
    search(params, spec, scheme.into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scheme: Scheme,
    pub solver_ee: f64,
    /// `None` when no grid point is feasible.
    pub oracle_ee: Option<f64>,
    /// `|solver - oracle| / oracle`.
    pub rel_gap: f64,
    pub threshold: f64,
    /// Constraint violations of the solver's allocation.
    pub violations: Vec<Constraint>,
    pub passed: bool,
}

/// Compares a solver outcome with the grid optimum of the same scheme.
pub fn verify_outcome(
    params: &SystemParams,
    outcome: &SolveOutcome,
    spec: &GridSpec,
    threshold: f64,
) -> VerificationReport {
    let violations = model::check_feasibility(params, &outcome.allocation).violations;
    let oracle_ee = grid_search_scheme(params, spec, outcome.scheme).ok().map(|b| b.ee);
    let rel_gap = match oracle_ee {
        Some(o) => (outcome.ee - o).abs() / o,
        None => f64::INFINITY,
    };
    VerificationReport {
        scheme: outcome.scheme,
        solver_ee: outcome.ee,
        oracle_ee,
        rel_gap,
        threshold,
        passed: violations.is_empty() && rel_gap <= threshold,
        violations,
    }
}

//! Subproblem optimum located by bisection on the derivative sign.

use std::f64::consts::LN_2;

use backcom_ee::solver::{p5_interval, p6_interval};
use backcom_ee::{solve_p5, solve_p6, Subproblem, SubproblemSolution, SystemParams};

use super::rel;

/// Slope of the energy term per unit of `z` for each piece.
pub fn energy_slope(params: &SystemParams, which: Subproblem) -> f64 {
    match which {
        Subproblem::P5 => 1.0 / params.xi,
        Subproblem::P6 => 1.0 / params.xi + params.p_sc / params.p_max,
    }
}

/// d/dz of the subtractive objective, written out from scratch.
pub fn derivative(params: &SystemParams, q: f64, z: f64, which: Subproblem) -> f64 {
    let lambda = params.h0 * params.h1 / params.sigma2;
    let c = params.p_tc / (params.eta * params.h0);
    lambda / ((1.0 + lambda * (z - c)) * LN_2) - q * energy_slope(params, which)
}

/// Maximizer of a concave function on `[lo, hi]` by bisection on the sign
/// of its derivative.
pub fn bisect_argmax(params: &SystemParams, q: f64, lo: f64, hi: f64, which: Subproblem) -> f64 {
    if derivative(params, q, hi, which) >= 0.0 {
        return hi;
    }
    if derivative(params, q, lo, which) <= 0.0 {
        return lo;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if derivative(params, q, m, which) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn interval(params: &SystemParams, which: Subproblem) -> Option<(f64, f64)> {
    match which {
        Subproblem::P5 => p5_interval(params),
        Subproblem::P6 => p6_interval(params),
    }
}

pub fn solve(params: &SystemParams, q: f64, which: Subproblem) -> Option<SubproblemSolution> {
    match which {
        Subproblem::P5 => solve_p5(params, q).unwrap(),
        Subproblem::P6 => solve_p6(params, q).unwrap(),
    }
}

pub fn check_against_bisection(params: &SystemParams, q: f64, which: Subproblem) -> bool {
    let Some((lo, hi)) = interval(params, which) else {
        assert!(solve(params, q, which).is_none());
        return false;
    };
    let sol = solve(params, q, which).unwrap();
    let oracle = bisect_argmax(params, q, lo, hi, which);
    assert!(rel(sol.z, oracle) < 1e-9, "{which:?} q={q}: {} vs {oracle} on [{lo}, {hi}]", sol.z);
    true
}

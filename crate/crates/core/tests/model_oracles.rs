//! Link-model formulas against values re-evaluated at 50 significant digits
//! (`tests/oracles/high_precision.py`), plus the closed-form reflection
//! coefficient against dense grids.

#![allow(clippy::excessive_precision)]

mod common;

use backcom_ee::model::{self, beta_bound, evaluate};
use backcom_ee::{
    check_feasibility, compute_ee, compute_harvested_energy, compute_throughput, compute_total_energy,
    optimal_beta, Allocation, Constraint, OptimalBeta,
};
use common::{random_generic_instance, random_default_instance, rel, rng, unit_fading};
use proptest::prelude::*;

// Frozen from high_precision.py.
const LAMBDA: f64 = 2962962.962962962962962962962962962962962962962963;
const THROUGHPUT_UNIT: f64 = 21.498609648957562024783655872608334634402699661239;
const TOTAL_ENERGY_FULL: f64 = 1.2211111111111111111111111111111111111111111111111;
const TOTAL_ENERGY_HALF: f64 = 0.66055555555555555555555555555555555555555555555556;
const BETA_BOUND_LOW_POWER: f64 = -15.416666666666666666666666666666666666666666666667;
const BETA_BOUND_TWO_WATTS: f64 = 0.41666666666666666666666666666666666666666666666667;
const EE_TWO_WATTS: f64 = 7.2904893406275348343942080397258753746439395004507;
const EE_ONE_WATT: f64 = 12.058691153357701457410237576876696929155229284262;

#[test]
fn lambda_of_unit_fading() {
    assert!(rel(unit_fading(1.0).lambda(), LAMBDA) < 1e-14);
}

#[test]
fn throughput_matches_high_precision() {
    let r = compute_throughput(&unit_fading(1.0), &Allocation::from_sleep(1.0, 0.0, 1.0)).unwrap();
    assert!(rel(r, THROUGHPUT_UNIT) < 1e-14, "{r}");
}

#[test]
fn harvested_energy_matches_high_precision() {
    let alloc = Allocation::from_sleep(1.0, 0.3, 0.7);
    let (sleep, active) = compute_harvested_energy(&unit_fading(1.0), &alloc).unwrap();
    assert!(rel(sleep, 1.8e-4) < 1e-14);
    assert!(rel(active, 1.26e-4) < 1e-14);
}

#[test]
fn total_energy_matches_default_constants() {
    let params = unit_fading(1.0);
    let full = compute_total_energy(&params, &Allocation::from_sleep(1.0, 0.0, 1.0)).unwrap();
    assert!(rel(full, 1.0 / 0.9 + 0.1 + 0.01) < 1e-15);
    assert!(rel(full, TOTAL_ENERGY_FULL) < 1e-15);
    let half = compute_total_energy(&params, &Allocation::from_sleep(0.5, 0.5, 1.0)).unwrap();
    assert!(rel(half, TOTAL_ENERGY_HALF) < 1e-15);
}

#[test]
fn ee_is_the_composed_ratio() {
    let params = unit_fading(2.0);
    let alloc = Allocation::from_sleep(1.0, 0.3, 0.7);
    assert!(rel(compute_ee(&params, &alloc).unwrap(), EE_ONE_WATT) < 1e-13);
    let alloc = Allocation::from_sleep(2.0, 0.2, BETA_BOUND_TWO_WATTS);
    assert!(rel(compute_ee(&params, &alloc).unwrap(), EE_TWO_WATTS) < 1e-13);
}

#[test]
fn low_power_split_cannot_transmit() {
    let params = unit_fading(1.0);
    let bound = beta_bound(&params, 0.1, 0.2, 0.8).unwrap();
    assert!(rel(bound, BETA_BOUND_LOW_POWER) < 1e-14);
    assert_eq!(
        optimal_beta(&params, 0.1, 0.2, 0.8).unwrap(),
        OptimalBeta::InfeasibleForTransmission
    );
    for j in 1..=10_000 {
        let alloc = Allocation::from_sleep(0.1, 0.2, j as f64 / 10_000.0);
        assert!(check_feasibility(&params, &alloc).violations.contains(&Constraint::C5));
    }
}

/// Best EE over `n` feasible reflection coefficients `j / n`.
fn beta_grid_best(params: &backcom_ee::SystemParams, p0: f64, tau_s: f64, n: usize) -> Option<f64> {
    (1..=n)
        .map(|j| Allocation::from_sleep(p0, tau_s, j as f64 / n as f64))
        .filter(|a| check_feasibility(params, a).is_feasible())
        .map(|a| compute_ee(params, &a).unwrap())
        .reduce(f64::max)
}

#[test]
fn closed_form_beta_dominates_grid_at_two_watts() {
    let params = unit_fading(2.0);
    let bound = beta_bound(&params, 2.0, 0.2, 0.8).unwrap();
    assert!(rel(bound, BETA_BOUND_TWO_WATTS) < 1e-14);
    let beta = optimal_beta(&params, 2.0, 0.2, 0.8).unwrap().value().unwrap();
    let best = compute_ee(&params, &Allocation::from_sleep(2.0, 0.2, beta)).unwrap();
    let grid = beta_grid_best(&params, 2.0, 0.2, 10_000).unwrap();
    assert!(grid <= best);
    assert!(rel(grid, best) < 1e-3);
}

#[test]
fn closed_form_beta_dominates_grid_on_random_instances() {
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 100 {
        let params = random_default_instance(&mut r);
        let p0 = params.p_max * rand::Rng::random_range(&mut r, 0.01..=1.0);
        let tau_s = rand::Rng::random_range(&mut r, 0.0..0.999);
        let Some(beta) = optimal_beta(&params, p0, tau_s, 1.0 - tau_s).unwrap().value() else {
            assert!(beta_grid_best(&params, p0, tau_s, 10_000).is_none());
            continue;
        };
        checked += 1;
        let best = compute_ee(&params, &Allocation::from_sleep(p0, tau_s, beta)).unwrap();
        if let Some(grid) = beta_grid_best(&params, p0, tau_s, 10_000) {
            assert!(grid <= best * (1.0 + 1e-12), "grid {grid} > closed form {best}");
        }
    }
}

#[test]
fn unclamped_beta_makes_energy_causality_tight() {
    let mut r = rng(12);
    let mut checked = 0;
    while checked < 500 {
        let params = random_generic_instance(&mut r);
        let p0 = params.p_max * rand::Rng::random_range(&mut r, 0.01..=1.0);
        let tau_s = rand::Rng::random_range(&mut r, 0.0..0.99);
        let tau_a = 1.0 - tau_s;
        let bound = beta_bound(&params, p0, tau_s, tau_a).unwrap();
        if !(bound > 0.0 && bound < 1.0) {
            continue;
        }
        checked += 1;
        let alloc = Allocation { p0, tau_s, tau_a, beta: bound };
        let (sleep, active) = compute_harvested_energy(&params, &alloc).unwrap();
        let need = params.p_tc * tau_a;
        assert!(rel(sleep + active, need) < 1e-9);
        assert!(check_feasibility(&params, &alloc).is_feasible());
    }
}

#[test]
fn rate_argument_identity_on_random_allocations() {
    // 1 + beta P0 lambda = k + lambda z with z = P0 (1 + tau_s / tau_a)
    let mut r = rng(13);
    let mut checked = 0;
    while checked < 500 {
        let params = random_default_instance(&mut r);
        let p0 = params.p_max * rand::Rng::random_range(&mut r, 0.01..=1.0);
        let tau_s = rand::Rng::random_range(&mut r, 0.0..0.99);
        let tau_a = 1.0 - tau_s;
        let beta = beta_bound(&params, p0, tau_s, tau_a).unwrap();
        if beta <= 0.0 {
            continue;
        }
        checked += 1;
        let z = p0 * (1.0 + tau_s / tau_a);
        let lhs = 1.0 + beta * p0 * params.lambda();
        let rhs = params.k() + params.lambda() * z;
        assert!(rel(rhs, lhs) < 1e-12, "{lhs} vs {rhs}");
        assert!(rel(params.rate_argument(z), lhs) < 1e-12);
    }
}

#[test]
fn quantities_are_consistent() {
    let mut r = rng(14);
    for _ in 0..200 {
        let params = random_generic_instance(&mut r);
        let p0 = params.p_max * rand::Rng::random_range(&mut r, 0.01..=1.0);
        let tau_s = rand::Rng::random_range(&mut r, 0.0..0.99);
        let beta = rand::Rng::random_range(&mut r, 0.001..=1.0);
        let q = evaluate(&params, &Allocation::from_sleep(p0, tau_s, beta)).unwrap();
        assert!(q.throughput >= 0.0 && q.e_sleep >= 0.0 && q.e_active >= 0.0 && q.e_total > 0.0);
        assert_eq!(q.ee, q.throughput / q.e_total);
        assert!(q.ee.is_finite());
    }
}

proptest! {
    #[test]
    fn throughput_increases_in_beta_and_power(
        p0 in 1e-3f64..10.0,
        tau_s in 0.0f64..0.95,
        beta in 0.01f64..0.9,
        step in 1.01f64..1.1,
    ) {
        let params = unit_fading(20.0);
        let base = compute_throughput(&params, &Allocation::from_sleep(p0, tau_s, beta)).unwrap();
        let more_beta = compute_throughput(&params, &Allocation::from_sleep(p0, tau_s, beta * step)).unwrap();
        let more_power = compute_throughput(&params, &Allocation::from_sleep(p0 * step, tau_s, beta)).unwrap();
        prop_assert!(more_beta > base);
        prop_assert!(more_power > base);
    }

    #[test]
    fn ee_nonnegative_and_finite(
        p0_frac in 1e-6f64..=1.0,
        tau_s in 0.0f64..0.9999,
        beta in 1e-9f64..=1.0,
    ) {
        let params = unit_fading(31.6);
        let ee = compute_ee(&params, &Allocation::from_sleep(params.p_max * p0_frac, tau_s, beta)).unwrap();
        prop_assert!(ee >= 0.0 && ee.is_finite());
    }

    #[test]
    fn feasibility_never_panics(p0 in -1.0f64..50.0, tau_s in -0.5f64..1.5, beta in -0.5f64..1.5) {
        let report = check_feasibility(&unit_fading(10.0), &Allocation::from_sleep(p0, tau_s, beta));
        if report.is_feasible() {
            prop_assert!(model::compute_ee(&unit_fading(10.0), &Allocation::from_sleep(p0, tau_s, beta)).is_ok());
        }
    }
}

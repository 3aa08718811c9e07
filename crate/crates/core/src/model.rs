//! Link model of a wirelessly powered backscatter network.
//!
//! A dedicated source `S` radiates `P0`. During the sleep part `tau_s` of a
//! unit slot the backscatter node `A` only harvests; during the active part
//! `tau_a` it reflects a fraction `beta` of the incident power towards the
//! receiver `B` and harvests the rest. The receiver has cancelled the direct
//! `S -> B` signal, so the SNR is `beta * P0 * h0 * h1 / sigma2`.
//!
//! All quantities are linear SI: watts, joules, and a slot of length one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `tau_a + tau_s = 1`.
pub const SLOT_TOLERANCE: f64 = 1e-12;

/// Absolute slack (joules) on the energy-causality constraint.
pub const ENERGY_SLACK: f64 = 1e-12;

/// Physical constants of one link instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Channel power gain `S -> A`.
    pub h0: f64,
    /// Channel power gain `A -> B`.
    pub h1: f64,
    /// Receiver noise power (W).
    pub sigma2: f64,
    /// Energy-harvesting efficiency.
    pub eta: f64,
    /// Power-amplifier efficiency of the source.
    pub xi: f64,
    /// Source circuit power (W).
    pub p_sc: f64,
    /// Receiver circuit power (W).
    pub p_rc: f64,
    /// Circuit power of the backscatter node (W).
    pub p_tc: f64,
    /// Maximum source transmit power (W).
    pub p_max: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("h0", self.h0),
            ("h1", self.h1),
            ("sigma2", self.sigma2),
            ("p_max", self.p_max),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParams {
                    name,
                    value,
                    reason: "must be finite and > 0",
                });
            }
        }
        for (name, value) in [("p_sc", self.p_sc), ("p_rc", self.p_rc), ("p_tc", self.p_tc)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParams {
                    name,
                    value,
                    reason: "must be finite and >= 0",
                });
            }
        }
        for (name, value) in [("eta", self.eta), ("xi", self.xi)] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::InvalidParams {
                    name,
                    value,
                    reason: "must lie in (0, 1]",
                });
            }
        }
        Ok(())
    }

    /// `h0 * h1 / sigma2`: SNR per watt of reflected source power.
    pub fn lambda(&self) -> f64 {
        self.h0 * self.h1 / self.sigma2
    }

    /// `Ptc / (eta * h0)`: the source power at which harvesting during the
    /// whole slot exactly covers the node's circuit.
    pub fn circuit_threshold(&self) -> f64 {
        self.p_tc / (self.eta * self.h0)
    }

    /// `k = 1 - lambda * Ptc / (eta * h0)`.
    ///
    /// For realistic gains `k` is a large negative number; prefer
    /// [`SystemParams::rate_argument`] over evaluating `k + lambda * z`.
    pub fn k(&self) -> f64 {
        1.0 - self.lambda() * self.circuit_threshold()
    }

    /// `k + lambda * z`, evaluated as `1 + lambda * (z - Ptc / (eta * h0))`
    /// to avoid cancellation between `k` and `lambda * z`.
    pub fn rate_argument(&self, z: f64) -> f64 {
        1.0 + self.lambda() * (z - self.circuit_threshold())
    }
}

/// One candidate decision for a slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    /// Source transmit power (W).
    pub p0: f64,
    /// Sleep fraction of the slot.
    pub tau_s: f64,
    /// Active fraction of the slot.
    pub tau_a: f64,
    /// Reflection coefficient.
    pub beta: f64,
}

impl Allocation {
    /// Builds an allocation from the sleep fraction, setting `tau_a = 1 - tau_s`.
    pub fn from_sleep(p0: f64, tau_s: f64, beta: f64) -> Self {
        Allocation {
            p0,
            tau_s,
            tau_a: 1.0 - tau_s,
            beta,
        }
    }

    /// Checks the box and slot constraints (C1-C4); energy causality is not
    /// part of the domain of the model formulas.
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        let violations: Vec<Constraint> = domain_violations(params, self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidAllocation(format!(
                "{self:?} violates {}",
                violations.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            )))
        }
    }
}

/// Every closed-form model quantity for one allocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelQuantities {
    /// Bits per slot.
    pub throughput: f64,
    pub e_sleep: f64,
    pub e_active: f64,
    /// Total consumed energy (J).
    pub e_total: f64,
    /// Energy efficiency (bits/J).
    pub ee: f64,
}

/// `R = tau_a * log2(1 + beta * P0 * lambda)`.
pub fn compute_throughput(params: &SystemParams, alloc: &Allocation) -> Result<f64> {
    alloc.validate(params)?;
    Ok(alloc.tau_a * (alloc.beta * alloc.p0 * params.lambda()).ln_1p() / std::f64::consts::LN_2)
}

/// Energy harvested by the node during the sleep and active parts.
pub fn compute_harvested_energy(params: &SystemParams, alloc: &Allocation) -> Result<(f64, f64)> {
    alloc.validate(params)?;
    let incident = params.eta * alloc.p0 * params.h0;
    Ok((incident * alloc.tau_s, incident * (1.0 - alloc.beta) * alloc.tau_a))
}

/// Energy drawn by the source (amplifier and circuit) and the receiver circuit.
pub fn compute_total_energy(params: &SystemParams, alloc: &Allocation) -> Result<f64> {
    alloc.validate(params)?;
    Ok((alloc.p0 / params.xi + params.p_sc) * (alloc.tau_a + alloc.tau_s) + params.p_rc * alloc.tau_a)
}

/// Throughput per unit of consumed energy (bits/J).
pub fn compute_ee(params: &SystemParams, alloc: &Allocation) -> Result<f64> {
    Ok(compute_throughput(params, alloc)? / compute_total_energy(params, alloc)?)
}

pub fn evaluate(params: &SystemParams, alloc: &Allocation) -> Result<ModelQuantities> {
    let throughput = compute_throughput(params, alloc)?;
    let (e_sleep, e_active) = compute_harvested_energy(params, alloc)?;
    let e_total = compute_total_energy(params, alloc)?;
    Ok(ModelQuantities {
        throughput,
        e_sleep,
        e_active,
        e_total,
        ee: throughput / e_total,
    })
}

/// The largest reflection coefficient allowed by energy causality,
/// `1 + tau_s / tau_a - Ptc / (eta * P0 * h0)`, before clamping.
pub fn beta_bound(params: &SystemParams, p0: f64, tau_s: f64, tau_a: f64) -> Result<f64> {
    check_time_split(p0, tau_s, tau_a)?;
    Ok(1.0 + tau_s / tau_a - params.p_tc / (params.eta * p0 * params.h0))
}

/// Outcome of the closed-form reflection-coefficient choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimalBeta {
    /// Best feasible reflection coefficient, in `(0, 1]`.
    Transmit(f64),
    /// The harvested energy cannot power the circuit for any `beta > 0`.
    InfeasibleForTransmission,
}

impl OptimalBeta {
    pub fn value(self) -> Option<f64> {
        match self {
            OptimalBeta::Transmit(beta) => Some(beta),
            OptimalBeta::InfeasibleForTransmission => None,
        }
    }
}

/// Reflection coefficient maximizing EE for a fixed `(P0, tau_s, tau_a)`:
/// [`beta_bound`] clamped to `[0, 1]`, where zero means no transmission.
pub fn optimal_beta(params: &SystemParams, p0: f64, tau_s: f64, tau_a: f64) -> Result<OptimalBeta> {
    let bound = beta_bound(params, p0, tau_s, tau_a)?;
    let beta = bound.clamp(0.0, 1.0);
    Ok(if beta > 0.0 {
        OptimalBeta::Transmit(beta)
    } else {
        OptimalBeta::InfeasibleForTransmission
    })
}

fn check_time_split(p0: f64, tau_s: f64, tau_a: f64) -> Result<()> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "p0",
            value: p0,
            reason: "must be finite and > 0",
        });
    }
    if !(tau_a > 0.0) {
        return Err(Error::InvalidArgument {
            name: "tau_a",
            value: tau_a,
            reason: "must be > 0",
        });
    }
    if !(tau_s >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "tau_s",
            value: tau_s,
            reason: "must be >= 0",
        });
    }
    if (tau_a + tau_s - 1.0).abs() > SLOT_TOLERANCE {
        return Err(Error::InvalidArgument {
            name: "tau_a + tau_s",
            value: tau_a + tau_s,
            reason: "must equal 1",
        });
    }
    Ok(())
}

/// Constraints of the energy-efficiency problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Constraint {
    /// `0 < beta <= 1`
    C1,
    /// `tau_a + tau_s = 1`
    C2,
    /// `0 < P0 <= Pmax`
    C3,
    /// `tau_a > 0, tau_s >= 0`
    C4,
    /// `Ptc * tau_a <= E_sleep + E_active`
    C5,
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            Constraint::C1 => "C1 (0 < beta <= 1)",
            Constraint::C2 => "C2 (tau_a + tau_s = 1)",
            Constraint::C3 => "C3 (0 < P0 <= Pmax)",
            Constraint::C4 => "C4 (tau_a > 0, tau_s >= 0)",
            Constraint::C5 => "C5 (circuit energy <= harvested energy)",
        };
        f.write_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Constraint>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

fn domain_violations(params: &SystemParams, alloc: &Allocation) -> Vec<Constraint> {
    let mut violations = Vec::new();
    if !(alloc.beta > 0.0 && alloc.beta <= 1.0) {
        violations.push(Constraint::C1);
    }
    if !((alloc.tau_a + alloc.tau_s - 1.0).abs() <= SLOT_TOLERANCE) {
        violations.push(Constraint::C2);
    }
    if !(alloc.p0 > 0.0 && alloc.p0 <= params.p_max) {
        violations.push(Constraint::C3);
    }
    if !(alloc.tau_a > 0.0 && alloc.tau_s >= 0.0) {
        violations.push(Constraint::C4);
    }
    violations
}

/// Checks C1-C5 on a raw allocation. C5 is evaluated whenever the
/// quantities it needs are finite, even if other constraints fail.
pub fn check_feasibility(params: &SystemParams, alloc: &Allocation) -> FeasibilityReport {
    let mut violations = domain_violations(params, alloc);
    let incident = params.eta * alloc.p0 * params.h0;
    let harvested = incident * alloc.tau_s + incident * (1.0 - alloc.beta) * alloc.tau_a;
    let needed = params.p_tc * alloc.tau_a;
    if !(needed <= harvested + ENERGY_SLACK) {
        violations.push(Constraint::C5);
    }
    FeasibilityReport { violations }
}

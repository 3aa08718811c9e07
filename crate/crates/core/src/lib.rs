//! Energy-efficient resource allocation for a wirelessly powered
//! backscatter link.
//!
//! A dedicated RF source powers and illuminates a battery-free backscatter
//! node, which first sleeps (harvests only) and then backscatters to a
//! receiver while harvesting the unreflected part. [`dinkelbach_solve`]
//! jointly picks the source power, the sleep/active split and the reflection
//! coefficient that maximize bits per joule.
//!
//! - [`model`]: closed-form link quantities and constraint checks.
//! - [`solver`]: Dinkelbach iteration over the two concave pieces.
//! - [`baselines`]: throughput-optimal and single-mode schemes.
//! - [`oracle`]: brute-force grid search used for verification.
//! - [`channel`]: seeded path-loss and Rayleigh-fading instances.
//! - [`experiments`]: configuration, sweeps and CSV output.
//!
//! ```
//! use backcom_ee::{channel, dinkelbach_solve, ParamsTemplate, ScenarioConfig, SolverOptions};
//!
//! let channel = channel::fixed_instance(&ScenarioConfig::default());
//! let params = ParamsTemplate::default().with_channel(&channel, 10.0);
//! let outcome = dinkelbach_solve(&params, SolverOptions::default()).unwrap();
//! assert!(outcome.converged);
//! assert!(outcome.ee > 0.0);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod line_search;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod units;

pub use baselines::{solve_fixed_maxpower, solve_no_sleep, solve_se_optimal, Scheme};
pub use channel::{draw_instance, fixed_instance, ChannelInstance, ParamsTemplate, ScenarioConfig};
pub use error::{Error, Result};
pub use model::{
    check_feasibility, compute_ee, compute_harvested_energy, compute_throughput, compute_total_energy,
    optimal_beta, Allocation, Constraint, FeasibilityReport, ModelQuantities, OptimalBeta, SystemParams,
};
pub use oracle::{grid_search_p1, verify_outcome, BetaGrid, GridBest, GridSpec, VerificationReport};
pub use solver::{
    dinkelbach_solve, recover_allocation, solve_p5, solve_p6, Mode, SolveOutcome, SolverOptions, Subproblem,
    SubproblemSolution, TraceStep,
};

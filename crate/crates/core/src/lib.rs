//! Ruin probabilities for a Cramer-Lundberg-type surplus process whose premium
//! and claim arrivals are mixed Poisson processes, independent given their
//! random intensities.
//!
//! - [`model`]: size laws, mixing laws, surplus moments.
//! - [`kernels`]: the conditional two-sided-jump model and its kernels.
//! - [`adjustment`]: adjustment coefficients and Lundberg bounds.
//! - [`closedform`]: explicit ruin probabilities for exponential sizes.
//! - [`renewal`]: numerical solution of the renewal equation for general sizes.
//! - [`montecarlo`]: path simulation and finite-horizon ruin estimates.

pub mod adjustment;
pub mod closedform;
pub mod error;
pub mod kernels;
pub mod model;
pub mod montecarlo;
mod quad;
pub mod renewal;

pub use adjustment::{
    adjustment_exponential, adjustment_general, lundberg_bound, AdjustmentMethod, AdjustmentResult,
};
pub use closedform::{ruin_prob_conditional, ruin_prob_mixed, DEFAULT_MIX_SAMPLES};
pub use error::{Error, Result};
pub use kernels::{
    build_signed_kernel, build_tilted_kernel, conditional_model, mgf_balance, ConditionalModel,
    SignedKernel, TiltedKernel,
};
pub use model::{
    mean_surplus, net_profit_margin, overdispersion_coefficient, var_surplus, JumpLaw, MixingAtom, MixingLaw, MixingMoments,
    ModelSpec,
};
pub use montecarlo::{
    estimate_ruin, estimate_ruin_with, simulate_path, simulate_terminal_value, PathLimits,
    PathState, RuinEstimate, RuinSimulation, TerminalMoments,
};
pub use renewal::{solve_renewal, verify_tilt_identity, SolverGrid, SolverSolution, TailClosure};

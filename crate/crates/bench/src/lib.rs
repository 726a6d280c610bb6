//! Shared fixtures for the benchmarks.

use mixruin_core::{JumpLaw, MixingLaw, ModelSpec};

/// Exponential premiums and claims (both rate 1), `c = 1`, intensities fixed at `(1, 0.5)`.
pub fn config_a(u: f64) -> ModelSpec {
    ModelSpec::new(
        u,
        1.0,
        JumpLaw::exponential(1.0).unwrap(),
        JumpLaw::exponential(1.0).unwrap(),
        MixingLaw::Degenerate {
            gamma: 1.0,
            delta: 0.5,
        },
    )
    .unwrap()
}

/// Config A sizes with independent Gamma-mixed intensities of the same means.
pub fn gamma_mixed(u: f64) -> ModelSpec {
    ModelSpec::new(
        u,
        1.0,
        JumpLaw::exponential(1.0).unwrap(),
        JumpLaw::exponential(1.0).unwrap(),
        MixingLaw::IndependentGamma {
            gamma_shape: 4.0,
            gamma_rate: 4.0,
            delta_shape: 2.0,
            delta_rate: 4.0,
        },
    )
    .unwrap()
}

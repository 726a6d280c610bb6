//! Monte Carlo simulation of surplus paths.
//!
//! Every path owns a counter-based random stream keyed by `(seed, path_index)`,
//! so results do not depend on how paths are spread across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::adjustment::{adjustment_exponential, adjustment_general};
use crate::error::{ensure, Result};
use crate::kernels::conditional_model;
use crate::model::{JumpSampler, ModelSpec};

/// 97.5% standard normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

/// Default safe level, in units of `1 / r`, above the initial capital.
pub const DEFAULT_SAFE_LEVEL_MULTIPLIER: f64 = 30.0;

/// Random stream for path `index` under `seed`.
pub fn path_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    pub surplus: f64,
    pub t: f64,
    pub premium_count: u64,
    pub claim_count: u64,
    pub ruined: bool,
    pub ruin_time: Option<f64>,
}

/// Stopping rules for a single path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLimits {
    pub horizon: f64,
    /// Stop as non-ruined once the surplus exceeds this level.
    pub safe_level: Option<f64>,
}

/// Prebuilt samplers for repeated path simulation of one model.
#[derive(Debug, Clone)]
pub struct PathSimulator {
    u: f64,
    c: f64,
    premium: JumpSampler,
    claim: JumpSampler,
}

impl PathSimulator {
    pub fn new(model: &ModelSpec) -> Self {
        Self {
            u: model.u,
            c: model.c,
            premium: model.premium_law.sampler(),
            claim: model.claim_law.sampler(),
        }
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u = u;
        self
    }

    /// Simulate the merged arrival process at rate `gamma + delta` given the
    /// intensities. Each event is a premium with probability `delta / lambda`,
    /// else a claim. Ruin can only happen at claim epochs since the path is
    /// nondecreasing in between.
    ///
    /// `gamma = 0` is accepted here (no claims ever arrive).
    pub fn simulate<R: Rng + ?Sized>(
        &self,
        gamma: f64,
        delta: f64,
        limits: &PathLimits,
        rng: &mut R,
    ) -> PathState {
        let lambda = gamma + delta;
        let premium_prob = delta / lambda;
        let mut state = PathState {
            surplus: self.u,
            t: 0.0,
            premium_count: 0,
            claim_count: 0,
            ruined: false,
            ruin_time: None,
        };
        let mut premium_total = 0.0;
        let mut claim_total = 0.0;
        loop {
            let wait: f64 = Exp1.sample(rng);
            let wait = wait / lambda;
            if state.t + wait > limits.horizon {
                state.surplus += self.c * (limits.horizon - state.t);
                state.t = limits.horizon;
                break;
            }
            state.t += wait;
            state.surplus += self.c * wait;
            if rng.random::<f64>() < premium_prob {
                let y = self.premium.sample(rng);
                premium_total += y;
                state.surplus += y;
                state.premium_count += 1;
            } else {
                let z = self.claim.sample(rng);
                claim_total += z;
                state.surplus -= z;
                state.claim_count += 1;
                if state.surplus < 0.0 {
                    state.ruined = true;
                    state.ruin_time = Some(state.t);
                    break;
                }
            }
            if matches!(limits.safe_level, Some(level) if state.surplus > level) {
                break;
            }
        }
        debug_assert!({
            let expected = self.u + self.c * state.t + premium_total - claim_total;
            (state.surplus - expected).abs() <= 1e-9 * (1.0 + expected.abs() + premium_total + claim_total)
        });
        state
    }
}

/// Simulate one path of the model with fixed intensities `(gamma, delta)`.
pub fn simulate_path<R: Rng + ?Sized>(
    model: &ModelSpec,
    gamma: f64,
    delta: f64,
    limits: &PathLimits,
    rng: &mut R,
) -> PathState {
    PathSimulator::new(model).simulate(gamma, delta, limits, rng)
}

/// 95% Wilson score interval for `successes / trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinEstimate {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_paths: u64,
    pub n_ruined: u64,
    pub horizon: f64,
    pub seed: u64,
}

impl RuinEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Whether `value` lies within `k` half-widths of the interval centre.
    pub fn brackets(&self, value: f64, k: f64) -> bool {
        let centre = 0.5 * (self.ci_high + self.ci_low);
        (value - centre).abs() <= k * self.half_width()
    }
}

/// Settings for [`estimate_ruin_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinSimulation {
    pub u: f64,
    pub horizon: f64,
    pub n_paths: u64,
    pub seed: u64,
    /// Early exit at `u + multiplier / r` when the path's adjustment coefficient exists.
    pub safe_level_multiplier: Option<f64>,
}

/// Finite-horizon ruin probability with a 95% Wilson interval.
///
/// `(gamma, delta)` is drawn afresh for every path.
pub fn estimate_ruin(
    model: &ModelSpec,
    u_override: Option<f64>,
    horizon: f64,
    n_paths: u64,
    seed: u64,
) -> Result<RuinEstimate> {
    estimate_ruin_with(
        model,
        &RuinSimulation {
            u: u_override.unwrap_or(model.u),
            horizon,
            n_paths,
            seed,
            safe_level_multiplier: Some(DEFAULT_SAFE_LEVEL_MULTIPLIER),
        },
    )
}

pub fn estimate_ruin_with(model: &ModelSpec, sim: &RuinSimulation) -> Result<RuinEstimate> {
    ensure(sim.n_paths >= 100, || format!("need at least 100 paths, got {}", sim.n_paths))?;
    ensure(sim.horizon > 0.0, || format!("horizon must be positive, got {}", sim.horizon))?;
    ensure(sim.u >= 0.0, || format!("u must be >= 0, got {}", sim.u))?;
    let simulator = PathSimulator::new(model).with_u(sim.u);
    let mixing = model.mixing.sampler();
    let atom_rates: Option<Vec<(f64, f64, Option<f64>)>> = model.mixing.atoms().map(|atoms| {
        atoms
            .iter()
            .map(|a| (a.gamma, a.delta, adjustment_coefficient(model, a.gamma, a.delta)))
            .collect()
    });
    let safe_level = |gamma: f64, delta: f64| -> Option<f64> {
        let multiplier = sim.safe_level_multiplier?;
        let r = match &atom_rates {
            Some(rates) => rates
                .iter()
                .find(|&&(g, d, _)| g == gamma && d == delta)
                .and_then(|&(_, _, r)| r),
            None => adjustment_coefficient(model, gamma, delta),
        }?;
        Some(sim.u + multiplier / r)
    };

    let n_ruined: u64 = (0..sim.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_stream(sim.seed, i);
            let (gamma, delta) = mixing.sample(&mut rng);
            let limits = PathLimits {
                horizon: sim.horizon,
                safe_level: safe_level(gamma, delta),
            };
            simulator.simulate(gamma, delta, &limits, &mut rng).ruined as u64
        })
        .sum();

    let (ci_low, ci_high) = wilson_interval(n_ruined, sim.n_paths);
    Ok(RuinEstimate {
        estimate: n_ruined as f64 / sim.n_paths as f64,
        ci_low,
        ci_high,
        n_paths: sim.n_paths,
        n_ruined,
        horizon: sim.horizon,
        seed: sim.seed,
    })
}

fn adjustment_coefficient(model: &ModelSpec, gamma: f64, delta: f64) -> Option<f64> {
    if let Some((a, b)) = model.exponential_rates() {
        return adjustment_exponential(model.c, a, b, gamma, delta).ok().map(|r| r.r);
    }
    let cm = conditional_model(model, gamma, delta).ok()?;
    adjustment_general(&cm).ok().map(|r| r.r)
}

/// Sample moments of the terminal surplus `K_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalMoments {
    pub sample_mean: f64,
    pub sample_variance: f64,
    pub mean_std_error: f64,
    pub variance_std_error: f64,
    pub n_paths: u64,
}

/// Simulate `K_t` directly (Poisson counts given the drawn intensities), no ruin logic.
pub fn simulate_terminal_value(
    model: &ModelSpec,
    t: f64,
    n_paths: u64,
    seed: u64,
) -> Result<TerminalMoments> {
    ensure(t > 0.0, || format!("t must be positive, got {t}"))?;
    ensure(n_paths >= 1000, || format!("need at least 1000 paths, got {n_paths}"))?;
    let mixing = model.mixing.sampler();
    let premium = model.premium_law.sampler();
    let claim = model.claim_law.sampler();
    let values: Vec<f64> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_stream(seed, i);
            let (gamma, delta) = mixing.sample(&mut rng);
            let premiums: f64 = Poisson::new(delta * t).expect("positive rate").sample(&mut rng);
            let claims: f64 = Poisson::new(gamma * t).expect("positive rate").sample(&mut rng);
            let mut k = model.u + model.c * t;
            for _ in 0..premiums as u64 {
                k += premium.sample(&mut rng);
            }
            for _ in 0..claims as u64 {
                k -= claim.sample(&mut rng);
            }
            k
        })
        .collect();

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in &values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    let variance = m2 / (n - 1.0);
    let (m2, m4) = (m2 / n, m4 / n);
    Ok(TerminalMoments {
        sample_mean: mean,
        sample_variance: variance,
        mean_std_error: (variance / n).sqrt(),
        variance_std_error: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        n_paths,
    })
}

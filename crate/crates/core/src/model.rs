//! Domain types for the mixed surplus model.
//!
//! The surplus is `K_t = u + c t + sum_{i <= M_t} Y_i - sum_{i <= L_t} Z_i`, where
//! the premium counter `M` and claim counter `L` are, given the random
//! intensities `(Delta, Gamma)`, independent Poisson processes with rates
//! `Delta` and `Gamma`. Premium sizes `Y` and claim sizes `Z` are iid positive.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, Pareto};
use statrs::function::gamma::gamma_ur;

use crate::error::{ensure, Error, Result};

/// A sorted sample of positive reals, used as an empirical size law.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    sorted: Vec<f64>,
    mean: f64,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        ensure(!values.is_empty(), || "empirical sample is empty".into())?;
        ensure(values.iter().all(|v| v.is_finite() && *v > 0.0), || {
            "empirical sample must contain finite positive values".into()
        })?;
        values.sort_by(f64::total_cmp);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(Self {
            sorted: values,
            mean,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    fn tail(&self, x: f64) -> f64 {
        let at_or_below = self.sorted.partition_point(|&s| s <= x);
        (self.sorted.len() - at_or_below) as f64 / self.sorted.len() as f64
    }

    fn average(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.sorted.iter().map(|&s| f(s)).sum::<f64>() / self.sorted.len() as f64
    }
}

/// Law of a positive jump size (a premium `Y` or a claim `Z`).
///
/// Parameters use the rate parametrization: `Exponential { rate }` has mean
/// `1 / rate`, `Gamma { shape, rate }` has mean `shape / rate`. `Pareto` is the
/// type-I law with `P(J > x) = (scale / x)^tail_index` for `x >= scale`.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpLaw {
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
    Pareto { scale: f64, tail_index: f64 },
    Empirical(EmpiricalSample),
}

impl JumpLaw {
    pub fn exponential(rate: f64) -> Result<Self> {
        let law = JumpLaw::Exponential { rate };
        law.validate()?;
        Ok(law)
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        let law = JumpLaw::Gamma { shape, rate };
        law.validate()?;
        Ok(law)
    }

    pub fn pareto(scale: f64, tail_index: f64) -> Result<Self> {
        let law = JumpLaw::Pareto { scale, tail_index };
        law.validate()?;
        Ok(law)
    }

    pub fn empirical(values: Vec<f64>) -> Result<Self> {
        Ok(JumpLaw::Empirical(EmpiricalSample::new(values)?))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            ensure(v.is_finite() && v > 0.0, || {
                format!("{name} must be finite and positive, got {v}")
            })
        };
        match *self {
            JumpLaw::Exponential { rate } => positive("rate", rate),
            JumpLaw::Gamma { shape, rate } => {
                positive("shape", shape)?;
                positive("rate", rate)
            }
            JumpLaw::Pareto { scale, tail_index } => {
                positive("scale", scale)?;
                positive("tail_index", tail_index)?;
                ensure(tail_index > 1.0, || {
                    format!("pareto tail_index must exceed 1 for a finite mean, got {tail_index}")
                })
            }
            JumpLaw::Empirical(ref s) => {
                ensure(!s.is_empty(), || "empirical sample is empty".into())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            JumpLaw::Exponential { .. } => "exponential",
            JumpLaw::Gamma { .. } => "gamma",
            JumpLaw::Pareto { .. } => "pareto",
            JumpLaw::Empirical(_) => "empirical",
        }
    }

    /// Rate of the law if it is exponential.
    pub fn exponential_rate(&self) -> Option<f64> {
        match *self {
            JumpLaw::Exponential { rate } => Some(rate),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            JumpLaw::Exponential { rate } => 1.0 / rate,
            JumpLaw::Gamma { shape, rate } => shape / rate,
            JumpLaw::Pareto { scale, tail_index } => tail_index * scale / (tail_index - 1.0),
            JumpLaw::Empirical(ref s) => s.mean,
        }
    }

    /// `E[J^2]`, or an error for Pareto laws with `tail_index <= 2`.
    pub fn second_moment(&self) -> Result<f64> {
        Ok(match *self {
            JumpLaw::Exponential { rate } => 2.0 / (rate * rate),
            JumpLaw::Gamma { shape, rate } => shape * (shape + 1.0) / (rate * rate),
            JumpLaw::Pareto { scale, tail_index } => {
                if tail_index <= 2.0 {
                    return Err(Error::InfiniteSecondMoment("pareto jump law"));
                }
                tail_index * scale * scale / (tail_index - 2.0)
            }
            JumpLaw::Empirical(ref s) => s.average(|v| v * v),
        })
    }

    /// Survival function `P(J > x)`; equal to 1 for `x < 0`.
    pub fn tail(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        match *self {
            JumpLaw::Exponential { rate } => (-rate * x).exp(),
            JumpLaw::Gamma { shape, rate } => {
                if x == 0.0 {
                    1.0
                } else {
                    gamma_ur(shape, rate * x)
                }
            }
            JumpLaw::Pareto { scale, tail_index } => {
                if x < scale {
                    1.0
                } else {
                    (scale / x).powf(tail_index)
                }
            }
            JumpLaw::Empirical(ref s) => s.tail(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.tail(x)
    }

    /// `int_0^x P(J > y) dy = E[min(J, x)]` for `x >= 0`.
    pub fn integrated_tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            JumpLaw::Exponential { rate } => -(-rate * x).exp_m1() / rate,
            JumpLaw::Empirical(ref s) => s.average(|v| v.min(x)),
            _ => self.mean() - self.excess_integral(x),
        }
    }

    /// `int_x^inf P(J > y) dy = E[(J - x)^+]` for `x >= 0`.
    pub fn excess_integral(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match *self {
            JumpLaw::Exponential { rate } => (-rate * x).exp() / rate,
            JumpLaw::Gamma { shape, rate } => {
                if x == 0.0 {
                    return shape / rate;
                }
                let z = rate * x;
                let v = shape / rate * gamma_ur(shape + 1.0, z) - x * gamma_ur(shape, z);
                v.max(0.0)
            }
            JumpLaw::Pareto { scale, tail_index } => {
                if x < scale {
                    scale - x + scale / (tail_index - 1.0)
                } else {
                    scale.powf(tail_index) * x.powf(1.0 - tail_index) / (tail_index - 1.0)
                }
            }
            JumpLaw::Empirical(ref s) => s.average(|v| (v - x).max(0.0)),
        }
    }

    /// Right end of the convergence strip of `E[exp(s J)]`: `sup{s : E e^{sJ} < inf}`.
    /// `None` for laws without exponential moments.
    pub fn mgf_abscissa(&self) -> Option<f64> {
        match *self {
            JumpLaw::Exponential { rate } => Some(rate),
            JumpLaw::Gamma { rate, .. } => Some(rate),
            JumpLaw::Empirical(_) => Some(f64::INFINITY),
            JumpLaw::Pareto { .. } => None,
        }
    }

    /// `int_0^inf e^{s y} P(J > y) dy = (E[e^{sJ}] - 1) / s`, for `s` below the
    /// abscissa. At `s = 0` this is the mean.
    pub fn tilted_tail_integral(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(self.mean());
        }
        match *self {
            JumpLaw::Exponential { rate } => {
                if s >= rate {
                    return Err(Error::OutsideConvergenceStrip {
                        r: s,
                        lower: f64::NEG_INFINITY,
                        upper: rate,
                    });
                }
                Ok(1.0 / (rate - s))
            }
            JumpLaw::Gamma { shape, rate } => {
                if s >= rate {
                    return Err(Error::OutsideConvergenceStrip {
                        r: s,
                        lower: f64::NEG_INFINITY,
                        upper: rate,
                    });
                }
                Ok((-shape * (-s / rate).ln_1p()).exp_m1() / s)
            }
            JumpLaw::Empirical(ref e) => Ok(e.average(|v| (s * v).exp_m1() / s)),
            JumpLaw::Pareto { .. } => Err(Error::NoMgf("pareto jump law")),
        }
    }

    pub fn sampler(&self) -> JumpSampler {
        match *self {
            JumpLaw::Exponential { rate } => {
                JumpSampler::Exponential(Exp::new(rate).expect("validated rate"))
            }
            JumpLaw::Gamma { shape, rate } => {
                JumpSampler::Gamma(Gamma::new(shape, 1.0 / rate).expect("validated gamma"))
            }
            JumpLaw::Pareto { scale, tail_index } => {
                JumpSampler::Pareto(Pareto::new(scale, tail_index).expect("validated pareto"))
            }
            JumpLaw::Empirical(ref s) => JumpSampler::Empirical(s.sorted.clone()),
        }
    }
}

/// Prebuilt sampler for a [`JumpLaw`].
#[derive(Debug, Clone)]
pub enum JumpSampler {
    Exponential(Exp<f64>),
    Gamma(Gamma<f64>),
    Pareto(Pareto<f64>),
    Empirical(Vec<f64>),
}

impl Distribution<f64> for JumpSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            JumpSampler::Exponential(d) => d.sample(rng),
            JumpSampler::Gamma(d) => d.sample(rng),
            JumpSampler::Pareto(d) => d.sample(rng),
            JumpSampler::Empirical(v) => v[rng.random_range(0..v.len())],
        }
    }
}

/// One atom `(gamma, delta)` of a discrete mixing law, with its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAtom {
    pub gamma: f64,
    pub delta: f64,
    pub prob: f64,
}

/// Joint law of the claim intensity `Gamma` and the premium intensity `Delta`.
#[derive(Debug, Clone, PartialEq)]
pub enum MixingLaw {
    Degenerate {
        gamma: f64,
        delta: f64,
    },
    Discrete(Vec<MixingAtom>),
    /// `Gamma` and `Delta` independent, each Gamma-distributed (shape, rate).
    IndependentGamma {
        gamma_shape: f64,
        gamma_rate: f64,
        delta_shape: f64,
        delta_rate: f64,
    },
}

/// First and second moments of a [`MixingLaw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMoments {
    pub mean_gamma: f64,
    pub mean_delta: f64,
    pub var_gamma: f64,
    pub var_delta: f64,
    pub cov: f64,
}

impl MixingLaw {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            ensure(v.is_finite() && v > 0.0, || {
                format!("mixing {name} must be finite and positive, got {v}")
            })
        };
        match *self {
            MixingLaw::Degenerate { gamma, delta } => {
                positive("gamma", gamma)?;
                positive("delta", delta)
            }
            MixingLaw::Discrete(ref atoms) => {
                ensure(!atoms.is_empty(), || "discrete mixing needs at least one atom".into())?;
                for a in atoms {
                    positive("gamma", a.gamma)?;
                    positive("delta", a.delta)?;
                    ensure(a.prob > 0.0 && a.prob <= 1.0, || {
                        format!("atom probability must lie in (0, 1], got {}", a.prob)
                    })?;
                }
                let total: f64 = atoms.iter().map(|a| a.prob).sum();
                ensure((total - 1.0).abs() <= 1e-12, || {
                    format!("atom probabilities sum to {total}, expected 1")
                })
            }
            MixingLaw::IndependentGamma {
                gamma_shape,
                gamma_rate,
                delta_shape,
                delta_rate,
            } => {
                positive("gamma_shape", gamma_shape)?;
                positive("gamma_rate", gamma_rate)?;
                positive("delta_shape", delta_shape)?;
                positive("delta_rate", delta_rate)
            }
        }
    }

    /// Atoms of a finitely supported law; `None` for continuous mixing.
    pub fn atoms(&self) -> Option<Vec<MixingAtom>> {
        match *self {
            MixingLaw::Degenerate { gamma, delta } => Some(vec![MixingAtom {
                gamma,
                delta,
                prob: 1.0,
            }]),
            MixingLaw::Discrete(ref atoms) => Some(atoms.clone()),
            MixingLaw::IndependentGamma { .. } => None,
        }
    }

    pub fn moments(&self) -> MixingMoments {
        match *self {
            MixingLaw::Degenerate { gamma, delta } => MixingMoments {
                mean_gamma: gamma,
                mean_delta: delta,
                var_gamma: 0.0,
                var_delta: 0.0,
                cov: 0.0,
            },
            MixingLaw::Discrete(ref atoms) => {
                let mean_gamma: f64 = atoms.iter().map(|a| a.prob * a.gamma).sum();
                let mean_delta: f64 = atoms.iter().map(|a| a.prob * a.delta).sum();
                let weighted = |f: &dyn Fn(&MixingAtom) -> f64| {
                    atoms.iter().map(|a| a.prob * f(a)).sum::<f64>()
                };
                MixingMoments {
                    mean_gamma,
                    mean_delta,
                    var_gamma: weighted(&|a| (a.gamma - mean_gamma).powi(2)),
                    var_delta: weighted(&|a| (a.delta - mean_delta).powi(2)),
                    cov: weighted(&|a| (a.gamma - mean_gamma) * (a.delta - mean_delta)),
                }
            }
            MixingLaw::IndependentGamma {
                gamma_shape,
                gamma_rate,
                delta_shape,
                delta_rate,
            } => MixingMoments {
                mean_gamma: gamma_shape / gamma_rate,
                mean_delta: delta_shape / delta_rate,
                var_gamma: gamma_shape / (gamma_rate * gamma_rate),
                var_delta: delta_shape / (delta_rate * delta_rate),
                cov: 0.0,
            },
        }
    }

    pub fn sampler(&self) -> MixingSampler {
        match *self {
            MixingLaw::Degenerate { gamma, delta } => MixingSampler::Fixed(gamma, delta),
            MixingLaw::Discrete(ref atoms) => {
                let mut acc = 0.0;
                let cumulative = atoms
                    .iter()
                    .map(|a| {
                        acc += a.prob;
                        (acc, a.gamma, a.delta)
                    })
                    .collect();
                MixingSampler::Discrete(cumulative)
            }
            MixingLaw::IndependentGamma {
                gamma_shape,
                gamma_rate,
                delta_shape,
                delta_rate,
            } => MixingSampler::Gamma(
                Gamma::new(gamma_shape, 1.0 / gamma_rate).expect("validated gamma mixing"),
                Gamma::new(delta_shape, 1.0 / delta_rate).expect("validated gamma mixing"),
            ),
        }
    }
}

/// Draws `(gamma, delta)` pairs from a [`MixingLaw`].
#[derive(Debug, Clone)]
pub enum MixingSampler {
    Fixed(f64, f64),
    /// (cumulative probability, gamma, delta)
    Discrete(Vec<(f64, f64, f64)>),
    Gamma(Gamma<f64>, Gamma<f64>),
}

impl Distribution<(f64, f64)> for MixingSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            MixingSampler::Fixed(g, d) => (*g, *d),
            MixingSampler::Discrete(cum) => {
                let x: f64 = rng.random();
                let idx = cum.partition_point(|&(p, _, _)| p <= x).min(cum.len() - 1);
                (cum[idx].1, cum[idx].2)
            }
            MixingSampler::Gamma(g, d) => (g.sample(rng), d.sample(rng)),
        }
    }
}

/// Full model: initial capital, drift, size laws and mixing law.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub u: f64,
    pub c: f64,
    /// Law of the premium sizes `Y`.
    pub premium_law: JumpLaw,
    /// Law of the claim sizes `Z`.
    pub claim_law: JumpLaw,
    pub mixing: MixingLaw,
}

impl ModelSpec {
    pub fn new(
        u: f64,
        c: f64,
        premium_law: JumpLaw,
        claim_law: JumpLaw,
        mixing: MixingLaw,
    ) -> Result<Self> {
        let model = Self {
            u,
            c,
            premium_law,
            claim_law,
            mixing,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.u.is_finite() && self.u >= 0.0, || {
            format!("initial capital u must be >= 0, got {}", self.u)
        })?;
        ensure(self.c.is_finite() && self.c >= 0.0, || {
            format!("premium drift c must be >= 0, got {}", self.c)
        })?;
        self.premium_law.validate()?;
        self.claim_law.validate()?;
        self.mixing.validate()
    }

    pub fn with_u(&self, u: f64) -> Self {
        Self {
            u,
            ..self.clone()
        }
    }

    /// Exponential rates `(a, b)` of premium and claim sizes, when both are exponential.
    pub fn exponential_rates(&self) -> Option<(f64, f64)> {
        Some((
            self.premium_law.exponential_rate()?,
            self.claim_law.exponential_rate()?,
        ))
    }
}

/// `E[K_t] = u + t (c + E[Y] E[Delta] - E[Z] E[Gamma])`.
pub fn mean_surplus(model: &ModelSpec, t: f64) -> f64 {
    let m = model.mixing.moments();
    model.u
        + t * (model.c + model.premium_law.mean() * m.mean_delta
            - model.claim_law.mean() * m.mean_gamma)
}

/// `Var(K_t)` by the law of total variance over `(Delta, Gamma)`:
///
/// ```text
/// E[Y^2] E[Delta] t + E[Z^2] E[Gamma] t
///     + t^2 (E[Y]^2 Var(Delta) + E[Z]^2 Var(Gamma) - 2 E[Y] E[Z] Cov(Delta, Gamma))
/// ```
///
/// The first line is the mean conditional (compound Poisson) variance, the
/// second the variance of the conditional mean `u + t (c + Delta E[Y] - Gamma E[Z])`.
pub fn var_surplus(model: &ModelSpec, t: f64) -> Result<f64> {
    let m = model.mixing.moments();
    let ey2 = model
        .premium_law
        .second_moment()
        .map_err(|_| Error::InfiniteSecondMoment("premium size law"))?;
    let ez2 = model
        .claim_law
        .second_moment()
        .map_err(|_| Error::InfiniteSecondMoment("claim size law"))?;
    let (ey, ez) = (model.premium_law.mean(), model.claim_law.mean());
    let within = t * (ey2 * m.mean_delta + ez2 * m.mean_gamma);
    let between = t * t * (ey * ey * m.var_delta + ez * ez * m.var_gamma - 2.0 * ey * ez * m.cov);
    Ok(within + between)
}

/// Coefficient of `t^2` in [`var_surplus`]: the overdispersion caused by random intensities.
pub fn overdispersion_coefficient(model: &ModelSpec) -> f64 {
    let m = model.mixing.moments();
    let (ey, ez) = (model.premium_law.mean(), model.claim_law.mean());
    ey * ey * m.var_delta + ez * ez * m.var_gamma - 2.0 * ey * ez * m.cov
}

/// `c + delta E[Y] - gamma E[Z]`; non-positive values mean certain ruin given `(gamma, delta)`.
pub fn net_profit_margin(gamma: f64, delta: f64, model: &ModelSpec) -> f64 {
    model.c + delta * model.premium_law.mean() - gamma * model.claim_law.mean()
}

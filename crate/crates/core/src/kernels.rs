//! The conditional two-sided-jump model, its signed kernel `G` and the
//! exponentially tilted kernel `H`.
//!
//! Fixing the intensities at `(gamma, delta)` turns the mixed model into a
//! classical compound Poisson model with drift `c`, event rate
//! `lambda = gamma + delta`, and jumps drawn from
//! `(gamma / lambda) law(Z) + (delta / lambda) law(-Y)`.
//! Its ruin probability solves `c nu(u) = int nu(u - z) dG(z)` where `dG` has
//! density `gamma P(Z > z)` on `z > 0` and `-delta P(Y > -z)` on `z < 0`.

use crate::error::{ensure, Error, Result};
use crate::model::{JumpLaw, ModelSpec};
use crate::quad::integrate_half_line;

/// Model obtained by conditioning on `(Gamma, Delta) = (gamma, delta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalModel {
    u: f64,
    c: f64,
    gamma: f64,
    delta: f64,
    lambda: f64,
    premium_law: JumpLaw,
    claim_law: JumpLaw,
}

impl ConditionalModel {
    pub fn new(
        u: f64,
        c: f64,
        gamma: f64,
        delta: f64,
        premium_law: JumpLaw,
        claim_law: JumpLaw,
    ) -> Result<Self> {
        ensure(gamma.is_finite() && gamma > 0.0, || {
            format!("gamma must be positive, got {gamma}")
        })?;
        ensure(delta.is_finite() && delta > 0.0, || {
            format!("delta must be positive, got {delta}")
        })?;
        ensure(u.is_finite() && u >= 0.0, || format!("u must be >= 0, got {u}"))?;
        ensure(c.is_finite() && c >= 0.0, || format!("c must be >= 0, got {c}"))?;
        premium_law.validate()?;
        claim_law.validate()?;
        Ok(Self {
            u,
            c,
            gamma,
            delta,
            lambda: gamma + delta,
            premium_law,
            claim_law,
        })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Event rate of the merged arrival process.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn premium_law(&self) -> &JumpLaw {
        &self.premium_law
    }

    pub fn claim_law(&self) -> &JumpLaw {
        &self.claim_law
    }

    /// Probability that an event of the merged process is a claim.
    pub fn claim_weight(&self) -> f64 {
        self.gamma / self.lambda
    }

    /// Probability that an event of the merged process is a premium.
    pub fn premium_weight(&self) -> f64 {
        self.delta / self.lambda
    }

    /// `c + delta E[Y] - gamma E[Z]`.
    pub fn net_profit_margin(&self) -> f64 {
        self.c + self.delta * self.premium_law.mean() - self.gamma * self.claim_law.mean()
    }

    /// Mean of the jump law of the subtracted compound sum, `int x L(dx)`.
    pub fn mean_jump(&self) -> f64 {
        self.claim_weight() * self.claim_law.mean()
            - self.premium_weight() * self.premium_law.mean()
    }

    /// Open interval of `r` on which `int e^{rz} dG(z)` converges.
    pub fn convergence_strip(&self) -> Option<(f64, f64)> {
        let upper = self.claim_law.mgf_abscissa()?;
        let lower = -self.premium_law.mgf_abscissa()?;
        Some((lower, upper))
    }

    pub fn with_u(&self, u: f64) -> Self {
        Self {
            u,
            ..self.clone()
        }
    }
}

/// Condition the mixed model on `(Gamma, Delta) = (gamma, delta)`.
pub fn conditional_model(model: &ModelSpec, gamma: f64, delta: f64) -> Result<ConditionalModel> {
    ConditionalModel::new(
        model.u,
        model.c,
        gamma,
        delta,
        model.premium_law.clone(),
        model.claim_law.clone(),
    )
}

/// The signed measure `dG`.
///
/// The positive side carries density `gamma P(Z > z)` and mass `gamma E[Z]`;
/// the negative side carries density `delta P(Y > z)` at `-z`, entering with a
/// minus sign, and mass `delta E[Y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedKernel {
    gamma: f64,
    delta: f64,
    claim_law: JumpLaw,
    premium_law: JumpLaw,
}

impl SignedKernel {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn claim_law(&self) -> &JumpLaw {
        &self.claim_law
    }

    pub fn premium_law(&self) -> &JumpLaw {
        &self.premium_law
    }

    /// Density of `dG` at `z > 0`.
    pub fn positive_density(&self, z: f64) -> f64 {
        self.gamma * self.claim_law.tail(z)
    }

    /// Magnitude of the density of `dG` at `-z`, for `z > 0`.
    pub fn negative_density(&self, z: f64) -> f64 {
        if self.delta == 0.0 {
            return 0.0;
        }
        self.delta * self.premium_law.tail(z)
    }

    pub fn positive_mass(&self) -> f64 {
        self.gamma * self.claim_law.mean()
    }

    pub fn negative_mass(&self) -> f64 {
        self.delta * self.premium_law.mean()
    }

    /// `gamma int_z^inf P(Z > y) dy`, the positive-side mass beyond `z`.
    pub fn positive_excess(&self, z: f64) -> f64 {
        self.gamma * self.claim_law.excess_integral(z)
    }

    /// The function `G` itself: zero at the origin, increasing away from it on both sides.
    pub fn cumulative(&self, z: f64) -> f64 {
        if z > 0.0 {
            self.gamma * self.claim_law.integrated_tail(z)
        } else if z < 0.0 {
            self.delta * self.premium_law.integrated_tail(-z)
        } else {
            0.0
        }
    }

    /// Same kernel with the premium part removed (`delta = 0`): the classical
    /// Cramer-Lundberg kernel with claim intensity `gamma`.
    pub fn with_premium_part_zeroed(&self) -> Self {
        Self {
            delta: 0.0,
            ..self.clone()
        }
    }
}

pub fn build_signed_kernel(cm: &ConditionalModel) -> SignedKernel {
    SignedKernel {
        gamma: cm.gamma,
        delta: cm.delta,
        claim_law: cm.claim_law.clone(),
        premium_law: cm.premium_law.clone(),
    }
}

/// `int e^{rz} dG(z) - c`; zero exactly at adjustment coefficients.
pub fn mgf_balance(cm: &ConditionalModel, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(-cm.net_profit_margin());
    }
    for law in [&cm.claim_law, &cm.premium_law] {
        if matches!(law, JumpLaw::Pareto { .. }) {
            return Err(Error::NoMgf("pareto jump law"));
        }
    }
    let (lower, upper) = cm.convergence_strip().ok_or(Error::NoMgf("jump law"))?;
    if !(r > lower && r < upper) {
        return Err(Error::OutsideConvergenceStrip { r, lower, upper });
    }
    let positive = cm.gamma * cm.claim_law.tilted_tail_integral(r)?;
    let negative = cm.delta * cm.premium_law.tilted_tail_integral(-r)?;
    Ok(positive - negative - cm.c)
}

/// Exponential tilt of `dG / c` by the adjustment coefficient `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedKernel {
    r: f64,
    c: f64,
    kernel: SignedKernel,
    signed_total_mass: f64,
}

impl TiltedKernel {
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The untilted kernel `G`.
    pub fn kernel(&self) -> &SignedKernel {
        &self.kernel
    }

    /// Density of `dH` at `z > 0`.
    pub fn positive_density(&self, z: f64) -> f64 {
        (self.r * z).exp() * self.kernel.positive_density(z) / self.c
    }

    /// Magnitude of the density of `dH` at `-z`, for `z > 0`.
    pub fn negative_density(&self, z: f64) -> f64 {
        (-self.r * z).exp() * self.kernel.negative_density(z) / self.c
    }

    /// `dH(R)`, computed by quadrature of both sides.
    pub fn signed_total_mass(&self) -> f64 {
        self.signed_total_mass
    }

    /// `xi(v) = e^{rv} nu(v)`.
    pub fn xi_of(&self, v: f64, nu: f64) -> f64 {
        (self.r * v).exp() * nu
    }
}

/// Accepted `|mgf_balance(r)|` for an `r` passed to [`build_tilted_kernel`].
pub const ADJUSTMENT_CHECK_TOLERANCE: f64 = 1e-8;

pub fn build_tilted_kernel(cm: &ConditionalModel, r: f64) -> Result<TiltedKernel> {
    if cm.c == 0.0 {
        return Err(Error::NotApplicable("the tilted kernel divides by c, which is zero"));
    }
    ensure(r.is_finite() && r > 0.0, || format!("r must be positive, got {r}"))?;
    let balance = mgf_balance(cm, r)?;
    ensure(balance.abs() <= ADJUSTMENT_CHECK_TOLERANCE * cm.c.max(1.0), || {
        format!("r = {r} is not an adjustment coefficient (mgf balance {balance:e})")
    })?;
    let mut tilted = TiltedKernel {
        r,
        c: cm.c,
        kernel: build_signed_kernel(cm),
        signed_total_mass: f64::NAN,
    };
    let pos = integrate_half_line(&|z| tilted.positive_density(z), 1e-10, 1e-14);
    let neg = integrate_half_line(&|z| tilted.negative_density(z), 1e-10, 1e-14);
    tilted.signed_total_mass = pos - neg;
    Ok(tilted)
}

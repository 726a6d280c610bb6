//! Adjustment coefficients and Lundberg bounds.

use crate::error::{ensure, Error, Result};
use crate::kernels::{mgf_balance, ConditionalModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjustmentMethod {
    ClosedForm,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustmentResult {
    pub r: f64,
    pub method: AdjustmentMethod,
    /// `|mgf_balance(r)|`
    pub residual: f64,
}

/// Positive root of `c + delta / (a + r) = gamma / (b - r)` for exponential
/// premiums (rate `a`) and claims (rate `b`).
///
/// Clearing denominators gives `c r^2 - B r - C = 0` with
/// `B = c (b - a) - delta - gamma` and `C = c a b + b delta - a gamma`. The
/// root is evaluated as `2C / (sqrt(D) - B)` when `B < 0`, which is
/// cancellation-free for small `c` and reduces to `(b delta - a gamma) / (delta + gamma)`
/// at `c = 0`. `delta = 0` is accepted and gives the classical `b - gamma / c`.
pub fn adjustment_exponential(
    c: f64,
    a: f64,
    b: f64,
    gamma: f64,
    delta: f64,
) -> Result<AdjustmentResult> {
    ensure(c.is_finite() && c >= 0.0, || format!("c must be >= 0, got {c}"))?;
    ensure(a > 0.0 && b > 0.0, || format!("rates must be positive, got a={a}, b={b}"))?;
    ensure(gamma > 0.0 && delta >= 0.0, || {
        format!("need gamma > 0 and delta >= 0, got gamma={gamma}, delta={delta}")
    })?;
    let margin = c + delta / a - gamma / b;
    if margin <= 0.0 {
        return Err(Error::NetProfitViolated { margin });
    }
    let r = if c == 0.0 {
        (b * delta - a * gamma) / (delta + gamma)
    } else {
        let big_b = c * (b - a) - delta - gamma;
        let big_c = c * a * b + b * delta - a * gamma;
        let disc = ((a + b) * c + delta).powi(2) - 2.0 * ((a + b) * c - delta) * gamma + gamma * gamma;
        let root = disc.max(0.0).sqrt();
        if big_b < 0.0 {
            2.0 * big_c / (root - big_b)
        } else {
            (big_b + root) / (2.0 * c)
        }
    };
    let residual = (gamma / (b - r) - if delta == 0.0 { 0.0 } else { delta / (a + r) } - c).abs();
    Ok(AdjustmentResult {
        r,
        method: AdjustmentMethod::ClosedForm,
        residual,
    })
}

const BISECTION_MAX_ITER: usize = 200;

/// Adjustment coefficient of a general conditional model, by bisection on
/// [`mgf_balance`] over `(eps, r_max - eps)` with `eps = 1e-12 r_max`.
///
/// `r_max` is the claim law's MGF abscissa. Laws with unbounded abscissa
/// (empirical) get a bracket by doubling.
pub fn adjustment_general(cm: &ConditionalModel) -> Result<AdjustmentResult> {
    let margin = cm.net_profit_margin();
    if margin <= 0.0 {
        return Err(Error::NetProfitViolated { margin });
    }
    let (_, abscissa) = cm.convergence_strip().ok_or(Error::NoMgf("pareto jump law"))?;
    let f = |r: f64| mgf_balance(cm, r);

    let (mut lo, mut hi) = if abscissa.is_finite() {
        let eps = 1e-12 * abscissa;
        (eps, abscissa - eps)
    } else {
        let mut hi = 1.0;
        while f(hi)? <= 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::NoAdjustmentCoefficient);
            }
        }
        (1e-12 * hi, hi)
    };
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoAdjustmentCoefficient);
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (f_lo, f_hi) = (f(lo)?.abs(), f(hi)?.abs());
    let (r, residual) = if f_lo <= f_hi { (lo, f_lo) } else { (hi, f_hi) };
    Ok(AdjustmentResult {
        r,
        method: AdjustmentMethod::Bisection,
        residual,
    })
}

/// `e^{-r u}`.
pub fn lundberg_bound(r: f64, u: f64) -> f64 {
    (-r * u).exp()
}

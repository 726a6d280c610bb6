//! Numerical solution of `c nu(u) = int nu(u - z) dG(z)` on `u >= 0`, with
//! `nu = 1` on the negative half-line, for general premium and claim laws.
//!
//! Expanded, the equation reads
//!
//! ```text
//! c nu(u) = gamma [ int_0^u F_Z(z) nu(u - z) dz + int_u^inf F_Z(z) dz ]
//!         - delta int_0^inf F_Y(z) nu(u + z) dz
//! ```
//!
//! with `F_Z`, `F_Y` the claim and premium survival functions. The kernel is
//! two-sided, so `nu` at a node depends on nodes both below and above it. We
//! collocate at the grid nodes, apply the trapezoidal rule to both integrals,
//! and solve the resulting system by damped fixed-point iteration. Both
//! discrete convolutions are evaluated with FFTs.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{ensure, Error, Result};
use crate::kernels::{SignedKernel, TiltedKernel};

/// Premium-side kernel is truncated where its tail drops below this.
const KERNEL_TAIL_CUTOFF: f64 = 1e-12;

/// How `nu` is continued beyond the last grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClosure {
    /// `nu(u) = nu(u_max) e^{-r (u - u_max)}`
    Lundberg(f64),
    /// `nu(u) = 0`
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverGrid {
    h: f64,
    n: usize,
    tail: TailClosure,
    tolerance: f64,
    max_iterations: usize,
    damping: f64,
}

pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;
pub const DEFAULT_DAMPING: f64 = 0.5;

impl SolverGrid {
    /// Grid `u_j = j h` for `j = 0..=n` with `n = round(u_max / h)`.
    pub fn new(
        h: f64,
        u_max: f64,
        tail: TailClosure,
        tolerance: f64,
        max_iterations: usize,
    ) -> Result<Self> {
        ensure(h.is_finite() && h > 0.0, || format!("step h must be positive, got {h}"))?;
        ensure(u_max.is_finite() && u_max > 0.0, || {
            format!("u_max must be positive, got {u_max}")
        })?;
        let n = (u_max / h).round() as usize;
        ensure(n >= 2, || format!("grid needs at least 2 steps, got {n}"))?;
        ensure(tolerance > 0.0, || format!("tolerance must be positive, got {tolerance}"))?;
        ensure(max_iterations > 0, || "max_iterations must be positive".into())?;
        if let TailClosure::Lundberg(r) = tail {
            ensure(r.is_finite() && r > 0.0, || {
                format!("lundberg closure needs r > 0, got {r}")
            })?;
        }
        Ok(Self {
            h,
            n,
            tail,
            tolerance,
            max_iterations,
            damping: DEFAULT_DAMPING,
        })
    }

    /// `h = 0.01`, `u_max = max(40, 12 / r)`, Lundberg closure when `r` is known.
    pub fn with_defaults(r: Option<f64>) -> Result<Self> {
        match r {
            Some(r) => Self::new(
                DEFAULT_STEP,
                (12.0 / r).max(40.0),
                TailClosure::Lundberg(r),
                DEFAULT_TOLERANCE,
                DEFAULT_MAX_ITERATIONS,
            ),
            None => Self::new(
                DEFAULT_STEP,
                40.0,
                TailClosure::Zero,
                DEFAULT_TOLERANCE,
                DEFAULT_MAX_ITERATIONS,
            ),
        }
    }

    pub fn with_damping(mut self, damping: f64) -> Result<Self> {
        ensure(damping > 0.0 && damping <= 1.0, || {
            format!("damping must lie in (0, 1], got {damping}")
        })?;
        self.damping = damping;
        Ok(self)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Index of the last node.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u_max(&self) -> f64 {
        self.n as f64 * self.h
    }

    pub fn tail(&self) -> TailClosure {
        self.tail
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h
    }
}

/// Ruin probabilities on the solver grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSolution {
    values: Vec<f64>,
    h: f64,
    tail: TailClosure,
    /// Sup-norm of `T(nu) - nu` for the returned `nu`.
    pub residual: f64,
    pub iterations_used: usize,
    /// Net profit fails; the values are identically 1 and no iteration ran.
    pub certain_ruin: bool,
}

impl SolverSolution {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn u_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.h
    }

    pub fn tail(&self) -> TailClosure {
        self.tail
    }

    /// `nu(u)`: 1 for `u < 0`, linear interpolation on the grid, tail closure beyond.
    pub fn value_at(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 1.0;
        }
        if self.certain_ruin {
            return 1.0;
        }
        let n = self.values.len() - 1;
        let u_max = self.u_max();
        if u >= u_max {
            return match self.tail {
                TailClosure::Lundberg(r) => self.values[n] * (-r * (u - u_max)).exp(),
                TailClosure::Zero if u == u_max => self.values[n],
                TailClosure::Zero => 0.0,
            };
        }
        let x = u / self.h;
        let j = (x.floor() as usize).min(n - 1);
        let frac = x - j as f64;
        self.values[j] * (1.0 - frac) + self.values[j + 1] * frac
    }
}

/// Circular convolutions against two fixed kernels via a shared FFT of the input.
struct SpectralOperator {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    claim_spectrum: Vec<Complex<f64>>,
    premium_spectrum: Vec<Complex<f64>>,
    input: Vec<Complex<f64>>,
    claim_out: Vec<Complex<f64>>,
    premium_out: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl SpectralOperator {
    fn new(size: usize, claim: &[f64], premium_reversed: &[f64]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let mut scratch = vec![Complex::default(); scratch_len];
        let mut spectrum = |taps: &[f64]| {
            let mut buf = vec![Complex::default(); size];
            for (b, &t) in buf.iter_mut().zip(taps) {
                b.re = t;
            }
            forward.process_with_scratch(&mut buf, &mut scratch);
            buf
        };
        let claim_spectrum = spectrum(claim);
        let premium_spectrum = spectrum(premium_reversed);
        Self {
            size,
            forward,
            inverse,
            claim_spectrum,
            premium_spectrum,
            input: vec![Complex::default(); size],
            claim_out: vec![Complex::default(); size],
            premium_out: vec![Complex::default(); size],
            scratch,
        }
    }

    /// Fills `claim_out` and `premium_out` (real parts) with both convolutions of `signal`.
    fn apply(&mut self, signal: &[f64]) {
        for (slot, &v) in self.input.iter_mut().zip(signal.iter().chain(std::iter::repeat(&0.0))) {
            *slot = Complex::new(v, 0.0);
        }
        self.forward.process_with_scratch(&mut self.input, &mut self.scratch);
        let scale = 1.0 / self.size as f64;
        for i in 0..self.size {
            self.claim_out[i] = self.input[i] * self.claim_spectrum[i] * scale;
            self.premium_out[i] = self.input[i] * self.premium_spectrum[i] * scale;
        }
        self.inverse.process_with_scratch(&mut self.claim_out, &mut self.scratch);
        self.inverse.process_with_scratch(&mut self.premium_out, &mut self.scratch);
    }
}

/// The discretized fixed-point map `nu -> T(nu)`.
struct RenewalOperator {
    n: usize,
    k_max: usize,
    h: f64,
    c: f64,
    tail: TailClosure,
    claim_taps: Vec<f64>,
    premium_taps: Vec<f64>,
    excess: Vec<f64>,
    spectral: SpectralOperator,
    extended: Vec<f64>,
}

impl RenewalOperator {
    fn new(kernel: &SignedKernel, c: f64, grid: &SolverGrid) -> Self {
        let n = grid.n;
        let h = grid.h;
        let claim_taps: Vec<f64> = (0..=n).map(|k| kernel.positive_density(k as f64 * h)).collect();
        let k_max = premium_support(kernel, h, n);
        let premium_taps: Vec<f64> = (0..=k_max)
            .map(|k| kernel.negative_density(k as f64 * h))
            .collect();
        let excess: Vec<f64> = (0..=n).map(|i| kernel.positive_excess(i as f64 * h)).collect();
        let reversed: Vec<f64> = premium_taps.iter().rev().copied().collect();
        let size = (2 * n + 2 * k_max + 2).next_power_of_two();
        Self {
            n,
            k_max,
            h,
            c,
            tail: grid.tail,
            spectral: SpectralOperator::new(size, &claim_taps, &reversed),
            claim_taps,
            premium_taps,
            excess,
            extended: vec![0.0; n + k_max + 1],
        }
    }

    fn apply(&mut self, nu: &[f64], out: &mut [f64]) {
        let (n, k_max) = (self.n, self.k_max);
        self.extended[..=n].copy_from_slice(nu);
        for j in 1..=k_max {
            self.extended[n + j] = match self.tail {
                TailClosure::Lundberg(r) => nu[n] * (-r * j as f64 * self.h).exp(),
                TailClosure::Zero => 0.0,
            };
        }
        self.spectral.apply(&self.extended);
        let f = &self.claim_taps;
        let g = &self.premium_taps;
        for i in 0..=n {
            // trapezoid endpoint corrections on [0, u_i] and [0, z_K]
            let conv = self.spectral.claim_out[i].re - 0.5 * f[0] * nu[i] - 0.5 * f[i] * nu[0];
            let corr = self.spectral.premium_out[i + k_max].re
                - 0.5 * g[0] * nu[i]
                - 0.5 * g[k_max] * self.extended[i + k_max];
            out[i] = (self.h * conv + self.excess[i] - self.h * corr) / self.c;
        }
    }
}

/// Index of the last premium-side tap kept.
fn premium_support(kernel: &SignedKernel, h: f64, n: usize) -> usize {
    if kernel.delta() == 0.0 {
        return 1;
    }
    let cap = 20 * n;
    let law = kernel.premium_law();
    let mut hi = 1usize;
    while hi < cap && law.tail(hi as f64 * h) >= KERNEL_TAIL_CUTOFF {
        hi *= 2;
    }
    let hi = hi.min(cap);
    // smallest k with tail(k h) < cutoff, by bisection on the monotone tail
    let (mut lo, mut hi) = (0usize, hi);
    if law.tail(hi as f64 * h) >= KERNEL_TAIL_CUTOFF {
        return hi;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if law.tail(mid as f64 * h) < KERNEL_TAIL_CUTOFF {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.max(1)
}

/// Solve the renewal equation on `grid` for drift `c > 0`.
///
/// When the net profit condition fails the solution is `nu = 1` everywhere,
/// returned with `certain_ruin` set.
pub fn solve_renewal(kernel: &SignedKernel, c: f64, grid: &SolverGrid) -> Result<SolverSolution> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NotApplicable(
            "the renewal solver requires c > 0; use the closed form for c = 0",
        ));
    }
    let n = grid.n;
    let margin = c + kernel.negative_mass() - kernel.positive_mass();
    if margin <= 0.0 {
        return Ok(SolverSolution {
            values: vec![1.0; n + 1],
            h: grid.h,
            tail: grid.tail,
            residual: 0.0,
            iterations_used: 0,
            certain_ruin: true,
        });
    }

    let mut op = RenewalOperator::new(kernel, c, grid);
    let mut nu: Vec<f64> = match grid.tail {
        TailClosure::Lundberg(r) => (0..=n).map(|j| (-r * grid.node(j)).exp()).collect(),
        TailClosure::Zero => vec![1.0; n + 1],
    };
    let mut next = vec![0.0; n + 1];
    let omega = grid.damping;
    let mut residual = f64::INFINITY;
    for iteration in 0..grid.max_iterations {
        op.apply(&nu, &mut next);
        residual = nu
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual <= grid.tolerance {
            return Ok(SolverSolution {
                values: nu,
                h: grid.h,
                tail: grid.tail,
                residual,
                iterations_used: iteration,
                certain_ruin: false,
            });
        }
        if !residual.is_finite() || residual > 1e6 {
            return Err(Error::NoConvergence {
                residual,
                iterations: iteration,
            });
        }
        for (v, t) in nu.iter_mut().zip(&next) {
            *v += omega * (t - *v);
        }
    }
    Err(Error::NoConvergence {
        residual,
        iterations: grid.max_iterations,
    })
}

/// Sup-norm defect of `xi = xi * H` over nodes in `[0, u_max / 2]`, where
/// `xi(v) = e^{r v} nu(v)` and `H` is the tilted kernel.
///
/// The convolution is evaluated by trapezoidal quadrature on the solution grid;
/// the part of the positive side reaching into `v < 0` is integrated exactly
/// from the claim-size excess function.
pub fn verify_tilt_identity(
    solution: &SolverSolution,
    tilted: &TiltedKernel,
    grid: &SolverGrid,
) -> Result<f64> {
    let h = grid.h;
    let n = solution.values.len() - 1;
    let half = grid.u_max() / 2.0;
    let last = ((half / h) + 1e-9).floor() as usize;
    let last = last.min(n);
    if last + 1 < 10 {
        return Err(Error::DegenerateGrid(format!(
            "only {} nodes in [0, u_max/2]; need at least 10",
            last + 1
        )));
    }
    let r = tilted.r();
    let xi = |v: f64| tilted.xi_of(v, solution.value_at(v));

    let pos: Vec<f64> = (0..=n).map(|k| tilted.positive_density(k as f64 * h)).collect();
    let premium_law = tilted.kernel().premium_law();
    let mut neg = Vec::new();
    let mut k = 0usize;
    loop {
        let z = k as f64 * h;
        neg.push(tilted.negative_density(z));
        if tilted.kernel().delta() == 0.0 || premium_law.tail(z) < KERNEL_TAIL_CUTOFF || k >= 40 * n {
            break;
        }
        k += 1;
    }
    let xi_grid: Vec<f64> = (0..n + neg.len()).map(|j| xi(j as f64 * h)).collect();

    let trapezoid = |terms: &mut dyn Iterator<Item = f64>, len: usize| -> f64 {
        let mut s = 0.0;
        for (idx, t) in terms.enumerate() {
            let w = if idx == 0 || idx + 1 == len { 0.5 } else { 1.0 };
            s += w * t;
        }
        s * h
    };

    let mut defect = 0.0f64;
    for i in 0..=last {
        let u = i as f64 * h;
        let lower = if i == 0 {
            0.0
        } else {
            trapezoid(&mut (0..=i).map(|k| xi_grid[i - k] * pos[k]), i + 1)
        };
        // int_u^inf e^{r(u - z)} h_+(z) dz with nu = 1 below zero
        let below_zero = (r * u).exp() * tilted.kernel().positive_excess(u) / tilted.c();
        let upper = trapezoid(&mut (0..neg.len()).map(|k| xi_grid[i + k] * neg[k]), neg.len());
        let conv = lower + below_zero - upper;
        defect = defect.max((xi_grid[i] - conv).abs());
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjustment::{adjustment_exponential, lundberg_bound};
    use crate::closedform::ruin_prob_conditional;
    use crate::kernels::{build_signed_kernel, build_tilted_kernel, ConditionalModel};
    use crate::model::JumpLaw;

    fn config_a() -> ConditionalModel {
        ConditionalModel::new(
            0.0,
            1.0,
            1.0,
            0.5,
            JumpLaw::exponential(1.0).unwrap(),
            JumpLaw::exponential(1.0).unwrap(),
        )
        .unwrap()
    }

    fn sup_error(sol: &SolverSolution, grid: &SolverGrid, exact: impl Fn(f64) -> f64) -> f64 {
        (0..=grid.n())
            .map(|j| (sol.values()[j] - exact(grid.node(j))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn matches_closed_form_config_a() {
        let cm = config_a();
        let r = adjustment_exponential(1.0, 1.0, 1.0, 1.0, 0.5).unwrap().r;
        let grid = SolverGrid::new(0.01, 40.0, TailClosure::Lundberg(r), 1e-10, 100_000).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        assert!(sol.residual <= 1e-10);
        let err = sup_error(&sol, &grid, |u| ruin_prob_conditional(u, 1.0, 1.0, 1.0, 1.0, 0.5));
        assert!(err <= 1e-3, "sup error {err}");
        let psi0 = ruin_prob_conditional(0.0, 1.0, 1.0, 1.0, 1.0, 0.5);
        assert!((sol.values()[0] - psi0).abs() <= 2e-3);
        for w in sol.values().windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        assert!(sol.values().iter().all(|v| (0.0..=1.0).contains(v)));
        for j in 0..=grid.n() {
            assert!(sol.values()[j] <= lundberg_bound(r, grid.node(j)) + grid.tolerance());
        }
    }

    #[test]
    fn classical_limit() {
        let (gamma, b, c) = (0.5, 1.0, 1.0);
        let cm = ConditionalModel::new(
            0.0,
            c,
            gamma,
            1.0,
            JumpLaw::exponential(1.0).unwrap(),
            JumpLaw::exponential(b).unwrap(),
        )
        .unwrap();
        let k = build_signed_kernel(&cm).with_premium_part_zeroed();
        let r = b - gamma / c;
        let grid = SolverGrid::new(0.01, 40.0, TailClosure::Lundberg(r), 1e-10, 100_000).unwrap();
        let sol = solve_renewal(&k, c, &grid).unwrap();
        let err = sup_error(&sol, &grid, |u| gamma / (b * c) * (-(b - gamma / c) * u).exp());
        assert!(err <= 1e-3, "sup error {err}");
    }

    #[test]
    fn first_order_refinement() {
        let cm = config_a();
        let r = adjustment_exponential(1.0, 1.0, 1.0, 1.0, 0.5).unwrap().r;
        let kernel = build_signed_kernel(&cm);
        let exact = |u| ruin_prob_conditional(u, 1.0, 1.0, 1.0, 1.0, 0.5);
        let coarse = SolverGrid::new(0.04, 40.0, TailClosure::Lundberg(r), 1e-11, 100_000).unwrap();
        let fine = SolverGrid::new(0.02, 40.0, TailClosure::Lundberg(r), 1e-11, 100_000).unwrap();
        let e1 = sup_error(&solve_renewal(&kernel, 1.0, &coarse).unwrap(), &coarse, exact);
        let e2 = sup_error(&solve_renewal(&kernel, 1.0, &fine).unwrap(), &fine, exact);
        assert!(e1 / e2 >= 1.8, "ratio {}", e1 / e2);
    }

    #[test]
    fn certain_ruin_short_circuit() {
        let cm = ConditionalModel::new(
            0.0,
            1.0,
            2.0,
            0.5,
            JumpLaw::exponential(1.0).unwrap(),
            JumpLaw::exponential(1.0).unwrap(),
        )
        .unwrap();
        let grid = SolverGrid::with_defaults(None).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        assert!(sol.certain_ruin);
        assert!(sol.values().iter().all(|&v| v == 1.0));
        assert_eq!(sol.value_at(12.3), 1.0);
    }

    #[test]
    fn zero_drift_rejected() {
        let grid = SolverGrid::with_defaults(None).unwrap();
        let k = build_signed_kernel(&config_a());
        assert!(matches!(solve_renewal(&k, 0.0, &grid), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn negative_argument_is_one() {
        let cm = config_a();
        let r = adjustment_exponential(1.0, 1.0, 1.0, 1.0, 0.5).unwrap().r;
        let grid = SolverGrid::new(0.05, 20.0, TailClosure::Lundberg(r), 1e-10, 100_000).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        assert_eq!(sol.value_at(-0.5), 1.0);
        assert_eq!(sol.value_at(-1e-12), 1.0);
        assert_eq!(sol.value_at(0.0), sol.values()[0]);
    }

    #[test]
    fn zero_closure_close_near_origin() {
        let cm = config_a();
        let grid = SolverGrid::new(0.01, 40.0, TailClosure::Zero, 1e-10, 100_000).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        for j in 0..=2000 {
            let u = grid.node(j);
            assert!((sol.values()[j] - ruin_prob_conditional(u, 1.0, 1.0, 1.0, 1.0, 0.5)).abs() < 1e-3);
        }
    }

    #[test]
    fn gamma_claims_bounded_by_lundberg() {
        let cm = ConditionalModel::new(
            0.0,
            1.0,
            1.2,
            0.4,
            JumpLaw::exponential(1.0).unwrap(),
            JumpLaw::gamma(2.0, 2.0).unwrap(),
        )
        .unwrap();
        let r = crate::adjustment::adjustment_general(&cm).unwrap().r;
        let grid = SolverGrid::with_defaults(Some(r)).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        for j in 0..=grid.n() {
            let v = sol.values()[j];
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= lundberg_bound(r, grid.node(j)) + 1e-6);
        }
    }

    #[test]
    fn tilt_identity_holds_and_detects_perturbation() {
        let cm = config_a();
        let r = adjustment_exponential(1.0, 1.0, 1.0, 1.0, 0.5).unwrap().r;
        let grid = SolverGrid::new(0.01, 40.0, TailClosure::Lundberg(r), 1e-10, 100_000).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        let tilted = build_tilted_kernel(&cm, r).unwrap();
        let defect = verify_tilt_identity(&sol, &tilted, &grid).unwrap();
        assert!(defect <= 5e-3, "defect {defect}");

        let mut perturbed = sol.clone();
        perturbed.values[500] += 0.05;
        let defect = verify_tilt_identity(&perturbed, &tilted, &grid).unwrap();
        assert!(defect > 5e-3, "defect {defect}");
    }

    #[test]
    fn tilt_identity_degenerate_grid() {
        let cm = config_a();
        let r = adjustment_exponential(1.0, 1.0, 1.0, 1.0, 0.5).unwrap().r;
        let grid = SolverGrid::new(1.0, 10.0, TailClosure::Lundberg(r), 1e-10, 100_000).unwrap();
        let sol = solve_renewal(&build_signed_kernel(&cm), 1.0, &grid).unwrap();
        let tilted = build_tilted_kernel(&cm, r).unwrap();
        assert!(matches!(
            verify_tilt_identity(&sol, &tilted, &grid),
            Err(Error::DegenerateGrid(_))
        ));
    }

    #[test]
    fn grid_validation() {
        assert!(SolverGrid::new(0.0, 10.0, TailClosure::Zero, 1e-10, 10).is_err());
        assert!(SolverGrid::new(1.0, 1.0, TailClosure::Zero, 1e-10, 10).is_err());
        assert!(SolverGrid::new(0.1, 10.0, TailClosure::Lundberg(0.0), 1e-10, 10).is_err());
        assert!(SolverGrid::new(0.1, 10.0, TailClosure::Zero, 0.0, 10).is_err());
        let g = SolverGrid::with_defaults(Some(0.1)).unwrap();
        assert!((g.u_max() - 120.0).abs() < 1e-9);
        let g = SolverGrid::with_defaults(Some(0.5)).unwrap();
        assert!((g.u_max() - 40.0).abs() < 1e-9);
    }
}

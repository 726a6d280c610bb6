//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrate `f` over `[0, inf)` for a nonnegative, eventually decaying
/// integrand. The range is capped at the first power-of-two point beyond which
/// `f` stays below `cutoff`, then split into unit-ish panels.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: &F, tol: f64, cutoff: f64) -> f64 {
    let mut upper = 1.0;
    while upper < 1e7 && (f(upper).abs() > cutoff || f(0.5 * upper).abs() > cutoff) {
        upper *= 2.0;
    }
    let panels = 64usize;
    let width = upper / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = i as f64 * width;
            adaptive_simpson(f, lo, lo + width, tol / panels as f64)
        })
        .sum()
}

//! Adaptive Simpson quadrature and bracketed bisection.

use crate::error::{Error, Result};

pub const QUAD_TOL: f64 = 1e-10;
pub const QUAD_MAX_DEPTH: u32 = 40;
pub const ROOT_TOL: f64 = 1e-12;

/// `int_a^b f` by adaptive Simpson with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    sign * simpson_step(f, lo, hi, fa, fm, fb, whole, tol, QUAD_MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
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
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Root of `g` in `[lo, hi]` given a sign change, by bisection until the
/// bracket is narrower than `x_tol` or `|g| <= f_tol`.
pub fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, x_tol: f64, f_tol: f64) -> Result<f64> {
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() || glo.is_nan() || ghi.is_nan() {
        return Err(Error::InputAssumption(format!(
            "no sign change on [{lo}, {hi}] (g = {glo}, {ghi})"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let gm = g(mid);
        if gm.abs() <= f_tol || (hi - lo) <= x_tol {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `n` evenly spaced points covering `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

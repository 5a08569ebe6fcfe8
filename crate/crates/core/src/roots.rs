//! Bracketing root finders shared by the threshold code.

use crate::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
    /// Final bracket width.
    pub width: f64,
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `tol`, the
/// midpoint stops moving, or `max_iter` halvings have been made.
///
/// `f(lo)` and `f(hi)` must have opposite signs (a zero at either end is
/// accepted as the root).
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::NotBracketed(format!("empty interval [{lo}, {hi}]")));
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(Root { x: lo, iterations: 0, width: 0.0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, iterations: 0, width: 0.0 });
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NotBracketed(format!(
            "f({lo}) = {f_lo} and f({hi}) = {f_hi} do not change sign"
        )));
    }
    let lo_positive = f_lo > 0.0;
    let mut iterations = 0;
    while iterations < max_iter && hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(Root { x: mid, iterations, width: 0.0 });
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Root {
        x: lo + 0.5 * (hi - lo),
        iterations,
        width: hi - lo,
    })
}

/// Adjacent grid cells `(a, b)` over which `f` changes sign (zeros count as
/// their own sign class, so a grid point landing on a root is reported once).
pub fn sign_changes<F>(f: F, grid: &[f64]) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&x, &v) in grid.iter().zip(&values) {
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some((px, pv)) = last {
            if pv.signum() != v.signum() {
                out.push((px, x));
            }
        }
        last = Some((x, v));
    }
    out
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

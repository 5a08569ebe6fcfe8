//! Critical-point curve `r(s)` and the jump of the major similarity degree.
//!
//! A degree `s` is a stationary point of `f(s) = h(s) - r·g(s)` exactly when
//! `r = r(s) = (1/k)·((2^k-2)/s^(k-1) + s)·(ln s - ln(1-s))`. For `k >= 5`
//! the curve is S-shaped on `[0.5, 1)`: a local maximum at `s01`, an
//! inflection at `s02` and a local minimum at `s03`. Between `r(s03)` and
//! `r(s01)` the rate function has two competing maxima, and the global one
//! switches branch at `r_cr`.
//!
//! The search is restricted to `[0.5, 1)`: `h` is symmetric about one half
//! while `g(s) > g(1-s)` below it, so `f(s) <= f(1-s)` there.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{rate_f, Degree};
use crate::roots::{self, bisect, sign_changes};
use crate::{Error, Result};

/// Smallest clause length for which the S-shape (and hence the jump) is proven.
pub const MIN_PROVEN_K: u32 = 5;
/// Uniform grid size used to bracket the roots of `r'` and `r''`.
pub const SCAN_POINTS: usize = 10_000;
/// Right end of the scan and bisection interval.
pub const SCAN_UPPER: f64 = 1.0 - 1e-9;
/// Largest logit searched by the upper branch; `1 - s` is about `e^-700` there.
const MAX_LOGIT: f64 = 700.0;
/// Lower bound for user supplied root-finding tolerances.
pub const MIN_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bracket width for roots in `s`.
    pub s: f64,
    /// Bracket width for `r_cr`.
    pub r: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { s: 1e-12, r: 1e-10 }
    }
}

impl Tolerances {
    /// Same tolerance for both searches, bounded below by [`MIN_TOLERANCE`].
    pub fn uniform(tol: f64) -> Result<Self> {
        if !(tol >= MIN_TOLERANCE && tol.is_finite()) {
            return Err(Error::invalid(format!(
                "tolerance {tol} must be a finite value >= {MIN_TOLERANCE:e}"
            )));
        }
        Ok(Tolerances { s: tol, r: tol })
    }
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("clause length k = {k} must be at least 2")));
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(0.5..1.0).contains(&s) {
        return Err(Error::domain("s", s, "[0.5, 1)"));
    }
    Ok(())
}

fn coefficient(k: u32) -> f64 {
    (k as f64).exp2() - 2.0
}

/// `r` as a function of the logit of `s`.
fn r_at(k: u32, d: Degree) -> f64 {
    let kf = k as f64;
    let a = coefficient(k) * (-(kf - 1.0) * d.ln_s()).exp() + d.s();
    a * d.logit() / kf
}

/// The ratio `r` at which `s` is a critical point of the rate function.
pub fn r_of_s(k: u32, s: f64) -> Result<f64> {
    check_k(k)?;
    check_s(s)?;
    Ok(r_at(k, Degree::from_s(s)))
}

// r = A·L/k with A = c·s^(1-k) + s and L = ln s - ln(1-s).
struct ProductTerms {
    a: f64,
    a1: f64,
    a2: f64,
    l: f64,
    l1: f64,
    l2: f64,
}

fn product_terms(k: u32, s: f64) -> ProductTerms {
    let kf = k as f64;
    let c = coefficient(k);
    let t = 1.0 - s;
    ProductTerms {
        a: c * s.powf(1.0 - kf) + s,
        a1: c * (1.0 - kf) * s.powf(-kf) + 1.0,
        a2: c * kf * (kf - 1.0) * s.powf(-kf - 1.0),
        l: s.ln() - (-s).ln_1p(),
        l1: 1.0 / (s * t),
        l2: (2.0 * s - 1.0) / (s * s * t * t),
    }
}

pub fn r_prime(k: u32, s: f64) -> Result<f64> {
    check_k(k)?;
    check_s(s)?;
    let p = product_terms(k, s);
    Ok((p.a1 * p.l + p.a * p.l1) / k as f64)
}

pub fn r_double_prime(k: u32, s: f64) -> Result<f64> {
    check_k(k)?;
    check_s(s)?;
    let p = product_terms(k, s);
    Ok((p.a2 * p.l + 2.0 * p.a1 * p.l1 + p.a * p.l2) / k as f64)
}

/// `F1(s) = k(k-1)(ln s - ln(1-s))(1-s)^2 - 2(k-1)(1-s) + 2s - 1`
pub fn curvature_part(k: u32, s: f64) -> Result<f64> {
    check_k(k)?;
    check_s(s)?;
    let kf = k as f64;
    let t = 1.0 - s;
    let l = s.ln() - (-s).ln_1p();
    Ok(kf * (kf - 1.0) * l * t * t - 2.0 * (kf - 1.0) * t + 2.0 * s - 1.0)
}

/// `F(s) = F1(s) + s^k/(2^k - 2)`, which carries the sign of `r''(s)`.
pub fn curvature_indicator(k: u32, s: f64) -> Result<f64> {
    Ok(curvature_part(k, s)? + s.powi(k as i32) / coefficient(k))
}

/// Sign changes of `r''` and `r'` on the uniform scan grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub k: u32,
    pub points: usize,
    pub lo: f64,
    pub hi: f64,
    /// Grid cells where `r''` changes sign.
    pub inflection_brackets: Vec<(f64, f64)>,
    /// Grid cells where `r'` changes sign.
    pub extremum_brackets: Vec<(f64, f64)>,
}

impl ScanReport {
    pub fn scan(k: u32) -> Result<Self> {
        check_k(k)?;
        let grid = roots::linspace(0.5, SCAN_UPPER, SCAN_POINTS);
        Ok(ScanReport {
            k,
            points: SCAN_POINTS,
            lo: 0.5,
            hi: SCAN_UPPER,
            inflection_brackets: sign_changes(|s| r_double_prime(k, s).unwrap_or(f64::NAN), &grid),
            extremum_brackets: sign_changes(|s| r_prime(k, s).unwrap_or(f64::NAN), &grid),
        })
    }

    /// One inflection and two extrema, the structure needed for a jump.
    pub fn has_s_shape(&self) -> bool {
        self.inflection_brackets.len() == 1 && self.extremum_brackets.len() == 2
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scan of {} points on [{}, {}] found {} sign change(s) of r'' and {} of r'",
            self.points,
            self.lo,
            self.hi,
            self.inflection_brackets.len(),
            self.extremum_brackets.len()
        )
    }
}

fn proven_scan(k: u32) -> Result<ScanReport> {
    let report = ScanReport::scan(k)?;
    if k < MIN_PROVEN_K || !report.has_s_shape() {
        return Err(Error::Unproven {
            k,
            report: Box::new(report),
        });
    }
    Ok(report)
}

/// The unique inflection point `s02` of `r(s)` on `[0.5, 1)`.
pub fn find_inflection(k: u32) -> Result<f64> {
    find_inflection_with(k, Tolerances::default())
}

pub fn find_inflection_with(k: u32, tol: Tolerances) -> Result<f64> {
    proven_scan(k)?;
    inflection_root(k, tol)
}

fn inflection_root(k: u32, tol: Tolerances) -> Result<f64> {
    let f = |s: f64| curvature_indicator(k, s).unwrap_or(f64::NAN);
    Ok(bisect(f, 0.5, SCAN_UPPER, tol.s, roots::MAX_ITERATIONS)?.x)
}

/// Extrema and inflection of `r(s)` for one clause length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoints {
    pub k: u32,
    pub s01: f64,
    pub s02: f64,
    pub s03: f64,
    pub r_at_s01: f64,
    pub r_at_s03: f64,
}

pub fn find_extrema(k: u32) -> Result<CriticalPoints> {
    find_extrema_with(k, Tolerances::default())
}

pub fn find_extrema_with(k: u32, tol: Tolerances) -> Result<CriticalPoints> {
    let report = proven_scan(k)?;
    let s02 = inflection_root(k, tol)?;
    let rp = |s: f64| r_prime(k, s).unwrap_or(f64::NAN);
    let unproven = || Error::Unproven {
        k,
        report: Box::new(report.clone()),
    };
    if !(rp(0.5) > 0.0 && rp(s02) < 0.0 && rp(SCAN_UPPER) > 0.0) {
        return Err(unproven());
    }
    let s01 = bisect(rp, 0.5, s02, tol.s, roots::MAX_ITERATIONS)?.x;
    let s03 = bisect(rp, s02, SCAN_UPPER, tol.s, roots::MAX_ITERATIONS)?.x;
    Ok(CriticalPoints {
        k,
        s01,
        s02,
        s03,
        r_at_s01: r_of_s(k, s01)?,
        r_at_s03: r_of_s(k, s03)?,
    })
}

/// Monotone pieces of `r(s)` on `[0.5, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `s1: [0, r(s01)] -> [0.5, s01]`, increasing.
    One,
    /// `s2: [r(s03), r(s01)] -> [s01, s03]`, decreasing.
    Two,
    /// `s3: [r(s03), inf) -> [s03, 1)`, increasing.
    Three,
}

impl Branch {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Branch::One),
            2 => Ok(Branch::Two),
            3 => Ok(Branch::Three),
            _ => Err(Error::invalid(format!("branch {i} is not one of 1, 2, 3"))),
        }
    }
}

impl CriticalPoints {
    fn logit_bounds(&self, branch: Branch) -> (f64, f64) {
        let x01 = Degree::from_s(self.s01).logit();
        let x03 = Degree::from_s(self.s03).logit();
        match branch {
            Branch::One => (0.0, x01),
            Branch::Two => (x01, x03),
            Branch::Three => (x03, MAX_LOGIT),
        }
    }

    /// The unique degree on `branch` with `r(s) = r`.
    pub fn invert(&self, branch: Branch, r: f64) -> Result<Degree> {
        let k = self.k;
        let (lo, hi) = self.logit_bounds(branch);
        let (r_lo, r_hi) = match branch {
            Branch::One => (0.0, self.r_at_s01),
            Branch::Two => (self.r_at_s03, self.r_at_s01),
            Branch::Three => (self.r_at_s03, r_at(k, Degree::from_logit(MAX_LOGIT))),
        };
        if !(r >= r_lo && r <= r_hi) {
            return Err(Error::domain("r", r, format!("[{r_lo}, {r_hi}] of branch {branch:?}")));
        }
        let residual = |x: f64| r_at(k, Degree::from_logit(x)) - r;
        // Bisect to the resolution of f64; the width tolerance is zero.
        let root = bisect(residual, lo, hi, 0.0, roots::MAX_ITERATIONS)?;
        Ok(Degree::from_logit(root.x))
    }

    /// `F(r) = f(s1(r)) - f(s3(r))` on `[r(s03), r(s01)]`.
    pub fn big_f(&self, r: f64) -> Result<f64> {
        self.check_bracket(r)?;
        let s1 = self.invert(Branch::One, r)?;
        let s3 = self.invert(Branch::Three, r)?;
        Ok(s1.rate_f(self.k, r) - s3.rate_f(self.k, r))
    }

    /// `F'(r) = ln(2^k - 2 + s1^k) - ln(2^k - 2 + s3^k)`.
    pub fn big_f_prime(&self, r: f64) -> Result<f64> {
        self.check_bracket(r)?;
        let s1 = self.invert(Branch::One, r)?;
        let s3 = self.invert(Branch::Three, r)?;
        Ok(s3.log_penalty_g(self.k) - s1.log_penalty_g(self.k))
    }

    fn check_bracket(&self, r: f64) -> Result<()> {
        if !(r >= self.r_at_s03 && r <= self.r_at_s01) {
            return Err(Error::domain(
                "r",
                r,
                format!("[{}, {}]", self.r_at_s03, self.r_at_s01),
            ));
        }
        Ok(())
    }

    pub fn find_r_cr(&self, tol: Tolerances) -> Result<Thresholds> {
        let k = self.k;
        let f = |r: f64| self.big_f(r).unwrap_or(f64::NAN);
        let root = bisect(f, self.r_at_s03, self.r_at_s01, tol.r, roots::MAX_ITERATIONS)?;
        let r_cr = root.x;
        let s1 = self.invert(Branch::One, r_cr)?;
        let s3 = self.invert(Branch::Three, r_cr)?;
        Ok(Thresholds {
            k,
            r_cr,
            s1cr: s1.s(),
            s3cr: s3.s(),
            s3cr_complement: s3.complement(),
            bracket_lo: self.r_at_s03,
            bracket_hi: self.r_at_s01,
            residual: (s1.rate_f(k, r_cr) - s3.rate_f(k, r_cr)).abs(),
            iterations: root.iterations,
        })
    }
}

pub fn invert_branch(k: u32, branch: Branch, r: f64) -> Result<f64> {
    Ok(find_extrema(k)?.invert(branch, r)?.s())
}

pub fn big_f(k: u32, r: f64) -> Result<f64> {
    find_extrema(k)?.big_f(r)
}

pub fn big_f_prime(k: u32, r: f64) -> Result<f64> {
    find_extrema(k)?.big_f_prime(r)
}

/// Location of the jump and the two degrees it connects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub k: u32,
    pub r_cr: f64,
    pub s1cr: f64,
    pub s3cr: f64,
    /// `1 - s3cr`, kept separately since `s3cr` approaches one quickly in `k`.
    pub s3cr_complement: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// `|f(s1cr) - f(s3cr)|` at `r_cr`.
    pub residual: f64,
    pub iterations: usize,
}

pub fn find_r_cr(k: u32) -> Result<Thresholds> {
    PhaseDiagram::new(k, Tolerances::default()).map(|d| d.thresholds)
}

/// Which local maximum of `f` is global.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Active {
    S1,
    S3,
    /// Exactly at `r_cr` both maxima tie.
    Both,
}

impl Active {
    pub fn label(self) -> &'static str {
        match self {
            Active::S1 => "s1",
            Active::S3 => "s3",
            Active::Both => "both",
        }
    }
}

/// Major similarity degree at one ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub r: f64,
    /// Global maximizer of `f`; on the tie at `r_cr` this is the `s1` value.
    pub smj: f64,
    /// `1 - smj`, accurate when `smj` rounds to one.
    pub smj_complement: f64,
    /// The `s3` value when both maxima tie.
    pub smj_alt: Option<f64>,
    pub active: Active,
    /// `f` at the `s1` local maximum, when it exists.
    pub f_s1: Option<f64>,
    /// `f` at the `s3` local maximum, when it exists.
    pub f_s3: Option<f64>,
}

/// Critical points and threshold for one `k`, ready to answer `s_mj(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub critical: CriticalPoints,
    pub thresholds: Thresholds,
    pub tolerances: Tolerances,
}

impl PhaseDiagram {
    pub fn new(k: u32, tolerances: Tolerances) -> Result<Self> {
        let critical = find_extrema_with(k, tolerances)?;
        let thresholds = critical.find_r_cr(tolerances)?;
        Ok(PhaseDiagram {
            critical,
            thresholds,
            tolerances,
        })
    }

    pub fn k(&self) -> u32 {
        self.critical.k
    }

    pub fn major_similarity_degree(&self, r: f64) -> Result<CurvePoint> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain("r", r, "[0, inf)"));
        }
        let k = self.k();
        let cp = &self.critical;
        let point = |d: Degree, active, f_s1, f_s3| CurvePoint {
            r,
            smj: d.s(),
            smj_complement: d.complement(),
            smj_alt: None,
            active,
            f_s1,
            f_s3,
        };
        if r < cp.r_at_s03 {
            let s1 = cp.invert(Branch::One, r)?;
            return Ok(point(s1, Active::S1, Some(s1.rate_f(k, r)), None));
        }
        if r > cp.r_at_s01 {
            let s3 = cp.invert(Branch::Three, r)?;
            return Ok(point(s3, Active::S3, None, Some(s3.rate_f(k, r))));
        }
        let s1 = cp.invert(Branch::One, r)?;
        let s3 = cp.invert(Branch::Three, r)?;
        let (f1, f3) = (s1.rate_f(k, r), s3.rate_f(k, r));
        if (r - self.thresholds.r_cr).abs() <= self.tolerances.r {
            let mut p = point(s1, Active::Both, Some(f1), Some(f3));
            p.smj_alt = Some(s3.s());
            return Ok(p);
        }
        if f1 > f3 {
            Ok(point(s1, Active::S1, Some(f1), Some(f3)))
        } else {
            Ok(point(s3, Active::S3, Some(f1), Some(f3)))
        }
    }

    /// `s_mj` on the grid `r_min, r_min + step, …` up to `r_max`.
    pub fn curve(&self, r_min: f64, r_max: f64, step: f64) -> Result<Vec<CurvePoint>> {
        curve_grid(r_min, r_max, step)?
            .into_par_iter()
            .map(|r| self.major_similarity_degree(r))
            .collect()
    }
}

pub fn major_similarity_degree(k: u32, r: f64) -> Result<CurvePoint> {
    PhaseDiagram::new(k, Tolerances::default())?.major_similarity_degree(r)
}

pub fn curve(k: u32, r_min: f64, r_max: f64, step: f64) -> Result<Vec<CurvePoint>> {
    let grid = curve_grid(r_min, r_max, step)?;
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    PhaseDiagram::new(k, Tolerances::default())?.curve(r_min, r_max, step)
}

/// Grid `r_min + i·step` for all `i` with the point not beyond `r_max`
/// (up to rounding); empty when `r_min >= r_max`.
pub fn curve_grid(r_min: f64, r_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain("step", step, "(0, inf)"));
    }
    if !(r_min >= 0.0 && r_min.is_finite() && r_max.is_finite()) {
        return Err(Error::domain("r_min", r_min, "[0, inf)"));
    }
    if r_min >= r_max {
        return Ok(Vec::new());
    }
    let count = ((r_max - r_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| r_min + step * i as f64).collect())
}

/// Indices `i` where the active maximum switches between `points[i-1]` and
/// `points[i]`.
pub fn jump_indices(points: &[CurvePoint]) -> Vec<usize> {
    (1..points.len())
        .filter(|&i| points[i - 1].active != points[i].active)
        .filter(|&i| points[i - 1].active != Active::Both)
        .collect()
}

/// Brute-force maximizer of `f` on a uniform grid over `[lo, hi]`.
pub fn grid_argmax(k: u32, r: f64, lo: f64, hi: f64, points: usize) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..points {
        let s = if i + 1 == points { hi } else { lo + step * i as f64 };
        let v = rate_f(k, r, s);
        if v > best.1 {
            best = (s, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{log_penalty_g_prime, rate_f_prime};

    #[test]
    fn r_of_s_examples() {
        assert_eq!(r_of_s(5, 0.5).unwrap(), 0.0);
        let expected = (30.0 / 0.9f64.powi(4) + 0.9) * 9f64.ln() / 5.0;
        assert!((r_of_s(5, 0.9).unwrap() - expected).abs() < 1e-12);
        assert!((r_of_s(5, 0.9).unwrap() - 20.489_003_646_016_72).abs() < 1e-10);
        assert!(r_of_s(5, 1.0).is_err());
        assert!(r_of_s(5, 0.49).is_err());
        assert!(r_of_s(1, 0.7).is_err());
    }

    #[test]
    fn r_grows_without_bound() {
        let near: Vec<f64> = [1e-3, 1e-6, 1e-9, 1e-12, 1e-15]
            .iter()
            .map(|eps| r_of_s(5, 1.0 - eps).unwrap())
            .collect();
        assert!(near.windows(2).all(|w| w[1] > w[0] + 10.0), "{near:?}");
        // Leading behavior (2^k - 1)/k · ln(1/(1-s)).
        assert!((near[1] - 6.2 * 1e6f64.ln()).abs() < 0.01);
        let deep = Degree::from_logit(200.0);
        assert!(r_at(5, deep) > 1e3);
    }

    #[test]
    fn derivative_limits() {
        for k in 5..=10 {
            assert!(r_prime(k, 0.5).unwrap() > 0.0);
            assert!(r_prime(k, 1.0 - 1e-6).unwrap() > 1e6);
            assert!(curvature_indicator(k, 0.5).unwrap() < 0.0);
            assert!(curvature_indicator(k, 1.0 - 1e-6).unwrap() > 0.0);
        }
    }

    #[test]
    fn finite_difference_at_point_seven() {
        let (s, h) = (0.7, 1e-6);
        for k in 2..=10 {
            let fd = (r_of_s(k, s + h).unwrap() - r_of_s(k, s - h).unwrap()) / (2.0 * h);
            let exact = r_prime(k, s).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-6, "k={k} fd={fd} exact={exact}");
        }
    }

    #[test]
    fn curvature_indicator_factorization() {
        for k in 5..=10 {
            for i in 0..50 {
                let s = 0.5 + 0.49 * i as f64 / 50.0;
                let factor = coefficient(k) / (s.powi(k as i32 + 1) * (1.0 - s).powi(2));
                let via_f = curvature_indicator(k, s).unwrap() * factor / k as f64;
                let direct = r_double_prime(k, s).unwrap();
                assert!((via_f - direct).abs() <= 1e-9 * direct.abs().max(1.0), "k={k} s={s}");
            }
        }
    }

    #[test]
    fn inflection_bisection_budget() {
        let f = |s: f64| curvature_indicator(5, s).unwrap();
        let root = bisect(f, 0.5, 1.0 - 1e-9, 1e-12, roots::MAX_ITERATIONS).unwrap();
        assert!(root.iterations <= 60);
        let s02 = find_inflection(5).unwrap();
        assert!(s02 > 0.5 && s02 < 1.0);
        assert!(curvature_indicator(5, s02).unwrap().abs() < 1e-9);
    }

    #[test]
    fn small_k_is_refused_with_report() {
        for k in 2..5 {
            match find_extrema(k) {
                Err(Error::Unproven { k: got, report }) => {
                    assert_eq!(got, k);
                    assert_eq!(report.points, SCAN_POINTS);
                    assert!(report.extremum_brackets.is_empty());
                }
                other => panic!("k={k}: {other:?}"),
            }
        }
        assert!(find_inflection(4).is_err());
        assert!(r_of_s(3, 0.8).is_ok());
    }

    #[test]
    fn critical_points_ordering() {
        for k in 5..=10 {
            let cp = find_extrema(k).unwrap();
            assert!(0.5 < cp.s01 && cp.s01 < cp.s02 && cp.s02 < cp.s03 && cp.s03 < 1.0);
            assert!(cp.r_at_s03 < cp.r_at_s01);
            assert!(r_prime(k, cp.s02).unwrap() < 0.0);
        }
    }

    #[test]
    fn branch_endpoints() {
        let cp = find_extrema(5).unwrap();
        assert_eq!(cp.invert(Branch::One, 0.0).unwrap().s(), 0.5);
        assert!((cp.invert(Branch::One, cp.r_at_s01).unwrap().s() - cp.s01).abs() < 1e-15);
        assert!((cp.invert(Branch::Three, cp.r_at_s03).unwrap().s() - cp.s03).abs() < 1e-15);
        assert!(cp.invert(Branch::One, cp.r_at_s01 + 1.0).is_err());
        assert!(cp.invert(Branch::Two, cp.r_at_s03 - 1e-3).is_err());
        assert!(cp.invert(Branch::Three, -1.0).is_err());
        assert!(Branch::from_index(4).is_err());
    }

    #[test]
    fn big_f_signs() {
        let cp = find_extrema(5).unwrap();
        assert!(cp.big_f(cp.r_at_s03).unwrap() > 0.0);
        assert!(cp.big_f(cp.r_at_s01).unwrap() < 0.0);
        assert!(cp.big_f(cp.r_at_s01 + 1.0).is_err());
    }

    #[test]
    fn rate_derivative_factorization() {
        // f'(s) = g'(s)·(r(s) - r)
        for k in [5u32, 7] {
            for i in 1..40 {
                let s = 0.5 + 0.49 * i as f64 / 40.0;
                let r = 12.5;
                let lhs = rate_f_prime(k, r, s);
                let rhs = log_penalty_g_prime(k, s) * (r_of_s(k, s).unwrap() - r);
                assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn grid_construction() {
        assert!(curve_grid(1.0, 1.0, 0.1).unwrap().is_empty());
        assert_eq!(curve_grid(0.0, 1.0, 0.25).unwrap().len(), 5);
        assert!(curve_grid(0.0, 1.0, 0.0).is_err());
        assert!(curve(5, 3.0, 3.0, 0.1).unwrap().is_empty());
    }

    #[test]
    fn zero_ratio_is_half() {
        let p = major_similarity_degree(5, 0.0).unwrap();
        assert_eq!(p.smj, 0.5);
        assert_eq!(p.active, Active::S1);
    }
}

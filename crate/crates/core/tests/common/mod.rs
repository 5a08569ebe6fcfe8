#![allow(dead_code)]

use ksat_smj::analytic::rate_f;

/// Reference values computed independently at 50-digit precision.
pub struct Golden {
    pub k: u32,
    pub s01: f64,
    pub s02: f64,
    pub s03: f64,
    pub r_at_s01: f64,
    pub r_at_s03: f64,
    pub r_cr: f64,
    pub s1cr: f64,
    pub s3cr: f64,
}

pub const GOLDEN: [Golden; 6] = [
    Golden { k: 5, s01: 0.6958219212491561, s02: 0.772584698464447, s03: 0.858846956061829, r_at_s01: 21.29469791770858, r_at_s03: 20.22354330326987, r_cr: 20.621632772859527, s1cr: 0.6389651420582735, s3cr: 0.9078484541694749 },
    Golden { k: 6, s01: 0.6331882674829614, s02: 0.7393820930490748, s03: 0.9147742064252197, r_at_s01: 55.482446887042286, r_at_s03: 38.64757805657087, r_cr: 42.898900641915425, s1cr: 0.553857369843396, s3cr: 0.9723404790694545 },
    Golden { k: 7, s01: 0.6036245239458329, s02: 0.6996778363768171, s03: 0.9384672971290495, r_at_s01: 156.5421371795073, r_at_s03: 72.15678851109273, r_cr: 87.31008091986298, s1cr: 0.5255176025871133, s3cr: 0.9891103496354754 },
    Golden { k: 8, s01: 0.5852803222902436, s02: 0.6677922635829933, s03: 0.9520528020482666, r_at_s01: 464.9369204410502, r_at_s03: 134.19156689357516, r_cr: 176.06055047144932, s1cr: 0.5129503066925116, s3cr: 0.9952404727290488 },
    Golden { k: 9, s01: 0.572600968052754, s02: 0.6439620505731406, s03: 0.9608980284012757, r_at_s01: 1434.1662436677223, r_at_s03: 249.96751359000842, r_cr: 353.52215904996456, s1cr: 0.506785710489995, s3cr: 0.9978019967828591 },
    Golden { k: 10, s01: 0.5632622423308952, s02: 0.6258861852990762, s03: 0.9671135062947208, r_at_s01: 4556.115994498743, r_at_s03: 467.235346695029, r_cr: 708.4228624031184, s1cr: 0.5036110272306635, s3cr: 0.9989521773093863 },
];

pub fn golden(k: u32) -> &'static Golden {
    GOLDEN.iter().find(|g| g.k == k).expect("golden k")
}

/// `|a - b| <= tol · max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Golden-section maximum of `f` on `[lo, hi]`, returning `(argmax, max)`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    if fa > fb { (a, fa) } else { (b, fb) }
}

/// Threshold found only from values of `f`: the local minimum on
/// `[s01, s03]` splits `[0.5, 1)` into two unimodal pieces whose maxima are
/// located by golden-section search, and `r` is bisected on their difference.
pub fn r_cr_by_direct_maximization(k: u32, s01: f64, s03: f64, r_lo: f64, r_hi: f64) -> (f64, f64, f64) {
    let upper = 1.0 - 1e-15;
    let diff = |r: f64| {
        let (split, _) = golden_max(|s| -rate_f(k, r, s), s01, s03);
        let (s1, f1) = golden_max(|s| rate_f(k, r, s), 0.5, split);
        let (s3, f3) = golden_max(|s| rate_f(k, r, s), split, upper);
        (f1 - f3, s1, s3)
    };
    let (mut lo, mut hi) = (r_lo, r_hi);
    assert!(diff(lo).0 > 0.0 && diff(hi).0 < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let (_, s1, s3) = diff(r);
    (r, s1, s3)
}

/// Central difference with step `h`.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

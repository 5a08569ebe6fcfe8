//! First-moment formulas for pairs of satisfying assignments.
//!
//! Everything that can grow like `e^{±n·const}` is carried as a natural
//! logarithm ([`LogValue`]); linear values are derived views that may
//! overflow to infinity.
//!
//! Exact operations take an integer similarity number `S`, analytic ones a
//! real similarity degree `s`. Curve code converts with `S = round(s·n)`.

use std::f64::consts::{LN_2, PI};

use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

/// Natural logarithm of a nonnegative quantity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LogValue(pub f64);

impl LogValue {
    pub const ONE: LogValue = LogValue(0.0);

    pub fn ln(self) -> f64 {
        self.0
    }

    /// Linear view; `+inf` when the quantity is beyond `f64`.
    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn overflows(self) -> bool {
        self.value().is_infinite()
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue(self.0 + rhs.0)
    }
}

/// Parameters of the random k-SAT model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub k: u32,
    pub n: u32,
    pub m: u64,
    pub r: f64,
}

impl ModelParams {
    pub fn new(k: u32, n: u32, m: u64) -> Result<Self> {
        check_kn(k, n)?;
        Ok(ModelParams {
            k,
            n,
            m,
            r: m as f64 / n as f64,
        })
    }

    /// `m = round(r·n)`; the stored `r` is the requested ratio.
    pub fn from_ratio(k: u32, n: u32, r: f64) -> Result<Self> {
        check_kn(k, n)?;
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain("r", r, "[0, inf)"));
        }
        Ok(ModelParams {
            k,
            n,
            m: clauses_for_ratio(r, n),
            r,
        })
    }
}

pub fn clauses_for_ratio(r: f64, n: u32) -> u64 {
    (r * n as f64).round() as u64
}

fn check_kn(k: u32, n: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("clause length k must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("variable count n must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "clause length k = {k} exceeds variable count n = {n}"
        )));
    }
    Ok(())
}

fn check_similarity(n: u32, s_num: u32) -> Result<()> {
    if s_num > n {
        return Err(Error::invalid(format!(
            "similarity number S = {s_num} exceeds n = {n}"
        )));
    }
    Ok(())
}

/// An integer similarity number together with the variable count it refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimilarityPoint {
    pub number: u32,
    pub n: u32,
}

impl SimilarityPoint {
    pub fn new(number: u32, n: u32) -> Result<Self> {
        check_similarity(n, number)?;
        Ok(SimilarityPoint { number, n })
    }

    /// Nearest integer point to a real degree `s`.
    pub fn nearest(s: f64, n: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::domain("s", s, "[0, 1]"));
        }
        Ok(SimilarityPoint {
            number: (s * n as f64).round() as u32,
            n,
        })
    }

    pub fn degree(self) -> f64 {
        self.number as f64 / self.n as f64
    }
}

/// Number of coordinates on which two assignments agree.
pub fn similarity_number(a: &[bool], b: &[bool]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x == y).count())
}

pub fn similarity_degree(a: &[bool], b: &[bool]) -> Result<f64> {
    if a.is_empty() && b.is_empty() {
        return Err(Error::invalid("similarity degree needs n >= 1"));
    }
    Ok(similarity_number(a, b)? as f64 / a.len() as f64)
}

/// Probability that one fixed assignment satisfies `m` random k-clauses.
pub fn single_sat_probability(k: u32, m: u64) -> LogValue {
    if m == 0 {
        return LogValue::ONE;
    }
    LogValue(m as f64 * (-pow2_neg(k)).ln_1p())
}

fn pow2_neg(k: u32) -> f64 {
    (-(k as f64)).exp2()
}

/// `S(S-1)…(S-k+1) / (n(n-1)…(n-k+1))`, zero once a factor vanishes.
fn falling_ratio(n: u32, k: u32, s_num: u32) -> f64 {
    if s_num < k {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (s_num - i) as f64 / (n - i) as f64)
}

/// Probability that a single uniformly random clause is satisfied by both
/// members of a pair agreeing on exactly `s_num` of `n` variables.
pub fn clause_pair_agreement_probability(n: u32, k: u32, s_num: u32) -> Result<f64> {
    check_kn(k, n)?;
    check_similarity(n, s_num)?;
    let q = falling_ratio(n, k, s_num);
    Ok(1.0 - (2.0 - q) * pow2_neg(k))
}

fn ln_clause_pair_agreement(n: u32, k: u32, s_num: u32) -> f64 {
    let q = falling_ratio(n, k, s_num);
    (-(2.0 - q) * pow2_neg(k)).ln_1p()
}

fn falling_factorial(x: u32, k: u32) -> Option<u128> {
    if x < k {
        return Some(0);
    }
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul((x - i) as u128))
}

/// The same per-clause probability as an exact rational,
/// `((2^k - 2)·(n)_k + (S)_k) / (2^k·(n)_k)`.
pub fn clause_pair_agreement_ratio(n: u32, k: u32, s_num: u32) -> Result<Ratio<u128>> {
    check_kn(k, n)?;
    check_similarity(n, s_num)?;
    let overflow = || Error::Overflow(format!("falling factorial ({n})_{k} does not fit in u128"));
    let pow = 1u128.checked_shl(k).filter(|_| k < 127).ok_or_else(overflow)?;
    let ff_n = falling_factorial(n, k).ok_or_else(overflow)?;
    let ff_s = falling_factorial(s_num, k).ok_or_else(overflow)?;
    let num = (pow - 2)
        .checked_mul(ff_n)
        .and_then(|x| x.checked_add(ff_s))
        .ok_or_else(overflow)?;
    let den = pow.checked_mul(ff_n).ok_or_else(overflow)?;
    Ok(Ratio::new(num, den))
}

/// Probability that a pair with similarity number `s_num` satisfies a random
/// formula with `m` clauses (finite-n formula).
pub fn pair_sat_probability_exact(n: u32, k: u32, m: u64, s_num: u32) -> Result<LogValue> {
    check_kn(k, n)?;
    check_similarity(n, s_num)?;
    if m == 0 {
        return Ok(LogValue::ONE);
    }
    Ok(LogValue(m as f64 * ln_clause_pair_agreement(n, k, s_num)))
}

/// Large-n estimate `σ(s)·exp(-n·r·g(s))` of the pair satisfaction probability.
pub fn pair_sat_probability_asymptotic(k: u32, r: f64, s: f64, n: u32) -> LogValue {
    LogValue(rho(k, s) - n as f64 * r * log_penalty_g(k, s))
}

/// `2^n·C(n, S)`: ordered assignment pairs (self-pairs included) with
/// similarity number `S`.
pub fn pairs_count_exact(n: u32, s_num: u32) -> Result<u128> {
    check_similarity(n, s_num)?;
    let overflow = || Error::Overflow(format!("2^{n}·C({n},{s_num}) does not fit in u128"));
    let mut binom: u128 = 1;
    let j = s_num.min(n - s_num);
    for i in 0..j {
        binom = binom.checked_mul((n - i) as u128).ok_or_else(overflow)? / (i + 1) as u128;
    }
    1u128
        .checked_shl(n)
        .filter(|_| n < 128)
        .and_then(|p| p.checked_mul(binom))
        .ok_or_else(overflow)
}

pub fn ln_binomial(n: u32, j: u32) -> f64 {
    debug_assert!(j <= n);
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(j as f64 + 1.0) - libm::lgamma((n - j) as f64 + 1.0)
}

/// Log form of [`pairs_count_exact`], via log-gamma.
pub fn ln_pairs_count(n: u32, s_num: u32) -> Result<LogValue> {
    check_similarity(n, s_num)?;
    Ok(LogValue(n as f64 * LN_2 + ln_binomial(n, s_num)))
}

/// Stirling estimate `τ(n,s)·exp(n·h(s))` of the pair count.
pub fn pairs_count_asymptotic(n: u32, s: f64) -> LogValue {
    LogValue(tau(n, s).ln() + n as f64 * entropy_h(s))
}

/// Expected number of satisfying ordered pairs with similarity number `s_num`.
pub fn expected_sat_pairs_exact(n: u32, k: u32, m: u64, s_num: u32) -> Result<LogValue> {
    Ok(ln_pairs_count(n, s_num)? * pair_sat_probability_exact(n, k, m, s_num)?)
}

/// Large-n estimate `φ(s)·exp(n·f(s))` with `φ = σ·τ`.
pub fn expected_sat_pairs_asymptotic(k: u32, r: f64, n: u32, s: f64) -> LogValue {
    LogValue(rho(k, s) + tau(n, s).ln() + n as f64 * rate_f(k, r, s))
}

fn is_endpoint(s: f64) -> bool {
    s == 0.0 || s == 1.0
}

/// `h(s) = ln 2 - s ln s - (1-s) ln(1-s)`, with `h = ln 2` at `s ∈ {0, 1}`.
pub fn entropy_h(s: f64) -> f64 {
    if is_endpoint(s) {
        return LN_2;
    }
    LN_2 - s * s.ln() - (1.0 - s) * (-s).ln_1p()
}

/// `g(s) = ln 2^k - ln(2^k - 2 + s^k)`.
pub fn log_penalty_g(k: u32, s: f64) -> f64 {
    -((s.powi(k as i32) - 2.0) * pow2_neg(k)).ln_1p()
}

pub fn rho(k: u32, s: f64) -> f64 {
    let kf = k as f64;
    let sk = s.powi(k as i32);
    let skm1 = s.powi(k as i32 - 1);
    kf * (kf - 1.0) * (sk - skm1) / (2.0 * (kf.exp2() - 2.0 + sk))
}

pub fn sigma(k: u32, s: f64) -> f64 {
    rho(k, s).exp()
}

/// Polynomial prefactor of the Stirling estimate; `1` at `s ∈ {0, 1}`.
pub fn tau(n: u32, s: f64) -> f64 {
    if is_endpoint(s) {
        return 1.0;
    }
    1.0 / (2.0 * PI * n as f64 * s * (1.0 - s)).sqrt()
}

/// Exponential growth rate `f(s) = h(s) - r·g(s)` of the expected number of
/// satisfying pairs at similarity degree `s`.
pub fn rate_f(k: u32, r: f64, s: f64) -> f64 {
    entropy_h(s) - r * log_penalty_g(k, s)
}

/// `h'(s) = ln(1-s) - ln s`
pub fn entropy_h_prime(s: f64) -> f64 {
    (-s).ln_1p() - s.ln()
}

/// `g'(s) = -k s^(k-1) / (2^k - 2 + s^k)`, negative on `(0, 1]`.
pub fn log_penalty_g_prime(k: u32, s: f64) -> f64 {
    let kf = k as f64;
    -kf * s.powi(k as i32 - 1) / (kf.exp2() - 2.0 + s.powi(k as i32))
}

pub fn rate_f_prime(k: u32, r: f64, s: f64) -> f64 {
    entropy_h_prime(s) - r * log_penalty_g_prime(k, s)
}

/// All rate-function ingredients at one `(k, r, n, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFunctions {
    pub h: f64,
    pub g: f64,
    pub rho: f64,
    pub tau: f64,
    pub f: f64,
}

impl RateFunctions {
    pub fn evaluate(k: u32, r: f64, n: u32, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::domain("s", s, "[0, 1]"));
        }
        let h = entropy_h(s);
        let g = log_penalty_g(k, s);
        Ok(RateFunctions {
            h,
            g,
            rho: rho(k, s),
            tau: tau(n, s),
            f: h - r * g,
        })
    }
}

/// A similarity degree carried by its logit `x = ln(s/(1-s))`.
///
/// Near `s = 1` the critical-point curve grows only like `ln(1/(1-s))`, so
/// for large `k` the relevant maxima sit at `1 - s` far below `f64`
/// resolution around one. The logit keeps both `s` and `1 - s` accurate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Degree {
    logit: f64,
}

impl Degree {
    pub fn from_logit(logit: f64) -> Self {
        Degree { logit }
    }

    /// Requires `0 < s < 1`.
    pub fn from_s(s: f64) -> Self {
        Degree {
            logit: s.ln() - (-s).ln_1p(),
        }
    }

    pub fn logit(self) -> f64 {
        self.logit
    }

    pub fn s(self) -> f64 {
        1.0 / (1.0 + (-self.logit).exp())
    }

    /// `1 - s`, accurate even when `s` rounds to one.
    pub fn complement(self) -> f64 {
        1.0 / (1.0 + self.logit.exp())
    }

    /// `ln s`
    pub fn ln_s(self) -> f64 {
        -softplus(-self.logit)
    }

    pub fn entropy_h(self) -> f64 {
        // -s ln s - (1-s) ln(1-s) = softplus(-|x|) + |x|·sigmoid(-|x|)
        let a = self.logit.abs();
        LN_2 + (-a).exp().ln_1p() + a / (1.0 + a.exp())
    }

    /// `s^k`
    pub fn pow(self, k: u32) -> f64 {
        (k as f64 * self.ln_s()).exp()
    }

    pub fn log_penalty_g(self, k: u32) -> f64 {
        -((self.pow(k) - 2.0) * pow2_neg(k)).ln_1p()
    }

    pub fn rate_f(self, k: u32, r: f64) -> f64 {
        self.entropy_h() - r * self.log_penalty_g(k)
    }
}

fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

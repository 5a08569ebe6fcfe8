use rayon::prelude::*;
use serde::Serialize;

use super::formula::{trial_formula, Assignment};
use super::solve::solution_patterns;
use crate::analytic::similarity_number;
use crate::{Error, Result};

/// Above this many solutions the quadratic pair loop is refused.
pub const MAX_HISTOGRAM_SOLUTIONS: usize = 200_000;

/// Ordered pairs of solutions (self-pairs included) by similarity number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairHistogram {
    /// `counts[S]` for `S = 0..=n`.
    pub counts: Vec<u64>,
    pub num_solutions: u64,
}

impl PairHistogram {
    pub fn n(&self) -> u32 {
        self.counts.len() as u32 - 1
    }

    pub fn total_pairs(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }
}

fn check_pair_budget(len: usize) -> Result<()> {
    if len > MAX_HISTOGRAM_SOLUTIONS {
        return Err(Error::Budget(format!(
            "{len} solutions exceed the pair-histogram limit of {MAX_HISTOGRAM_SOLUTIONS}; \
             use more clauses or fewer variables"
        )));
    }
    Ok(())
}

pub(crate) fn histogram_from_patterns(patterns: &[u32], n: u32) -> Result<PairHistogram> {
    check_pair_budget(patterns.len())?;
    let mut counts = vec![0u64; n as usize + 1];
    counts[n as usize] = patterns.len() as u64;
    for (i, &a) in patterns.iter().enumerate() {
        for &b in &patterns[i + 1..] {
            counts[(n - (a ^ b).count_ones()) as usize] += 2;
        }
    }
    Ok(PairHistogram {
        counts,
        num_solutions: patterns.len() as u64,
    })
}

/// Histogram of `similarity_number(a, b)` over all ordered pairs `(a, b)` of
/// distinct solutions, self-pairs included.
pub fn pair_similarity_histogram(solutions: &[Assignment], n: u32) -> Result<PairHistogram> {
    if let Some(bad) = solutions.iter().find(|a| a.len() != n as usize) {
        return Err(Error::LengthMismatch {
            left: bad.len(),
            right: n as usize,
        });
    }
    if n <= 32 {
        let patterns: Vec<u32> = solutions
            .iter()
            .map(|a| a.pattern().unwrap_or_default() as u32)
            .collect();
        return histogram_from_patterns(&patterns, n);
    }
    check_pair_budget(solutions.len())?;
    let mut counts = vec![0u64; n as usize + 1];
    for a in solutions {
        for b in solutions {
            counts[similarity_number(a, b)?] += 1;
        }
    }
    Ok(PairHistogram {
        counts,
        num_solutions: solutions.len() as u64,
    })
}

/// Per-bucket sample mean and standard error of the pair histogram over
/// independent random formulas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramStats {
    pub n: u32,
    pub k: u32,
    pub m: u64,
    pub trials: u64,
    pub seed: u64,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub mean_solutions: f64,
}

/// Averages [`pair_similarity_histogram`] over `trials` formulas, trial `t`
/// drawing from substream `(seed, t)`.
///
/// Trials run in parallel; the aggregate is an exact integer sum, so the
/// result does not depend on scheduling.
pub fn monte_carlo_expected_histogram(
    n: u32,
    k: u32,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<HistogramStats> {
    if trials < 2 {
        return Err(Error::invalid("need at least two trials for a standard error"));
    }
    let len = n as usize + 1;
    let zero = || (vec![0u128; len], vec![0u128; len], 0u128);
    let (sum, sum_sq, solutions) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let formula = trial_formula(n, k, m, seed, t)?;
            histogram_from_patterns(&solution_patterns(&formula)?, n)
        })
        .try_fold(zero, |(mut s, mut q, sols), h| {
            let h = h?;
            for (i, &c) in h.counts.iter().enumerate() {
                s[i] += c as u128;
                q[i] += c as u128 * c as u128;
            }
            Ok::<_, Error>((s, q, sols + h.num_solutions as u128))
        })
        .try_reduce(zero, |(mut s, mut q, a), (s2, q2, b)| {
            for i in 0..len {
                s[i] += s2[i];
                q[i] += q2[i];
            }
            Ok((s, q, a + b))
        })?;
    let t = trials as u128;
    let tf = trials as f64;
    let mean = sum.iter().map(|&s| s as f64 / tf).collect();
    // SE^2 = (T·Σx² - (Σx)²) / (T²·(T-1)), numerator kept exact.
    let std_error = sum
        .iter()
        .zip(&sum_sq)
        .map(|(&s, &q)| {
            let spread = t * q - s * s;
            (spread as f64 / (tf * tf * (tf - 1.0))).sqrt()
        })
        .collect();
    Ok(HistogramStats {
        n,
        k,
        m,
        trials,
        seed,
        mean,
        std_error,
        mean_solutions: solutions as f64 / tf,
    })
}

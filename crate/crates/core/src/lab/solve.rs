use rayon::prelude::*;
use serde::Serialize;

use super::formula::{trial_formula, Assignment, Formula};
use crate::analytic::clauses_for_ratio;
use crate::{Error, Result};

/// Largest variable count for exhaustive enumeration (2^26 assignments).
pub const MAX_ENUMERATE_VARS: u32 = 26;

/// `true` iff every clause has a true literal.
pub fn evaluate(formula: &Formula, assignment: &Assignment) -> Result<bool> {
    let n = formula.num_vars() as usize;
    if assignment.len() != n {
        return Err(Error::LengthMismatch {
            left: assignment.len(),
            right: n,
        });
    }
    match assignment.pattern() {
        Some(x) => Ok(satisfies(&masks(formula), x)),
        None => Ok(formula.clauses().iter().all(|c| c.is_satisfied_by(assignment))),
    }
}

fn masks(formula: &Formula) -> Vec<(u64, u64)> {
    formula.clauses().iter().map(|c| c.masks()).collect()
}

fn satisfies(masks: &[(u64, u64)], x: u64) -> bool {
    masks.iter().all(|&(pos, neg)| (x & pos) | (!x & neg) != 0)
}

fn check_budget(formula: &Formula) -> Result<()> {
    let n = formula.num_vars();
    if n > MAX_ENUMERATE_VARS {
        return Err(Error::Budget(format!(
            "enumerating 2^{n} assignments exceeds the limit of n <= {MAX_ENUMERATE_VARS}; \
             use fewer variables"
        )));
    }
    Ok(())
}

/// Bit patterns of all solutions in ascending order (variable `i` is bit `i`).
pub fn solution_patterns(formula: &Formula) -> Result<Vec<u32>> {
    check_budget(formula)?;
    let masks = masks(formula);
    let total = 1u64 << formula.num_vars();
    Ok((0..total)
        .filter(|&x| satisfies(&masks, x))
        .map(|x| x as u32)
        .collect())
}

pub fn enumerate_solutions(formula: &Formula) -> Result<Vec<Assignment>> {
    let n = formula.num_vars();
    Ok(solution_patterns(formula)?
        .into_iter()
        .map(|x| Assignment::from_pattern(x as u64, n))
        .collect())
}

pub fn count_solutions(formula: &Formula) -> Result<u64> {
    check_budget(formula)?;
    let masks = masks(formula);
    Ok((0..1u64 << formula.num_vars())
        .filter(|&x| satisfies(&masks, x))
        .count() as u64)
}

pub fn is_satisfiable(formula: &Formula) -> Result<bool> {
    check_budget(formula)?;
    let masks = masks(formula);
    Ok((0..1u64 << formula.num_vars()).any(|x| satisfies(&masks, x)))
}

/// Fraction of random instances that are satisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatEstimate {
    pub m: u64,
    pub trials: u64,
    pub satisfiable: u64,
    pub fraction: f64,
    /// Normal-approximation 95% half-width.
    pub half_width: f64,
}

pub fn estimate_sat_probability(n: u32, k: u32, r: f64, trials: u64, seed: u64) -> Result<SatEstimate> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("r", r, "[0, inf)"));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let m = clauses_for_ratio(r, n);
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| is_satisfiable(&trial_formula(n, k, m, seed, t)?))
        .collect::<Result<_>>()?;
    let satisfiable = hits.iter().filter(|&&b| b).count() as u64;
    let fraction = satisfiable as f64 / trials as f64;
    Ok(SatEstimate {
        m,
        trials,
        satisfiable,
        fraction,
        half_width: 1.96 * (fraction * (1.0 - fraction) / trials as f64).sqrt(),
    })
}

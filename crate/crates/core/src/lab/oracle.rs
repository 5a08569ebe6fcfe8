use num_rational::Ratio;

use super::formula::Assignment;
use crate::{Error, Result};

/// Clause-space enumeration is limited to `n <= 14` (at most `C(14,7)·2^7`
/// clauses per call).
pub const MAX_ORACLE_VARS: u32 = 14;

/// Exact fraction of all `C(n,k)·2^k` clauses satisfied by both members of a
/// pair that agrees on exactly `s_num` variables.
///
/// The pair is all-false against an assignment flipping the last `n - S`
/// variables; by exchangeability any other pair gives the same ratio.
pub fn clause_pair_agreement_oracle(n: u32, k: u32, s_num: u32) -> Result<Ratio<u128>> {
    if s_num > n {
        return Err(Error::invalid(format!("similarity number {s_num} exceeds n = {n}")));
    }
    let a = Assignment::new(vec![false; n as usize]);
    let b = Assignment::new((0..n).map(|i| i >= s_num).collect());
    clause_pair_agreement_oracle_for_pair(k, &a, &b)
}

/// Same count for an explicit pair of assignments.
pub fn clause_pair_agreement_oracle_for_pair(
    k: u32,
    a: &Assignment,
    b: &Assignment,
) -> Result<Ratio<u128>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len() as u32;
    if n > MAX_ORACLE_VARS {
        return Err(Error::Budget(format!(
            "clause-space enumeration needs n <= {MAX_ORACLE_VARS}, got {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut satisfied = 0u128;
    let mut total = 0u128;
    for set in 0u32..1 << n {
        if set.count_ones() != k {
            continue;
        }
        let vars: Vec<usize> = (0..n as usize).filter(|&i| set >> i & 1 == 1).collect();
        for signs in 0u32..1 << k {
            let sat = |x: &Assignment| {
                vars.iter()
                    .enumerate()
                    .any(|(j, &v)| x[v] == (signs >> j & 1 == 1))
            };
            total += 1;
            if sat(a) && sat(b) {
                satisfied += 1;
            }
        }
    }
    Ok(Ratio::new(satisfied, total))
}

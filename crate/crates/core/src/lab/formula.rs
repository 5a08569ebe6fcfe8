use std::fmt::Write as _;
use std::ops::Deref;

use rand::Rng;
use serde::Serialize;

use super::rng::trial_rng;
use crate::{Error, Result};

/// A disjunction of `k` literals over distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Clause {
    vars: Vec<u32>,
    polarities: Vec<bool>,
}

impl Clause {
    /// `polarities[i]` is `true` for the positive literal of `vars[i]`.
    pub fn new(vars: Vec<u32>, polarities: Vec<bool>) -> Result<Self> {
        if vars.len() != polarities.len() {
            return Err(Error::LengthMismatch {
                left: vars.len(),
                right: polarities.len(),
            });
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::invalid(format!("variable {v} repeated in clause")));
            }
        }
        Ok(Clause { vars, polarities })
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn polarities(&self) -> &[bool] {
        &self.polarities
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.vars.iter().copied().zip(self.polarities.iter().copied())
    }

    pub fn is_satisfied_by(&self, bits: &[bool]) -> bool {
        self.literals().any(|(v, pos)| bits[v as usize] == pos)
    }

    /// `(positive, negative)` variable masks; needs every variable below 64.
    pub(crate) fn masks(&self) -> (u64, u64) {
        self.literals().fold((0, 0), |(p, q), (v, pos)| {
            if pos {
                (p | 1 << v, q)
            } else {
                (p, q | 1 << v)
            }
        })
    }
}

/// A CNF formula whose clauses all have length `k` over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Formula {
    n: u32,
    k: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: u32, k: u32, clauses: Vec<Clause>) -> Result<Self> {
        check_kn(n, k)?;
        for c in &clauses {
            if c.len() != k as usize {
                return Err(Error::invalid(format!(
                    "clause of length {} in a {k}-SAT formula",
                    c.len()
                )));
            }
            if let Some(v) = c.vars().iter().find(|&&v| v >= n) {
                return Err(Error::invalid(format!("variable {v} out of range for n = {n}")));
            }
        }
        Ok(Formula { n, k, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.n
    }

    pub fn clause_len(&self) -> u32 {
        self.k
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// DIMACS CNF text: `p cnf n m` header, 1-based signed literals, each
    /// clause terminated by `0`.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for c in &self.clauses {
            for (v, pos) in c.literals() {
                let lit = v as i64 + 1;
                let _ = write!(out, "{} ", if pos { lit } else { -lit });
            }
            out.push_str("0\n");
        }
        out
    }

    /// Parses DIMACS text written by [`Formula::to_dimacs`] (comments allowed).
    /// The clause length is taken from the first clause.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                match fields.as_slice() {
                    ["cnf", n, m] => {
                        let n = n.parse().map_err(|_| Error::invalid("bad variable count"))?;
                        let m = m.parse().map_err(|_| Error::invalid("bad clause count"))?;
                        header = Some((n, m));
                    }
                    _ => return Err(Error::invalid(format!("bad header line {line:?}"))),
                }
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    let vars = current.iter().map(|l| (l.unsigned_abs() - 1) as u32).collect();
                    let pols = current.iter().map(|&l| l > 0).collect();
                    clauses.push(Clause::new(vars, pols)?);
                    current.clear();
                } else {
                    current.push(lit);
                }
            }
        }
        let (n, m) = header.ok_or_else(|| Error::invalid("missing `p cnf` header"))?;
        if !current.is_empty() || clauses.len() != m {
            return Err(Error::invalid(format!(
                "header announces {m} clauses, found {}",
                clauses.len()
            )));
        }
        let k = clauses.first().map_or(1, |c| c.len() as u32);
        Formula::new(n, k.min(n).max(1), clauses)
    }
}

fn check_kn(n: u32, k: u32) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::invalid("need n >= 1 and k >= 1"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "clause length k = {k} exceeds variable count n = {n}"
        )));
    }
    Ok(())
}

/// Draws `m` clauses uniformly, independently and with replacement: a
/// partial Fisher-Yates shuffle picks `k` distinct variables, then each
/// polarity is a fair coin.
pub(crate) fn sample_formula<R: Rng>(n: u32, k: u32, m: u64, rng: &mut R) -> Result<Formula> {
    check_kn(n, k)?;
    let mut perm: Vec<u32> = (0..n).collect();
    let mut clauses = Vec::with_capacity(m as usize);
    for _ in 0..m {
        for i in 0..k as usize {
            let j = rng.gen_range(i..n as usize);
            perm.swap(i, j);
        }
        let vars = perm[..k as usize].to_vec();
        let polarities = (0..k).map(|_| rng.gen::<bool>()).collect();
        clauses.push(Clause { vars, polarities });
    }
    Ok(Formula { n, k, clauses })
}

/// Random k-SAT formula for `seed`; identical to trial 0 of a Monte Carlo run.
pub fn generate_random_ksat(n: u32, k: u32, m: u64, seed: u64) -> Result<Formula> {
    trial_formula(n, k, m, seed, 0)
}

/// The formula drawn by trial `trial` of an experiment seeded with `seed`.
pub fn trial_formula(n: u32, k: u32, m: u64, seed: u64, trial: u64) -> Result<Formula> {
    sample_formula(n, k, m, &mut trial_rng(seed, trial))
}

/// A truth assignment; `bits[i]` is the value of variable `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Variable `i` takes bit `i` of `pattern`.
    pub fn from_pattern(pattern: u64, n: u32) -> Self {
        Assignment {
            bits: (0..n).map(|i| pattern >> i & 1 == 1).collect(),
        }
    }

    /// Inverse of [`Assignment::from_pattern`]; `None` above 64 variables.
    pub fn pattern(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &b)| acc | (b as u64) << i),
        )
    }

    pub fn complement(&self) -> Self {
        Assignment {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl Deref for Assignment {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.bits
    }
}

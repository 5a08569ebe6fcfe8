//! Random k-SAT instances and exhaustive pair statistics.
//!
//! These are the brute-force counterparts of the formulas in
//! [`crate::analytic`]: random formulas are drawn, all of their solutions are
//! enumerated, and ordered pairs of solutions are histogrammed by similarity
//! number.

mod formula;
mod histogram;
mod oracle;
mod rng;
mod solve;

pub use formula::{generate_random_ksat, trial_formula, Assignment, Clause, Formula};
pub use histogram::{
    monte_carlo_expected_histogram, pair_similarity_histogram, HistogramStats, PairHistogram,
    MAX_HISTOGRAM_SOLUTIONS,
};
pub use oracle::{clause_pair_agreement_oracle, clause_pair_agreement_oracle_for_pair, MAX_ORACLE_VARS};
pub use rng::trial_rng;
pub use solve::{
    count_solutions, enumerate_solutions, estimate_sat_probability, evaluate, is_satisfiable,
    solution_patterns, SatEstimate, MAX_ENUMERATE_VARS,
};

//! Brute-force checks of the exact and asymptotic pair formulas.

use ksat_smj::analytic::{
    clause_pair_agreement_probability, clause_pair_agreement_ratio, clauses_for_ratio,
    expected_sat_pairs_exact, log_penalty_g, pair_sat_probability_exact, pairs_count_exact,
    rate_f, single_sat_probability, entropy_h,
};
use ksat_smj::lab::{
    clause_pair_agreement_oracle, clause_pair_agreement_oracle_for_pair, count_solutions,
    enumerate_solutions, estimate_sat_probability, evaluate, generate_random_ksat,
    monte_carlo_expected_histogram, pair_similarity_histogram, trial_rng, Assignment, Formula,
};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn clause_oracle_matches_analytic_exactly() {
    for n in 1..=12u32 {
        for k in 1..=n {
            for s in 0..=n {
                let oracle = clause_pair_agreement_oracle(n, k, s).unwrap();
                let exact = clause_pair_agreement_ratio(n, k, s).unwrap();
                assert_eq!(oracle, exact, "n={n} k={k} S={s}");
                let fp = clause_pair_agreement_probability(n, k, s).unwrap();
                let of = *oracle.numer() as f64 / *oracle.denom() as f64;
                assert!((fp - of).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn n10_k5_s7_clause_space() {
    // 8064 = C(10,5)·2^5 clauses.
    let oracle = clause_pair_agreement_oracle(10, 5, 7).unwrap();
    assert_eq!(oracle * Ratio::from_integer(8064), Ratio::from_integer(7581));
    let p = clause_pair_agreement_probability(10, 5, 7).unwrap();
    assert!((p - 7581.0 / 8064.0).abs() < 1e-15);
    let pair = pair_sat_probability_exact(10, 5, 20, 7).unwrap().value();
    assert!((pair - (7581.0f64 / 8064.0).powi(20)).abs() < 1e-14);
}

#[test]
fn clause_oracle_is_exchangeable() {
    let mut rng = trial_rng(5, 0);
    let n = 9u32;
    for k in [2u32, 3, 5] {
        for s in 0..=n {
            let canonical = clause_pair_agreement_oracle(n, k, s).unwrap();
            for _ in 0..5 {
                let a: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
                let mut idx: Vec<usize> = (0..n as usize).collect();
                for i in 0..n as usize {
                    let j = rng.gen_range(i..n as usize);
                    idx.swap(i, j);
                }
                let mut b = a.clone();
                for &i in &idx[s as usize..] {
                    b[i] = !b[i];
                }
                let r = clause_pair_agreement_oracle_for_pair(k, &Assignment::new(a), &Assignment::new(b))
                    .unwrap();
                assert_eq!(r, canonical, "k={k} S={s}");
            }
        }
    }
}

#[test]
fn empty_formula_reproduces_pair_counts() {
    for n in 1..=14u32 {
        let f = generate_random_ksat(n, 1, 0, 0).unwrap();
        let h = pair_similarity_histogram(&enumerate_solutions(&f).unwrap(), n).unwrap();
        for s in 0..=n {
            assert_eq!(h.counts[s as usize] as u128, pairs_count_exact(n, s).unwrap());
        }
    }
}

/// DPLL-style model counter: split on a variable of the first open clause,
/// prune on a falsified clause, and count free variables once all clauses
/// are satisfied.
fn dpll_count(formula: &Formula) -> u64 {
    fn go(clauses: &[Vec<(usize, bool)>], assigned: &mut Vec<Option<bool>>) -> u64 {
        let mut open = None;
        for c in clauses {
            let mut satisfied = false;
            let mut free = None;
            for &(v, pos) in c {
                match assigned[v] {
                    Some(val) if val == pos => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => free = free.or(Some(v)),
                }
            }
            if satisfied {
                continue;
            }
            match free {
                None => return 0,
                Some(v) => {
                    open = Some(v);
                    break;
                }
            }
        }
        match open {
            None => 1u64 << assigned.iter().filter(|a| a.is_none()).count(),
            Some(v) => {
                let mut total = 0;
                for val in [false, true] {
                    assigned[v] = Some(val);
                    total += go(clauses, assigned);
                }
                assigned[v] = None;
                total
            }
        }
    }
    let clauses: Vec<Vec<(usize, bool)>> = formula
        .clauses()
        .iter()
        .map(|c| c.literals().map(|(v, p)| (v as usize, p)).collect())
        .collect();
    go(&clauses, &mut vec![None; formula.num_vars() as usize])
}

#[test]
fn enumeration_matches_dpll_counter() {
    for seed in 0..100 {
        let f = generate_random_ksat(12, 5, 40 + seed % 60, seed).unwrap();
        let enumerated = enumerate_solutions(&f).unwrap();
        assert_eq!(enumerated.len() as u64, dpll_count(&f), "seed {seed}");
        assert_eq!(count_solutions(&f).unwrap(), enumerated.len() as u64);
    }
}

#[test]
fn evaluate_matches_per_literal_reference() {
    let mut rng = trial_rng(77, 1);
    for case in 0..10_000u64 {
        let n = rng.gen_range(3..=20u32);
        let k = rng.gen_range(1..=n.min(6));
        let m = rng.gen_range(0..12u64);
        let f = generate_random_ksat(n, k, m, case).unwrap();
        let a = Assignment::new((0..n).map(|_| rng.gen()).collect());
        let reference = f.clauses().iter().all(|c| {
            let mut any = false;
            for (v, pos) in c.literals() {
                let value = a[v as usize];
                if (pos && value) || (!pos && !value) {
                    any = true;
                }
            }
            any
        });
        assert_eq!(evaluate(&f, &a).unwrap(), reference);
    }
}

#[test]
fn monte_carlo_matches_expectation_n12() {
    let (n, k, m) = (12u32, 5u32, 24u64);
    let stats = monte_carlo_expected_histogram(n, k, m, 200, 42).unwrap();
    let mut over3 = 0;
    for s in 0..=n {
        let exact = expected_sat_pairs_exact(n, k, m, s).unwrap().value();
        let z = (stats.mean[s as usize] - exact) / stats.std_error[s as usize];
        assert!(z.abs() < 4.0, "S={s} z={z}");
        if z.abs() > 3.0 {
            over3 += 1;
        }
    }
    assert!(over3 <= 1);
}

#[test]
fn standard_errors_scale_with_trials() {
    let a = monte_carlo_expected_histogram(10, 3, 30, 400, 9).unwrap();
    let b = monte_carlo_expected_histogram(10, 3, 30, 800, 9).unwrap();
    let ratio: f64 = (0..=10).map(|s| b.std_error[s] / a.std_error[s]).sum::<f64>() / 11.0;
    assert!((ratio - 0.5f64.sqrt()).abs() < 0.12, "ratio {ratio}");
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo_expected_histogram(11, 4, 30, 64, 3).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(8));
}

#[test]
fn expectation_special_cases() {
    for s in 0..=10 {
        assert_eq!(
            expected_sat_pairs_exact(10, 3, 0, s).unwrap().value().round(),
            pairs_count_exact(10, s).unwrap() as f64
        );
    }
    let self_pairs = expected_sat_pairs_exact(10, 3, 17, 10).unwrap().ln();
    let direct = 10.0 * 2f64.ln() + single_sat_probability(3, 17).ln();
    assert!((self_pairs - direct).abs() < 1e-12);
}

#[test]
fn exponent_converges_to_rate_function() {
    let (k, r) = (5u32, 15.0);
    for s in [0.6, 0.8, 0.9] {
        let gaps: Vec<f64> = [50u32, 100, 200]
            .iter()
            .map(|&n| {
                let m = clauses_for_ratio(r, n);
                let s_num = (s * n as f64).round() as u32;
                let e = expected_sat_pairs_exact(n, k, m, s_num).unwrap().ln();
                (e / n as f64 - rate_f(k, r, s)).abs()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "s={s}: {gaps:?}");
        assert!(gaps[2] < 0.02, "s={s}: {gaps:?}");
    }
}

#[test]
fn sat_fraction_trend() {
    let (n, k) = (12u32, 3u32);
    let grid = [0.0, 2.0, 3.0, 3.6, 4.2, 4.8, 5.6, 7.0];
    let est: Vec<_> = grid
        .iter()
        .map(|&r| estimate_sat_probability(n, k, r, 300, 11).unwrap())
        .collect();
    assert_eq!(est[0].fraction, 1.0);
    for w in est.windows(2) {
        assert!(w[1].fraction <= w[0].fraction + w[0].half_width + w[1].half_width);
    }
    assert!(est.iter().any(|e| e.fraction > 0.05 && e.fraction < 0.95));
    assert!(est.last().unwrap().fraction < est[0].fraction);
}

#[test]
fn rate_function_shape() {
    for k in 2..=10u32 {
        for i in 0..=200 {
            let s = i as f64 / 200.0;
            let h = entropy_h(s);
            assert!((2f64.ln()..=2.0 * 2f64.ln() + 1e-15).contains(&h));
            assert!((h - entropy_h(1.0 - s)).abs() < 1e-12);
            if s < 1.0 {
                assert!(log_penalty_g(k, s) > 0.0);
                assert!(rate_f(k, 2.0, s) < rate_f(k, 1.0, s));
            }
            if i > 0 {
                let prev = log_penalty_g(k, (i - 1) as f64 / 200.0);
                assert!(log_penalty_g(k, s) <= prev);
                if s >= 0.5 {
                    assert!(log_penalty_g(k, s) < prev);
                }
            }
            if s < 0.5 {
                assert!(rate_f(k, 3.0, s) <= rate_f(k, 3.0, 1.0 - s));
            }
        }
    }
}

proptest! {
    #[test]
    fn histogram_mass_and_diagonal(n in 4u32..14, k in 2u32..5, m in 0u64..60, seed: u64) {
        prop_assume!(k <= n);
        let f = generate_random_ksat(n, k, m, seed).unwrap();
        let sols = enumerate_solutions(&f).unwrap();
        let h = pair_similarity_histogram(&sols, n).unwrap();
        prop_assert_eq!(h.total_pairs(), (sols.len() as u128).pow(2));
        prop_assert_eq!(h.counts[n as usize], sols.len() as u64);
        for s in 0..n as usize {
            prop_assert_eq!(h.counts[s] % 2, 0);
        }
    }

    #[test]
    fn dimacs_round_trip(n in 1u32..30, k in 1u32..6, m in 1u64..40, seed: u64) {
        prop_assume!(k <= n);
        let f = generate_random_ksat(n, k, m, seed).unwrap();
        prop_assert_eq!(Formula::from_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn identical_pairs_reduce_to_single_assignment(n in 2u32..200, k in 2u32..8, m in 0u64..5000) {
        prop_assume!(k <= n);
        prop_assert_eq!(
            pair_sat_probability_exact(n, k, m, n).unwrap(),
            single_sat_probability(k, m)
        );
    }
}

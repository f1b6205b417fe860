mod common;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use shotcomp_core::{solve_q_star, HypothesisPair};

/// Minimum of `max(D(P0||Q), D(P1||Q))` over a step-1e-3 grid of the simplex
/// on three letters with every entry at most 1/2.
fn grid_delta(h: &HypothesisPair) -> f64 {
    let steps = 1000;
    let mut best = f64::INFINITY;
    for i in 1..=steps / 2 {
        for j in 1..=steps / 2 {
            let k = steps - i - j;
            if k < 1 || k > steps / 2 {
                continue;
            }
            let q = [i as f64 / 1000.0, j as f64 / 1000.0, k as f64 / 1000.0];
            let d = common::kl(h.p0().probs(), &q).max(common::kl(h.p1().probs(), &q));
            best = best.min(d);
        }
    }
    best
}

#[test]
fn q_star_agrees_with_grid_search() {
    let mut runner = TestRunner::deterministic();
    let strategy = common::pair_of_size(3);
    for _ in 0..20 {
        let h = strategy.new_tree(&mut runner).unwrap().current();
        let s = solve_q_star(&h, 2, 1e-9).unwrap();
        let grid = grid_delta(&h);
        assert!(s.q.iter().all(|&x| x <= 0.5 + 1e-15));
        assert!((s.q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(s.delta <= grid + 1e-12, "{} above grid {grid}", s.delta);
        assert!((s.delta - grid).abs() <= 1e-3, "{} vs {grid}", s.delta);
    }
}

proptest! {
    #[test]
    fn q_star_is_no_worse_than_feasible_mixtures(h in (3usize..=8).prop_flat_map(common::pair_of_size), m_seed in 0usize..100) {
        let n = h.alphabet_size();
        let m = 2 + m_seed % (n - 1);
        let s = solve_q_star(&h, m, 1e-9).unwrap();
        let cap = 1.0 / m as f64;
        prop_assert!(s.q.iter().all(|&x| x <= cap + 1e-12));
        // Any feasible Q gives an upper bound; uniform is always feasible.
        let uniform = vec![1.0 / n as f64; n];
        let d_uniform = common::kl(h.p0().probs(), &uniform).max(common::kl(h.p1().probs(), &uniform));
        prop_assert!(s.delta <= d_uniform + 1e-9);
    }
}

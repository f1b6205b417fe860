//! Task-unaware baseline built from the log-loss "equidistant" distribution.
//!
//! `Q*` minimises `max(D(P0 || Q), D(P1 || Q))` over distributions with
//! `Q(x) <= 1/M`. By the minimax theorem this equals
//! `max_λ min_Q [λ D(P0 || Q) + (1 - λ) D(P1 || Q)]`. For fixed `λ` the inner
//! problem is `min_Q -Σ w log Q` with `w = λ P0 + (1 - λ) P1`, whose solution
//! under the cap is `Q = min(cap, w / ν)`: clip the heavy letters and scale
//! the rest up. The outer objective is concave in `λ` with derivative
//! `D(P0 || Q_λ) - D(P1 || Q_λ)`, so bisection on that difference finds the
//! saddle point.

use alloc::vec::Vec;

use super::Compressor;
use crate::error::{Error, Result};
use crate::prob::{kl_terms, Distribution, HypothesisPair};

/// Iteration cap for the bisection on the mixture weight.
pub const QSTAR_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QStar {
    pub q: Distribution,
    /// `max(D(P0 || Q*), D(P1 || Q*))` in bits.
    pub delta: f64,
    /// Mixture weight on `P0` at the saddle point.
    pub lambda: f64,
    pub iterations: usize,
}

/// `min(cap, w / ν)` with `ν` chosen so the result sums to one.
///
/// Equivalent to repeatedly clipping entries above the cap and spreading the
/// excess proportionally over the unclipped ones, but done in one pass over
/// the weights sorted in decreasing order.
fn cap_project(w: &[f64], cap: f64) -> Vec<f64> {
    let n = w.len();
    if n as f64 * cap <= 1.0 + 1e-12 {
        return alloc::vec![1.0 / n as f64; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut rest_weight: f64 = w.iter().sum();
    let mut clipped = 0;
    while clipped < n {
        let scale = (1.0 - clipped as f64 * cap) / rest_weight;
        if w[order[clipped]] * scale <= cap {
            let mut q: Vec<f64> = w.iter().map(|&wi| wi * scale).collect();
            for &x in &order[..clipped] {
                q[x] = cap;
            }
            return q;
        }
        rest_weight -= w[order[clipped]];
        clipped += 1;
    }
    alloc::vec![1.0 / n as f64; n]
}

/// Divergences `(D(P0 || Q), D(P1 || Q))` and `Q` for mixture weight `lambda`.
fn evaluate(h: &HypothesisPair, cap: f64, lambda: f64) -> (f64, f64, Vec<f64>) {
    let w: Vec<f64> =
        h.p0().iter().zip(h.p1().iter()).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    let q = cap_project(&w, cap);
    (kl_terms(h.p0().probs(), &q), kl_terms(h.p1().probs(), &q), q)
}

/// Solves for `Q*` under the cap `Q(x) <= 1/m`, stopping once the two
/// divergences agree to within `tol` bits.
pub fn solve_q_star(h: &HypothesisPair, m: usize, tol: f64) -> Result<QStar> {
    let n = h.alphabet_size();
    if m < 2 || m > n {
        return Err(Error::RateOutOfRange { rate: m, min: 2, max: n });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig("Q* tolerance must be positive"));
    }
    let cap = 1.0 / m as f64;
    let finish = |lambda: f64, iterations: usize| {
        let (d0, d1, q) = evaluate(h, cap, lambda);
        QStar { q: Distribution::from_vec_unchecked(q), delta: d0.max(d1), lambda, iterations }
    };

    let (d0, d1, _) = evaluate(h, cap, 0.0);
    if d0 - d1 <= tol {
        return Ok(finish(0.0, 0));
    }
    let (d0, d1, _) = evaluate(h, cap, 1.0);
    if d0 - d1 >= -tol {
        return Ok(finish(1.0, 0));
    }
    // d0 - d1 is non-increasing in lambda: positive at 0, negative at 1.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for iteration in 1..=QSTAR_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let (d0, d1, _) = evaluate(h, cap, mid);
        let gap = d0 - d1;
        if gap.abs() <= tol || mid <= lo || mid >= hi {
            return Ok(finish(mid, iteration));
        }
        if gap > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { iterations: QSTAR_MAX_ITERATIONS })
}

/// Universal baseline with `m` symbols: the `m - 1` letters with the largest
/// `Q*` keep their own symbol and every other letter shares the last one.
/// Ties in `Q*` go to the smaller letter.
pub fn universal_compress(h: &HypothesisPair, m: usize) -> Result<Compressor> {
    let q_star = solve_q_star(h, m, 1e-9)?;
    Ok(universal_from_q(q_star.q.probs(), m))
}

pub(crate) fn universal_from_q(q: &[f64], m: usize) -> Compressor {
    let n = q.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| q[b].total_cmp(&q[a]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = order[..m - 1].iter().map(|&x| alloc::vec![x]).collect();
    groups.push(order[m - 1..].to_vec());
    Compressor::new(groups, n).expect("top-(m-1) plus remainder is a partition")
}

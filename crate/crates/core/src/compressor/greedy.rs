use alloc::vec::Vec;

use super::{merge_cost_masses, Compressor};
use crate::error::{Error, Result};
use crate::prob::HypothesisPair;

/// Agglomerative state: canonical groups with their masses under both
/// hypotheses.
struct Agglomeration {
    groups: Vec<Vec<usize>>,
    mass0: Vec<f64>,
    mass1: Vec<f64>,
}

impl Agglomeration {
    fn new(h: &HypothesisPair) -> Self {
        let n = h.alphabet_size();
        Self {
            groups: (0..n).map(|x| alloc::vec![x]).collect(),
            mass0: h.p0().probs().to_vec(),
            mass1: h.p1().probs().to_vec(),
        }
    }

    /// Cheapest pair `(a, b)` with `a < b`. Pairs are scanned in
    /// lexicographic order of their leading letters and only a strictly
    /// smaller cost replaces the incumbent, so exact ties go to the
    /// lexicographically least pair.
    fn cheapest_pair(&self) -> (usize, usize) {
        let k = self.groups.len();
        let mut best = (0, 1);
        let mut best_cost = f64::INFINITY;
        for a in 0..k {
            for b in a + 1..k {
                let cost =
                    merge_cost_masses(self.mass0[a], self.mass1[a], self.mass0[b], self.mass1[b]);
                if cost < best_cost {
                    best_cost = cost;
                    best = (a, b);
                }
            }
        }
        best
    }

    fn merge(&mut self, a: usize, b: usize) {
        let moved = self.groups.remove(b);
        self.groups[a].extend(moved);
        self.groups[a].sort_unstable();
        let m0 = self.mass0.remove(b);
        let m1 = self.mass1.remove(b);
        self.mass0[a] += m0;
        self.mass1[a] += m1;
    }

    fn step(&mut self) {
        let (a, b) = self.cheapest_pair();
        self.merge(a, b);
    }

    fn compressor(&self, source_size: usize) -> Compressor {
        Compressor::from_canonical(self.groups.clone(), source_size)
    }
}

/// KL-greedy design: start from the identity map and repeatedly merge the
/// pair of current groups with the smallest merge cost until `m` groups
/// remain.
pub fn greedy_compress(h: &HypothesisPair, m: usize) -> Result<Compressor> {
    let n = h.alphabet_size();
    if m < 1 || m > n {
        return Err(Error::RateOutOfRange { rate: m, min: 1, max: n });
    }
    let mut state = Agglomeration::new(h);
    for _ in 0..n - m {
        state.step();
    }
    Ok(state.compressor(n))
}

/// Every greedy compressor from `|X|` groups down to one, in a single pass.
/// Entry `m - 1` has `m` groups and equals `greedy_compress(h, m)`.
pub fn greedy_chain(h: &HypothesisPair) -> Vec<Compressor> {
    let n = h.alphabet_size();
    let mut state = Agglomeration::new(h);
    let mut chain = Vec::with_capacity(n);
    chain.push(state.compressor(n));
    while state.groups.len() > 1 {
        state.step();
        chain.push(state.compressor(n));
    }
    chain.reverse();
    chain
}

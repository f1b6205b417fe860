use alloc::vec;
use alloc::vec::Vec;

use super::Compressor;
use crate::error::{Error, Result};
use crate::prob::{kl_terms, HypothesisPair};

/// Default cap on the number of partitions an exhaustive search may visit.
pub const DEFAULT_PARTITION_BUDGET: u128 = 100_000_000;

/// Stirling number of the second kind `S(n, k)`, saturating at `u128::MAX`.
pub fn stirling2(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    // row[j] = S(i, j)
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Depth-first walk over restricted growth strings with exactly `blocks`
/// distinct values. Block masses are updated in place and restored from
/// saved copies, so every leaf sees masses summed in ascending letter order.
struct Search<'a> {
    p0: &'a [f64],
    p1: &'a [f64],
    blocks: usize,
    labels: Vec<usize>,
    mass0: Vec<f64>,
    mass1: Vec<f64>,
    best_kl: f64,
    best_labels: Vec<usize>,
}

impl Search<'_> {
    fn visit(&mut self, letter: usize, used: usize) {
        let n = self.p0.len();
        if letter == n {
            let kl = kl_terms(&self.mass0, &self.mass1);
            // Strict comparison keeps the lexicographically first RGS on ties.
            if kl > self.best_kl {
                self.best_kl = kl;
                self.best_labels.copy_from_slice(&self.labels);
            }
            return;
        }
        let remaining = n - letter;
        // Reuse an existing block only if the rest can still open the missing ones.
        if remaining > self.blocks - used {
            for b in 0..used {
                self.place(letter, b, used);
            }
        }
        if used < self.blocks {
            self.place(letter, used, used + 1);
        }
    }

    fn place(&mut self, letter: usize, block: usize, used: usize) {
        let (old0, old1) = (self.mass0[block], self.mass1[block]);
        self.mass0[block] += self.p0[letter];
        self.mass1[block] += self.p1[letter];
        self.labels[letter] = block;
        self.visit(letter + 1, used);
        self.mass0[block] = old0;
        self.mass1[block] = old1;
    }
}

/// Exact minimum-penalty compressor with `m` groups, by exhaustive search
/// over all partitions into exactly `m` blocks.
///
/// Coarser partitions are reachable from finer ones by merges that never
/// lower the penalty, so searching exactly `m` blocks also solves the
/// "at most `m` symbols" problem. Among exactly tied optima the partition
/// whose restricted growth string is lexicographically least is returned.
///
/// Fails with [`Error::BudgetExceeded`] when `S(|X|, m)` exceeds `budget`
/// (default [`DEFAULT_PARTITION_BUDGET`]), before doing any work.
pub fn optimal_compress(h: &HypothesisPair, m: usize, budget: Option<u128>) -> Result<Compressor> {
    let n = h.alphabet_size();
    if m < 1 || m > n {
        return Err(Error::RateOutOfRange { rate: m, min: 1, max: n });
    }
    let budget = budget.unwrap_or(DEFAULT_PARTITION_BUDGET);
    let estimate = stirling2(n, m);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let mut search = Search {
        p0: h.p0().probs(),
        p1: h.p1().probs(),
        blocks: m,
        labels: vec![0; n],
        mass0: vec![0.0; m],
        mass1: vec![0.0; m],
        best_kl: f64::NEG_INFINITY,
        best_labels: vec![0; n],
    };
    // Letter 0 always opens block 0.
    search.place(0, 0, 1);
    Compressor::from_labels(&search.best_labels)
}

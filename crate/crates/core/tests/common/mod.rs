#![allow(dead_code)]

use proptest::prelude::*;
use shotcomp_core::{Compressor, HypothesisPair};

/// Strictly positive probability vector of length `n`.
pub fn positive_probs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

pub fn pair_of_size(n: usize) -> impl Strategy<Value = HypothesisPair> {
    (positive_probs(n), positive_probs(n))
        .prop_map(|(a, b)| HypothesisPair::from_vecs(a, b).unwrap())
}

/// A random pair together with a random partition of its alphabet.
pub fn pair_and_partition(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (HypothesisPair, Compressor)> {
    sizes.prop_flat_map(|n| {
        (pair_of_size(n), prop::collection::vec(0..n, n))
            .prop_map(|(h, labels)| (h, Compressor::from_labels(&labels).unwrap()))
    })
}

/// All set partitions of `0..n`, built by inserting each new element into
/// every existing block or a new one. Independent of the restricted growth
/// string search used by `optimal_compress`.
pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for x in (0..n).rev() {
        let mut next = Vec::new();
        for p in &acc {
            let mut alone = vec![vec![x]];
            alone.extend(p.iter().cloned());
            next.push(alone);
            for i in 0..p.len() {
                let mut joined = p.clone();
                joined[i].insert(0, x);
                next.push(joined);
            }
        }
        acc = next;
    }
    acc
}

/// Direct `Σ p log2(p/q)` on slices, written out independently of the crate.
pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).log2()).sum()
}

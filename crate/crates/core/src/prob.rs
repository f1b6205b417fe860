//! Probability primitives: validated distributions, base-2 KL divergence and
//! the shifted binomial source family.
//!
//! All information quantities are in bits.

use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// Absolute tolerance on the simplex sum at construction.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A probability vector over the letters `1..=len`, stored 0-based.
///
/// Entries are validated once at construction and then used as-is; there is
/// no renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates a source distribution: at least two letters, non-negative
    /// finite entries, sum within [`SUM_TOLERANCE`] of one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::AlphabetTooSmall { size: probs.len() });
        }
        Self::with_any_size(probs)
    }

    /// Same checks as [`Distribution::new`] except the alphabet may have a
    /// single letter. Compressed distributions at `M = 1` and group
    /// posteriors of singleton groups are of this kind.
    pub fn with_any_size(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::AlphabetTooSmall { size: 0 });
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { probs })
    }

    /// Skips validation. Callers guarantee the entries form a distribution up
    /// to floating-point round-off.
    pub(crate) fn from_vec_unchecked(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    /// Uniform distribution on `size` letters.
    pub fn uniform(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::AlphabetTooSmall { size });
        }
        Ok(Self { probs: alloc::vec![1.0 / size as f64; size] })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.probs.iter()
    }

    /// Running sums, with the last entry forced to exactly 1 so inverse-CDF
    /// sampling never falls off the end.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = self
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        cdf
    }
}

impl Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.probs[index]
    }
}

/// Which source generated the data: θ = 0 or θ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hypothesis {
    Null,
    Alternative,
}

impl Hypothesis {
    pub fn index(self) -> u8 {
        match self {
            Hypothesis::Null => 0,
            Hypothesis::Alternative => 1,
        }
    }
}

/// Null (`p0`, θ = 0) and alternative (`p1`, θ = 1) source distributions.
///
/// Both must be strictly positive on every letter; the LLR test and the
/// penalty decomposition are undefined otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPair {
    p0: Distribution,
    p1: Distribution,
}

impl HypothesisPair {
    pub fn new(p0: Distribution, p1: Distribution) -> Result<Self> {
        if p0.len() != p1.len() {
            return Err(Error::DimensionMismatch { left: p0.len(), right: p1.len() });
        }
        for (hypothesis, dist) in [(0u8, &p0), (1u8, &p1)] {
            if let Some(index) = dist.iter().position(|&p| p <= 0.0) {
                return Err(Error::ZeroSupport { hypothesis, index });
            }
        }
        Ok(Self { p0, p1 })
    }

    /// Convenience constructor from raw vectors.
    pub fn from_vecs(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        Self::new(Distribution::new(p0)?, Distribution::new(p1)?)
    }

    /// Binomial pair sharing one alphabet size.
    pub fn binomial(alphabet_size: usize, s0: f64, s1: f64) -> Result<Self> {
        Self::new(
            binomial_source(&BinomialSpec::new(alphabet_size, s0)?),
            binomial_source(&BinomialSpec::new(alphabet_size, s1)?),
        )
    }

    pub fn p0(&self) -> &Distribution {
        &self.p0
    }

    pub fn p1(&self) -> &Distribution {
        &self.p1
    }

    pub fn get(&self, theta: Hypothesis) -> &Distribution {
        match theta {
            Hypothesis::Null => &self.p0,
            Hypothesis::Alternative => &self.p1,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.p0.len()
    }

    /// `D(P0 || P1)`, the uncompressed Chernoff-Stein exponent.
    pub fn source_kl(&self) -> f64 {
        kl_terms(self.p0.probs(), self.p1.probs())
    }
}

/// Parameters of a shifted binomial source on `{1..alphabet_size}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialSpec {
    alphabet_size: usize,
    s: f64,
}

impl BinomialSpec {
    pub fn new(alphabet_size: usize, s: f64) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::AlphabetTooSmall { size: alphabet_size });
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidBinomialParameter(s));
        }
        Ok(Self { alphabet_size, s })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// `P(x) = C(|X|-1, x-1) s^(x-1) (1-s)^(|X|-x)` for `x = 1..|X|`.
///
/// Evaluated in the log domain with an exact running sum of `ln k`, so large
/// alphabets do not overflow the binomial coefficient.
pub fn binomial_source(spec: &BinomialSpec) -> Distribution {
    let trials = spec.alphabet_size - 1;
    let mut ln_fact = Vec::with_capacity(trials + 1);
    let mut acc = 0.0;
    ln_fact.push(0.0);
    for k in 1..=trials {
        acc += libm::log(k as f64);
        ln_fact.push(acc);
    }
    let ln_s = libm::log(spec.s);
    let ln_1ms = libm::log1p(-spec.s);
    let probs = (0..=trials)
        .map(|k| {
            let ln_choose = ln_fact[trials] - ln_fact[k] - ln_fact[trials - k];
            libm::exp(ln_choose + k as f64 * ln_s + (trials - k) as f64 * ln_1ms)
        })
        .collect();
    Distribution::from_vec_unchecked(probs)
}

/// `Σ p log2(p/q)` over raw slices with `0 log 0 = 0`, clamped at zero.
///
/// Callers have already checked absolute continuity.
pub(crate) fn kl_terms(p: &[f64], q: &[f64]) -> f64 {
    let d: f64 = p
        .iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * libm::log2(pi / qi))
        .sum();
    // Gibbs' inequality; only round-off can make this negative.
    d.max(0.0)
}

/// `D(p || q)` in bits.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    if let Some(index) = p.iter().zip(q.iter()).position(|(&pi, &qi)| pi > 0.0 && qi <= 0.0) {
        return Err(Error::NotAbsolutelyContinuous { index });
    }
    Ok(kl_terms(p.probs(), q.probs()))
}

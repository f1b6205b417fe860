//! Receiver-side likelihood-ratio testing on compressed symbols.
//!
//! The receiver sees `n` compressed symbols and computes
//! `L = Σ log2(P0_hat(s) / P1_hat(s))`, deciding H0 when `L >= log2 T` and H1
//! otherwise. `T` is calibrated empirically on H0 blocks as the largest
//! observed statistic for which the fraction of H0 blocks falling strictly
//! below it stays under `ε`; the type-II rate is then measured on fresh H1
//! blocks.
//!
//! Every block draws from its own ChaCha8 stream, keyed by the seed, a lane
//! (which pool the block belongs to) and the block index. Results therefore
//! do not depend on how blocks are scheduled, and a [`BlockRunner`] is free
//! to evaluate them in parallel.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::compressor::{induced_distribution, Compressor};
use crate::error::{Error, Result};
use crate::prob::{Distribution, Hypothesis, HypothesisPair};

/// Statistics are rounded to this grid (in bits) before any comparison.
/// Blocks whose statistics agree mathematically but were summed from
/// different letters then compare equal, which matters for lattice-valued
/// LLRs such as those of binomial sources.
pub const STATISTIC_GRID: f64 = 1.0 / 4_294_967_296.0;

fn snap(x: f64) -> f64 {
    libm::round(x / STATISTIC_GRID) * STATISTIC_GRID
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestConfig {
    /// Samples per test, `n`.
    pub blocklength: usize,
    /// Type-I bound `ε`, in `(0, 1/2)`.
    pub epsilon: f64,
    /// Blocks drawn under each hypothesis.
    pub trials: usize,
    pub seed: u64,
}

impl TestConfig {
    pub fn new(blocklength: usize, epsilon: f64, trials: usize, seed: u64) -> Result<Self> {
        let cfg = Self { blocklength, epsilon, trials, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocklength < 1 {
            return Err(Error::InvalidConfig("blocklength must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::InvalidConfig("epsilon must lie in (0, 1/2)"));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1"));
        }
        Ok(())
    }
}

impl Default for TestConfig {
    fn default() -> Self {
        Self { blocklength: 5, epsilon: 0.05, trials: 1_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    /// Calibrated `log2 T`, in bits.
    pub threshold_log_t: f64,
    /// Fraction of calibration H0 blocks rejected. Always `< ε`.
    pub type1_rate: f64,
    /// Fraction of H1 blocks accepted as H0.
    pub type2_rate: f64,
    /// `-(1/n) log2 type2_rate`; `None` when no type-II error was observed.
    pub type2_exponent: Option<f64>,
    pub exact_zero: bool,
    pub trials: usize,
    pub seed: u64,
}

impl TestResult {
    /// Binomial standard error of `type2_rate`.
    pub fn type2_std_error(&self) -> f64 {
        libm::sqrt(self.type2_rate * (1.0 - self.type2_rate) / self.trials as f64)
    }
}

/// Which independent pool a block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lane {
    /// H0 blocks used to calibrate the threshold.
    Calibration,
    /// H1 blocks used to count type-II errors.
    Alternative,
    /// Fresh H0 blocks for the likelihood-ratio weighted type-II estimate.
    Reweighting,
}

impl Lane {
    fn tag(self) -> u64 {
        match self {
            Lane::Calibration => 0,
            Lane::Alternative => 1,
            Lane::Reweighting => 2,
        }
    }

    pub fn hypothesis(self) -> Hypothesis {
        match self {
            Lane::Alternative => Hypothesis::Alternative,
            Lane::Calibration | Lane::Reweighting => Hypothesis::Null,
        }
    }
}

/// Counter-based random streams: one independent ChaCha8 stream per
/// `(lane, block)` under a fixed key derived from the seed.
#[derive(Debug, Clone)]
pub struct BlockStreams {
    base: ChaCha8Rng,
}

impl BlockStreams {
    pub fn new(seed: u64) -> Self {
        Self { base: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&self, lane: Lane, block: u64) -> ChaCha8Rng {
        debug_assert!(block < 1 << 60);
        let mut rng = self.base.clone();
        rng.set_stream((lane.tag() << 60) | block);
        rng.set_word_pos(0);
        rng
    }
}

/// Evaluates a per-block function for blocks `0..count` and returns the
/// values in block order.
pub trait BlockRunner {
    fn map_blocks<F>(&self, count: usize, f: F) -> Vec<f64>
    where
        F: Fn(u64) -> f64 + Sync + Send;
}

/// Runs blocks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl BlockRunner for Sequential {
    fn map_blocks<F>(&self, count: usize, f: F) -> Vec<f64>
    where
        F: Fn(u64) -> f64 + Sync + Send,
    {
        (0..count as u64).map(f).collect()
    }
}

/// Uniform draw in `[0, 1)` with 53 random bits.
fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn inverse_cdf(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Draws `n` i.i.d. letters from `p` by inverse CDF and maps each through `c`.
/// Returned symbols are 0-based.
pub fn sample_block(
    p: &Distribution,
    c: &Compressor,
    n: usize,
    rng: &mut impl RngCore,
) -> Result<Vec<usize>> {
    if p.len() != c.source_size() {
        return Err(Error::DimensionMismatch { left: p.len(), right: c.source_size() });
    }
    let cdf = p.cumulative();
    Ok((0..n).map(|_| c.symbol(inverse_cdf(&cdf, uniform(rng)))).collect())
}

/// `Σ_i log2(P0_hat(s_i) / P1_hat(s_i))` over 0-based compressed symbols.
pub fn llr_statistic(samples: &[usize], p0_hat: &Distribution, p1_hat: &Distribution) -> Result<f64> {
    if p0_hat.len() != p1_hat.len() {
        return Err(Error::DimensionMismatch { left: p0_hat.len(), right: p1_hat.len() });
    }
    let mut total = 0.0;
    for &s in samples {
        if s >= p0_hat.len() {
            return Err(Error::SymbolOutOfRange { symbol: s + 1, alphabet: p0_hat.len() });
        }
        total += libm::log2(p0_hat[s] / p1_hat[s]);
    }
    Ok(total)
}

/// Precomputed tables for drawing blocks and scoring them.
struct BlockScorer {
    cdf: [Vec<f64>; 2],
    mapping: Vec<usize>,
    llr: Vec<f64>,
    blocklength: usize,
}

impl BlockScorer {
    fn new(h: &HypothesisPair, c: &Compressor, blocklength: usize) -> Result<Self> {
        let p0_hat = induced_distribution(c, h.p0())?;
        let p1_hat = induced_distribution(c, h.p1())?;
        let llr = p0_hat.iter().zip(p1_hat.iter()).map(|(a, b)| libm::log2(a / b)).collect();
        Ok(Self {
            cdf: [h.p0().cumulative(), h.p1().cumulative()],
            mapping: c.mapping().to_vec(),
            llr,
            blocklength,
        })
    }

    /// Snapped LLR of one block. Symbols are sorted before summing so the
    /// value depends only on the block's symbol counts.
    fn score(&self, streams: &BlockStreams, lane: Lane, block: u64) -> f64 {
        let cdf = &self.cdf[lane.hypothesis().index() as usize];
        let mut rng = streams.rng(lane, block);
        let mut symbols: Vec<usize> = (0..self.blocklength)
            .map(|_| self.mapping[inverse_cdf(cdf, uniform(&mut rng))])
            .collect();
        symbols.sort_unstable();
        snap(symbols.iter().map(|&s| self.llr[s]).sum())
    }
}

/// Result of threshold calibration on an H0 pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub threshold_log_t: f64,
    /// H0 blocks with statistic strictly below the threshold.
    pub rejected: usize,
    pub trials: usize,
}

impl Calibration {
    pub fn type1_rate(&self) -> f64 {
        self.rejected as f64 / self.trials as f64
    }
}

/// Largest threshold among the observed H0 statistics whose empirical type-I
/// rate (fraction strictly below it) is `< epsilon`. Sorts `stats` in place.
///
/// With `k` the largest integer such that `k / N < ε`, the threshold is the
/// `k`-th smallest statistic (0-based): at most `k` values lie strictly
/// below it, and any larger value would have at least `k + 1` below.
pub fn threshold_from_statistics(stats: &mut [f64], epsilon: f64) -> Calibration {
    assert!(!stats.is_empty(), "calibration needs at least one statistic");
    stats.sort_unstable_by(f64::total_cmp);
    let n = stats.len();
    let below_ok = |k: usize| (k as f64) / (n as f64) < epsilon;
    let mut k = ((epsilon * n as f64) as usize).min(n - 1);
    while k > 0 && !below_ok(k) {
        k -= 1;
    }
    while k + 1 < n && below_ok(k + 1) {
        k += 1;
    }
    let threshold = stats[k];
    let rejected = stats.partition_point(|&s| s < threshold);
    Calibration { threshold_log_t: threshold, rejected, trials: n }
}

/// Draws `cfg.trials` H0 blocks and calibrates `log2 T` on their statistics.
pub fn calibrate_threshold<R: BlockRunner>(
    h: &HypothesisPair,
    c: &Compressor,
    cfg: &TestConfig,
    runner: &R,
) -> Result<Calibration> {
    cfg.validate()?;
    let scorer = BlockScorer::new(h, c, cfg.blocklength)?;
    let streams = BlockStreams::new(cfg.seed);
    Ok(calibrate(&scorer, &streams, cfg, runner))
}

fn calibrate<R: BlockRunner>(
    scorer: &BlockScorer,
    streams: &BlockStreams,
    cfg: &TestConfig,
    runner: &R,
) -> Calibration {
    let mut stats =
        runner.map_blocks(cfg.trials, |b| scorer.score(streams, Lane::Calibration, b));
    threshold_from_statistics(&mut stats, cfg.epsilon)
}

/// Calibrates on H0, then counts H1 blocks accepted as H0 (`L >= log2 T`).
pub fn simulate_errors<R: BlockRunner>(
    h: &HypothesisPair,
    c: &Compressor,
    cfg: &TestConfig,
    runner: &R,
) -> Result<TestResult> {
    cfg.validate()?;
    let scorer = BlockScorer::new(h, c, cfg.blocklength)?;
    let streams = BlockStreams::new(cfg.seed);
    let calibration = calibrate(&scorer, &streams, cfg, runner);
    let threshold = calibration.threshold_log_t;
    let accepted = runner
        .map_blocks(cfg.trials, |b| scorer.score(&streams, Lane::Alternative, b))
        .into_iter()
        .filter(|&s| s >= threshold)
        .count();
    let type2_rate = accepted as f64 / cfg.trials as f64;
    let exact_zero = accepted == 0;
    Ok(TestResult {
        threshold_log_t: threshold,
        type1_rate: calibration.type1_rate(),
        type2_rate,
        type2_exponent: (!exact_zero)
            .then(|| -libm::log2(type2_rate) / cfg.blocklength as f64),
        exact_zero,
        trials: cfg.trials,
        seed: cfg.seed,
    })
}

/// How the type-II rate is estimated in [`exponent_convergence_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type2Estimator {
    /// Count accepted H1 blocks, as in [`simulate_errors`]. Cannot resolve
    /// rates much below `1 / trials`.
    Direct,
    /// Weight fresh H0 blocks by their block likelihood ratio:
    /// `β = E_H0[1{L >= log2 T} 2^-L]`, which holds exactly because the block
    /// ratio `P1/P0` equals `2^-L`. Resolves exponentially small rates.
    LikelihoodRatio,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPoint {
    pub blocklength: usize,
    pub threshold_log_t: f64,
    pub type2_rate: f64,
    pub type2_std_error: f64,
    /// `-(1/n) log2 type2_rate`; `None` when the estimate is exactly zero.
    pub exponent: Option<f64>,
    /// Standard error of `exponent` by the delta method.
    pub exponent_std_error: Option<f64>,
}

/// Estimates the type-II exponent at each blocklength, to watch it approach
/// `D(P0_hat || P1_hat)`.
#[allow(clippy::too_many_arguments)]
pub fn exponent_convergence_probe<R: BlockRunner>(
    h: &HypothesisPair,
    c: &Compressor,
    epsilon: f64,
    blocklengths: &[usize],
    trials: usize,
    seed: u64,
    estimator: Type2Estimator,
    runner: &R,
) -> Result<Vec<ExponentPoint>> {
    let mut points = Vec::with_capacity(blocklengths.len());
    for &n in blocklengths {
        let cfg = TestConfig::new(n, epsilon, trials, seed)?;
        let (threshold, rate, se) = match estimator {
            Type2Estimator::Direct => {
                let r = simulate_errors(h, c, &cfg, runner)?;
                (r.threshold_log_t, r.type2_rate, r.type2_std_error())
            }
            Type2Estimator::LikelihoodRatio => {
                let scorer = BlockScorer::new(h, c, n)?;
                let streams = BlockStreams::new(seed);
                let t = calibrate(&scorer, &streams, &cfg, runner).threshold_log_t;
                let weights = runner.map_blocks(trials, |b| {
                    let l = scorer.score(&streams, Lane::Reweighting, b);
                    if l >= t {
                        libm::exp2(-l)
                    } else {
                        0.0
                    }
                });
                let (mean, se) = mean_and_std_error(&weights);
                (t, mean, se)
            }
        };
        let exponent = (rate > 0.0).then(|| -libm::log2(rate) / n as f64);
        let exponent_std_error = (rate > 0.0)
            .then(|| se / (rate * core::f64::consts::LN_2 * n as f64));
        points.push(ExponentPoint {
            blocklength: n,
            threshold_log_t: threshold,
            type2_rate: rate,
            type2_std_error: se,
            exponent,
            exponent_std_error,
        });
    }
    Ok(points)
}

fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var / n))
}

/// Histogram of 0-based symbols, mostly useful for checking samplers.
pub fn symbol_counts(samples: &[usize], alphabet: usize) -> Vec<usize> {
    let mut counts = vec![0; alphabet];
    for &s in samples {
        counts[s] += 1;
    }
    counts
}

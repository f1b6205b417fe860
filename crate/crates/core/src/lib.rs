//! Fixed-length single-shot compressors for binary hypothesis testing.
//!
//! A transmitter sees i.i.d. letters from one of two distributions `P0`, `P1`
//! over a finite alphabet and maps each letter independently through a
//! surjective `f: X -> {1..M}`. A receiver runs a likelihood-ratio test on
//! the compressed symbols. The best achievable type-II error exponent under
//! `f` is `D(P0_hat || P1_hat)`, so compressor design is a partitioning
//! problem: group letters so as to lose as little divergence as possible.
//!
//! This crate provides:
//!
//! - [`prob`]: validated distributions, base-2 KL divergence and the shifted
//!   binomial source family.
//! - [`compressor`]: the partition representation, penalty analytics and the
//!   three designers ([`greedy_compress`], [`optimal_compress`],
//!   [`universal_compress`]).
//! - [`hyptest`]: the receiver-side LLR test, empirical threshold calibration
//!   and Monte Carlo error estimation with counter-based random streams.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the parallel
//! block runner and the CLI live in the `shotcomp` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod compressor;
mod error;
pub mod hyptest;
pub mod prob;

pub use compressor::{
    compressed_kl, greedy_chain, greedy_compress, group_posterior, induced_distribution,
    merge_cost, optimal_compress, penalty_direct, penalty_grouped, solve_q_star, stirling2,
    universal_compress, Compressor, DesignReport, QStar, DEFAULT_PARTITION_BUDGET,
};
pub use error::{Error, Result};
pub use hyptest::{
    calibrate_threshold, exponent_convergence_probe, llr_statistic, sample_block,
    simulate_errors, threshold_from_statistics, BlockRunner, BlockStreams, Calibration,
    ExponentPoint, Lane, Sequential, TestConfig, TestResult, Type2Estimator,
};
pub use prob::{
    binomial_source, kl_divergence, BinomialSpec, Distribution, Hypothesis, HypothesisPair,
};

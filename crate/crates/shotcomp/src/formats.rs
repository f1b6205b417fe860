//! On-disk formats: distribution pairs, compressors, design reports and test
//! results as JSON.
//!
//! Letters are 1-based in every file. Reals are written with 12 significant
//! digits so output is byte-stable across platforms.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use shotcomp_core::{Compressor, DesignReport, HypothesisPair, TestResult};

use crate::error::{Error, Result};

/// Formats `x` with 12 significant digits, printf `%.12g` style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

fn round_all(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round_sig).collect()
}

/// `{"p0": [...], "p1": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionPairFile {
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
}

impl DistributionPairFile {
    pub fn into_pair(self) -> Result<HypothesisPair> {
        if self.p0.len() != self.p1.len() {
            return Err(Error::Config(format!(
                "p0 has {} entries but p1 has {}",
                self.p0.len(),
                self.p1.len()
            )));
        }
        Ok(HypothesisPair::from_vecs(self.p0, self.p1)?)
    }
}

/// `{"groups": [[1,2],[3]], "source_size": 3}`, groups in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompressorFile {
    pub groups: Vec<Vec<usize>>,
    pub source_size: usize,
}

impl From<&Compressor> for CompressorFile {
    fn from(c: &Compressor) -> Self {
        Self { groups: c.groups_one_based(), source_size: c.source_size() }
    }
}

impl CompressorFile {
    pub fn to_compressor(&self) -> Result<Compressor> {
        Ok(Compressor::from_one_based(&self.groups, self.source_size)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReportFile {
    pub compressor: CompressorFile,
    pub p0_hat: Vec<f64>,
    pub p1_hat: Vec<f64>,
    pub exponent_bits: f64,
    pub penalty_bits: f64,
    pub source_kl_bits: f64,
}

impl From<&DesignReport> for DesignReportFile {
    fn from(r: &DesignReport) -> Self {
        Self {
            compressor: (&r.compressor).into(),
            p0_hat: round_all(r.p0_hat.probs()),
            p1_hat: round_all(r.p1_hat.probs()),
            exponent_bits: round_sig(r.exponent_bits),
            penalty_bits: round_sig(r.penalty_bits),
            source_kl_bits: round_sig(r.source_kl_bits),
        }
    }
}

/// Test result; `type2_exponent_bits` is `null` when `exact_zero` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResultFile {
    pub threshold_log_t: f64,
    pub type1_rate: f64,
    pub type2_rate: f64,
    pub type2_exponent_bits: Option<f64>,
    pub exact_zero: bool,
    pub trials: usize,
    pub seed: u64,
}

impl From<&TestResult> for TestResultFile {
    fn from(r: &TestResult) -> Self {
        Self {
            threshold_log_t: round_sig(r.threshold_log_t),
            type1_rate: round_sig(r.type1_rate),
            type2_rate: round_sig(r.type2_rate),
            type2_exponent_bits: r.type2_exponent.map(round_sig),
            exact_zero: r.exact_zero,
            trials: r.trials,
            seed: r.seed,
        }
    }
}

pub(crate) fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
}

pub fn load_pair(path: &Path) -> Result<HypothesisPair> {
    read_json::<DistributionPairFile>(path)?.into_pair()
}

pub fn load_compressor(path: &Path) -> Result<Compressor> {
    read_json::<CompressorFile>(path)?.to_compressor()
}

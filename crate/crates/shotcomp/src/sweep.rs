//! Rate sweeps: design a compressor per (method, M), report its penalty and
//! optionally measure its error rates.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use shotcomp_core::{
    greedy_compress, optimal_compress, simulate_errors, universal_compress, BlockRunner,
    Compressor, DesignReport, HypothesisPair, TestConfig,
};

use crate::error::{Error, Result};
use crate::formats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Greedy,
    Identity,
    Optimal,
    Universal,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Identity, Method::Greedy, Method::Optimal, Method::Universal];

    pub fn name(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Identity => "identity",
            Method::Optimal => "optimal",
            Method::Universal => "universal",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceSpec {
    Binomial { alphabet_size: usize, s0: f64, s1: f64 },
    File { path: PathBuf },
}

impl SourceSpec {
    pub fn load(&self) -> Result<HypothesisPair> {
        match self {
            SourceSpec::Binomial { alphabet_size, s0, s1 } => {
                Ok(HypothesisPair::binomial(*alphabet_size, *s0, *s1)?)
            }
            SourceSpec::File { path } => formats::load_pair(path),
        }
    }
}

/// Serializable mirror of [`TestConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSettings {
    pub blocklength: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for TestSettings {
    fn default() -> Self {
        let d = TestConfig::default();
        Self { blocklength: d.blocklength, epsilon: d.epsilon, trials: d.trials, seed: d.seed }
    }
}

impl TestSettings {
    pub fn to_config(self) -> Result<TestConfig> {
        Ok(TestConfig::new(self.blocklength, self.epsilon, self.trials, self.seed)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: SourceSpec,
    pub methods: Vec<Method>,
    pub rates: Vec<usize>,
    pub test: TestSettings,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub optimal_budget: u64,
}

impl ExperimentConfig {
    /// Checks the parts that do not depend on the source alphabet.
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.rates.is_empty() {
            return Err(Error::Config("at least one rate is required".into()));
        }
        Ok(())
    }

    fn validate_rates(&self, alphabet_size: usize) -> Result<()> {
        for &m in &self.rates {
            if m < 2 || m > alphabet_size {
                return Err(Error::Config(format!(
                    "rate M = {m} outside [2, {alphabet_size}]"
                )));
            }
        }
        Ok(())
    }
}

/// Parses `"2,4,8"`, `"2:12"` or mixtures such as `"2:5,8,16"`. Ranges are
/// inclusive. The result is sorted and deduplicated.
pub fn parse_rates(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("cannot parse rates {spec:?}"));
    let mut rates = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once(':') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                rates.extend(a..=b);
            }
            None => rates.push(item.parse().map_err(|_| bad())?),
        }
    }
    if rates.is_empty() {
        return Err(bad());
    }
    rates.sort_unstable();
    rates.dedup();
    Ok(rates)
}

pub fn parse_methods(spec: &str) -> Result<Vec<Method>> {
    let mut methods = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Method::from_str)
        .collect::<Result<Vec<_>>>()?;
    methods.sort_unstable();
    methods.dedup();
    Ok(methods)
}

/// One (method, M) row of sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub method: Method,
    pub m: usize,
    /// `log2 M` of the requested rate.
    pub rate_bits: f64,
    pub exponent_bits: Option<f64>,
    pub penalty_bits: Option<f64>,
    pub type1_rate: Option<f64>,
    pub type2_rate: Option<f64>,
    pub exact_zero: Option<bool>,
    pub seed: Option<u64>,
    /// Set when the design was skipped because exhaustive search was over budget.
    pub skipped_budget: bool,
    /// Present for every designed record.
    pub compressor: Option<Compressor>,
}

impl SweepRecord {
    pub fn is_skipped(&self) -> bool {
        self.skipped_budget
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Design,
    Simulate,
}

fn design(h: &HypothesisPair, method: Method, m: usize, budget: u64) -> Result<Option<Compressor>> {
    let c = match method {
        Method::Identity => Compressor::identity(h.alphabet_size()),
        Method::Greedy => greedy_compress(h, m)?,
        Method::Universal => universal_compress(h, m)?,
        Method::Optimal => match optimal_compress(h, m, Some(budget as u128)) {
            Ok(c) => c,
            Err(shotcomp_core::Error::BudgetExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        },
    };
    Ok(Some(c))
}

/// Runs the sweep on an already loaded source. The runner is only touched in
/// [`SweepMode::Simulate`].
pub fn run_sweep_on<R: BlockRunner>(
    h: &HypothesisPair,
    cfg: &ExperimentConfig,
    mode: SweepMode,
    runner: &R,
) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    cfg.validate_rates(h.alphabet_size())?;
    let test = match mode {
        SweepMode::Simulate => Some(cfg.test.to_config()?),
        SweepMode::Design => None,
    };
    let mut methods = cfg.methods.clone();
    methods.sort_unstable();
    methods.dedup();
    let mut rates = cfg.rates.clone();
    rates.sort_unstable();
    rates.dedup();

    let mut records = Vec::with_capacity(methods.len() * rates.len());
    for &method in &methods {
        for &m in &rates {
            let rate_bits = (m as f64).log2();
            let Some(c) = design(h, method, m, cfg.optimal_budget)? else {
                records.push(SweepRecord {
                    method,
                    m,
                    rate_bits,
                    exponent_bits: None,
                    penalty_bits: None,
                    type1_rate: None,
                    type2_rate: None,
                    exact_zero: None,
                    seed: None,
                    skipped_budget: true,
                    compressor: None,
                });
                continue;
            };
            let report = DesignReport::new(h, c)?;
            let mut record = SweepRecord {
                method,
                m,
                rate_bits,
                exponent_bits: Some(report.exponent_bits),
                penalty_bits: Some(report.penalty_bits),
                type1_rate: None,
                type2_rate: None,
                exact_zero: None,
                seed: None,
                skipped_budget: false,
                compressor: None,
            };
            if let Some(test) = &test {
                let r = simulate_errors(h, &report.compressor, test, runner)?;
                record.type1_rate = Some(r.type1_rate);
                record.type2_rate = Some(r.type2_rate);
                record.exact_zero = Some(r.exact_zero);
                record.seed = Some(r.seed);
            }
            record.compressor = Some(report.compressor);
            records.push(record);
        }
    }
    if methods == [Method::Optimal] && records.iter().all(SweepRecord::is_skipped) {
        return Err(Error::Infeasible(
            "exhaustive search exceeds the partition budget at every requested rate".into(),
        ));
    }
    Ok(records)
}

pub fn run_sweep<R: BlockRunner>(
    cfg: &ExperimentConfig,
    mode: SweepMode,
    runner: &R,
) -> Result<Vec<SweepRecord>> {
    let h = cfg.source.load()?;
    run_sweep_on(&h, cfg, mode, runner)
}

/// Penalties only; never draws a random number.
pub fn run_design_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    run_sweep(cfg, SweepMode::Design, &shotcomp_core::Sequential)
}

/// Penalties plus Monte Carlo error rates. Every record uses the configured
/// seed, so records with equal compressors get equal rates.
pub fn run_error_sweep<R: BlockRunner>(cfg: &ExperimentConfig, runner: &R) -> Result<Vec<SweepRecord>> {
    run_sweep(cfg, SweepMode::Simulate, runner)
}

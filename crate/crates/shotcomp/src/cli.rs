//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use shotcomp_core::{simulate_errors, DesignReport, DEFAULT_PARTITION_BUDGET};

use crate::error::{Error, Result};
use crate::formats::{self, DesignReportFile, TestResultFile};
use crate::output;
use crate::runner::Parallel;
use crate::sweep::{
    parse_methods, parse_rates, run_sweep, ExperimentConfig, Method, OutputFormat, SourceSpec,
    SweepMode, TestSettings,
};

#[derive(Debug, Parser)]
#[command(name = "shotcomp", version, about = "Design and evaluate single-shot compressors for binary hypothesis testing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Penalty and exponent of each method over a range of M.
    Design(SweepArgs),
    /// Design sweep plus Monte Carlo type-I and type-II error rates.
    Simulate(SweepArgs),
    /// Groups and compressed distributions of one compressor.
    ShowCompressor(ShowArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Binomial alphabet size |X|.
    #[arg(long, default_value_t = 13)]
    pub alphabet_size: usize,
    /// Binomial success probability under H0.
    #[arg(long, default_value_t = 0.4)]
    pub s0: f64,
    /// Binomial success probability under H1.
    #[arg(long, default_value_t = 0.6)]
    pub s1: f64,
    /// JSON file `{"p0": [...], "p1": [...]}`; overrides the binomial source.
    #[arg(long)]
    pub dist_file: Option<PathBuf>,
}

impl SourceArgs {
    fn spec(&self) -> SourceSpec {
        match &self.dist_file {
            Some(path) => SourceSpec::File { path: path.clone() },
            None => SourceSpec::Binomial { alphabet_size: self.alphabet_size, s0: self.s0, s1: self.s1 },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TestArgs {
    #[arg(long, default_value_t = 5)]
    pub blocklength: usize,
    /// Type-I error bound.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Monte Carlo blocks per hypothesis; accepts `100000` or `1e5`.
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for simulation; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl TestArgs {
    fn settings(&self) -> TestSettings {
        TestSettings { blocklength: self.blocklength, epsilon: self.epsilon, trials: self.trials, seed: self.seed }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma list from identity, greedy, optimal, universal.
    #[arg(long, default_value = "identity,greedy,optimal,universal")]
    pub methods: String,
    /// Comma list and inclusive `a:b` ranges of M; defaults to `2:|X|-1`.
    #[arg(long)]
    pub rates: Option<String>,
    #[command(flatten)]
    pub test: TestArgs,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest S(|X|, M) the exhaustive search may enumerate.
    #[arg(long, default_value = "100000000", value_parser = parse_count_u64)]
    pub optimal_budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ShowArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Design method when no compressor file is given.
    #[arg(long, default_value = "greedy")]
    pub method: Method,
    /// Number of output symbols M.
    #[arg(long, default_value_t = 4)]
    pub rate: usize,
    /// Compressor JSON `{"groups": [[1,2],[3]], "source_size": 3}`.
    #[arg(long, conflicts_with_all = ["method", "rate"])]
    pub compressor_file: Option<PathBuf>,
    /// Also run the hypothesis test on the compressed source.
    #[arg(long)]
    pub simulate: bool,
    #[command(flatten)]
    pub test: TestArgs,
    #[arg(long, default_value_t = DEFAULT_PARTITION_BUDGET as u64, value_parser = parse_count_u64)]
    pub optimal_budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    parse_count_u64(s).and_then(|v| usize::try_from(v).map_err(|e| e.to_string()))
}

/// Integers, also written in scientific notation such as `1e6`.
fn parse_count_u64(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("expected a non-negative integer, got {s:?}")),
    }
}

impl SweepArgs {
    /// Builds the experiment configuration. Default rates need the source,
    /// which is loaded here for that purpose.
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let source = self.source.spec();
        let rates = match &self.rates {
            Some(spec) => parse_rates(spec)?,
            None => {
                let n = source.load()?.alphabet_size();
                (2..=n.saturating_sub(1).max(2)).collect()
            }
        };
        let cfg = ExperimentConfig {
            source,
            methods: parse_methods(&self.methods)?,
            rates,
            test: self.test.settings(),
            format: self.format,
            out: self.out.clone(),
            optimal_budget: self.optimal_budget,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct ShowOutput {
    method: Option<Method>,
    report: DesignReportFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    test: Option<TestResultFile>,
}

fn sweep(args: &SweepArgs, mode: SweepMode) -> Result<()> {
    let cfg = args.to_config()?;
    let records = match mode {
        SweepMode::Design => run_sweep(&cfg, mode, &shotcomp_core::Sequential)?,
        SweepMode::Simulate => run_sweep(&cfg, mode, &Parallel::new(args.test.threads)?)?,
    };
    output::emit(&records, cfg.format, cfg.out.as_deref())
}

fn show(args: &ShowArgs) -> Result<()> {
    let h = args.source.spec().load()?;
    let (method, compressor) = match &args.compressor_file {
        Some(path) => (None, formats::load_compressor(path)?),
        None => {
            let cfg = ExperimentConfig {
                source: args.source.spec(),
                methods: vec![args.method],
                rates: vec![args.rate],
                test: args.test.settings(),
                format: OutputFormat::Json,
                out: None,
                optimal_budget: args.optimal_budget,
            };
            let record = crate::sweep::run_sweep_on(&h, &cfg, SweepMode::Design, &shotcomp_core::Sequential)?
                .pop()
                .expect("one method and one rate give one record");
            let c = record.compressor.ok_or_else(|| {
                Error::Infeasible(format!("exhaustive search for M = {} exceeds the budget", args.rate))
            })?;
            (Some(args.method), c)
        }
    };
    if compressor.source_size() != h.alphabet_size() {
        return Err(Error::Config(format!(
            "compressor covers {} letters but the source has {}",
            compressor.source_size(),
            h.alphabet_size()
        )));
    }
    let report = DesignReport::new(&h, compressor)?;
    let test = if args.simulate {
        let cfg = args.test.settings().to_config()?;
        let r = simulate_errors(&h, &report.compressor, &cfg, &Parallel::new(args.test.threads)?)?;
        Some(TestResultFile::from(&r))
    } else {
        None
    };
    let out = ShowOutput { method, report: DesignReportFile::from(&report), test };
    let mut text = serde_json::to_string_pretty(&out).expect("report serializes");
    text.push('\n');
    output::write_text(&text, args.out.as_deref().map(Path::new))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Design(args) => sweep(args, SweepMode::Design),
        Command::Simulate(args) => sweep(args, SweepMode::Simulate),
        Command::ShowCompressor(args) => show(args),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
/// Usage errors map to 1 like other configuration errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("shotcomp: {e}");
            e.exit_code()
        }
    }
}

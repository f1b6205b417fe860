//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shotcomp::runner::Parallel;
use shotcomp::sweep::{run_sweep_on, ExperimentConfig, Method, OutputFormat, SourceSpec, SweepMode, SweepRecord, TestSettings};
use shotcomp_core::{
    exponent_convergence_probe, greedy_compress, optimal_compress, penalty_direct, penalty_grouped,
    solve_q_star, Compressor, DesignReport, HypothesisPair, Type2Estimator,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> HypothesisPair {
    let p0 = random_probs(rng, n);
    let p1 = random_probs(rng, n);
    HypothesisPair::from_vecs(p0, p1).unwrap()
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).log2()).sum()
}

/// Random pairs with random partitions, shared by the first two criteria.
fn identity_instances() -> Vec<(HypothesisPair, Compressor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..1000)
        .map(|_| {
            let n = rng.random_range(3..=12);
            let h = random_pair(&mut rng, n);
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            (h, Compressor::from_labels(&labels).unwrap())
        })
        .collect()
}

fn penalty_identity(instances: &[(HypothesisPair, Compressor)]) -> Outcome {
    let worst = instances
        .iter()
        .map(|(h, c)| (penalty_direct(h, c).unwrap() - penalty_grouped(h, c).unwrap()).abs())
        .fold(0.0, f64::max);
    outcome(worst < 1e-12, format!("{} instances, max |direct - grouped| = {worst:.3e} (< 1e-12)", instances.len()))
}

fn data_processing(instances: &[(HypothesisPair, Compressor)]) -> Outcome {
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for (h, c) in instances {
        let r = DesignReport::new(h, c.clone()).unwrap();
        if !(r.exponent_bits >= 0.0 && r.exponent_bits <= r.source_kl_bits && r.penalty_bits >= 0.0) {
            violations += 1;
        }
        min_slack = min_slack.min(r.source_kl_bits - r.exponent_bits);
    }
    outcome(violations == 0, format!("{violations} violations of 0 <= exponent <= D(P0||P1), penalty >= 0; min slack {min_slack:.3e}"))
}

/// Every partition of `0..n`, by inserting letters into existing blocks or a
/// new one.
fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &acc {
            for i in 0..p.len() {
                let mut joined = p.clone();
                joined[i].push(x);
                next.push(joined);
            }
            let mut alone = p.clone();
            alone.push(vec![x]);
            next.push(alone);
        }
        acc = next;
    }
    acc
}

fn masses(p: &[f64], groups: &[Vec<usize>]) -> Vec<f64> {
    groups.iter().map(|g| g.iter().map(|&x| p[x]).sum()).collect()
}

fn greedy_vs_optimal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tables: Vec<Vec<Vec<Vec<usize>>>> = (0..=8).map(all_partitions).collect();
    let (mut cases, mut above_greedy, mut mismatches) = (0, 0, 0);
    let mut worst_value_gap = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(4..=8);
        let h = random_pair(&mut rng, n);
        let (p0, p1) = (h.p0().probs(), h.p1().probs());
        for m in 1..=n {
            cases += 1;
            let opt = optimal_compress(&h, m, None).unwrap();
            let greedy = greedy_compress(&h, m).unwrap();
            if penalty_direct(&h, &opt).unwrap() > penalty_direct(&h, &greedy).unwrap() {
                above_greedy += 1;
            }
            let mut best: Vec<(f64, &Vec<Vec<usize>>)> = tables[n]
                .iter()
                .filter(|p| p.len() == m)
                .map(|p| (kl(&masses(p0, p), &masses(p1, p)), p))
                .collect();
            best.sort_by(|a, b| b.0.total_cmp(&a.0));
            let opt_value = kl(&masses(p0, opt.groups()), &masses(p1, opt.groups()));
            let gap = (best[0].0 - opt_value).abs();
            worst_value_gap = worst_value_gap.max(gap);
            let unique = best.len() == 1 || best[0].0 - best[1].0 > 1e-12;
            let same = Compressor::new(best[0].1.clone(), n).unwrap() == opt;
            if gap > 1e-12 || (unique && !same) {
                mismatches += 1;
            }
        }
    }
    outcome(
        above_greedy == 0 && mismatches == 0,
        format!(
            "{cases} (pair, M) cases: optimal above greedy {above_greedy}, enumerator mismatches {mismatches}, max value gap {worst_value_gap:.3e}"
        ),
    )
}

fn paper_config(methods: Vec<Method>, rates: Vec<usize>, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        source: SourceSpec::Binomial { alphabet_size: 13, s0: 0.4, s1: 0.6 },
        methods,
        rates,
        test: TestSettings { blocklength: 5, epsilon: 0.05, trials, seed: 2024 },
        format: OutputFormat::Csv,
        out: None,
        optimal_budget: 100_000_000,
    }
}

fn by_method(records: &[SweepRecord], method: Method) -> Vec<&SweepRecord> {
    records.iter().filter(|r| r.method == method).collect()
}

fn design_sweep_small() -> Outcome {
    let h = HypothesisPair::binomial(13, 0.4, 0.6).unwrap();
    let cfg = paper_config(vec![Method::Greedy, Method::Optimal, Method::Universal], (2..=12).collect(), 1);
    let records = run_sweep_on(&h, &cfg, SweepMode::Design, &shotcomp_core::Sequential).unwrap();
    let skipped = records.iter().filter(|r| r.skipped_budget).count();
    let pen = |m: Method| -> Vec<f64> { by_method(&records, m).iter().map(|r| r.penalty_bits.unwrap_or(f64::NAN)).collect() };
    let (opt, greedy, uni) = (pen(Method::Optimal), pen(Method::Greedy), pen(Method::Universal));
    let ordered = (0..11).all(|i| opt[i] <= greedy[i] && greedy[i] <= uni[i] + 1e-12);
    let monotone = greedy.windows(2).all(|w| w[1] <= w[0]);
    let first_small = greedy.iter().position(|&p| p < 1e-3).map(|i| i + 2);
    let pass = skipped == 0 && ordered && monotone && first_small.is_some_and(|m| m < 12);
    outcome(
        pass,
        format!(
            "optimal <= greedy <= universal + 1e-12 at every M: {ordered}; greedy non-increasing: {monotone}; greedy < 1e-3 from M = {}; optimal skipped {skipped}",
            first_small.map_or("never".to_string(), |m| m.to_string())
        ),
    )
}

fn combined_se(a: &SweepRecord, b: &SweepRecord, trials: usize) -> f64 {
    let var = |r: &SweepRecord| {
        let p = r.type2_rate.unwrap();
        p * (1.0 - p) / trials as f64
    };
    (var(a) + var(b)).sqrt()
}

fn error_sweep_small(runner: &Parallel) -> Outcome {
    let trials = 100_000;
    let h = HypothesisPair::binomial(13, 0.4, 0.6).unwrap();
    let cfg = paper_config(vec![Method::Greedy, Method::Universal], (2..=12).collect(), trials);
    let records = run_sweep_on(&h, &cfg, SweepMode::Simulate, runner).unwrap();
    let max_type1 = records.iter().map(|r| r.type1_rate.unwrap()).fold(0.0, f64::max);
    let (greedy, uni) = (by_method(&records, Method::Greedy), by_method(&records, Method::Universal));
    let mut worst_margin = f64::NEG_INFINITY;
    for (g, u) in greedy.iter().zip(&uni) {
        let margin = (g.type2_rate.unwrap() - u.type2_rate.unwrap()) / combined_se(g, u, trials).max(f64::MIN_POSITIVE);
        worst_margin = worst_margin.max(margin);
    }
    outcome(
        max_type1 < 0.05 && worst_margin <= 3.0,
        format!("max type-I {max_type1:.5} (< 0.05); max (greedy - universal) type-II gap {worst_margin:.2} SE (<= 3)"),
    )
}

fn large_alphabet(runner: &Parallel) -> Outcome {
    let h = HypothesisPair::binomial(256, 0.48, 0.52).unwrap();
    let mut cfg = paper_config(vec![Method::Greedy, Method::Universal], vec![2, 4, 8, 16, 32], 10_000);
    cfg.source = SourceSpec::Binomial { alphabet_size: 256, s0: 0.48, s1: 0.52 };
    let records = match run_sweep_on(&h, &cfg, SweepMode::Simulate, runner) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("simulation failed: {e}")),
    };
    let (greedy, uni) = (by_method(&records, Method::Greedy), by_method(&records, Method::Universal));
    let ordered = greedy.iter().zip(&uni).all(|(g, u)| g.penalty_bits.unwrap() <= u.penalty_bits.unwrap());
    let complete = records.iter().all(|r| r.type2_rate.is_some());
    let gaps: Vec<String> = greedy
        .iter()
        .zip(&uni)
        .map(|(g, u)| format!("M={}: {:.4}/{:.4}", g.m, g.penalty_bits.unwrap(), u.penalty_bits.unwrap()))
        .collect();
    outcome(ordered && complete, format!("greedy <= universal penalty: {ordered}; simulated {}; greedy/universal {}", records.len(), gaps.join(", ")))
}

fn convergence_probe(runner: &Parallel) -> Outcome {
    let h = HypothesisPair::from_vecs(vec![0.9, 0.1], vec![0.1, 0.9]).unwrap();
    let c = Compressor::identity(2);
    let target = 0.8 * 9f64.log2();
    let ns = [20, 40, 80];
    let lr = exponent_convergence_probe(&h, &c, 0.05, &ns, 1_000_000, 7, Type2Estimator::LikelihoodRatio, runner).unwrap();
    let direct = exponent_convergence_probe(&h, &c, 0.05, &ns, 1_000_000, 7, Type2Estimator::Direct, runner).unwrap();
    let exps: Vec<Option<f64>> = lr.iter().map(|p| p.exponent).collect();
    let pass = match exps[..] {
        [Some(a), Some(b), Some(c80)] => a < b && b < c80 && ((c80 - target) / target).abs() <= 0.25,
        _ => false,
    };
    let show = |pts: &[shotcomp_core::ExponentPoint]| {
        pts.iter()
            .map(|p| match p.exponent {
                Some(e) => format!("n={}: {e:.4}", p.blocklength),
                None => format!("n={}: beta = 0", p.blocklength),
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    outcome(
        pass,
        format!(
            "target {target:.4}; reweighted estimate {}; direct counting {}",
            show(&lr),
            show(&direct)
        ),
    )
}

/// Minimum over the step-1e-3 grid of the capped simplex of the worse KL.
fn grid_delta(h: &HypothesisPair) -> f64 {
    let (p0, p1) = (h.p0().probs(), h.p1().probs());
    let mut best = f64::INFINITY;
    for i in 0..=500 {
        for j in 0..=500 {
            let k = 1000 - i - j;
            if k > 500 || i + j > 1000 {
                continue;
            }
            let q = [i as f64 / 1000.0, j as f64 / 1000.0, k as f64 / 1000.0];
            best = best.min(kl(p0, &q).max(kl(p1, &q)));
        }
    }
    best
}

fn q_star_grid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let h = random_pair(&mut rng, 3);
        let delta = solve_q_star(&h, 2, 1e-9).unwrap().delta;
        worst = worst.max((delta - grid_delta(&h)).abs());
    }
    outcome(worst <= 1e-3, format!("100 pairs, max |delta - grid| = {worst:.3e} (<= 1e-3)"))
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_shotcomp"))
            .args(["simulate", "--methods", "identity,greedy,universal", "--rates", "2:12", "--trials", "20000", "--seed", "9", "--threads", threads])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let one = run("1");
    let four = run("4");
    let again = run("4");
    let rows = one.iter().filter(|&&b| b == b'\n').count() - 1;
    outcome(one == four && four == again, format!("{rows} rows; threads 1 vs 4 identical: {}; repeat identical: {}", one == four, four == again))
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let runner = Parallel::new(None).unwrap();
    let instances = identity_instances();
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("penalty identity", Box::new(|| penalty_identity(&instances))),
        ("data processing", Box::new(|| data_processing(&instances))),
        ("greedy vs optimal oracle", Box::new(greedy_vs_optimal)),
        ("design sweep |X|=13", Box::new(design_sweep_small)),
        ("error sweep |X|=13", Box::new(|| error_sweep_small(&runner))),
        ("large alphabet sweep |X|=256", Box::new(|| large_alphabet(&runner))),
        ("exponent convergence probe", Box::new(|| convergence_probe(&runner))),
        ("Q* grid certification", Box::new(q_star_grid)),
        ("determinism across threads", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!result.pass);
        println!("criterion {} [{name}]: {verdict} ({:.1}s) {}", i + 1, start.elapsed().as_secs_f64(), result.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

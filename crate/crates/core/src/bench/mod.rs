//! Experiment grids: generate ground truth, learn, score, and stream one CSV
//! row per (scenario, repetition, algorithm).

mod metrics;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use metrics::{skeleton_metrics, SkeletonMetrics};

use crate::citest::{CiTester, FisherZ, OracleTester};
use crate::dataset::Dataset;
use crate::error::Result;
use crate::lmarvel::{learn_pag, LearnConfig, Learned};
use crate::mbound::AlphaPolicy;
use crate::seed::child_seed;
use crate::sem::{generate_scenario, Scenario, ScenarioConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "lmarvel-fisherz")]
    LmarvelFisherZ,
    #[serde(rename = "lmarvel-oracle")]
    LmarvelOracle,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::LmarvelFisherZ => "lmarvel-fisherz",
            Algorithm::LmarvelOracle => "lmarvel-oracle",
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub graph_id: String,
    pub generator: String,
    pub n_obs: usize,
    pub n_latent: usize,
    pub n_selection: usize,
    pub algorithm: String,
    /// Every test the tester ran, boundary discovery included.
    pub n_ci_tests: u64,
    /// The share of `n_ci_tests` spent on the initial Markov boundaries.
    pub n_mb_tests: u64,
    pub runtime_ms: f64,
    /// Conditioning-set statistics of the tests after the initial boundaries.
    pub mean_cond_size: f64,
    pub max_cond_size: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub seed: u64,
    /// `ok`, or `error: <message>`.
    pub status: String,
}

impl BenchRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

pub const CSV_HEADER: &[&str] = &[
    "graph_id",
    "generator",
    "n_obs",
    "n_latent",
    "n_selection",
    "algorithm",
    "n_ci_tests",
    "n_mb_tests",
    "runtime_ms",
    "mean_cond_size",
    "max_cond_size",
    "precision",
    "recall",
    "f1",
    "seed",
    "status",
];

fn default_repetitions() -> usize {
    1
}

fn default_alpha() -> f64 {
    0.01
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::LmarvelFisherZ]
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub scenarios: Vec<ScenarioConfig>,
    /// Seeds per scenario; repetition `r` uses child seed `r` of the
    /// scenario's seed.
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub tc_alpha: AlphaPolicy,
    /// See [`LearnConfig::scan_slack`].
    #[serde(default)]
    pub scan_slack: Option<usize>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl BenchConfig {
    pub fn new(scenarios: Vec<ScenarioConfig>, repetitions: usize) -> Self {
        Self {
            scenarios,
            repetitions,
            alpha: default_alpha(),
            tc_alpha: AlphaPolicy::default(),
            scan_slack: None,
            algorithms: default_algorithms(),
            workers: default_workers(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn failed(
    cfg: &ScenarioConfig,
    graph_id: &str,
    seed: u64,
    algorithm: Algorithm,
    message: String,
) -> BenchRecord {
    BenchRecord {
        graph_id: graph_id.to_string(),
        generator: cfg.generator.tag(),
        n_obs: 0,
        n_latent: 0,
        n_selection: 0,
        algorithm: algorithm.tag().to_string(),
        n_ci_tests: 0,
        n_mb_tests: 0,
        runtime_ms: 0.0,
        mean_cond_size: 0.0,
        max_cond_size: 0,
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        seed,
        status: format!("error: {message}"),
    }
}

fn learn(
    scenario: &Scenario,
    cfg: &ScenarioConfig,
    seed: u64,
    algorithm: Algorithm,
    alpha: f64,
    learn_cfg: &LearnConfig,
) -> Result<(Learned, u64, f64)> {
    let labels = scenario.mag.labels().to_vec();
    match algorithm {
        Algorithm::LmarvelOracle => {
            let start = Instant::now();
            let mut tester = CiTester::new(OracleTester::new(scenario.mag.clone()));
            let learned = learn_pag(&labels, &mut tester, learn_cfg)?;
            Ok((
                learned,
                tester.stats().total_tests,
                start.elapsed().as_secs_f64() * 1e3,
            ))
        }
        Algorithm::LmarvelFisherZ => {
            let data: Dataset<f64> = scenario.sample(cfg, seed)?;
            let start = Instant::now();
            let mut tester = CiTester::new(FisherZ::new(&data, alpha)?);
            let learned = learn_pag(&labels, &mut tester, learn_cfg)?;
            Ok((
                learned,
                tester.stats().total_tests,
                start.elapsed().as_secs_f64() * 1e3,
            ))
        }
    }
}

/// Records for one (scenario, repetition): one per configured algorithm.
/// Failures become records with an error status.
pub fn run_cell(
    config: &BenchConfig,
    scenario_index: usize,
    repetition: usize,
) -> Vec<BenchRecord> {
    let cfg = &config.scenarios[scenario_index];
    let seed = child_seed(cfg.seed, repetition as u64);
    let graph_id = format!("{}#{repetition}", cfg.label());
    let scenario = match generate_scenario(cfg, seed) {
        Ok(s) => s,
        Err(e) => {
            log::warn!("{graph_id}: {e}");
            return config
                .algorithms
                .iter()
                .map(|&a| failed(cfg, &graph_id, seed, a, e.to_string()))
                .collect();
        }
    };
    let learn_cfg = LearnConfig {
        tc_alpha: config.tc_alpha,
        scan_slack: config.scan_slack,
    };
    config
        .algorithms
        .iter()
        .map(|&algorithm| {
            let scored = learn(&scenario, cfg, seed, algorithm, config.alpha, &learn_cfg).and_then(
                |(learned, total, ms)| {
                    Ok((
                        skeleton_metrics(&learned.pag, &scenario.mag)?,
                        learned,
                        total,
                        ms,
                    ))
                },
            );
            match scored {
                Ok((m, learned, total, ms)) => BenchRecord {
                    graph_id: graph_id.clone(),
                    generator: cfg.generator.tag(),
                    n_obs: scenario.roles.observed.len(),
                    n_latent: scenario.roles.latent.len(),
                    n_selection: scenario.roles.selection.len(),
                    algorithm: algorithm.tag().to_string(),
                    n_ci_tests: total,
                    n_mb_tests: learned.trace.tc_tests,
                    runtime_ms: ms,
                    mean_cond_size: learned.trace.learner_stats.mean_cond_size,
                    max_cond_size: learned.trace.learner_stats.max_cond_size,
                    precision: m.precision,
                    recall: m.recall,
                    f1: m.f1,
                    seed,
                    status: "ok".into(),
                },
                Err(e) => {
                    log::warn!("{graph_id} {}: {e}", algorithm.tag());
                    failed(cfg, &graph_id, seed, algorithm, e.to_string())
                }
            }
        })
        .collect()
}

/// Runs every cell of the grid on up to `config.workers` threads and writes
/// the records to `out` in grid order as they complete.
pub fn run_grid<W: Write>(config: &BenchConfig, out: W) -> Result<Vec<BenchRecord>> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    writer.flush()?;
    let jobs: Vec<(usize, usize)> = (0..config.scenarios.len())
        .flat_map(|s| (0..config.repetitions).map(move |r| (s, r)))
        .collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    let mut records = Vec::new();
    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..config.workers.clamp(1, jobs.len().max(1)) {
            let tx = tx.clone();
            let (jobs, next) = (&jobs, &next);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(s, r)) = jobs.get(i) else { break };
                if tx.send((i, run_cell(config, s, r))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut emitted = 0;
        for (i, rows) in rx {
            pending.insert(i, rows);
            while let Some(rows) = pending.remove(&emitted) {
                for row in rows {
                    writer.serialize(&row)?;
                    records.push(row);
                }
                writer.flush()?;
                emitted += 1;
            }
        }
        Ok(())
    })?;
    Ok(records)
}

pub fn run_grid_to_path(config: &BenchConfig, path: &Path) -> Result<Vec<BenchRecord>> {
    run_grid(config, std::fs::File::create(path)?)
}

pub fn read_records(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sem::{GeneratorConfig, RoleCount};

    fn small() -> BenchConfig {
        let mut s = ScenarioConfig::new(GeneratorConfig::Er { n: 8, p: 0.3 });
        s.latent = RoleCount::Count(1);
        s.selection = RoleCount::Count(1);
        s.seed = 3;
        let mut cfg = BenchConfig::new(vec![s], 4);
        cfg.algorithms = vec![Algorithm::LmarvelFisherZ, Algorithm::LmarvelOracle];
        cfg
    }

    #[test]
    fn zero_repetitions_writes_header_only() {
        let mut out = Vec::new();
        let records = run_grid(&BenchConfig::new(small().scenarios, 0), &mut out).unwrap();
        assert!(records.is_empty());
        assert_eq!(
            String::from_utf8(out).unwrap().trim_end(),
            CSV_HEADER.join(",")
        );
    }

    #[test]
    fn oracle_rows_are_perfect_and_output_is_deterministic() {
        let cfg = small();
        let mut one = Vec::new();
        let a = run_grid(&cfg, &mut one).unwrap();
        let mut threaded = cfg.clone();
        threaded.workers = 3;
        let b = run_grid(&threaded, Vec::new()).unwrap();
        assert_eq!(a.len(), 8);
        let strip = |r: &[BenchRecord]| {
            r.iter()
                .map(|r| BenchRecord {
                    runtime_ms: 0.0,
                    ..r.clone()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        for r in a.iter().filter(|r| r.algorithm == "lmarvel-oracle") {
            assert!(r.is_ok(), "{}", r.status);
            assert_eq!(r.f1, 1.0);
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let written = run_grid_to_path(&small(), &path).unwrap();
        assert_eq!(read_records(&path).unwrap(), written);
    }

    #[test]
    fn failures_are_recorded() {
        let mut s = ScenarioConfig::new(GeneratorConfig::Er { n: 3, p: 0.3 });
        s.selection = RoleCount::Count(5);
        let records = run_grid(&BenchConfig::new(vec![s], 2), Vec::new()).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.status.starts_with("error:")));
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use lmarvel::bench::{run_grid_to_path, BenchConfig};
use lmarvel::citest::{CiTester, FisherZ, OracleTester};
use lmarvel::lmarvel::{learn_pag, LearnConfig, Learned};
use lmarvel::mbound::AlphaPolicy;
use lmarvel::removability::{is_removable_graphical, Witness};
use lmarvel::sem::{generate_scenario, Roles, ScenarioConfig};
use lmarvel::{Dag, Dataset, Error, Mag, MixedGraph, Result, VertexSet};

#[derive(Parser)]
#[command(
    name = "lmarvel",
    version,
    about = "Causal structure learning with latent and selection variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a ground-truth DAG, its MAG and an observed dataset.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Latent projection of a DAG onto the observed variables.
    Project {
        #[arg(long)]
        dag: PathBuf,
        /// Comma-separated observed vertices; the remaining unselected ones are latent.
        #[arg(long)]
        observed: String,
        #[arg(long, default_value = "")]
        selection: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn a PAG from data with Fisher-Z tests.
    Learn {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        /// Level of the Markov boundary tests: a number, or `auto` for 2/n².
        #[arg(long, default_value = "auto")]
        tc_alpha: String,
        /// Only scan vertices whose boundary is at most this much larger than the smallest.
        #[arg(long)]
        scan_slack: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Learn the PAG of a DAG's projection with an m-separation oracle.
    OracleLearn {
        #[arg(long)]
        dag: PathBuf,
        #[arg(long, default_value = "")]
        latent: String,
        #[arg(long, default_value = "")]
        selection: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run an experiment grid and write one CSV row per run.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Removability of a MAG vertex, with a witness when it is not removable.
    Removable {
        #[arg(long)]
        mag: PathBuf,
        #[arg(long)]
        vertex: String,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 4 } else { 3 })
        }
    }
}

fn vertex_list(g: &MixedGraph, list: &str) -> Result<VertexSet> {
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    g.vertices_of(&names)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn parse_tc_alpha(text: &str) -> Result<AlphaPolicy> {
    if text.eq_ignore_ascii_case("auto") {
        return Ok(AlphaPolicy::Auto);
    }
    match text.parse::<f64>() {
        Ok(a) if a > 0.0 && a < 1.0 => Ok(AlphaPolicy::Fixed(a)),
        _ => Err(Error::InvalidConfig(format!(
            "--tc-alpha expects a level in (0, 1) or `auto`, got `{text}`"
        ))),
    }
}

fn trace_json(labels: &[String], learned: &Learned, total_tests: u64) -> serde_json::Value {
    let name = |v: &usize| labels[*v].clone();
    json!({
        "labels": labels,
        "removal_order": learned.trace.removal_order.iter().map(name).collect::<Vec<_>>(),
        "initial_markov_boundaries": learned.trace.initial_mb.iter()
            .map(|(v, mb)| (name(v), json!(mb.iter().map(name).collect::<Vec<_>>())))
            .collect::<serde_json::Map<_, _>>(),
        "iterations": learned.trace.iterations,
        "fallbacks": learned.trace.fallbacks(),
        "total_ci_tests": total_tests,
        "markov_boundary_tests": learned.trace.tc_tests,
        "learner_stats": learned.trace.learner_stats,
        "sepset_conflicts": learned.store.conflicts(),
    })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate { config, out_dir } => {
            let cfg = ScenarioConfig::read(&config)?;
            let scenario = generate_scenario(&cfg, cfg.seed)?;
            let data: Dataset = scenario.sample(&cfg, cfg.seed)?;
            fs::create_dir_all(&out_dir)?;
            scenario.dag.write(&out_dir.join("dag.txt"))?;
            scenario.mag.write(&out_dir.join("mag.txt"))?;
            write_json(
                &out_dir.join("roles.json"),
                &serde_json::to_value(scenario.roles.labelled(&scenario.dag))?,
            )?;
            data.write_csv(&out_dir.join("data.csv"))?;
            println!(
                "{} vertices ({} observed), {} MAG edges, {} samples -> {}",
                scenario.dag.n(),
                scenario.roles.observed.len(),
                scenario.mag.edge_count(),
                data.n_samples(),
                out_dir.display()
            );
        }
        Command::Project {
            dag,
            observed,
            selection,
            out,
        } => {
            let dag = Dag::read(&dag)?;
            let observed = vertex_list(&dag, &observed)?;
            let selection = vertex_list(&dag, &selection)?;
            let mag = lmarvel::graph::latent_project(&dag, &observed, &selection)?;
            mag.write(&out)?;
        }
        Command::Learn {
            data,
            alpha,
            tc_alpha,
            scan_slack,
            out,
            trace,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "--alpha must lie in (0, 1), got {alpha}"
                )));
            }
            let config = LearnConfig {
                tc_alpha: parse_tc_alpha(&tc_alpha)?,
                scan_slack,
            };
            let data = Dataset::read_csv(&data)?;
            let labels = data.columns().to_vec();
            let mut tester = CiTester::new(FisherZ::new(&data, alpha)?);
            let learned = learn_pag(&labels, &mut tester, &config)?;
            learned.pag.write(&out)?;
            if let Some(path) = trace {
                write_json(
                    &path,
                    &trace_json(&labels, &learned, tester.stats().total_tests),
                )?;
            }
            println!(
                "{} edges, {} CI tests",
                learned.pag.edge_count(),
                tester.stats().total_tests
            );
        }
        Command::OracleLearn {
            dag,
            latent,
            selection,
            out,
            trace,
        } => {
            let dag = Dag::read(&dag)?;
            let roles = Roles::with(
                dag.n(),
                vertex_list(&dag, &latent)?,
                vertex_list(&dag, &selection)?,
            )?;
            let mag: Mag = roles.project(&dag)?;
            let labels = mag.labels().to_vec();
            let mut tester = CiTester::new(OracleTester::new(mag));
            let learned = learn_pag(&labels, &mut tester, &LearnConfig::default())?;
            learned.pag.write(&out)?;
            if let Some(path) = trace {
                write_json(
                    &path,
                    &trace_json(&labels, &learned, tester.stats().total_tests),
                )?;
            }
            println!(
                "{} edges, {} CI tests",
                learned.pag.edge_count(),
                tester.stats().total_tests
            );
        }
        Command::Bench {
            config,
            out,
            workers,
        } => {
            let mut cfg = BenchConfig::read(&config)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let records = run_grid_to_path(&cfg, &out)?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            println!(
                "{} records ({failed} failed) -> {}",
                records.len(),
                out.display()
            );
        }
        Command::Removable { mag, vertex } => {
            let mag = Mag::read(&mag)?;
            let x = mag.vertex(&vertex)?;
            let verdict = is_removable_graphical(&mag, x)?;
            let name = |v: &usize| mag.label(*v).to_string();
            let witness = match &verdict.witness {
                None => serde_json::Value::Null,
                Some(Witness::NonAdjacentPair { adjacent, other }) => json!({
                    "kind": "non_adjacent_pair",
                    "adjacent": name(adjacent),
                    "other": name(other),
                }),
                Some(Witness::ColliderPath { path, common_child }) => json!({
                    "kind": "collider_path",
                    "path": path.iter().map(name).collect::<Vec<_>>(),
                    "common_child": name(common_child),
                }),
            };
            let value =
                json!({ "vertex": vertex, "removable": verdict.removable, "witness": witness });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
    }
    Ok(())
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{assign_roles, gen_bounded_parent_dag, gen_er_dag, LinearSem, Roles, SelectionPolicy};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Dag, Mag};
use crate::seed::child_seed;
use crate::Scalar;

const INSURANCE: &str = include_str!("../../benchmarks/insurance.txt");

/// Benchmark structures compiled into the crate.
pub const BUILTIN_BENCHMARKS: &[&str] = &["insurance"];

/// DAG from a file in the graph text format.
pub fn load_benchmark(path: &Path) -> Result<Dag> {
    Dag::read(path)
}

/// A structure from [`BUILTIN_BENCHMARKS`].
pub fn builtin_benchmark(name: &str) -> Result<Dag> {
    match name.to_ascii_lowercase().as_str() {
        "insurance" => Dag::parse(INSURANCE),
        _ => Err(Error::InvalidConfig(format!("unknown benchmark `{name}`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorConfig {
    Er {
        n: usize,
        p: f64,
    },
    BoundedParents {
        n: usize,
        max_in: usize,
    },
    Benchmark {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
    },
}

impl GeneratorConfig {
    pub fn tag(&self) -> String {
        match self {
            GeneratorConfig::Er { n, p } => format!("er(n={n},p={p:.4})"),
            GeneratorConfig::BoundedParents { n, max_in } => {
                format!("bounded(n={n},max_in={max_in})")
            }
            GeneratorConfig::Benchmark {
                name: Some(name), ..
            } => name.clone(),
            GeneratorConfig::Benchmark {
                path: Some(path), ..
            } => path
                .file_stem()
                .map_or_else(|| "benchmark".into(), |s| s.to_string_lossy().into_owned()),
            GeneratorConfig::Benchmark { .. } => "benchmark".into(),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Dag> {
        match self {
            GeneratorConfig::Er { n, p } => gen_er_dag(*n, *p, seed),
            GeneratorConfig::BoundedParents { n, max_in } => {
                gen_bounded_parent_dag(*n, *max_in, seed)
            }
            GeneratorConfig::Benchmark {
                name: Some(name),
                path: None,
            } => builtin_benchmark(name),
            GeneratorConfig::Benchmark {
                name: None,
                path: Some(path),
            } => load_benchmark(path),
            GeneratorConfig::Benchmark { .. } => Err(Error::InvalidConfig(
                "a benchmark needs exactly one of `name` and `path`".into(),
            )),
        }
    }
}

/// How many vertices receive a role: an explicit count or a fraction of all
/// vertices (rounded to nearest).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleCount {
    Count(usize),
    Rate(f64),
}

impl Default for RoleCount {
    fn default() -> Self {
        RoleCount::Count(0)
    }
}

impl RoleCount {
    pub fn resolve(self, n: usize) -> Result<usize> {
        match self {
            RoleCount::Count(k) => Ok(k),
            RoleCount::Rate(r) if (0.0..=1.0).contains(&r) => Ok((r * n as f64).round() as usize),
            RoleCount::Rate(r) => Err(Error::InvalidConfig(format!("rate {r} outside [0, 1]"))),
        }
    }
}

/// Named coefficient and noise ranges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Coefficients ±(0.5, 2), noise deviations (1, √3).
    #[default]
    Random,
    /// Coefficients ±(0.5, 1), noise deviations (√0.5, 1).
    Benchmark,
    /// Coefficients ±(1, 1.5), noise deviations (1, √2).
    Appendix,
}

impl Preset {
    pub fn coef_range(self) -> (f64, f64) {
        match self {
            Preset::Random => (0.5, 2.0),
            Preset::Benchmark => (0.5, 1.0),
            Preset::Appendix => (1.0, 1.5),
        }
    }

    pub fn noise_sd_range(self) -> (f64, f64) {
        match self {
            Preset::Random => (1.0, 3f64.sqrt()),
            Preset::Benchmark => (0.5f64.sqrt(), 1.0),
            Preset::Appendix => (1.0, 2f64.sqrt()),
        }
    }
}

fn default_samples_per_observed() -> usize {
    50
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub generator: GeneratorConfig,
    #[serde(default)]
    pub latent: RoleCount,
    #[serde(default)]
    pub selection: RoleCount,
    #[serde(default)]
    pub preset: Preset,
    /// Overrides the preset's coefficient magnitudes.
    #[serde(default)]
    pub coef_range: Option<(f64, f64)>,
    /// Overrides the preset's noise deviations.
    #[serde(default)]
    pub noise_sd_range: Option<(f64, f64)>,
    #[serde(default = "default_samples_per_observed")]
    pub samples_per_observed: usize,
    /// Fixed sample count; overrides `samples_per_observed`.
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub chordal_constraint: bool,
    #[serde(default)]
    pub selection_policy: SelectionPolicy,
}

impl ScenarioConfig {
    pub fn new(generator: GeneratorConfig) -> Self {
        Self {
            name: None,
            generator,
            latent: RoleCount::default(),
            selection: RoleCount::default(),
            preset: Preset::default(),
            coef_range: None,
            noise_sd_range: None,
            samples_per_observed: default_samples_per_observed(),
            samples: None,
            seed: 0,
            chordal_constraint: true,
            selection_policy: SelectionPolicy::default(),
        }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.generator.tag())
    }

    pub fn coef_range(&self) -> (f64, f64) {
        self.coef_range.unwrap_or(self.preset.coef_range())
    }

    pub fn noise_sd_range(&self) -> (f64, f64) {
        self.noise_sd_range.unwrap_or(self.preset.noise_sd_range())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Ground truth for one (config, seed) pair.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub dag: Dag,
    pub roles: Roles,
    pub mag: Mag,
    pub sem: LinearSem<f64>,
}

impl Scenario {
    pub fn n_samples(&self, cfg: &ScenarioConfig) -> usize {
        cfg.samples
            .unwrap_or(cfg.samples_per_observed * self.roles.observed.len())
    }

    /// Observed data for the scenario, drawn from its own seed stream.
    pub fn sample<T: Scalar>(&self, cfg: &ScenarioConfig, seed: u64) -> Result<Dataset<T>> {
        let sem = LinearSem::<T>::random(
            self.dag.clone(),
            cfg.coef_range(),
            cfg.noise_sd_range(),
            child_seed(seed, 2),
        )?;
        sem.sample(
            &self.roles,
            self.n_samples(cfg),
            child_seed(seed, 3),
            cfg.selection_policy,
        )
    }
}

/// Structure, roles, projection and SEM parameters. Child seeds 0 to 3 of
/// `seed` drive the graph, the roles, the parameters and the samples.
pub fn generate_scenario(cfg: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    let dag = cfg.generator.generate(child_seed(seed, 0))?;
    let n = dag.n();
    let latent = cfg.latent.resolve(n)?;
    let selection = cfg.selection.resolve(n)?;
    let roles = assign_roles(
        &dag,
        latent,
        selection,
        child_seed(seed, 1),
        cfg.chordal_constraint,
    )?;
    let mag = roles.project(&dag)?;
    let sem = LinearSem::random(
        dag.clone(),
        cfg.coef_range(),
        cfg.noise_sd_range(),
        child_seed(seed, 2),
    )?;
    Ok(Scenario {
        dag,
        roles,
        mag,
        sem,
    })
}

//! Ground truth: random and benchmark DAGs, latent/selection roles and
//! linear-Gaussian structural equation models with selection by rejection.

mod config;
mod generate;
mod model;

pub use config::{
    builtin_benchmark, generate_scenario, load_benchmark, GeneratorConfig, Preset, RoleCount,
    Scenario, ScenarioConfig, BUILTIN_BENCHMARKS,
};
pub use generate::{
    assign_roles, gen_bounded_parent_dag, gen_er_dag, LabelledRoles, Roles, ROLE_RETRY_CAP,
};
pub use model::{LinearSem, SelectionPolicy, REJECTION_WINDOW};

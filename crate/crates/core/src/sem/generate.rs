use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{latent_project, Dag, Mag, MixedGraph, VertexId, VertexSet};
use crate::seed::rng;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

/// Erdős-Rényi DAG: every pair independently with probability `p`, oriented
/// along a random permutation.
pub fn gen_er_dag(n: usize, p: f64, seed: u64) -> Result<Dag> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = rng(seed);
    let mut position: Vec<usize> = (0..n).collect();
    position.shuffle(&mut rng);
    let mut g = MixedGraph::new(&labels(n))?;
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                if position[u] < position[v] {
                    g.add_directed(u, v)?;
                } else {
                    g.add_directed(v, u)?;
                }
            }
        }
    }
    Dag::new(g)
}

/// DAG over a random order where each vertex draws its in-degree uniformly
/// from `0..=min(max_in, #predecessors)` and then its parents uniformly.
pub fn gen_bounded_parent_dag(n: usize, max_in: usize, seed: u64) -> Result<Dag> {
    let mut rng = rng(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut g = MixedGraph::new(&labels(n))?;
    for k in 0..n {
        let count = rng.random_range(0..=max_in.min(k));
        for i in index::sample(&mut rng, k.max(1), count.min(k)) {
            g.add_directed(order[i], order[k])?;
        }
    }
    Dag::new(g)
}

/// Disjoint observed / latent / selection split of a DAG's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub observed: VertexSet,
    pub latent: VertexSet,
    pub selection: VertexSet,
}

impl Roles {
    pub fn all_observed(n: usize) -> Self {
        Self {
            observed: (0..n).collect(),
            latent: VertexSet::new(),
            selection: VertexSet::new(),
        }
    }

    /// Roles from explicit latent and selection sets; the rest is observed.
    pub fn with(n: usize, latent: VertexSet, selection: VertexSet) -> Result<Self> {
        if let Some(v) = latent.intersection(&selection).next() {
            return Err(Error::InvalidPartition(format!(
                "#{v} is both latent and selected"
            )));
        }
        if let Some(&v) = latent.iter().chain(&selection).find(|&&v| v >= n) {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        let observed = (0..n)
            .filter(|v| !latent.contains(v) && !selection.contains(v))
            .collect();
        Ok(Self {
            observed,
            latent,
            selection,
        })
    }

    pub fn project(&self, dag: &Dag) -> Result<Mag> {
        latent_project(dag, &self.observed, &self.selection)
    }

    /// Labels per role, for serialisation.
    pub fn labelled(&self, g: &MixedGraph) -> LabelledRoles {
        let names = |s: &VertexSet| s.iter().map(|&v| g.label(v).to_string()).collect();
        LabelledRoles {
            observed: names(&self.observed),
            latent: names(&self.latent),
            selection: names(&self.selection),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledRoles {
    pub observed: Vec<String>,
    pub latent: Vec<String>,
    pub selection: Vec<String>,
}

/// Attempts made by [`assign_roles`] before giving up.
pub const ROLE_RETRY_CAP: usize = 1000;

/// Uniformly random roles. With `require_chordal`, draws are repeated until
/// the projected MAG has a chordal undirected part.
pub fn assign_roles(
    dag: &Dag,
    latent_count: usize,
    selection_count: usize,
    seed: u64,
    require_chordal: bool,
) -> Result<Roles> {
    let n = dag.n();
    if latent_count + selection_count > n {
        return Err(Error::ConstraintUnsatisfiable(format!(
            "{latent_count} latent and {selection_count} selection variables among {n}"
        )));
    }
    let mut rng = rng(seed);
    let mut vertices: Vec<VertexId> = (0..n).collect();
    for _ in 0..ROLE_RETRY_CAP {
        vertices.shuffle(&mut rng);
        let latent: VertexSet = vertices[..latent_count].iter().copied().collect();
        let selection: VertexSet = vertices[latent_count..latent_count + selection_count]
            .iter()
            .copied()
            .collect();
        let roles = Roles::with(n, latent, selection)?;
        if !require_chordal || roles.project(dag)?.undirected_part_chordal() {
            return Ok(roles);
        }
    }
    Err(Error::ConstraintUnsatisfiable(format!(
        "no chordal role assignment in {ROLE_RETRY_CAP} draws"
    )))
}

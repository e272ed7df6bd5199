#![allow(dead_code)]

use std::sync::Mutex;

use lmarvel::citest::{CiBackend, CiQuery, CiTester, OracleTester};
use lmarvel::lmarvel::{learn_pag, LearnConfig, Learned};
use lmarvel::seed::{child_seed, rng};
use lmarvel::sem::{assign_roles, gen_er_dag, Roles};
use lmarvel::{Dag, Mag, Result, VertexId, VertexSet};
use rand::Rng;

/// A DAG with roles and its projection.
#[derive(Clone, Debug)]
pub struct Case {
    pub dag: Dag,
    pub roles: Roles,
    pub mag: Mag,
}

impl Case {
    /// Vertex of the DAG behind MAG vertex `v`.
    pub fn dag_vertex(&self, v: VertexId) -> VertexId {
        *self.roles.observed.iter().nth(v).unwrap()
    }
}

/// Random ER scenario: up to `max_total` vertices, at most `max_latent` latent
/// and `max_selection` selection variables, chordal undirected part.
pub fn random_case(
    seed: u64,
    max_total: usize,
    max_latent: usize,
    max_selection: usize,
) -> Option<Case> {
    let mut r = rng(seed);
    let n = r.random_range(3..=max_total);
    let p = r.random_range(0.15..0.6);
    let latent = r.random_range(0..=max_latent.min(n - 2));
    let selection = r.random_range(0..=max_selection.min(n - 2 - latent));
    let dag = gen_er_dag(n, p, child_seed(seed, 0)).ok()?;
    let roles = assign_roles(&dag, latent, selection, child_seed(seed, 1), true).ok()?;
    let mag = roles.project(&dag).ok()?;
    Some(Case { dag, roles, mag })
}

/// `count` cases from consecutive seeds starting at `base`, skipping
/// infeasible draws.
pub fn cases(
    base: u64,
    count: usize,
    max_total: usize,
    max_latent: usize,
    max_selection: usize,
) -> Vec<Case> {
    (base..)
        .filter_map(|s| random_case(s, max_total, max_latent, max_selection))
        .take(count)
        .collect()
}

pub fn subsets(items: &[VertexId]) -> impl Iterator<Item = VertexSet> + '_ {
    (0u32..1 << items.len()).map(move |bits| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

pub fn oracle_learn(mag: &Mag) -> Result<(Learned, CiTester<Recording<OracleTester>>)> {
    let mut tester = CiTester::new(Recording::new(OracleTester::new(mag.clone())));
    let learned = learn_pag(mag.labels(), &mut tester, &LearnConfig::default())?;
    Ok((learned, tester))
}

/// Backend wrapper that logs every query reaching the backend.
#[derive(Debug)]
pub struct Recording<B> {
    pub inner: B,
    pub log: Mutex<Vec<CiQuery>>,
}

impl<B> Recording<B> {
    pub fn new(inner: B) -> Self {
        Self {
            inner,
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn queries(&self) -> Vec<CiQuery> {
        self.log.lock().unwrap().clone()
    }

    pub fn has_duplicates(&self) -> bool {
        let log = self.queries();
        let distinct: std::collections::HashSet<_> = log.iter().collect();
        distinct.len() != log.len()
    }
}

impl<B: CiBackend> CiBackend for Recording<B> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn independent(&self, q: &CiQuery, alpha: Option<f64>) -> Result<bool> {
        self.log.lock().unwrap().push(q.clone());
        self.inner.independent(q, alpha)
    }

    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }
}

/// Upper bound on oracle-mode tests for `n` variables and maximum
/// `|Pa⁺|` of `d`.
pub fn test_budget(n: usize, d: usize) -> u64 {
    let (n, d) = (n as u64, d as u64);
    4 * (n * n + n * d * d * (1u64 << d))
}

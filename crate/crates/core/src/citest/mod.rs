//! Conditional-independence testing.
//!
//! Backends implement [`CiBackend`]; the learner only talks to a
//! [`CiTester`], which canonicalises queries, caches verdicts and keeps the
//! counters reported by the benchmarks.

mod fisher_z;
mod oracle;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{VertexId, VertexSet};

pub use fisher_z::FisherZ;
pub use oracle::OracleTester;

/// `x ⊥ y | z` with `x < y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CiQuery {
    pub x: VertexId,
    pub y: VertexId,
    pub z: VertexSet,
}

impl CiQuery {
    pub fn new(x: VertexId, y: VertexId, z: VertexSet) -> Result<Self> {
        if x == y || z.contains(&x) || z.contains(&y) {
            return Err(Error::InvalidQuery(format!(
                "CI query needs distinct endpoints outside the conditioning set (#{x}, #{y})"
            )));
        }
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        Ok(Self { x, y, z })
    }
}

pub trait CiBackend {
    /// Number of variables the backend answers for (ids `0..n_vars`).
    fn n_vars(&self) -> usize;

    /// `true` means independent. `alpha` overrides the backend's default
    /// significance level; exact backends ignore it.
    fn independent(&self, q: &CiQuery, alpha: Option<f64>) -> Result<bool>;

    /// Exact backends answer from the ground truth, so verdicts never depend
    /// on the significance level and every verdict is correct.
    fn is_exact(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CiStats {
    pub total_tests: u64,
    pub max_cond_size: usize,
    pub mean_cond_size: f64,
    pub cache_hits: u64,
}

#[derive(Clone, Debug, Default)]
struct Counter {
    tests: u64,
    cond_sum: u64,
    cond_max: usize,
    hits: u64,
}

impl Counter {
    fn record(&mut self, cond: usize) {
        self.tests += 1;
        self.cond_sum += cond as u64;
        self.cond_max = self.cond_max.max(cond);
    }

    fn snapshot(&self) -> CiStats {
        CiStats {
            total_tests: self.tests,
            max_cond_size: self.cond_max,
            mean_cond_size: if self.tests == 0 {
                0.0
            } else {
                self.cond_sum as f64 / self.tests as f64
            },
            cache_hits: self.hits,
        }
    }
}

/// Caching, counting front end over a backend.
///
/// A cache hit is not a test. Besides run totals, a second counter can be
/// restarted with [`CiTester::begin_phase`] to report on part of a run.
#[derive(Debug)]
pub struct CiTester<B> {
    backend: B,
    cache: HashMap<(CiQuery, Option<u64>), bool>,
    total: Counter,
    phase: Counter,
    default_alpha: Option<f64>,
}

impl<B: CiBackend> CiTester<B> {
    pub fn new(backend: B) -> Self {
        Self {
            backend,
            cache: HashMap::new(),
            total: Counter::default(),
            phase: Counter::default(),
            default_alpha: None,
        }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn n_vars(&self) -> usize {
        self.backend.n_vars()
    }

    pub fn is_exact(&self) -> bool {
        self.backend.is_exact()
    }

    /// Overrides the backend's significance level for subsequent [`ci`](Self::ci) calls.
    pub fn set_alpha(&mut self, alpha: Option<f64>) {
        self.default_alpha = alpha;
    }

    pub fn ci(&mut self, x: VertexId, y: VertexId, z: &VertexSet) -> Result<bool> {
        self.ci_at(x, y, z, self.default_alpha)
    }

    /// Test at an explicit significance level (`None` is the backend default).
    pub fn ci_at(
        &mut self,
        x: VertexId,
        y: VertexId,
        z: &VertexSet,
        alpha: Option<f64>,
    ) -> Result<bool> {
        let q = CiQuery::new(x, y, z.clone())?;
        let alpha_key = if self.backend.is_exact() {
            None
        } else {
            alpha.map(f64::to_bits)
        };
        let key = (q, alpha_key);
        if let Some(&v) = self.cache.get(&key) {
            self.total.hits += 1;
            self.phase.hits += 1;
            return Ok(v);
        }
        let v = self.backend.independent(&key.0, alpha)?;
        self.total.record(key.0.z.len());
        self.phase.record(key.0.z.len());
        self.cache.insert(key, v);
        Ok(v)
    }

    /// Whether the query was already answered (at the current default level).
    pub fn is_cached(&self, x: VertexId, y: VertexId, z: &VertexSet) -> bool {
        let Ok(q) = CiQuery::new(x, y, z.clone()) else {
            return false;
        };
        let alpha_key = if self.backend.is_exact() {
            None
        } else {
            self.default_alpha.map(f64::to_bits)
        };
        self.cache.contains_key(&(q, alpha_key))
    }

    pub fn stats(&self) -> CiStats {
        self.total.snapshot()
    }

    /// Restarts the phase counter.
    pub fn begin_phase(&mut self) {
        self.phase = Counter::default();
    }

    pub fn phase_stats(&self) -> CiStats {
        self.phase.snapshot()
    }

    /// Number of distinct queries answered by the backend. Equal to
    /// `stats().total_tests` by construction: no query reaches the backend twice.
    pub fn distinct_queries(&self) -> usize {
        self.cache.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Mag;

    fn tester() -> CiTester<OracleTester> {
        let mag = Mag::parse("vertices: T W Y Z\nY <-> W\nW -> Z\nW -> T\nT -> Z\n").unwrap();
        CiTester::new(OracleTester::new(mag))
    }

    #[test]
    fn canonical_queries() {
        let q = CiQuery::new(3, 1, VertexSet::from([0])).unwrap();
        assert_eq!((q.x, q.y), (1, 3));
        assert!(CiQuery::new(1, 1, VertexSet::new()).is_err());
        assert!(CiQuery::new(1, 2, VertexSet::from([2])).is_err());
    }

    #[test]
    fn counting_and_caching() {
        let mut t = tester();
        assert_eq!(t.stats(), CiStats::default());
        let (w, y, z) = (1, 2, 3);
        assert!(t.ci(y, z, &VertexSet::from([w])).unwrap());
        assert!(!t.ci(y, z, &VertexSet::new()).unwrap());
        assert!(!t.ci(w, z, &VertexSet::from([0])).unwrap());
        assert_eq!(t.stats().total_tests, 3);
        assert_eq!(t.stats().max_cond_size, 1);
        assert!((t.stats().mean_cond_size - 2.0 / 3.0).abs() < 1e-12);
        assert!(t.ci(z, y, &VertexSet::from([w])).unwrap());
        assert_eq!(t.stats().total_tests, 3);
        assert_eq!(t.stats().cache_hits, 1);
        assert_eq!(t.distinct_queries(), 3);
    }

    #[test]
    fn phases_restart() {
        let mut t = tester();
        t.ci(0, 2, &VertexSet::new()).unwrap();
        t.begin_phase();
        t.ci(0, 2, &VertexSet::from([1, 3])).unwrap();
        assert_eq!(t.phase_stats().total_tests, 1);
        assert_eq!(t.phase_stats().mean_cond_size, 2.0);
        assert_eq!(t.stats().total_tests, 2);
    }
}

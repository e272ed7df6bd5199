//! The recursive learner.
//!
//! Starting from total-conditioning Markov boundaries, the learner repeatedly
//! picks a vertex that CI tests show to be removable (scanning by ascending
//! boundary size), resolves its adjacencies, deletes it and repairs the
//! boundaries. All adjacency verdicts and separating sets end up in a
//! [`SepSetStore`], from which [`crate::orient`] builds the PAG.

mod store;

use itertools::Itertools;
use serde::Serialize;

use crate::citest::{CiBackend, CiStats, CiTester};
use crate::error::{Error, Result};
use crate::graph::{Pag, VertexId, VertexSet};
use crate::mbound::{compute_mb_tc, update_mb, AlphaPolicy, MbTable};
use crate::orient::orient_pag;

pub use store::{PairVerdict, SepSetStore};

/// Every subset of `items`, by ascending size and then lexicographically.
pub(crate) fn subsets_by_size(items: &VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
    (0..=items.len()).flat_map(move |k| {
        items
            .iter()
            .copied()
            .combinations(k)
            .map(VertexSet::from_iter)
    })
}

/// Records, for every pair outside each other's boundary, the smaller of the
/// two boundaries (minus the pair) as separating set.
pub fn initialize_store(mb: &MbTable) -> SepSetStore {
    let mut store = SepSetStore::new();
    for (&x, mb_x) in mb {
        for (&y, mb_y) in mb.range(x + 1..) {
            if mb_x.contains(&y) || mb_y.contains(&x) {
                continue;
            }
            let base = if mb_y.len() < mb_x.len() { mb_y } else { mb_x };
            let mut set = base.clone();
            set.remove(&x);
            set.remove(&y);
            store.record_separated(x, y, set);
        }
    }
    store
}

/// Resolves every unresolved `y ∈ mb_x`: the first subset `W ⊆ mb_x ∖ {y}`
/// (ascending size) with `x ⊥ y | W` separates them; otherwise they are
/// adjacent. Returns the adjacent members of `mb_x`.
pub fn find_adjacent<B: CiBackend>(
    x: VertexId,
    mb_x: &VertexSet,
    tester: &mut CiTester<B>,
    store: &mut SepSetStore,
) -> Result<VertexSet> {
    let mut adjacent = VertexSet::new();
    for &y in mb_x {
        if !store.is_resolved(x, y) {
            let mut rest = mb_x.clone();
            rest.remove(&y);
            let mut separated = false;
            for w in subsets_by_size(&rest) {
                if tester.ci(x, y, &w)? {
                    store.record_separated(x, y, w);
                    separated = true;
                    break;
                }
            }
            if !separated {
                store.mark_adjacent(x, y);
            }
        }
        if store.is_adjacent(x, y) {
            adjacent.insert(y);
        }
    }
    Ok(adjacent)
}

/// CI-based removability: every `y ∈ adj_x`, `z ∈ mb_x ∖ {y}` must satisfy
///
/// 1. `y ⊥ z | W` for some `W ⊆ mb_x ∖ {y, z}`, or
/// 2. `y ⊥̸ z | W ∪ {x}` for every such `W`.
///
/// Condition 1 is tried first, using recorded separating sets when they fit.
/// Independences found while checking condition 2 are recorded as well.
pub fn is_removable_ci<B: CiBackend>(
    x: VertexId,
    mb_x: &VertexSet,
    adj_x: &VertexSet,
    tester: &mut CiTester<B>,
    store: &mut SepSetStore,
) -> Result<bool> {
    for &y in adj_x {
        for &z in mb_x {
            // Both conditions are symmetric in (y, z).
            if z == y || (z < y && adj_x.contains(&z)) {
                continue;
            }
            let mut rest = mb_x.clone();
            rest.remove(&y);
            rest.remove(&z);
            if condition_one(y, z, &rest, tester, store)? {
                continue;
            }
            for w in subsets_by_size(&rest) {
                let mut cond = w;
                cond.insert(x);
                if tester.ci(y, z, &cond)? {
                    store.record_separated(y, z, cond);
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn condition_one<B: CiBackend>(
    y: VertexId,
    z: VertexId,
    rest: &VertexSet,
    tester: &mut CiTester<B>,
    store: &mut SepSetStore,
) -> Result<bool> {
    if store.is_adjacent(y, z) {
        return Ok(false);
    }
    if store.sepsets(y, z).iter().any(|s| s.is_subset(rest)) {
        return Ok(true);
    }
    for w in subsets_by_size(rest) {
        if tester.ci(y, z, &w)? {
            store.record_separated(y, z, w);
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IterationTrace {
    /// Live vertices at the start of the iteration.
    pub live: Vec<VertexId>,
    /// Vertices examined by the scan, with their boundary size at the time.
    pub processed: Vec<(VertexId, usize)>,
    pub removed: VertexId,
    pub ci_tests: u64,
    /// No vertex passed the removability test; the smallest-boundary vertex
    /// was removed anyway.
    pub fallback: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LearnTrace {
    /// Every input variable, in the order it left the live set.
    pub removal_order: Vec<VertexId>,
    pub iterations: Vec<IterationTrace>,
    pub initial_mb: MbTable,
    /// Tests spent on the initial boundaries.
    pub tc_tests: u64,
    /// Statistics of the tests after the initial boundaries.
    pub learner_stats: CiStats,
}

impl LearnTrace {
    pub fn fallbacks(&self) -> usize {
        self.iterations.iter().filter(|it| it.fallback).count()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, serde::Deserialize)]
pub struct LearnConfig {
    pub tc_alpha: AlphaPolicy,
    /// Examine only vertices whose boundary exceeds the smallest live
    /// boundary by at most this much. `None` scans every live vertex.
    #[serde(default)]
    pub scan_slack: Option<usize>,
}

/// Learns the skeleton and separating sets over `vars`.
pub fn lmarvel_learn<B: CiBackend>(
    vars: &VertexSet,
    tester: &mut CiTester<B>,
    config: &LearnConfig,
) -> Result<(SepSetStore, LearnTrace)> {
    if vars.is_empty() {
        return Err(Error::InvalidQuery("no variables to learn over".into()));
    }
    if let Some(&v) = vars.iter().next_back().filter(|&&v| v >= tester.n_vars()) {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let before_tc = tester.stats().total_tests;
    let mut mb = compute_mb_tc(vars, tester, config.tc_alpha)?;
    let mut trace = LearnTrace {
        initial_mb: mb.clone(),
        tc_tests: tester.stats().total_tests - before_tc,
        ..Default::default()
    };
    let mut store = initialize_store(&mb);
    tester.begin_phase();

    let mut live = vars.clone();
    while live.len() > 1 {
        let start = tester.stats().total_tests;
        let order: Vec<VertexId> = live
            .iter()
            .copied()
            .sorted_by_key(|v| (mb[v].len(), *v))
            .collect();
        let mut it = IterationTrace {
            live: live.iter().copied().collect(),
            ..Default::default()
        };
        let mut chosen = None;
        let cap = config.scan_slack.map(|k| mb[&order[0]].len() + k);
        for &v in &order {
            let mb_v = mb[&v].clone();
            if cap.is_some_and(|c| mb_v.len() > c) {
                break;
            }
            it.processed.push((v, mb_v.len()));
            let adj = find_adjacent(v, &mb_v, tester, &mut store)?;
            if is_removable_ci(v, &mb_v, &adj, tester, &mut store)? {
                chosen = Some(v);
                break;
            }
        }
        let x =
            match chosen {
                Some(x) => x,
                None if tester.is_exact() => return Err(Error::InternalInvariantBroken(
                    "exact CI information but no removable vertex; is the undirected part chordal?"
                        .into(),
                )),
                None => {
                    log::warn!(
                        "no vertex tested removable among {} live; removing #{}",
                        live.len(),
                        order[0]
                    );
                    it.fallback = true;
                    order[0]
                }
            };
        update_mb(x, &mut mb, tester, &mut store)?;
        live.remove(&x);
        it.removed = x;
        it.ci_tests = tester.stats().total_tests - start;
        trace.removal_order.push(x);
        trace.iterations.push(it);
    }
    trace.removal_order.extend(live.iter().copied());
    trace.learner_stats = tester.phase_stats();
    Ok((store, trace))
}

/// Complete pipeline over all variables of the tester: learn, then orient.
pub struct Learned {
    pub pag: Pag,
    pub store: SepSetStore,
    pub trace: LearnTrace,
}

pub fn learn_pag<B: CiBackend>(
    labels: &[String],
    tester: &mut CiTester<B>,
    config: &LearnConfig,
) -> Result<Learned> {
    if labels.len() != tester.n_vars() {
        return Err(Error::InvalidConfig(format!(
            "{} labels for {} variables",
            labels.len(),
            tester.n_vars()
        )));
    }
    let vars: VertexSet = (0..labels.len()).collect();
    let (store, trace) = lmarvel_learn(&vars, tester, config)?;
    let pag = orient_pag(&store, labels)?;
    Ok(Learned { pag, store, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citest::OracleTester;
    use crate::graph::Mag;

    const T: usize = 0;
    const W: usize = 1;
    const Y: usize = 2;
    const Z: usize = 3;

    fn fig1() -> CiTester<OracleTester> {
        let mag = Mag::parse("vertices: T W Y Z\nY <-> W\nW -> Z\nW -> T\nT -> Z\n").unwrap();
        CiTester::new(OracleTester::new(mag))
    }

    fn fig1_mb() -> MbTable {
        MbTable::from([
            (T, VertexSet::from([W, Z])),
            (W, VertexSet::from([Y, T, Z])),
            (Y, VertexSet::from([W])),
            (Z, VertexSet::from([W, T])),
        ])
    }

    #[test]
    fn subset_order() {
        let s: Vec<VertexSet> = subsets_by_size(&VertexSet::from([1, 2, 3])).collect();
        let expected: Vec<VertexSet> = vec![
            VertexSet::new(),
            VertexSet::from([1]),
            VertexSet::from([2]),
            VertexSet::from([3]),
            VertexSet::from([1, 2]),
            VertexSet::from([1, 3]),
            VertexSet::from([2, 3]),
            VertexSet::from([1, 2, 3]),
        ];
        assert_eq!(s, expected);
    }

    #[test]
    fn store_initialisation() {
        let store = initialize_store(&fig1_mb());
        assert_eq!(store.sepsets(Y, Z), &[VertexSet::from([W])]);
        assert_eq!(store.sepsets(T, Y), &[VertexSet::from([W])]);
        assert_eq!(store.len(), 2);
        assert!(initialize_store(&MbTable::new()).is_empty());
        let dense = MbTable::from([(0, VertexSet::from([1])), (1, VertexSet::from([0]))]);
        assert!(initialize_store(&dense).is_empty());
    }

    #[test]
    fn adjacency_search() {
        let mut t = fig1();
        let mut store = initialize_store(&fig1_mb());
        let adj = find_adjacent(W, &VertexSet::from([Y, T, Z]), &mut t, &mut store).unwrap();
        assert_eq!(adj, VertexSet::from([Y, T, Z]));
        let adj = find_adjacent(T, &VertexSet::from([W, Z]), &mut t, &mut store).unwrap();
        assert_eq!(adj, VertexSet::from([W, Z]));
        assert!(find_adjacent(Y, &VertexSet::new(), &mut t, &mut store)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ci_removability_on_running_example() {
        let mut t = fig1();
        let mut store = initialize_store(&fig1_mb());
        let mb_w = VertexSet::from([Y, T, Z]);
        let adj = find_adjacent(W, &mb_w, &mut t, &mut store).unwrap();
        assert!(!is_removable_ci(W, &mb_w, &adj, &mut t, &mut store).unwrap());
        let mb_t = VertexSet::from([W, Z]);
        let adj = find_adjacent(T, &mb_t, &mut t, &mut store).unwrap();
        assert!(is_removable_ci(T, &mb_t, &adj, &mut t, &mut store).unwrap());
    }

    #[test]
    fn learns_running_example() {
        let mut t = fig1();
        let (store, trace) = lmarvel_learn(
            &VertexSet::from([T, W, Y, Z]),
            &mut t,
            &LearnConfig::default(),
        )
        .unwrap();
        let truth = t.backend().mag().skeleton();
        assert_eq!(store.adjacent_pairs(), truth);
        assert_ne!(trace.removal_order[0], W);
        let mut order = trace.removal_order.clone();
        order.sort();
        assert_eq!(order, vec![T, W, Y, Z]);
        assert_eq!(trace.tc_tests, 6);
        assert_eq!(trace.fallbacks(), 0);
    }

    #[test]
    fn single_and_edgeless() {
        let mut t = fig1();
        let (store, trace) =
            lmarvel_learn(&VertexSet::from([Y]), &mut t, &LearnConfig::default()).unwrap();
        assert!(store.is_empty());
        assert_eq!(trace.removal_order, vec![Y]);

        let mag = Mag::parse("vertices: A B C D E\n").unwrap();
        let mut t = CiTester::new(OracleTester::new(mag));
        let vars: VertexSet = (0..5).collect();
        let (store, _) = lmarvel_learn(&vars, &mut t, &LearnConfig::default()).unwrap();
        assert!(store.adjacent_pairs().is_empty());
        assert_eq!(store.separated_pairs().count(), 10);
    }
}

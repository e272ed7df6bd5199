//! Markov boundaries: initial discovery by total conditioning and the
//! incremental update after a vertex is removed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::citest::{CiBackend, CiTester};
use crate::error::Result;
use crate::graph::{VertexId, VertexSet};
use crate::lmarvel::SepSetStore;

/// Markov boundary per live vertex.
pub type MbTable = BTreeMap<VertexId, VertexSet>;

/// Significance level used for the total-conditioning tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    /// Whatever the tester uses for every other test.
    #[default]
    SameAsTester,
    Fixed(f64),
    /// `2 / n²` for `n` variables.
    Auto,
}

impl AlphaPolicy {
    pub fn resolve(self, n: usize) -> Option<f64> {
        match self {
            AlphaPolicy::SameAsTester => None,
            AlphaPolicy::Fixed(a) => Some(a),
            AlphaPolicy::Auto => Some((2.0 / (n * n) as f64).min(0.5)),
        }
    }
}

/// One test per pair, conditioning on every other variable; dependence puts
/// each vertex in the other's boundary.
pub fn compute_mb_tc<B: CiBackend>(
    vars: &VertexSet,
    tester: &mut CiTester<B>,
    policy: AlphaPolicy,
) -> Result<MbTable> {
    let alpha = policy.resolve(vars.len());
    let mut table: MbTable = vars.iter().map(|&v| (v, VertexSet::new())).collect();
    for &x in vars {
        for &y in vars.range(x + 1..) {
            let mut rest = vars.clone();
            rest.remove(&x);
            rest.remove(&y);
            let independent = match alpha {
                Some(a) => tester.ci_at(x, y, &rest, Some(a))?,
                None => tester.ci(x, y, &rest)?,
            };
            if !independent {
                table.get_mut(&x).unwrap().insert(y);
                table.get_mut(&y).unwrap().insert(x);
            }
        }
    }
    Ok(table)
}

/// Deletes `x` and repairs the boundaries of the pairs that may have been
/// connected only through it.
///
/// Each pair `(y, z) ⊆ Mb(x)` still in each other's boundary is tested once,
/// conditioning on the smaller of the two current boundaries (ties: lower
/// id). Pairs go in lexicographic order and deletions apply immediately.
pub fn update_mb<B: CiBackend>(
    x: VertexId,
    mb: &mut MbTable,
    tester: &mut CiTester<B>,
    store: &mut SepSetStore,
) -> Result<()> {
    let mb_x = mb.remove(&x).unwrap_or_default();
    for set in mb.values_mut() {
        set.remove(&x);
    }
    let members: Vec<VertexId> = mb_x.iter().copied().collect();
    for (i, &y) in members.iter().enumerate() {
        for &z in &members[i + 1..] {
            if !mb[&y].contains(&z) {
                continue;
            }
            let base = if mb[&z].len() < mb[&y].len() {
                &mb[&z]
            } else {
                &mb[&y]
            };
            let mut cond = base.clone();
            cond.remove(&y);
            cond.remove(&z);
            if tester.ci(y, z, &cond)? {
                mb.get_mut(&y).unwrap().remove(&z);
                mb.get_mut(&z).unwrap().remove(&y);
                store.record_separated(y, z, cond);
            }
        }
    }
    Ok(())
}

/// `y ∈ Mb(x) ⇔ x ∈ Mb(y)` and `x ∉ Mb(x)`.
pub fn is_symmetric(mb: &MbTable) -> bool {
    mb.iter().all(|(x, set)| {
        !set.contains(x) && set.iter().all(|y| mb.get(y).is_some_and(|s| s.contains(x)))
    })
}

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::{VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PairVerdict {
    Adjacent,
    /// Recorded separating sets, in recording order.
    Separated(Vec<VertexSet>),
}

/// Adjacency verdicts and separating sets per unordered pair. Pairs without
/// an entry are unresolved.
///
/// The first verdict for a pair wins: a later contradicting verdict (possible
/// only with statistical tests) is counted and logged but not applied.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SepSetStore {
    pairs: BTreeMap<(VertexId, VertexId), PairVerdict>,
    conflicts: usize,
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl SepSetStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn verdict(&self, a: VertexId, b: VertexId) -> Option<&PairVerdict> {
        self.pairs.get(&key(a, b))
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        matches!(self.verdict(a, b), Some(PairVerdict::Adjacent))
    }

    pub fn is_separated(&self, a: VertexId, b: VertexId) -> bool {
        matches!(self.verdict(a, b), Some(PairVerdict::Separated(_)))
    }

    pub fn is_resolved(&self, a: VertexId, b: VertexId) -> bool {
        self.verdict(a, b).is_some()
    }

    pub fn sepsets(&self, a: VertexId, b: VertexId) -> &[VertexSet] {
        match self.verdict(a, b) {
            Some(PairVerdict::Separated(sets)) => sets,
            _ => &[],
        }
    }

    /// The first recorded separating set.
    pub fn sepset(&self, a: VertexId, b: VertexId) -> Option<&VertexSet> {
        self.sepsets(a, b).first()
    }

    pub fn mark_adjacent(&mut self, a: VertexId, b: VertexId) {
        match self.pairs.get(&key(a, b)) {
            Some(PairVerdict::Separated(_)) => {
                self.conflicts += 1;
                log::warn!("pair (#{a}, #{b}) already separated; adjacency verdict ignored");
            }
            Some(PairVerdict::Adjacent) => {}
            None => {
                self.pairs.insert(key(a, b), PairVerdict::Adjacent);
            }
        }
    }

    pub fn record_separated(&mut self, a: VertexId, b: VertexId, set: VertexSet) {
        debug_assert!(!set.contains(&a) && !set.contains(&b));
        match self
            .pairs
            .entry(key(a, b))
            .or_insert_with(|| PairVerdict::Separated(Vec::new()))
        {
            PairVerdict::Adjacent => {
                self.conflicts += 1;
                log::warn!("pair (#{a}, #{b}) already adjacent; separating set ignored");
            }
            PairVerdict::Separated(sets) => {
                if !sets.contains(&set) {
                    sets.push(set);
                }
            }
        }
    }

    pub fn adjacent_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.pairs
            .iter()
            .filter(|(_, v)| **v == PairVerdict::Adjacent)
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn separated_pairs(&self) -> impl Iterator<Item = ((VertexId, VertexId), &[VertexSet])> {
        self.pairs.iter().filter_map(|(k, v)| match v {
            PairVerdict::Separated(sets) => Some((*k, sets.as_slice())),
            PairVerdict::Adjacent => None,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Contradicting verdicts that were ignored.
    pub fn conflicts(&self) -> usize {
        self.conflicts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_verdict_wins() {
        let mut s = SepSetStore::new();
        s.mark_adjacent(2, 1);
        s.record_separated(1, 2, VertexSet::new());
        assert!(s.is_adjacent(1, 2));
        assert_eq!(s.conflicts(), 1);

        s.record_separated(3, 0, VertexSet::from([1]));
        s.record_separated(0, 3, VertexSet::from([2]));
        s.record_separated(0, 3, VertexSet::from([1]));
        assert_eq!(
            s.sepsets(3, 0),
            &[VertexSet::from([1]), VertexSet::from([2])]
        );
        assert_eq!(s.sepset(0, 3), Some(&VertexSet::from([1])));
        s.mark_adjacent(0, 3);
        assert!(s.is_separated(0, 3));
        assert_eq!(s.conflicts(), 2);
        assert!(!s.is_resolved(0, 1));
        assert_eq!(s.adjacent_pairs(), BTreeSet::from([(1, 2)]));
    }
}

//! Removable vertices: deleting one leaves every m-separation among the
//! remaining vertices unchanged.
//!
//! Three views are provided and cross-checked in tests: the definition itself
//! (exhaustive, small graphs only), the two-condition graphical criterion, and
//! [`find_removable`], which relies on a removable vertex always existing when
//! the undirected part is chordal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// `adjacent ∈ Adj(x)` and `other ∈ Ch(x) ∪ N(x)` are not adjacent.
    NonAdjacentPair { adjacent: VertexId, other: VertexId },
    /// `path = (x, V1, .., Vm, Y)` is a collider path, every vertex but `Y` is a
    /// parent of `common_child`, and `Y` is not adjacent to it.
    ColliderPath {
        path: Vec<VertexId>,
        common_child: VertexId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovabilityVerdict {
    pub removable: bool,
    pub witness: Option<Witness>,
}

impl RemovabilityVerdict {
    fn removable() -> Self {
        Self {
            removable: true,
            witness: None,
        }
    }

    fn violated(w: Witness) -> Self {
        Self {
            removable: false,
            witness: Some(w),
        }
    }
}

/// Brute force over every pair and conditioning set. At most
/// [`crate::graph::BRUTE_FORCE_LIMIT`] vertices.
pub fn is_removable_by_definition(g: &MixedGraph, x: VertexId) -> Result<bool> {
    g.check(x)?;
    g.require_small()?;
    let rest: Vec<VertexId> = g.vertex_ids().filter(|&v| v != x).collect();
    let keep: VertexSet = rest.iter().copied().collect();
    let sub = g.induced_subgraph(&keep)?;
    // Position in `rest` is the id in `sub`.
    for (i, &y) in rest.iter().enumerate() {
        for (j, &w) in rest.iter().enumerate().skip(i + 1) {
            let others: Vec<usize> = (0..rest.len()).filter(|&k| k != i && k != j).collect();
            for bits in 0u32..1 << others.len() {
                let chosen = others
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| bits >> b & 1 == 1)
                    .map(|(_, &k)| k);
                let z_sub: VertexSet = chosen.clone().collect();
                let z_full: VertexSet = chosen.map(|k| rest[k]).collect();
                if g.m_separated(y, w, &z_full)? != sub.m_separated(i, j, &z_sub)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The two graphical conditions, checked in order; the first violation found
/// is returned as witness.
pub fn is_removable_graphical(g: &MixedGraph, x: VertexId) -> Result<RemovabilityVerdict> {
    g.check(x)?;
    let adj = g.adjacent_set(x)?;
    let mut obligated = g.children(x)?;
    obligated.extend(g.neighbors(x)?);
    for &y in &adj {
        for &z in &obligated {
            if z != y && !g.is_adjacent(y, z) {
                return Ok(RemovabilityVerdict::violated(Witness::NonAdjacentPair {
                    adjacent: y,
                    other: z,
                }));
            }
        }
    }

    let mut allowed = vec![false; g.n()];
    for v in g.markov_boundary(x)? {
        allowed[v] = true;
    }
    let mut on_path = vec![false; g.n()];
    on_path[x] = true;
    let mut path = vec![x];
    let children = g.children(x)?;
    Ok(
        match collider_search(g, &mut path, &mut on_path, &allowed, &children) {
            Some(w) => RemovabilityVerdict::violated(w),
            None => RemovabilityVerdict::removable(),
        },
    )
}

/// Depth-first search over collider paths starting at `path[0]`. `common` is
/// the set of common children of every vertex on `path`; only paths where it
/// is non-empty can produce a violation.
fn collider_search(
    g: &MixedGraph,
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    allowed: &[bool],
    common: &VertexSet,
) -> Option<Witness> {
    let last = *path.last().unwrap();
    for &y in g.adjacent(last) {
        if on_path[y] || !allowed[y] {
            continue;
        }
        // Interior vertices must be colliders: `last` needs an arrowhead on
        // both the incoming edge and the edge towards `y`.
        if path.len() > 1 {
            let prev = path[path.len() - 2];
            if g.mark(prev, last) != Some(Mark::Arrow) || g.mark(y, last) != Some(Mark::Arrow) {
                continue;
            }
        }
        if let Some(&z) = common.iter().find(|&&z| z != y && !g.is_adjacent(y, z)) {
            let mut p = path.clone();
            p.push(y);
            return Some(Witness::ColliderPath {
                path: p,
                common_child: z,
            });
        }
        // Extending through y needs an arrowhead at y and y ∈ Pa(Z) for some Z.
        if g.mark(last, y) != Some(Mark::Arrow) {
            continue;
        }
        let narrowed: VertexSet = common
            .iter()
            .copied()
            .filter(|&z| g.is_parent(y, z))
            .collect();
        if narrowed.is_empty() {
            continue;
        }
        on_path[y] = true;
        path.push(y);
        let found = collider_search(g, path, on_path, allowed, &narrowed);
        path.pop();
        on_path[y] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// A removable vertex, scanning in ascending order of Markov boundary size
/// (ties by id).
pub fn find_removable(g: &MixedGraph) -> Result<VertexId> {
    if g.is_empty() {
        return Err(Error::InvalidQuery(
            "empty graph has no removable vertex".into(),
        ));
    }
    if !g.undirected_part_chordal() {
        return Err(Error::ChordalityViolated);
    }
    let mut order: Vec<(usize, VertexId)> = g
        .vertex_ids()
        .map(|v| g.markov_boundary(v).map(|mb| (mb.len(), v)))
        .collect::<Result<_>>()?;
    order.sort_unstable();
    for (_, v) in order {
        if is_removable_graphical(g, v)?.removable {
            return Ok(v);
        }
    }
    Err(Error::InternalInvariantBroken(
        "chordal undirected part but no removable vertex".into(),
    ))
}

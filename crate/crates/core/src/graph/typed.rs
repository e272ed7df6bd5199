use std::ops::Deref;
use std::path::Path;

use super::format::parse_impl;
use super::{Mark, MixedGraph, VertexId, VertexSet};
use crate::error::{Error, Result};

macro_rules! wrapper {
    ($name:ident) => {
        impl Deref for $name {
            type Target = MixedGraph;
            fn deref(&self) -> &MixedGraph {
                &self.0
            }
        }

        impl $name {
            pub fn as_graph(&self) -> &MixedGraph {
                &self.0
            }

            pub fn into_inner(self) -> MixedGraph {
                self.0
            }

            pub fn read(path: &Path) -> Result<Self> {
                Self::parse(&std::fs::read_to_string(path)?)
            }
        }
    };
}

/// Directed acyclic graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag(MixedGraph);

/// Maximal ancestral graph (maximality is checked only on demand).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mag(MixedGraph);

/// Partial ancestral graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pag(MixedGraph);

wrapper!(Dag);
wrapper!(Mag);
wrapper!(Pag);

impl Dag {
    pub fn new(g: MixedGraph) -> Result<Self> {
        if let Some((u, v, _, _)) = g.edges().find(|&(_, _, mu, mv)| {
            !matches!(
                (mu, mv),
                (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail)
            )
        }) {
            return Err(Error::InvalidDag(format!(
                "edge between `{}` and `{}` is not directed",
                g.label(u),
                g.label(v)
            )));
        }
        if g.has_directed_cycle() {
            return Err(Error::InvalidDag("directed cycle".into()));
        }
        Ok(Dag(g))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Dag::new(parse_impl(text, true)?)
    }

    /// Builds a DAG from labels and `(parent, child)` label pairs.
    pub fn from_edges<S: AsRef<str>>(labels: &[S], edges: &[(&str, &str)]) -> Result<Self> {
        let mut g = MixedGraph::new(labels)?;
        for &(u, v) in edges {
            let (u, v) = (g.vertex(u)?, g.vertex(v)?);
            g.add_directed(u, v)?;
        }
        Dag::new(g)
    }

    /// A topological order; ties resolved by ascending id.
    pub fn topological_order(&self) -> Vec<VertexId> {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n)
            .map(|v| self.0.parents(v).map(|p| p.len()).unwrap_or(0))
            .collect();
        let mut ready: VertexSet = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &w in self.adjacent(v) {
                if self.is_parent(v, w) {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        ready.insert(w);
                    }
                }
            }
        }
        order
    }
}

impl Mag {
    /// Validates the ancestral conditions. Maximality is not checked here;
    /// see [`Mag::is_maximal`].
    pub fn new(g: MixedGraph) -> Result<Self> {
        if g.has_circle() {
            return Err(Error::InvalidMag("circle mark in a MAG".into()));
        }
        for (u, v, mu, mv) in g.edges() {
            if (mu, mv) == (Mark::Arrow, Mark::Arrow) {
                // Almost-directed cycle: a spouse that is also an ancestor.
                if g.ancestor_mask([u]).get(v) == Some(&true)
                    || g.ancestor_mask([v]).get(u) == Some(&true)
                {
                    return Err(Error::InvalidMag(format!(
                        "`{}` <-> `{}` closes an almost-directed cycle",
                        g.label(u),
                        g.label(v)
                    )));
                }
            }
            if (mu, mv) == (Mark::Tail, Mark::Tail) {
                for x in [u, v] {
                    let bad = g
                        .adjacent(x)
                        .iter()
                        .any(|&w| g.mark(w, x) == Some(Mark::Arrow));
                    if bad {
                        return Err(Error::InvalidMag(format!(
                            "`{}` has an undirected edge and an arrowhead",
                            g.label(x)
                        )));
                    }
                }
            }
        }
        if g.has_directed_cycle() {
            return Err(Error::InvalidMag("directed cycle".into()));
        }
        Ok(Mag(g))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Mag::new(MixedGraph::parse(text)?)
    }

    /// Every non-adjacent pair has an m-separating set. Exhaustive, so limited
    /// to small graphs.
    pub fn is_maximal(&self) -> Result<bool> {
        self.require_small()?;
        let n = self.n();
        for x in 0..n {
            for y in x + 1..n {
                if self.is_adjacent(x, y) {
                    continue;
                }
                let rest: Vec<VertexId> = (0..n).filter(|&v| v != x && v != y).collect();
                let separable = (0u32..1 << rest.len()).any(|bits| {
                    let z: VertexSet = rest
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| bits >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect();
                    self.m_separated(x, y, &z).unwrap_or(false)
                });
                if !separable {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Subgraph over `keep`, which is again a MAG.
    pub fn induced(&self, keep: &VertexSet) -> Result<Mag> {
        Ok(Mag(self.0.induced_subgraph(keep)?))
    }
}

impl From<Dag> for Mag {
    fn from(d: Dag) -> Mag {
        Mag(d.0)
    }
}

impl Pag {
    pub fn new(g: MixedGraph) -> Self {
        Pag(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Pag(MixedGraph::parse(text)?))
    }

    /// Every mark of `mag` kept, as a (fully informative) PAG.
    pub fn from_mag(mag: &Mag) -> Self {
        Pag(mag.0.clone())
    }
}

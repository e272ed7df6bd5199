//! Mixed graphs with tail, arrow and circle edge marks.
//!
//! A [`MixedGraph`] stores at most one edge per unordered vertex pair, each
//! edge carrying one mark per endpoint. DAGs, MAGs and PAGs are validated
//! wrappers around it (see [`Dag`], [`Mag`], [`Pag`]).

mod chordal;
mod format;
mod projection;
mod separation;
mod typed;

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

pub use chordal::is_chordal;
pub use projection::{has_inducing_path, has_inducing_path_bruteforce, latent_project};
pub use separation::BRUTE_FORCE_LIMIT;
pub use typed::{Dag, Mag, Pag};

/// Stable integer handle of a vertex.
pub type VertexId = usize;

/// Ordered set of vertex ids.
pub type VertexSet = BTreeSet<VertexId>;

/// Edge endpoint mark.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Mark {
    Tail,
    Arrow,
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    /// `marks[u * n + v]` is the mark at `v` on the edge `u *-* v`.
    marks: Vec<Option<Mark>>,
    adjacency: Vec<Vec<VertexId>>,
}

pub(crate) fn valid_label(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl MixedGraph {
    /// Creates an edgeless graph over the given labels.
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        let mut owned = Vec::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            if !valid_label(label) {
                return Err(Error::InvalidGraph(format!(
                    "invalid vertex name `{label}`"
                )));
            }
            if index.insert(label.to_string(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{label}`")));
            }
            owned.push(label.to_string());
        }
        Ok(Self {
            labels: owned,
            index,
            marks: vec![None; n * n],
            adjacency: vec![Vec::new(); n],
        })
    }

    /// Edgeless graph with labels `V0 .. V{n-1}`.
    pub fn with_vertices(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
        Self::new(&labels).expect("generated labels are valid")
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Resolves a list of labels to ids.
    pub fn vertices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        labels.iter().map(|l| self.vertex(l.as_ref())).collect()
    }

    pub fn vertex_ids(&self) -> std::ops::Range<VertexId> {
        0..self.n()
    }

    pub fn check(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    fn check_all<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> Result<()> {
        vs.into_iter().try_for_each(|&v| self.check(v))
    }

    /// Adds the edge `u *-* v` with `mark_u` at `u` and `mark_v` at `v`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, mark_u: Mark, mark_v: Mark) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::InvalidGraph(format!(
                "self-loop on `{}`",
                self.labels[u]
            )));
        }
        if self.is_adjacent(u, v) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge between `{}` and `{}`",
                self.labels[u], self.labels[v]
            )));
        }
        let n = self.n();
        self.marks[v * n + u] = Some(mark_u);
        self.marks[u * n + v] = Some(mark_v);
        let pos = self.adjacency[u].binary_search(&v).unwrap_err();
        self.adjacency[u].insert(pos, v);
        let pos = self.adjacency[v].binary_search(&u).unwrap_err();
        self.adjacency[v].insert(pos, u);
        Ok(())
    }

    /// Adds `u -> v`.
    pub fn add_directed(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.add_edge(u, v, Mark::Tail, Mark::Arrow)
    }

    /// Adds `u <-> v`.
    pub fn add_bidirected(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.add_edge(u, v, Mark::Arrow, Mark::Arrow)
    }

    /// Adds `u -- v`.
    pub fn add_undirected(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.add_edge(u, v, Mark::Tail, Mark::Tail)
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.is_adjacent(u, v) {
            return false;
        }
        let n = self.n();
        self.marks[v * n + u] = None;
        self.marks[u * n + v] = None;
        self.adjacency[u].retain(|&w| w != v);
        self.adjacency[v].retain(|&w| w != u);
        true
    }

    /// Mark at `v` on the edge between `u` and `v`.
    #[inline]
    pub fn mark(&self, u: VertexId, v: VertexId) -> Option<Mark> {
        self.marks[u * self.n() + v]
    }

    /// Overwrites the mark at `v` on the existing edge `u *-* v`.
    pub fn set_mark(&mut self, u: VertexId, v: VertexId, mark: Mark) -> Result<()> {
        if !self.is_adjacent(u, v) {
            return Err(Error::InvalidGraph(format!(
                "no edge between `{}` and `{}`",
                self.labels[u], self.labels[v]
            )));
        }
        let n = self.n();
        self.marks[u * n + v] = Some(mark);
        Ok(())
    }

    /// Marks `(at u, at v)` of the edge between `u` and `v`.
    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<(Mark, Mark)> {
        Some((self.mark(v, u)?, self.mark(u, v)?))
    }

    #[inline]
    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(u, v).is_some()
    }

    /// Sorted adjacency list of `v`.
    #[inline]
    pub fn adjacent(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    /// `u -> v`.
    #[inline]
    pub fn is_parent(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(v, u) == Some(Mark::Tail) && self.mark(u, v) == Some(Mark::Arrow)
    }

    /// `u <-> v`.
    #[inline]
    pub fn is_spouse(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(v, u) == Some(Mark::Arrow) && self.mark(u, v) == Some(Mark::Arrow)
    }

    /// `u -- v`.
    #[inline]
    pub fn is_neighbor(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(v, u) == Some(Mark::Tail) && self.mark(u, v) == Some(Mark::Tail)
    }

    fn collect(&self, x: VertexId, keep: impl Fn(VertexId) -> bool) -> Result<VertexSet> {
        self.check(x)?;
        Ok(self.adjacency[x]
            .iter()
            .copied()
            .filter(|&w| keep(w))
            .collect())
    }

    pub fn parents(&self, x: VertexId) -> Result<VertexSet> {
        self.collect(x, |w| self.is_parent(w, x))
    }

    pub fn children(&self, x: VertexId) -> Result<VertexSet> {
        self.collect(x, |w| self.is_parent(x, w))
    }

    pub fn spouses(&self, x: VertexId) -> Result<VertexSet> {
        self.collect(x, |w| self.is_spouse(x, w))
    }

    pub fn neighbors(&self, x: VertexId) -> Result<VertexSet> {
        self.collect(x, |w| self.is_neighbor(x, w))
    }

    pub fn adjacent_set(&self, x: VertexId) -> Result<VertexSet> {
        self.collect(x, |_| true)
    }

    /// Edges as `(u, v, mark at u, mark at v)` with `u < v`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Mark, Mark)> + '_ {
        self.vertex_ids().flat_map(move |u| {
            self.adjacency[u]
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v, self.mark(v, u).unwrap(), self.mark(u, v).unwrap()))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Unordered adjacent pairs `(u, v)` with `u < v`.
    pub fn skeleton(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.edges().map(|(u, v, _, _)| (u, v)).collect()
    }

    pub fn has_circle(&self) -> bool {
        self.marks.contains(&Some(Mark::Circle))
    }

    /// Vertices reachable from `x` over bidirected edges, excluding `x`.
    pub fn district(&self, x: VertexId) -> Result<VertexSet> {
        self.check(x)?;
        let mut seen = VertexSet::new();
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if w != x && self.is_spouse(v, w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        Ok(seen)
    }

    /// `Pa(x) ∪ Dis(x) ∪ Pa(Dis(x)) ∪ N(x)`, excluding `x`.
    pub fn pa_plus(&self, x: VertexId) -> Result<VertexSet> {
        let district = self.district(x)?;
        let mut out = self.parents(x)?;
        out.extend(self.neighbors(x)?);
        for &d in &district {
            out.extend(self.parents(d)?);
        }
        out.extend(district);
        out.remove(&x);
        Ok(out)
    }

    /// Maximum `|pa_plus(x)|` over all vertices; 0 for an edgeless graph.
    pub fn delta_plus(&self) -> usize {
        self.vertex_ids()
            .map(|x| self.pa_plus(x).map(|s| s.len()).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// All vertices with a collider path to `x` (a single edge counts).
    pub fn markov_boundary(&self, x: VertexId) -> Result<VertexSet> {
        self.check(x)?;
        let n = self.n();
        // A vertex is expanded only if it was entered through an arrowhead,
        // i.e. it can serve as a collider on the way further out.
        let mut expanded = vec![false; n];
        let mut out = VertexSet::new();
        let mut stack = Vec::new();
        for &w in &self.adjacency[x] {
            out.insert(w);
            if self.mark(x, w) == Some(Mark::Arrow) && !expanded[w] {
                expanded[w] = true;
                stack.push(w);
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if self.mark(w, v) != Some(Mark::Arrow) {
                    continue;
                }
                if w != x {
                    out.insert(w);
                }
                if self.mark(v, w) == Some(Mark::Arrow) && !expanded[w] {
                    expanded[w] = true;
                    stack.push(w);
                }
            }
        }
        out.remove(&x);
        Ok(out)
    }

    /// Subgraph over `keep`, re-indexed in ascending order of the original ids.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<MixedGraph> {
        self.check_all(keep)?;
        let order: Vec<VertexId> = keep.iter().copied().collect();
        let labels: Vec<&str> = order.iter().map(|&v| self.label(v)).collect();
        let mut sub = MixedGraph::new(&labels)?;
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate().skip(i + 1) {
                if let Some((mu, mv)) = self.edge(u, v) {
                    sub.add_edge(i, j, mu, mv)?;
                }
            }
        }
        Ok(sub)
    }

    /// Same labels and the same marks on every edge, independent of vertex order.
    pub fn same_structure(&self, other: &MixedGraph) -> bool {
        if self.n() != other.n() || self.edge_count() != other.edge_count() {
            return false;
        }
        let map: Option<Vec<VertexId>> = self.labels.iter().map(|l| other.vertex(l).ok()).collect();
        let Some(map) = map else { return false };
        self.edges()
            .all(|(u, v, mu, mv)| other.edge(map[u], map[v]) == Some((mu, mv)))
    }

    /// True if some `u -> v` has `v ∈ Anc(u)`.
    pub fn has_directed_cycle(&self) -> bool {
        // Kahn's algorithm over the directed edges.
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for (u, v, _, _) in self.edges() {
            if self.is_parent(u, v) {
                indeg[v] += 1;
            } else if self.is_parent(v, u) {
                indeg[u] += 1;
            }
        }
        let mut queue: Vec<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &w in &self.adjacency[v] {
                if self.is_parent(v, w) {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push(w);
                    }
                }
            }
        }
        seen != n
    }

    /// Undirected edges only, as a graph over the same vertices.
    pub fn undirected_part(&self) -> MixedGraph {
        let mut g = MixedGraph::new(&self.labels).expect("labels already validated");
        for (u, v, mu, mv) in self.edges() {
            if mu == Mark::Tail && mv == Mark::Tail {
                g.add_undirected(u, v).expect("fresh graph");
            }
        }
        g
    }

    /// Chordality of the subgraph formed by the undirected edges.
    pub fn undirected_part_chordal(&self) -> bool {
        is_chordal(&self.undirected_part())
    }
}

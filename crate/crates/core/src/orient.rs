//! Orientation of a learned skeleton into a PAG with the complete rule set
//! R0-R10 for ancestral graphs with latent and selection variables.
//!
//! Notation in comments: `a *-> b` means an arrowhead at `b`, `a o-* b` a
//! circle at `a`, `*` any mark. Marks only ever go from circle to tail or
//! arrow; a rule that would overwrite a non-circle mark is counted as a
//! conflict and skipped.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Mag, Mark, MixedGraph, Pag, VertexId};
use crate::lmarvel::SepSetStore;

/// Step budget for the path searches of R5, R9 and R10. Exhausting it leaves
/// the edge unoriented, which is sound.
const PATH_SEARCH_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    pub rule: u8,
    /// The mark at `at` on the edge `from *-* at` was set to `mark`.
    pub from: VertexId,
    pub at: VertexId,
    pub mark: Mark,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OrientationLog {
    pub applications: Vec<RuleApplication>,
    pub conflicts: usize,
}

struct State<'a> {
    g: MixedGraph,
    store: &'a SepSetStore,
    log: OrientationLog,
}

impl State<'_> {
    fn mark(&self, u: VertexId, v: VertexId) -> Option<Mark> {
        self.g.mark(u, v)
    }

    fn is(&self, u: VertexId, v: VertexId, m: Mark) -> bool {
        self.g.mark(u, v) == Some(m)
    }

    fn adj(&self, u: VertexId, v: VertexId) -> bool {
        self.g.is_adjacent(u, v)
    }

    /// Sets the mark at `at` on `from *-* at`. Returns whether it changed.
    fn set(&mut self, rule: u8, from: VertexId, at: VertexId, mark: Mark) -> bool {
        match self.g.mark(from, at) {
            Some(Mark::Circle) => {
                self.g.set_mark(from, at, mark).expect("edge exists");
                self.log.applications.push(RuleApplication {
                    rule,
                    from,
                    at,
                    mark,
                });
                true
            }
            Some(m) if m != mark => {
                self.log.conflicts += 1;
                log::warn!(
                    "R{rule}: mark at `{}` on edge with `{}` is {m:?}, not {mark:?}; keeping it",
                    self.g.label(at),
                    self.g.label(from)
                );
                false
            }
            _ => false,
        }
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        self.g.adjacent(v).to_vec()
    }

    /// R0: unshielded `a *-* b *-* c` with `b` outside sepset(a, c) becomes
    /// `a *-> b <-* c`.
    fn r0(&mut self) {
        for b in 0..self.n() {
            let nb = self.neighbours(b);
            for (i, &a) in nb.iter().enumerate() {
                for &c in &nb[i + 1..] {
                    if self.adj(a, c) {
                        continue;
                    }
                    let Some(sep) = self.store.sepset(a, c) else {
                        log::warn!(
                            "no separating set for non-adjacent `{}` and `{}`",
                            self.g.label(a),
                            self.g.label(c)
                        );
                        continue;
                    };
                    if !sep.contains(&b) {
                        self.set(0, a, b, Mark::Arrow);
                        self.set(0, c, b, Mark::Arrow);
                    }
                }
            }
        }
    }

    /// R1: `a *-> b o-* c`, a and c non-adjacent: `b -> c`.
    fn r1(&mut self) -> bool {
        let mut changed = false;
        for b in 0..self.n() {
            let nb = self.neighbours(b);
            for &a in &nb {
                if !self.is(a, b, Mark::Arrow) {
                    continue;
                }
                for &c in &nb {
                    if c != a && !self.adj(a, c) && self.is(c, b, Mark::Circle) {
                        changed |= self.set(1, c, b, Mark::Tail);
                        changed |= self.set(1, b, c, Mark::Arrow);
                    }
                }
            }
        }
        changed
    }

    /// R2: `a -> b *-> c` or `a *-> b -> c`, with `a *-o c`: `a *-> c`.
    fn r2(&mut self) -> bool {
        let mut changed = false;
        for a in 0..self.n() {
            for c in self.neighbours(a) {
                if !self.is(a, c, Mark::Circle) {
                    continue;
                }
                let found = self.neighbours(a).into_iter().any(|b| {
                    b != c
                        && self.adj(b, c)
                        && ((self.g.is_parent(a, b) && self.is(b, c, Mark::Arrow))
                            || (self.is(a, b, Mark::Arrow) && self.g.is_parent(b, c)))
                });
                if found {
                    changed |= self.set(2, a, c, Mark::Arrow);
                }
            }
        }
        changed
    }

    /// R3: `a *-> b <-* c`, `a *-o d o-* c`, a and c non-adjacent, `d *-o b`:
    /// `d *-> b`.
    fn r3(&mut self) -> bool {
        let mut changed = false;
        for b in 0..self.n() {
            let nb = self.neighbours(b);
            for &d in &nb {
                if !self.is(d, b, Mark::Circle) {
                    continue;
                }
                let hit = nb.iter().enumerate().any(|(i, &a)| {
                    nb[i + 1..].iter().any(|&c| {
                        a != d
                            && c != d
                            && !self.adj(a, c)
                            && self.is(a, b, Mark::Arrow)
                            && self.is(c, b, Mark::Arrow)
                            && self.is(a, d, Mark::Circle)
                            && self.is(c, d, Mark::Circle)
                    })
                });
                if hit {
                    changed |= self.set(3, d, b, Mark::Arrow);
                }
            }
        }
        changed
    }

    /// R4: a discriminating path `<t, .., a, b, c>` for `b` with `b o-* c`.
    /// If `b` is in sepset(t, c) then `b -> c`, otherwise `a <-> b <-> c`.
    fn r4(&mut self) -> bool {
        let mut changed = false;
        for b in 0..self.n() {
            for c in self.neighbours(b) {
                if !self.is(c, b, Mark::Circle) {
                    continue;
                }
                let Some((t, a)) = self.discriminating_path(b, c) else {
                    continue;
                };
                let in_sep = self.store.sepset(t, c).map(|s| s.contains(&b));
                match in_sep {
                    Some(true) => {
                        changed |= self.set(4, c, b, Mark::Tail);
                        changed |= self.set(4, b, c, Mark::Arrow);
                    }
                    Some(false) => {
                        changed |= self.set(4, b, a, Mark::Arrow);
                        changed |= self.set(4, a, b, Mark::Arrow);
                        changed |= self.set(4, c, b, Mark::Arrow);
                        changed |= self.set(4, b, c, Mark::Arrow);
                    }
                    None => log::warn!("discriminating path end points lack a separating set"),
                }
            }
        }
        changed
    }

    /// Breadth-first search backwards from `b` over colliders that are parents
    /// of `c`. Returns the far end `t` and the vertex `a` next to `b`.
    fn discriminating_path(&self, b: VertexId, c: VertexId) -> Option<(VertexId, VertexId)> {
        let n = self.n();
        let mut seen = vec![false; n];
        seen[b] = true;
        seen[c] = true;
        // (vertex, first interior vertex a of the path it extends)
        let mut queue = std::collections::VecDeque::new();
        for &a in self.g.adjacent(b) {
            if a != c && self.g.is_parent(a, c) && self.is(b, a, Mark::Arrow) {
                seen[a] = true;
                queue.push_back((a, a));
            }
        }
        while let Some((v, a)) = queue.pop_front() {
            // v is a collider, so its predecessor must put an arrowhead on it.
            for &w in self.g.adjacent(v) {
                if seen[w] || !self.is(w, v, Mark::Arrow) {
                    continue;
                }
                if !self.adj(w, c) {
                    return Some((w, a));
                }
                if self.g.is_parent(w, c) && self.is(v, w, Mark::Arrow) {
                    seen[w] = true;
                    queue.push_back((w, a));
                }
            }
        }
        None
    }

    /// R5: `a o-o b` closing an uncovered circle path `<a, c, .., d, b>` with
    /// a, d and b, c non-adjacent: the edge and the whole path become `--`.
    fn r5(&mut self) -> bool {
        let mut changed = false;
        for a in 0..self.n() {
            for b in self.neighbours(a) {
                if b < a || !self.is(a, b, Mark::Circle) || !self.is(b, a, Mark::Circle) {
                    continue;
                }
                let Some(path) = self.uncovered_circle_path(a, b) else {
                    continue;
                };
                changed |= self.set(5, a, b, Mark::Tail);
                changed |= self.set(5, b, a, Mark::Tail);
                for w in path.windows(2) {
                    changed |= self.set(5, w[0], w[1], Mark::Tail);
                    changed |= self.set(5, w[1], w[0], Mark::Tail);
                }
            }
        }
        changed
    }

    fn uncovered_circle_path(&self, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        let circle =
            |u: VertexId, v: VertexId| self.is(u, v, Mark::Circle) && self.is(v, u, Mark::Circle);
        let mut budget = PATH_SEARCH_BUDGET;
        for &c in self.g.adjacent(a) {
            if c == b || !circle(a, c) || self.adj(b, c) {
                continue;
            }
            let mut path = vec![a, c];
            let mut on = vec![false; self.n()];
            on[a] = true;
            on[c] = true;
            let edge_ok = |u: VertexId, v: VertexId| circle(u, v);
            let end_ok = |prev: VertexId, last: VertexId| {
                last != c && !self.adj(prev, a) && circle(prev, last)
            };
            if self.search(&mut path, &mut on, b, &edge_ok, &end_ok, &mut budget) {
                return Some(path);
            }
        }
        None
    }

    /// Depth-first search over uncovered paths extending `path` to `target`.
    /// `edge_ok(u, v)` admits the step `u -> v`; `end_ok(prev, target)`
    /// additionally constrains the last step.
    fn search(
        &self,
        path: &mut Vec<VertexId>,
        on: &mut [bool],
        target: VertexId,
        edge_ok: &dyn Fn(VertexId, VertexId) -> bool,
        end_ok: &dyn Fn(VertexId, VertexId) -> bool,
        budget: &mut usize,
    ) -> bool {
        let cur = *path.last().unwrap();
        let prev = path[path.len() - 2];
        for &w in self.g.adjacent(cur) {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if on[w] || self.adj(prev, w) || !edge_ok(cur, w) {
                continue;
            }
            if w == target {
                if end_ok(cur, w) {
                    path.push(w);
                    return true;
                }
                continue;
            }
            on[w] = true;
            path.push(w);
            if self.search(path, on, target, edge_ok, end_ok, budget) {
                return true;
            }
            path.pop();
            on[w] = false;
        }
        false
    }

    /// `u -> v` could be directed: no arrowhead at `u`, no tail at `v`.
    fn potentially_directed(&self, u: VertexId, v: VertexId) -> bool {
        matches!(self.mark(v, u), Some(Mark::Tail | Mark::Circle))
            && matches!(self.mark(u, v), Some(Mark::Arrow | Mark::Circle))
    }

    /// R6: `a -- b o-* c`: `b --* c`.
    fn r6(&mut self) -> bool {
        let mut changed = false;
        for b in 0..self.n() {
            let nb = self.neighbours(b);
            if !nb.iter().any(|&a| self.g.is_neighbor(a, b)) {
                continue;
            }
            for &c in &nb {
                if self.is(c, b, Mark::Circle) {
                    changed |= self.set(6, c, b, Mark::Tail);
                }
            }
        }
        changed
    }

    /// R7: `a --o b o-* c`, a and c non-adjacent: `b --* c`.
    fn r7(&mut self) -> bool {
        let mut changed = false;
        for b in 0..self.n() {
            let nb = self.neighbours(b);
            for &a in &nb {
                if !(self.is(b, a, Mark::Tail) && self.is(a, b, Mark::Circle)) {
                    continue;
                }
                for &c in &nb {
                    if c != a && !self.adj(a, c) && self.is(c, b, Mark::Circle) {
                        changed |= self.set(7, c, b, Mark::Tail);
                    }
                }
            }
        }
        changed
    }

    /// R8: `a -> b -> c` or `a --o b -> c`, with `a o-> c`: `a -> c`.
    fn r8(&mut self) -> bool {
        let mut changed = false;
        for a in 0..self.n() {
            for c in self.neighbours(a) {
                if !(self.is(c, a, Mark::Circle) && self.is(a, c, Mark::Arrow)) {
                    continue;
                }
                let found = self.neighbours(a).into_iter().any(|b| {
                    b != c
                        && self.g.is_parent(b, c)
                        && self.is(b, a, Mark::Tail)
                        && matches!(self.mark(a, b), Some(Mark::Arrow | Mark::Circle))
                });
                if found {
                    changed |= self.set(8, c, a, Mark::Tail);
                }
            }
        }
        changed
    }

    /// R9: `a o-> c` and an uncovered potentially directed path
    /// `<a, b, d, .., c>` with b and c non-adjacent: `a -> c`.
    fn r9(&mut self) -> bool {
        let mut changed = false;
        for a in 0..self.n() {
            for c in self.neighbours(a) {
                if !(self.is(c, a, Mark::Circle) && self.is(a, c, Mark::Arrow)) {
                    continue;
                }
                let mut budget = PATH_SEARCH_BUDGET;
                let found = self.neighbours(a).into_iter().any(|b| {
                    b != c
                        && !self.adj(b, c)
                        && self.potentially_directed(a, b)
                        && self.upd_path_exists(a, b, c, &mut budget)
                });
                if found {
                    changed |= self.set(9, c, a, Mark::Tail);
                }
            }
        }
        changed
    }

    /// Uncovered potentially directed path `<a, first, .., target>`.
    fn upd_path_exists(
        &self,
        a: VertexId,
        first: VertexId,
        target: VertexId,
        budget: &mut usize,
    ) -> bool {
        if first == target {
            return true;
        }
        let mut path = vec![a, first];
        let mut on = vec![false; self.n()];
        on[a] = true;
        on[first] = true;
        let edge_ok = |u: VertexId, v: VertexId| self.potentially_directed(u, v);
        let end_ok = |_: VertexId, _: VertexId| true;
        self.search(&mut path, &mut on, target, &edge_ok, &end_ok, budget)
    }

    /// R10: `a o-> c`, `b -> c <- d`, uncovered potentially directed paths
    /// from `a` to `b` and to `d` whose second vertices differ and are
    /// non-adjacent: `a -> c`.
    fn r10(&mut self) -> bool {
        let mut changed = false;
        for a in 0..self.n() {
            for c in self.neighbours(a) {
                if !(self.is(c, a, Mark::Circle) && self.is(a, c, Mark::Arrow)) {
                    continue;
                }
                let parents: Vec<VertexId> = self
                    .g
                    .adjacent(c)
                    .iter()
                    .copied()
                    .filter(|&p| p != a && self.g.is_parent(p, c))
                    .collect();
                if parents.len() < 2 {
                    continue;
                }
                let mut budget = PATH_SEARCH_BUDGET;
                let starts: Vec<VertexId> = self
                    .g
                    .adjacent(a)
                    .iter()
                    .copied()
                    .filter(|&m| self.potentially_directed(a, m))
                    .collect();
                // firsts[i] = second vertices of uncovered p.d. paths from a to parents[i]
                let firsts: Vec<Vec<VertexId>> = parents
                    .iter()
                    .map(|&p| {
                        starts
                            .iter()
                            .copied()
                            .filter(|&m| self.upd_path_exists(a, m, p, &mut budget))
                            .collect()
                    })
                    .collect();
                let found = (0..parents.len()).any(|i| {
                    (i + 1..parents.len()).any(|j| {
                        firsts[i]
                            .iter()
                            .any(|&m| firsts[j].iter().any(|&w| m != w && !self.adj(m, w)))
                    })
                });
                if found {
                    changed |= self.set(10, c, a, Mark::Tail);
                }
            }
        }
        changed
    }

    fn run(&mut self, with_r0: bool) {
        if with_r0 {
            self.r0();
        }
        loop {
            let mut changed = false;
            changed |= self.r1();
            changed |= self.r2();
            changed |= self.r3();
            changed |= self.r4();
            changed |= self.r5();
            changed |= self.r6();
            changed |= self.r7();
            changed |= self.r8();
            changed |= self.r9();
            changed |= self.r10();
            if !changed {
                break;
            }
        }
    }
}

/// Circle-marked skeleton of the store's adjacent pairs, oriented to a
/// fixpoint. Pairs the store never resolved are treated as non-adjacent.
pub fn orient_pag(store: &SepSetStore, labels: &[String]) -> Result<Pag> {
    Ok(orient_pag_with_log(store, labels)?.0)
}

pub fn orient_pag_with_log(
    store: &SepSetStore,
    labels: &[String],
) -> Result<(Pag, OrientationLog)> {
    let mut g = MixedGraph::new(labels)?;
    for (u, v) in store.adjacent_pairs() {
        if v >= g.n() {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        g.add_edge(u, v, Mark::Circle, Mark::Circle)?;
    }
    let mut state = State {
        g,
        store,
        log: OrientationLog::default(),
    };
    state.run(true);
    Ok((Pag::new(state.g), state.log))
}

/// Applies R0-R10 to an existing PAG (used to check idempotence).
pub fn reorient(pag: &Pag, store: &SepSetStore) -> (Pag, OrientationLog) {
    let mut state = State {
        g: pag.as_graph().clone(),
        store,
        log: OrientationLog::default(),
    };
    state.run(true);
    (Pag::new(state.g), state.log)
}

/// Differences between a PAG and a MAG over the same labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PagComparison {
    /// Adjacent in the MAG only.
    pub missing_edges: Vec<(String, String)>,
    /// Adjacent in the PAG only.
    pub extra_edges: Vec<(String, String)>,
    /// `(from, at, pag mark, mag mark)` for non-circle marks that disagree.
    pub mark_mismatches: Vec<(String, String, Mark, Mark)>,
}

impl PagComparison {
    pub fn is_consistent(&self) -> bool {
        self.missing_edges.is_empty()
            && self.extra_edges.is_empty()
            && self.mark_mismatches.is_empty()
    }
}

pub fn compare_pag(pag: &Pag, truth: &Mag) -> Result<PagComparison> {
    if pag.n() != truth.n() {
        return Err(Error::InvalidComparison(format!(
            "{} vs {} vertices",
            pag.n(),
            truth.n()
        )));
    }
    let map: Vec<VertexId> = pag
        .labels()
        .iter()
        .map(|l| {
            truth
                .vertex(l)
                .map_err(|_| Error::InvalidComparison(format!("`{l}` missing from the MAG")))
        })
        .collect::<Result<_>>()?;
    let mut out = PagComparison::default();
    let name = |v: VertexId| pag.label(v).to_string();
    for u in pag.vertex_ids() {
        for v in u + 1..pag.n() {
            match (pag.edge(u, v), truth.edge(map[u], map[v])) {
                (Some(_), None) => out.extra_edges.push((name(u), name(v))),
                (None, Some(_)) => out.missing_edges.push((name(u), name(v))),
                (Some((pu, pv)), Some((tu, tv))) => {
                    if pu != Mark::Circle && pu != tu {
                        out.mark_mismatches.push((name(v), name(u), pu, tu));
                    }
                    if pv != Mark::Circle && pv != tv {
                        out.mark_mismatches.push((name(u), name(v), pv, tv));
                    }
                }
                (None, None) => {}
            }
        }
    }
    Ok(out)
}

/// Same skeleton, and every non-circle mark of `pag` agrees with `truth`.
pub fn pag_invariant_marks_consistent(pag: &Pag, truth: &Mag) -> bool {
    match compare_pag(pag, truth) {
        Ok(c) => {
            if !c.is_consistent() {
                log::debug!("PAG differs from MAG: {c:?}");
            }
            c.is_consistent()
        }
        Err(e) => {
            log::debug!("PAG not comparable: {e}");
            false
        }
    }
}

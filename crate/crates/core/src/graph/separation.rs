use std::collections::VecDeque;

use super::{Mark, MixedGraph, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Largest vertex count accepted by the brute-force path-enumeration oracles.
pub const BRUTE_FORCE_LIMIT: usize = 10;

impl MixedGraph {
    /// Reflexive-transitive closure of the parent relation, as a mask.
    pub(crate) fn ancestor_mask(&self, xs: impl IntoIterator<Item = VertexId>) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        let mut stack: Vec<VertexId> = Vec::new();
        for x in xs {
            if !mask[x] {
                mask[x] = true;
                stack.push(x);
            }
        }
        while let Some(v) = stack.pop() {
            for &w in self.adjacent(v) {
                if !mask[w] && self.is_parent(w, v) {
                    mask[w] = true;
                    stack.push(w);
                }
            }
        }
        mask
    }

    /// All ancestors of `xs` over directed edges, including `xs` itself.
    pub fn ancestors(&self, xs: &VertexSet) -> Result<VertexSet> {
        self.check_all(xs)?;
        let mask = self.ancestor_mask(xs.iter().copied());
        Ok(mask_to_set(&mask))
    }

    fn check_query(&self, x: VertexId, y: VertexId, z: &VertexSet) -> Result<()> {
        self.check(x)?;
        self.check(y)?;
        self.check_all(z)?;
        if x == y || z.contains(&x) || z.contains(&y) {
            return Err(Error::InvalidQuery(format!(
                "separation query needs distinct endpoints outside the conditioning set ({}, {})",
                self.label(x),
                self.label(y)
            )));
        }
        Ok(())
    }

    /// m-separation of `x` and `y` given `z`.
    pub fn m_separated(&self, x: VertexId, y: VertexId, z: &VertexSet) -> Result<bool> {
        self.check_query(x, y, z)?;
        let mut zmask = vec![false; self.n()];
        for &v in z {
            zmask[v] = true;
        }
        let anc = self.ancestor_mask([x, y].into_iter().chain(z.iter().copied()));
        Ok(!self.m_connected_masked(x, y, &zmask, &anc))
    }

    /// Walk-state reachability. A state is a vertex plus whether it was entered
    /// through an arrowhead; that alone decides its collider status on exit.
    pub(crate) fn m_connected_masked(
        &self,
        x: VertexId,
        y: VertexId,
        zmask: &[bool],
        anc: &[bool],
    ) -> bool {
        let n = self.n();
        let mut seen = vec![[false; 2]; n];
        let mut queue = VecDeque::new();
        for &w in self.adjacent(x) {
            if w == y {
                return true;
            }
            let into = self.mark(x, w) == Some(Mark::Arrow);
            if !seen[w][into as usize] {
                seen[w][into as usize] = true;
                queue.push_back((w, into));
            }
        }
        while let Some((v, into)) = queue.pop_front() {
            for &w in self.adjacent(v) {
                if w == x {
                    continue;
                }
                let collider = into && self.mark(w, v) == Some(Mark::Arrow);
                let open = if collider { anc[v] } else { !zmask[v] };
                if !open {
                    continue;
                }
                if w == y {
                    return true;
                }
                let next = self.mark(v, w) == Some(Mark::Arrow);
                if !seen[w][next as usize] {
                    seen[w][next as usize] = true;
                    queue.push_back((w, next));
                }
            }
        }
        false
    }

    /// m-separation by enumerating every simple path. Oracle for small graphs.
    pub fn m_separated_bruteforce(&self, x: VertexId, y: VertexId, z: &VertexSet) -> Result<bool> {
        self.check_query(x, y, z)?;
        self.require_small()?;
        let anc = self.ancestor_mask([x, y].into_iter().chain(z.iter().copied()));
        let mut connected = false;
        self.for_each_simple_path(x, y, &mut |path| {
            let active = path.windows(3).all(|w| {
                let (p, v, q) = (w[0], w[1], w[2]);
                let collider =
                    self.mark(p, v) == Some(Mark::Arrow) && self.mark(q, v) == Some(Mark::Arrow);
                if collider {
                    anc[v]
                } else {
                    !z.contains(&v)
                }
            });
            connected |= active;
            !connected
        });
        Ok(!connected)
    }

    pub(crate) fn require_small(&self) -> Result<()> {
        if self.n() > BRUTE_FORCE_LIMIT {
            return Err(Error::OracleSizeExceeded {
                vertices: self.n(),
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        Ok(())
    }

    /// Calls `f` on every simple path from `x` to `y` until it returns `false`.
    pub(crate) fn for_each_simple_path(
        &self,
        x: VertexId,
        y: VertexId,
        f: &mut dyn FnMut(&[VertexId]) -> bool,
    ) {
        fn go(
            g: &MixedGraph,
            y: VertexId,
            path: &mut Vec<VertexId>,
            on_path: &mut [bool],
            f: &mut dyn FnMut(&[VertexId]) -> bool,
        ) -> bool {
            let v = *path.last().unwrap();
            if v == y {
                return f(path);
            }
            for &w in g.adjacent(v) {
                if on_path[w] {
                    continue;
                }
                on_path[w] = true;
                path.push(w);
                let keep_going = go(g, y, path, on_path, f);
                path.pop();
                on_path[w] = false;
                if !keep_going {
                    return false;
                }
            }
            true
        }
        let mut on_path = vec![false; self.n()];
        on_path[x] = true;
        let mut path = vec![x];
        go(self, y, &mut path, &mut on_path, f);
    }
}

pub(crate) fn mask_to_set(mask: &[bool]) -> VertexSet {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

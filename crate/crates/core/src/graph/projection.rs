use std::collections::VecDeque;

use super::{Dag, Mag, Mark, MixedGraph, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Projects a DAG onto `observed`, conditioning on `selection`; every other
/// vertex is latent. The result is indexed in ascending order of the original
/// ids of `observed`.
pub fn latent_project(dag: &Dag, observed: &VertexSet, selection: &VertexSet) -> Result<Mag> {
    let g: &MixedGraph = dag;
    g.check_all(observed)?;
    g.check_all(selection)?;
    if let Some(v) = observed.intersection(selection).next() {
        return Err(Error::InvalidPartition(format!(
            "`{}` is both observed and selected",
            g.label(*v)
        )));
    }
    let latent: VertexSet = g
        .vertex_ids()
        .filter(|v| !observed.contains(v) && !selection.contains(v))
        .collect();
    let order: Vec<VertexId> = observed.iter().copied().collect();
    let labels: Vec<&str> = order.iter().map(|&v| g.label(v)).collect();
    let mut out = MixedGraph::new(&labels)?;
    let latent_mask = to_mask(g.n(), &latent);

    // x is an ancestor of {y} ∪ S, per observed x, as a lookup table.
    let anc_with_s: Vec<Vec<bool>> = order
        .iter()
        .map(|&y| g.ancestor_mask(std::iter::once(y).chain(selection.iter().copied())))
        .collect();

    for (i, &x) in order.iter().enumerate() {
        for (j, &y) in order.iter().enumerate().skip(i + 1) {
            let anc = g.ancestor_mask([x, y].into_iter().chain(selection.iter().copied()));
            if !inducing_walk(g, x, y, &latent_mask, &anc) {
                continue;
            }
            let x_anc = anc_with_s[j][x];
            let y_anc = anc_with_s[i][y];
            let (mx, my) = match (x_anc, y_anc) {
                (true, false) => (Mark::Tail, Mark::Arrow),
                (false, true) => (Mark::Arrow, Mark::Tail),
                (true, true) => (Mark::Tail, Mark::Tail),
                (false, false) => (Mark::Arrow, Mark::Arrow),
            };
            out.add_edge(i, j, mx, my)?;
        }
    }
    Mag::new(out)
        .map_err(|e| Error::InternalInvariantBroken(format!("projection is not a MAG: {e}")))
}

fn to_mask(n: usize, set: &VertexSet) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

/// Whether an inducing path between `x` and `y` relative to latent set
/// `latent` and selection set `selection` exists in `g`.
pub fn has_inducing_path(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    latent: &VertexSet,
    selection: &VertexSet,
) -> Result<bool> {
    check_endpoints(g, x, y, latent, selection)?;
    let anc = g.ancestor_mask([x, y].into_iter().chain(selection.iter().copied()));
    Ok(inducing_walk(g, x, y, &to_mask(g.n(), latent), &anc))
}

/// Path-enumeration version of [`has_inducing_path`], for graphs of at most
/// [`super::BRUTE_FORCE_LIMIT`] vertices.
pub fn has_inducing_path_bruteforce(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    latent: &VertexSet,
    selection: &VertexSet,
) -> Result<bool> {
    check_endpoints(g, x, y, latent, selection)?;
    g.require_small()?;
    let anc = g.ancestor_mask([x, y].into_iter().chain(selection.iter().copied()));
    let mut found = false;
    g.for_each_simple_path(x, y, &mut |path| {
        found = path.windows(3).all(|w| {
            let (p, v, q) = (w[0], w[1], w[2]);
            let collider = g.mark(p, v) == Some(Mark::Arrow) && g.mark(q, v) == Some(Mark::Arrow);
            if collider {
                anc[v]
            } else {
                latent.contains(&v)
            }
        });
        !found
    });
    Ok(found)
}

fn check_endpoints(
    g: &MixedGraph,
    x: VertexId,
    y: VertexId,
    latent: &VertexSet,
    selection: &VertexSet,
) -> Result<()> {
    g.check(x)?;
    g.check(y)?;
    g.check_all(latent)?;
    g.check_all(selection)?;
    if x == y {
        return Err(Error::InvalidQuery(
            "inducing path needs distinct endpoints".into(),
        ));
    }
    Ok(())
}

/// Walk-state search: interior non-colliders must be latent, interior
/// colliders must lie in `anc`. Endpoints never appear in the interior.
fn inducing_walk(g: &MixedGraph, x: VertexId, y: VertexId, latent: &[bool], anc: &[bool]) -> bool {
    let mut seen = vec![[false; 2]; g.n()];
    let mut queue = VecDeque::new();
    for &w in g.adjacent(x) {
        if w == y {
            return true;
        }
        let into = g.mark(x, w) == Some(Mark::Arrow);
        if !seen[w][into as usize] {
            seen[w][into as usize] = true;
            queue.push_back((w, into));
        }
    }
    while let Some((v, into)) = queue.pop_front() {
        for &w in g.adjacent(v) {
            if w == x {
                continue;
            }
            let collider = into && g.mark(w, v) == Some(Mark::Arrow);
            let open = if collider { anc[v] } else { latent[v] };
            if !open {
                continue;
            }
            if w == y {
                return true;
            }
            let next = g.mark(v, w) == Some(Mark::Arrow);
            if !seen[w][next as usize] {
                seen[w][next as usize] = true;
                queue.push_back((w, next));
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Five-vertex DAG of the running example, before projection.
    pub(crate) fn fig1_dag() -> Dag {
        Dag::from_edges(
            &["U", "T", "W", "Y", "Z"],
            &[("W", "Z"), ("U", "Y"), ("U", "W"), ("W", "T"), ("T", "Z")],
        )
        .unwrap()
    }

    #[test]
    fn projects_out_the_confounder() {
        let dag = fig1_dag();
        let o = dag.vertices_of(&["T", "W", "Y", "Z"]).unwrap();
        let mag = latent_project(&dag, &o, &VertexSet::new()).unwrap();
        let expected =
            MixedGraph::parse("vertices: T W Y Z\nY <-> W\nW -> Z\nW -> T\nT -> Z\n").unwrap();
        assert!(mag.same_structure(&expected), "{}", mag.to_text());
    }

    #[test]
    fn projects_out_confounder_and_mediator() {
        let dag = fig1_dag();
        let o = dag.vertices_of(&["Y", "Z", "T"]).unwrap();
        let mag = latent_project(&dag, &o, &VertexSet::new()).unwrap();
        let expected = MixedGraph::parse("vertices: T Y Z\nT -> Z\nY <-> T\nY <-> Z\n").unwrap();
        assert!(mag.same_structure(&expected), "{}", mag.to_text());
    }

    #[test]
    fn full_observation_is_identity() {
        let dag = fig1_dag();
        let all: VertexSet = dag.vertex_ids().collect();
        let mag = latent_project(&dag, &all, &VertexSet::new()).unwrap();
        assert_eq!(mag.as_graph(), dag.as_graph());
    }

    #[test]
    fn selection_yields_undirected_edges() {
        // A -> S <- B with S selected: A -- B.
        let dag = Dag::from_edges(&["A", "B", "S"], &[("A", "S"), ("B", "S")]).unwrap();
        let mag = latent_project(&dag, &VertexSet::from([0, 1]), &VertexSet::from([2])).unwrap();
        assert!(mag.is_neighbor(0, 1));
    }

    #[test]
    fn overlapping_partition_rejected() {
        let dag = fig1_dag();
        let r = latent_project(&dag, &VertexSet::from([0, 1]), &VertexSet::from([1]));
        assert!(matches!(r, Err(Error::InvalidPartition(_))));
    }
}

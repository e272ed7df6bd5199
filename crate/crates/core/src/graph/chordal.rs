use super::{MixedGraph, VertexId};

/// Chordality of the skeleton of `g` (marks ignored).
///
/// Runs lexicographic BFS and checks that the reverse visit order is a
/// perfect elimination ordering.
pub fn is_chordal(g: &MixedGraph) -> bool {
    let order = lex_bfs(g);
    let n = g.n();
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    for &v in &order {
        // Neighbours visited before v; the latest of them must be adjacent to
        // all the others.
        let earlier: Vec<VertexId> = g
            .adjacent(v)
            .iter()
            .copied()
            .filter(|&w| position[w] < position[v])
            .collect();
        let Some(&parent) = earlier.iter().max_by_key(|&&w| position[w]) else {
            continue;
        };
        if earlier
            .iter()
            .any(|&w| w != parent && !g.is_adjacent(w, parent))
        {
            return false;
        }
    }
    true
}

/// Lexicographic BFS visit order; ties go to the lowest id.
fn lex_bfs(g: &MixedGraph) -> Vec<VertexId> {
    let n = g.n();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| labels[a].cmp(&labels[b]).then(b.cmp(&a)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for &w in g.adjacent(v) {
            if !visited[w] {
                labels[w].push(n - step);
            }
        }
    }
    order
}

use super::{bits, is_undirected, GraphError, LabeledGraph};

/// Minor inclusion via witness sets: `h` is a minor of `g` iff there are
/// pairwise disjoint nonempty node sets `U_1..U_k` of `g`, one per node of
/// `h`, each inducing a connected subgraph, such that every edge `i - j` of
/// `h` is matched by some edge between `U_i` and `U_j`.
///
/// Exhaustive over all `(k+1)^n` assignments of `g`'s nodes.
pub fn has_minor(g: &LabeledGraph, h: &LabeledGraph) -> Result<bool, GraphError> {
    for (name, x) in [("g", g), ("h", h)] {
        if x.gamma().len() != 1 {
            return Err(GraphError::Precondition(format!("{name} must have a single edge relation")));
        }
        if !is_undirected(x) {
            return Err(GraphError::Precondition(format!("{name} must be undirected")));
        }
    }
    if h.nodes().any(|v| h.has_edge(0, v, v)) {
        return Err(GraphError::Precondition("h must be loop-free".into()));
    }
    let n = g.node_count();
    let k = h.node_count();
    if k > n {
        return Ok(false);
    }
    let h_edges: Vec<(usize, usize)> = h.edges().filter(|&(_, i, j)| i < j).map(|(_, i, j)| (i, j)).collect();
    // assignment[v] = 0 (unused) or 1 + index of the witness set
    let mut assignment = vec![0usize; n];
    loop {
        let mut sets = vec![0u64; k];
        for (v, &a) in assignment.iter().enumerate() {
            if a > 0 {
                sets[a - 1] |= 1 << v;
            }
        }
        if sets.iter().all(|&s| s != 0 && induces_connected(g, s))
            && h_edges.iter().all(|&(i, j)| adjacent(g, sets[i], sets[j]))
        {
            return Ok(true);
        }
        // odometer step
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(false);
            }
            assignment[pos] += 1;
            if assignment[pos] <= k {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

fn induces_connected(g: &LabeledGraph, set: u64) -> bool {
    let start = set & set.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= (g.out_mask(0, v) | g.in_mask(0, v)) & set;
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == set
}

fn adjacent(g: &LabeledGraph, a: u64, b: u64) -> bool {
    bits(a).any(|u| (g.out_mask(0, u) | g.in_mask(0, u)) & b != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
        let both: Vec<_> = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        LabeledGraph::blank(n, &both).unwrap()
    }

    #[test]
    fn cycles_and_paths() {
        let k3 = undirected(3, &[(0, 1), (1, 2), (2, 0)]);
        let c5 = undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let p4 = undirected(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(has_minor(&c5, &k3).unwrap());
        assert!(has_minor(&k3, &k3).unwrap());
        assert!(!has_minor(&p4, &k3).unwrap());
    }

    #[test]
    fn preconditions() {
        let directed = LabeledGraph::blank(2, &[(0, 1)]).unwrap();
        let k3 = undirected(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(has_minor(&directed, &k3).is_err());
        let looped = LabeledGraph::blank(1, &[(0, 0)]).unwrap();
        assert!(has_minor(&k3, &looped).is_err());
    }
}

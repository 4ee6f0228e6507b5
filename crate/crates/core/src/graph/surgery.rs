use super::{bits, GraphError, LabeledGraph, NodeSubset};

/// Result of mirroring: the new graph and the bijection from mirrored nodes to their copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mirroring {
    pub graph: LabeledGraph,
    /// `(v, f(v))` for every mirrored node `v`, ascending in `v`.
    pub copies: Vec<(usize, usize)>,
}

impl Mirroring {
    pub fn copy_of(&self, v: usize) -> Option<usize> {
        self.copies.iter().find(|&&(a, _)| a == v).map(|&(_, b)| b)
    }
}

/// `mir(g, u)`: copies of `u` are appended after the original nodes.
///
/// Edges are the original ones plus, for `u → v`:
/// `u ∉ U, v ∈ U` gives `u → f(v)`; `u ∈ U, v ∉ U` gives `f(u) → v`;
/// `u, v ∈ U` gives `f(u) → f(v)`.
pub fn mirror(g: &LabeledGraph, u: &NodeSubset) -> Result<Mirroring, GraphError> {
    u.check(g)?;
    let n = g.node_count();
    let copies: Vec<(usize, usize)> = u.iter().enumerate().map(|(i, v)| (v, n + i)).collect();
    let mut f = vec![None; n];
    for &(v, c) in &copies {
        f[v] = Some(c);
    }
    let mut labels = g.labels().to_vec();
    labels.extend(copies.iter().map(|&(v, _)| g.label(v)));
    let mut out = LabeledGraph::edgeless(g.sigma().clone(), g.gamma().clone(), labels)?;
    for (gi, a, b) in g.edges() {
        out.add_edge(gi, a, b);
        match (f[a], f[b]) {
            (None, Some(fb)) => out.add_edge(gi, a, fb),
            (Some(fa), None) => out.add_edge(gi, fa, b),
            (Some(fa), Some(fb)) => out.add_edge(gi, fa, fb),
            (None, None) => {}
        }
    }
    Ok(Mirroring { graph: out, copies })
}

/// Asymmetric merging of `w2` into `w`: `w2` disappears and `w` inherits its outgoing edges.
pub fn merge_asym(g: &LabeledGraph, w: usize, w2: usize) -> Result<LabeledGraph, GraphError> {
    merge(g, w, w2, false)
}

/// Symmetric merging: as [`merge_asym`], and `w` also inherits the incoming edges of `w2`.
pub fn merge_sym(g: &LabeledGraph, w: usize, w2: usize) -> Result<LabeledGraph, GraphError> {
    merge(g, w, w2, true)
}

fn merge(g: &LabeledGraph, w: usize, w2: usize, symmetric: bool) -> Result<LabeledGraph, GraphError> {
    let n = g.node_count();
    for x in [w, w2] {
        if x >= n {
            return Err(GraphError::NodeOutOfRange(x));
        }
    }
    if w == w2 {
        return Err(GraphError::SelfMerge(w));
    }
    if n == 1 {
        return Err(GraphError::NoNodes);
    }
    // survivors keep their relative order
    let new_index = |v: usize| if v < w2 { v } else { v - 1 };
    let labels = g.nodes().filter(|&v| v != w2).map(|v| g.label(v)).collect();
    let mut out = LabeledGraph::edgeless(g.sigma().clone(), g.gamma().clone(), labels)?;
    let nw = new_index(w);
    for (gi, a, b) in g.edges() {
        if a != w2 && b != w2 {
            out.add_edge(gi, new_index(a), new_index(b));
        }
    }
    for gi in 0..g.gamma().len() {
        for v in bits(g.out_mask(gi, w2)) {
            if v != w2 {
                out.add_edge(gi, nw, new_index(v));
            }
        }
        if symmetric {
            for v in bits(g.in_mask(gi, w2)) {
                if v != w2 {
                    out.add_edge(gi, new_index(v), nw);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_single_node() {
        let g = LabeledGraph::blank(1, &[]).unwrap();
        let m = mirror(&g, &NodeSubset::new([0])).unwrap();
        assert_eq!(m.graph.node_count(), 2);
        assert_eq!(m.graph.edge_count(), 0);
        assert_eq!(m.copies, vec![(0, 1)]);
    }

    #[test]
    fn mirrored_self_loop_stays_inside_the_copy() {
        // both endpoints lie in U, so only the f(u) -> f(v) clause fires
        let g = LabeledGraph::blank(1, &[(0, 0)]).unwrap();
        let m = mirror(&g, &NodeSubset::new([0])).unwrap().graph;
        assert_eq!(m, LabeledGraph::blank(2, &[(0, 0), (1, 1)]).unwrap());
    }

    #[test]
    fn mirror_boundary_edges() {
        // 0 -> 1, mirror {1}: adds 0 -> 2
        let g = LabeledGraph::blank(2, &[(0, 1)]).unwrap();
        let m = mirror(&g, &NodeSubset::new([1])).unwrap().graph;
        assert_eq!(m, LabeledGraph::blank(3, &[(0, 1), (0, 2)]).unwrap());
        // mirror {0}: adds 2 -> 1
        let m = mirror(&g, &NodeSubset::new([0])).unwrap().graph;
        assert_eq!(m, LabeledGraph::blank(3, &[(0, 1), (2, 1)]).unwrap());
    }

    #[test]
    fn asymmetric_merge() {
        let g = LabeledGraph::blank(2, &[]).unwrap();
        assert_eq!(merge_asym(&g, 0, 1).unwrap().node_count(), 1);
        // w=0, w2=1, x=2: 1 -> 2 becomes 0 -> 1
        let g = LabeledGraph::blank(3, &[(1, 2)]).unwrap();
        assert_eq!(merge_asym(&g, 0, 1).unwrap(), LabeledGraph::blank(2, &[(0, 1)]).unwrap());
        // 2 -> 1 is dropped
        let g = LabeledGraph::blank(3, &[(2, 1)]).unwrap();
        assert_eq!(merge_asym(&g, 0, 1).unwrap().edge_count(), 0);
        assert_eq!(merge_asym(&g, 1, 1), Err(GraphError::SelfMerge(1)));
    }

    #[test]
    fn symmetric_merge() {
        let g = LabeledGraph::blank(3, &[(2, 1)]).unwrap();
        assert_eq!(merge_sym(&g, 0, 1).unwrap(), LabeledGraph::blank(2, &[(1, 0)]).unwrap());
        let g = LabeledGraph::blank(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(merge_sym(&g, 0, 1).unwrap(), LabeledGraph::blank(1, &[(0, 0)]).unwrap());
    }
}

use super::{bits, GraphError, LabeledGraph};
use crate::alphabet::Alphabet;

/// Isomorphism-invariant encoding: equal forms iff isomorphic graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    labels: Vec<usize>,
    rows: Vec<u64>,
}

/// Minimizes the row encoding over all permutations that respect a fixed
/// ordering of nodes by isomorphism-invariant signatures.
pub fn canonical_form(g: &LabeledGraph) -> CanonicalForm {
    let n = g.node_count();
    let gammas = g.gamma().len();
    let signature = |v: usize| {
        let mut s = vec![g.label(v)];
        for gi in 0..gammas {
            s.push(g.out_mask(gi, v).count_ones() as usize);
            s.push(g.in_mask(gi, v).count_ones() as usize);
            s.push(g.has_edge(gi, v, v) as usize);
        }
        s
    };
    let sigs: Vec<Vec<usize>> = g.nodes().map(signature).collect();
    let mut order: Vec<usize> = g.nodes().collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let labels = order.iter().map(|&v| g.label(v)).collect();

    let mut best: Option<Vec<u64>> = None;
    let mut perm = vec![usize::MAX; n];
    let mut used = 0u64;
    search(g, &order, &sigs, 0, &mut perm, &mut used, &mut best);
    CanonicalForm { labels, rows: best.expect("at least one permutation") }
}

fn search(
    g: &LabeledGraph,
    order: &[usize],
    sigs: &[Vec<usize>],
    pos: usize,
    perm: &mut [usize],
    used: &mut u64,
    best: &mut Option<Vec<u64>>,
) {
    let n = order.len();
    if pos == n {
        let rows = encode(g, perm);
        if best.as_ref().map_or(true, |b| rows < *b) {
            *best = Some(rows);
        }
        return;
    }
    let sig = &sigs[order[pos]];
    for v in 0..n {
        if *used >> v & 1 == 0 && &sigs[v] == sig {
            *used |= 1 << v;
            perm[pos] = v;
            search(g, order, sigs, pos + 1, perm, used, best);
            *used &= !(1 << v);
        }
    }
}

/// Rows of the graph relabeled so that new node `i` is old node `perm[i]`.
fn encode(g: &LabeledGraph, perm: &[usize]) -> Vec<u64> {
    let n = perm.len();
    let mut rows = Vec::with_capacity(n * g.gamma().len());
    for gi in 0..g.gamma().len() {
        for i in 0..n {
            let out = g.out_mask(gi, perm[i]);
            let mut row = 0u64;
            for (j, &pj) in perm.iter().enumerate() {
                row |= (out >> pj & 1) << j;
            }
            rows.push(row);
        }
    }
    rows
}

/// Whether a label- and edge-preserving bijection exists.
pub fn isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<bool, GraphError> {
    if !g1.same_alphabets(g2) {
        return Err(GraphError::AlphabetMismatch);
    }
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(g1) == canonical_form(g2))
}

/// Streams one representative per isomorphism class with `1..=n_max` nodes.
pub fn enumerate_graphs(n_max: usize, sigma: &Alphabet, gamma: &Alphabet) -> GraphEnumerator {
    GraphEnumerator::new(n_max, sigma.clone(), gamma.clone())
}

/// Enumeration state.
///
/// For each node count the labelings are the nondecreasing label vectors.
/// Under such a labeling an edge set is emitted iff its bit encoding is
/// minimal among all label-preserving renamings, so every class is emitted
/// exactly once and no deduplication table is kept.
pub struct GraphEnumerator {
    n_max: usize,
    sigma: Alphabet,
    gamma: Alphabet,
    n: usize,
    labels: Vec<usize>,
    /// Per nontrivial label-preserving permutation: new bit index of each old bit.
    bit_maps: Vec<Vec<u8>>,
    code: u64,
    code_end: u64,
    done: bool,
}

impl GraphEnumerator {
    fn new(n_max: usize, sigma: Alphabet, gamma: Alphabet) -> Self {
        assert!(n_max >= 1, "n_max must be at least 1");
        let mut e = GraphEnumerator {
            n_max,
            sigma,
            gamma,
            n: 1,
            labels: vec![0],
            bit_maps: Vec::new(),
            code: 0,
            code_end: 0,
            done: false,
        };
        e.start_labeling();
        e
    }

    fn bit_count(&self) -> usize {
        self.n * self.n * self.gamma.len()
    }

    fn start_labeling(&mut self) {
        let bits = self.bit_count();
        assert!(bits < 64, "enumeration universe too large: {bits} edge bits");
        self.code = 0;
        self.code_end = 1u64 << bits;
        self.bit_maps.clear();
        let n = self.n;
        let mut q: Vec<usize> = (0..n).collect();
        let labels = self.labels.clone();
        let gammas = self.gamma.len();
        let mut maps = Vec::new();
        permute_blocks(&labels, 0, &mut q, &mut |q| {
            if q.iter().enumerate().all(|(i, &x)| i == x) {
                return;
            }
            let mut map = vec![0u8; gammas * n * n];
            for gi in 0..gammas {
                for a in 0..n {
                    for b in 0..n {
                        map[gi * n * n + a * n + b] = (gi * n * n + q[a] * n + q[b]) as u8;
                    }
                }
            }
            maps.push(map);
        });
        self.bit_maps = maps;
    }

    fn advance_labeling(&mut self) -> bool {
        let k = self.sigma.len();
        // next nondecreasing vector
        let mut i = self.n;
        while i > 0 {
            i -= 1;
            if self.labels[i] + 1 < k {
                let v = self.labels[i] + 1;
                for x in &mut self.labels[i..] {
                    *x = v;
                }
                return true;
            }
        }
        false
    }

    fn is_canonical(&self, code: u64) -> bool {
        self.bit_maps.iter().all(|map| {
            let mut image = 0u64;
            for b in bits(code) {
                image |= 1 << map[b];
            }
            image >= code
        })
    }

    fn build(&self, code: u64) -> LabeledGraph {
        let n = self.n;
        let mut g = LabeledGraph::edgeless(self.sigma.clone(), self.gamma.clone(), self.labels.clone())
            .expect("valid labels");
        for b in bits(code) {
            let gi = b / (n * n);
            let r = b % (n * n);
            g.add_edge(gi, r / n, r % n);
        }
        g
    }
}

/// Calls `f` with every permutation `q` that maps each block of equal
/// consecutive labels onto itself.
fn permute_blocks(labels: &[usize], pos: usize, q: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    let n = labels.len();
    if pos == n {
        f(q);
        return;
    }
    let mut end = pos;
    while end < n && labels[end] == labels[pos] {
        end += 1;
    }
    heap_permute(q, pos, end, pos, &mut |q| permute_blocks(labels, end, q, f));
}

fn heap_permute(q: &mut Vec<usize>, start: usize, end: usize, k: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
    if k + 1 >= end {
        f(q);
        return;
    }
    for i in k..end {
        q.swap(k, i);
        heap_permute(q, start, end, k + 1, f);
        q.swap(k, i);
    }
}

impl Iterator for GraphEnumerator {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        loop {
            if self.done {
                return None;
            }
            while self.code < self.code_end {
                let code = self.code;
                self.code += 1;
                if self.is_canonical(code) {
                    return Some(self.build(code));
                }
            }
            if self.advance_labeling() {
                self.start_labeling();
            } else if self.n < self.n_max {
                self.n += 1;
                self.labels = vec![0; self.n];
                self.start_labeling();
            } else {
                self.done = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn single_node_graphs() {
        let all: Vec<_> = enumerate_graphs(1, &Alphabet::blank(), &Alphabet::blank()).collect();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn reversed_edge_is_isomorphic() {
        let g1 = LabeledGraph::blank(2, &[(0, 1)]).unwrap();
        let g2 = LabeledGraph::blank(2, &[(1, 0)]).unwrap();
        assert!(isomorphic(&g1, &g2).unwrap());
        assert!(isomorphic(&g1, &g1).unwrap());
    }

    #[test]
    fn fixed_labels_break_symmetry() {
        let g1 = LabeledGraph::simple(abc(), &["a", "b", "c"], &[(0, 1), (1, 2)]).unwrap();
        let g2 = LabeledGraph::simple(abc(), &["a", "b", "c"], &[(0, 2), (2, 1)]).unwrap();
        assert!(!isomorphic(&g1, &g2).unwrap());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let g1 = LabeledGraph::blank(1, &[]).unwrap();
        let g2 = LabeledGraph::simple(abc(), &["a"], &[]).unwrap();
        assert_eq!(isomorphic(&g1, &g2), Err(GraphError::AlphabetMismatch));
    }

    #[test]
    fn known_class_counts() {
        // directed graphs with loops on n unlabeled nodes: 2, 10, 104, 3044
        let counts: Vec<usize> = (1..=4)
            .map(|n| enumerate_graphs(n, &Alphabet::blank(), &Alphabet::blank()).filter(|g| g.node_count() == n).count())
            .collect();
        assert_eq!(counts, [2, 10, 104, 3044]);
    }
}

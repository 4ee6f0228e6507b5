//! Σ-labeled Γ-graphs: finite directed graphs with one edge relation per
//! edge symbol and a total node labeling.
//!
//! Nodes are dense indices `0..n`. Adjacency is stored as one bitmask row per
//! node and relation, so graphs are limited to [`MAX_NODES`] nodes.

mod canon;
mod minor;
mod surgery;

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::Alphabet;

pub use canon::{canonical_form, enumerate_graphs, isomorphic, CanonicalForm, GraphEnumerator};
pub use minor::has_minor;
pub use surgery::{merge_asym, merge_sym, mirror, Mirroring};

pub const MAX_NODES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one node")]
    NoNodes,
    #[error("graphs are limited to {MAX_NODES} nodes, got {0}")]
    TooManyNodes(usize),
    #[error("label `{0}` is not in the node alphabet")]
    UnknownLabel(String),
    #[error("edge symbol `{0}` is not in the edge alphabet")]
    UnknownEdgeSymbol(String),
    #[error("edge ({0},{1}) refers to a node outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("graphs are over different alphabets")]
    AlphabetMismatch,
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("cannot merge node {0} with itself")]
    SelfMerge(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid graph file: {0}")]
    Format(String),
}

/// A Σ-labeled Γ-graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    sigma: Alphabet,
    gamma: Alphabet,
    labels: Vec<usize>,
    /// `out[γ][u]` has bit `v` set iff `u →γ v`.
    out: Vec<Vec<u64>>,
    /// `inc[γ][v]` has bit `u` set iff `u →γ v`.
    inc: Vec<Vec<u64>>,
}

impl LabeledGraph {
    /// Builds an edgeless graph whose node `v` carries the symbol index `labels[v]`.
    pub fn edgeless(sigma: Alphabet, gamma: Alphabet, labels: Vec<usize>) -> Result<Self, GraphError> {
        let n = labels.len();
        if n == 0 {
            return Err(GraphError::NoNodes);
        }
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= sigma.len()) {
            return Err(GraphError::UnknownLabel(format!("#{bad}")));
        }
        let rows = vec![vec![0u64; n]; gamma.len()];
        Ok(LabeledGraph { sigma, gamma, labels, out: rows.clone(), inc: rows })
    }

    /// Builds a graph from label names and `(γ, u, v)` edges given by name.
    pub fn from_names<L, E>(sigma: Alphabet, gamma: Alphabet, labels: L, edges: E) -> Result<Self, GraphError>
    where
        L: IntoIterator,
        L::Item: AsRef<str>,
        E: IntoIterator<Item = (String, usize, usize)>,
    {
        let labels = labels
            .into_iter()
            .map(|l| sigma.index_of(l.as_ref()).ok_or_else(|| GraphError::UnknownLabel(l.as_ref().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut g = LabeledGraph::edgeless(sigma, gamma, labels)?;
        for (gamma_name, u, v) in edges {
            let gi = g.gamma.index_of(&gamma_name).ok_or(GraphError::UnknownEdgeSymbol(gamma_name))?;
            g.try_add_edge(gi, u, v)?;
        }
        Ok(g)
    }

    /// Convenience constructor for single-relation graphs over the blank edge alphabet.
    pub fn simple(sigma: Alphabet, labels: &[&str], edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let blank = crate::alphabet::BLANK.to_string();
        LabeledGraph::from_names(
            sigma,
            Alphabet::blank(),
            labels.iter().copied(),
            edges.iter().map(|&(u, v)| (blank.clone(), u, v)),
        )
    }

    /// Blank-labeled single-relation graph.
    pub fn blank(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let labels = vec![crate::alphabet::BLANK; n];
        LabeledGraph::simple(Alphabet::blank(), &labels, edges)
    }

    pub fn try_add_edge(&mut self, gamma: usize, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.node_count();
        if u >= n || v >= n {
            return Err(GraphError::EndpointOutOfRange(u, v, n));
        }
        if gamma >= self.gamma.len() {
            return Err(GraphError::UnknownEdgeSymbol(format!("#{gamma}")));
        }
        self.out[gamma][u] |= 1 << v;
        self.inc[gamma][v] |= 1 << u;
        Ok(())
    }

    /// Adds `u →γ v`. Panics on out-of-range arguments.
    pub fn add_edge(&mut self, gamma: usize, u: usize, v: usize) {
        self.try_add_edge(gamma, u, v).expect("edge within range");
    }

    pub fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.gamma
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn label_name(&self, v: usize) -> &str {
        self.sigma.symbol(self.labels[v])
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn has_edge(&self, gamma: usize, u: usize, v: usize) -> bool {
        self.out[gamma][u] >> v & 1 == 1
    }

    /// Bitmask of `{v | u →γ v}`.
    pub fn out_mask(&self, gamma: usize, u: usize) -> u64 {
        self.out[gamma][u]
    }

    /// Bitmask of `{u | u →γ v}`.
    pub fn in_mask(&self, gamma: usize, v: usize) -> u64 {
        self.inc[gamma][v]
    }

    /// All edges as `(γ, u, v)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(g, rows)| {
            rows.iter().enumerate().flat_map(move |(u, &row)| bits(row).map(move |v| (g, u, v)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().map(|r| r.count_ones() as usize).sum()
    }

    /// Same graph over a different node alphabet, relabeled through `f`.
    pub fn relabel<F>(&self, sigma: Alphabet, mut f: F) -> Result<LabeledGraph, GraphError>
    where
        F: FnMut(usize, &str) -> String,
    {
        let mut labels = Vec::with_capacity(self.node_count());
        for v in self.nodes() {
            let name = f(v, self.label_name(v));
            labels.push(sigma.index_of(&name).ok_or(GraphError::UnknownLabel(name))?);
        }
        let mut g = LabeledGraph::edgeless(sigma, self.gamma.clone(), labels)?;
        g.out = self.out.clone();
        g.inc = self.inc.clone();
        Ok(g)
    }

    /// Uniform random graph: each label uniform, each possible edge present with probability `p`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: &Alphabet, gamma: &Alphabet, p: f64) -> LabeledGraph {
        let labels = (0..n).map(|_| rng.gen_range(0..sigma.len())).collect();
        let mut g = LabeledGraph::edgeless(sigma.clone(), gamma.clone(), labels).expect("1 <= n <= MAX_NODES");
        for gi in 0..gamma.len() {
            for u in 0..n {
                for v in 0..n {
                    if rng.gen_bool(p) {
                        g.add_edge(gi, u, v);
                    }
                }
            }
        }
        g
    }

    pub fn same_alphabets(&self, other: &LabeledGraph) -> bool {
        self.sigma == other.sigma && self.gamma == other.gamma
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphFile::from(self)).expect("graph serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&GraphFile::from(self)).expect("graph serializes")
    }

    pub fn from_json_str(text: &str) -> Result<LabeledGraph, GraphError> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))?;
        file.into_graph()
    }
}

impl std::fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<&str> = self.nodes().map(|v| self.label_name(v)).collect();
        let edges: Vec<String> = self
            .edges()
            .map(|(g, u, v)| {
                if self.gamma.len() == 1 {
                    format!("{u}->{v}")
                } else {
                    format!("{u}-{}->{v}", self.gamma.symbol(g))
                }
            })
            .collect();
        write!(f, "Graph{{labels: {:?}, edges: [{}]}}", labels, edges.join(", "))
    }
}

/// Iterates the indices of set bits in ascending order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A set of nodes of some graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeSubset {
    members: BTreeSet<usize>,
}

impl NodeSubset {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        NodeSubset { members: members.into_iter().collect() }
    }

    pub fn from_mask(mask: u64) -> Self {
        NodeSubset::new(bits(mask))
    }

    pub fn empty() -> Self {
        NodeSubset::default()
    }

    /// Bitmask with bit `v` set for each member `v < 64`.
    pub fn mask(&self) -> u64 {
        self.members.iter().filter(|&&v| v < 64).fold(0, |m, &v| m | 1 << v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn check(&self, g: &LabeledGraph) -> Result<(), GraphError> {
        match self.members.iter().find(|&&v| v >= g.node_count()) {
            Some(&v) => Err(GraphError::NodeOutOfRange(v)),
            None => Ok(()),
        }
    }
}

/// Weak connectivity: an undirected path joins every two nodes.
pub fn is_connected(g: &LabeledGraph) -> bool {
    let n = g.node_count();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        for v in bits(frontier) {
            for gi in 0..g.gamma().len() {
                next |= g.out_mask(gi, v) | g.in_mask(gi, v);
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == all
}

/// Every γ-edge has its reverse.
pub fn is_undirected(g: &LabeledGraph) -> bool {
    (0..g.gamma().len()).all(|gi| g.nodes().all(|v| g.out_mask(gi, v) == g.in_mask(gi, v)))
}

/// No edge joins two nodes of equal label; a self-loop is always a violation.
pub fn is_valid_coloring(g: &LabeledGraph) -> bool {
    g.edges().all(|(_, u, v)| g.label(u) != g.label(v))
}

/// On-disk graph format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub sigma: Vec<String>,
    pub gamma: Vec<String>,
    pub nodes: Vec<NodeEntry>,
    #[serde(default)]
    pub edges: BTreeMap<String, Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeEntry {
    pub label: String,
}

impl From<&LabeledGraph> for GraphFile {
    fn from(g: &LabeledGraph) -> Self {
        let mut edges: BTreeMap<String, Vec<[usize; 2]>> =
            g.gamma().iter().map(|s| (s.to_string(), Vec::new())).collect();
        for (gi, u, v) in g.edges() {
            edges.get_mut(g.gamma().symbol(gi)).expect("gamma symbol").push([u, v]);
        }
        GraphFile {
            sigma: g.sigma().symbols().to_vec(),
            gamma: g.gamma().symbols().to_vec(),
            nodes: g.nodes().map(|v| NodeEntry { label: g.label_name(v).to_string() }).collect(),
            edges,
        }
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<LabeledGraph, GraphError> {
        let sigma = Alphabet::new(self.sigma).map_err(|e| GraphError::Format(format!("sigma: {e}")))?;
        let gamma = Alphabet::new(self.gamma).map_err(|e| GraphError::Format(format!("gamma: {e}")))?;
        let edges = self
            .edges
            .into_iter()
            .flat_map(|(g, list)| list.into_iter().map(move |[u, v]| (g.clone(), u, v)))
            .collect::<Vec<_>>();
        LabeledGraph::from_names(sigma, gamma, self.nodes.iter().map(|n| n.label.as_str()), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&LabeledGraph::blank(1, &[]).unwrap()));
        assert!(!is_connected(&LabeledGraph::blank(2, &[]).unwrap()));
        assert!(is_connected(&LabeledGraph::blank(2, &[(0, 1)]).unwrap()));
        assert!(!is_connected(&LabeledGraph::blank(3, &[(0, 1), (1, 1)]).unwrap()));
    }

    #[test]
    fn undirectedness() {
        assert!(is_undirected(&LabeledGraph::blank(3, &[]).unwrap()));
        assert!(!is_undirected(&LabeledGraph::blank(2, &[(0, 1)]).unwrap()));
        let tri = LabeledGraph::blank(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        assert!(is_undirected(&tri));
    }

    #[test]
    fn colorings() {
        assert!(!is_valid_coloring(&LabeledGraph::blank(1, &[(0, 0)]).unwrap()));
        assert!(is_valid_coloring(&LabeledGraph::simple(abc(), &["a", "b"], &[(0, 1)]).unwrap()));
        let aba = LabeledGraph::simple(abc(), &["a", "b", "a"], &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        assert!(!is_valid_coloring(&aba));
    }

    #[test]
    fn json_round_trip() {
        let g = LabeledGraph::simple(abc(), &["a", "c", "b"], &[(0, 1), (2, 2)]).unwrap();
        let back = LabeledGraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_rejects_bad_endpoint() {
        let text = r#"{"sigma":["_"],"gamma":["_"],"nodes":[{"label":"_"}],"edges":{"_":[[0,1]]}}"#;
        assert_eq!(LabeledGraph::from_json_str(text), Err(GraphError::EndpointOutOfRange(0, 1, 1)));
    }
}

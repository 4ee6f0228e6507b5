//! Named example automata, graphs and sentences, each automaton paired with
//! an independent brute-force language oracle.

pub mod automata;
mod sentences;

use std::fmt;

use thiserror::Error;

pub use automata::*;
pub use sentences::{phi_3color, phi_centric, phi_minor_k3};

use crate::alphabet::Alphabet;
use crate::automaton::Automaton;
use crate::graph::{has_minor, is_connected, is_undirected, is_valid_coloring, mirror, LabeledGraph, NodeSubset};
use crate::mso::Formula;

/// Input class on which an automaton's language is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Restriction {
    None,
    Connected,
    Undirected,
}

impl Restriction {
    pub fn admits(self, g: &LabeledGraph) -> bool {
        match self {
            Restriction::None => true,
            Restriction::Connected => is_connected(g),
            Restriction::Undirected => is_undirected(g),
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Restriction::None => "none",
            Restriction::Connected => "connected",
            Restriction::Undirected => "undirected",
        })
    }
}

/// An example automaton with the predicate it must agree with.
#[derive(Clone, Copy)]
pub struct AutomatonFixture {
    pub name: &'static str,
    pub build: fn() -> Automaton,
    pub oracle: fn(&LabeledGraph) -> bool,
    pub restriction: Restriction,
    /// Largest node count of the exhaustive agreement sweep.
    pub universe: usize,
    pub description: &'static str,
}

impl fmt::Debug for AutomatonFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AutomatonFixture").field("name", &self.name).finish_non_exhaustive()
    }
}

pub const AUTOMATA: &[AutomatonFixture] = &[
    AutomatonFixture {
        name: "A_3color",
        build: a_3color,
        oracle: three_colorable,
        restriction: Restriction::None,
        universe: 4,
        description: "3-colorable graphs",
    },
    AutomatonFixture {
        name: "A_not3color",
        build: a_not3color,
        oracle: not_three_colorable,
        restriction: Restriction::None,
        universe: 3,
        description: "graphs that are not 3-colorable",
    },
    AutomatonFixture {
        name: "A_centric",
        build: a_centric,
        oracle: centric,
        restriction: Restriction::None,
        universe: 3,
        description: "valid 3-coloring with a unique a-node surrounded by b-nodes, at least two incoming",
    },
    AutomatonFixture {
        name: "A_conn",
        build: a_conn,
        oracle: is_connected,
        restriction: Restriction::None,
        universe: 3,
        description: "weakly connected graphs",
    },
    AutomatonFixture {
        name: "A_tree",
        build: a_tree,
        oracle: directed_tree,
        restriction: Restriction::Connected,
        universe: 3,
        description: "on connected inputs: directed trees, edges pointing away from the root",
    },
    AutomatonFixture {
        name: "A_undir",
        build: a_undir,
        oracle: is_undirected,
        restriction: Restriction::None,
        universe: 3,
        description: "undirected graphs",
    },
    AutomatonFixture {
        name: "A_minor_K3",
        build: a_minor_k3,
        oracle: has_k3_minor,
        restriction: Restriction::Undirected,
        universe: 3,
        description: "on undirected inputs: graphs with K3 as a minor",
    },
    AutomatonFixture {
        name: "A_max2",
        build: a_max2,
        oracle: at_most_two_nodes,
        restriction: Restriction::None,
        universe: 4,
        description: "graphs with at most two nodes",
    },
    AutomatonFixture {
        name: "A_min3",
        build: a_min3,
        oracle: at_least_three_nodes,
        restriction: Restriction::None,
        universe: 4,
        description: "graphs with at least three nodes",
    },
    AutomatonFixture {
        name: "A_occur",
        build: a_occur,
        oracle: all_labels_occur,
        restriction: Restriction::None,
        universe: 4,
        description: "{a,b,c}-labeled graphs in which every label occurs",
    },
];

/// Named graphs: `(name, builder, description)`.
pub const GRAPHS: &[(&str, fn() -> LabeledGraph, &str)] = &[
    ("K3", k3, "undirected triangle"),
    ("self_loop", self_loop, "single node with a self-loop"),
    ("centric_in", centric_in, "{a,b,c}-labeled graph in the centric language"),
    ("centric_out", centric_out, "square with two a-nodes, outside the centric language"),
    ("mirror_base", mirror_base, "{a,b,c}-labeled path before mirroring"),
    ("mirror_image", mirror_image, "mirror_base with its b- and c-nodes mirrored"),
];

/// Named sentences: `(name, builder, description)`.
pub const SENTENCES: &[(&str, fn() -> Formula, &str)] = &[
    ("phi_3color", phi_3color, "3-colorability"),
    ("phi_centric", phi_centric, "the centric language"),
    ("phi_minor_K3", phi_minor_k3, "K3 minor via disjoint connected witness sets"),
];

#[derive(Clone, Debug)]
pub enum Fixture {
    Automaton(Automaton),
    Graph(LabeledGraph),
    Sentence(Formula),
}

impl Fixture {
    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::Automaton(_) => "automaton",
            Fixture::Graph(_) => "graph",
            Fixture::Sentence(_) => "sentence",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown fixture {0:?}")]
pub struct UnknownFixture(pub String);

/// `(name, kind, description)` of every fixture in registry order.
pub fn list() -> Vec<(&'static str, &'static str, &'static str)> {
    let mut out: Vec<_> = AUTOMATA.iter().map(|f| (f.name, "automaton", f.description)).collect();
    out.extend(GRAPHS.iter().map(|&(n, _, d)| (n, "graph", d)));
    out.extend(SENTENCES.iter().map(|&(n, _, d)| (n, "sentence", d)));
    out
}

pub fn automaton_fixture(name: &str) -> Option<&'static AutomatonFixture> {
    AUTOMATA.iter().find(|f| f.name == name)
}

pub fn build(name: &str) -> Result<Fixture, UnknownFixture> {
    if let Some(f) = automaton_fixture(name) {
        return Ok(Fixture::Automaton((f.build)()));
    }
    if let Some(&(_, g, _)) = GRAPHS.iter().find(|e| e.0 == name) {
        return Ok(Fixture::Graph(g()));
    }
    if let Some(&(_, s, _)) = SENTENCES.iter().find(|e| e.0 == name) {
        return Ok(Fixture::Sentence(s()));
    }
    Err(UnknownFixture(name.to_string()))
}

pub fn build_automaton(name: &str) -> Result<Automaton, UnknownFixture> {
    automaton_fixture(name).map(|f| (f.build)()).ok_or_else(|| UnknownFixture(name.to_string()))
}

// Oracles

/// Exhaustive search over all `3^n` colorings.
pub fn three_colorable(g: &LabeledGraph) -> bool {
    let n = g.node_count();
    let edges: Vec<(usize, usize)> = g.edges().map(|(_, u, v)| (u, v)).collect();
    let mut color = vec![0u8; n];
    loop {
        if edges.iter().all(|&(u, v)| color[u] != color[v]) {
            return true;
        }
        let mut i = 0;
        while i < n && color[i] == 2 {
            color[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        color[i] += 1;
    }
}

pub fn not_three_colorable(g: &LabeledGraph) -> bool {
    !three_colorable(g)
}

pub fn centric(g: &LabeledGraph) -> bool {
    if !is_valid_coloring(g) {
        return false;
    }
    let a_nodes: Vec<usize> = g.nodes().filter(|&v| g.label_name(v) == "a").collect();
    let [va] = a_nodes[..] else {
        return false;
    };
    let around = g.in_mask(0, va) | g.out_mask(0, va);
    crate::graph::bits(around).all(|u| g.label_name(u) == "b") && g.in_mask(0, va).count_ones() >= 2
}

/// No self-loops, a unique node without parent, every other node with exactly one.
pub fn directed_tree(g: &LabeledGraph) -> bool {
    if g.nodes().any(|v| g.has_edge(0, v, v)) {
        return false;
    }
    let indeg: Vec<u32> = g.nodes().map(|v| g.in_mask(0, v).count_ones()).collect();
    indeg.iter().filter(|&&d| d == 0).count() == 1 && indeg.iter().all(|&d| d <= 1)
}

pub fn has_k3_minor(g: &LabeledGraph) -> bool {
    has_minor(g, &k3()).expect("undirected single-relation input")
}

pub fn at_most_two_nodes(g: &LabeledGraph) -> bool {
    g.node_count() <= 2
}

pub fn at_least_three_nodes(g: &LabeledGraph) -> bool {
    g.node_count() >= 3
}

pub fn all_labels_occur(g: &LabeledGraph) -> bool {
    ["a", "b", "c"].iter().all(|l| g.nodes().any(|v| g.label_name(v) == *l))
}

// Graphs

fn abc() -> Alphabet {
    Alphabet::new(["a", "b", "c"]).expect("valid alphabet")
}

pub fn k3() -> LabeledGraph {
    LabeledGraph::blank(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]).expect("valid graph")
}

pub fn self_loop() -> LabeledGraph {
    LabeledGraph::blank(1, &[(0, 0)]).expect("valid graph")
}

/// `a`-node 0 fed by the `b`-nodes 1 and 3, which sit on a directed `b c b c` cycle.
pub fn centric_in() -> LabeledGraph {
    LabeledGraph::simple(abc(), &["a", "b", "c", "b", "c"], &[(1, 0), (3, 0), (1, 2), (2, 3), (3, 4), (4, 1)])
        .expect("valid graph")
}

/// Two `a`-nodes, each fed by both `b`-nodes.
pub fn centric_out() -> LabeledGraph {
    LabeledGraph::simple(abc(), &["a", "b", "a", "b"], &[(1, 0), (1, 2), (3, 0), (3, 2)]).expect("valid graph")
}

pub fn mirror_base() -> LabeledGraph {
    LabeledGraph::simple(abc(), &["a", "b", "c"], &[(0, 1), (1, 2), (2, 1)]).expect("valid graph")
}

pub fn mirror_image() -> LabeledGraph {
    mirror(&mirror_base(), &NodeSubset::new([1, 2])).expect("subset in range").graph
}

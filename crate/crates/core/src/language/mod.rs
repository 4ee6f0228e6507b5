//! Language-level tools for automata without universal states: local views,
//! the imitation run on mirrored graphs, node merging along a run, bounded
//! emptiness and bounded language comparison.

use num_bigint::BigUint;
use serde_json::{json, Value};
use thiserror::Error;

use crate::automaton::{classify, Automaton, AutomatonError, Configuration, GraphBinding, StateId, StateSet, Variant};
use crate::game::{Acceptor, GameError};
use crate::graph::{enumerate_graphs, is_undirected, merge_asym, merge_sym, mirror, GraphError, LabeledGraph, Mirroring, NodeSubset};

/// Search bound of [`ndga_emptiness`] when none is given.
pub const DEFAULT_EMPTINESS_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum LanguageError {
    #[error("construction needs an automaton without universal states")]
    UniversalStates,
    #[error("emptiness is undecidable for automata with universal states; only the bounded search of the dual problem is available")]
    Undecidable,
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("run is illegal at step {step}: {reason}")]
    IllegalRun { step: usize, reason: String },
    #[error("run does not end in an accepting configuration")]
    NotAccepting,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `R|_v`: own state and incoming-neighbor states per relation, per position of the run.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalView(pub Vec<(StateId, Vec<StateSet>)>);

impl LocalView {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.iter().map(|(q, _)| *q)
    }
}

pub fn local_view(a: &Automaton, g: &LabeledGraph, run: &[Configuration], v: usize) -> Result<LocalView, LanguageError> {
    if v >= g.node_count() {
        return Err(LanguageError::NodeOutOfRange(v));
    }
    let b = bind_run(a, g, run)?;
    Ok(view(a, &b, run, v))
}

fn view(a: &Automaton, b: &GraphBinding, run: &[Configuration], v: usize) -> LocalView {
    LocalView(run.iter().map(|c| (c.state(v), a.neighbor_family(b, c, v))).collect())
}

fn bind_run(a: &Automaton, g: &LabeledGraph, run: &[Configuration]) -> Result<GraphBinding, LanguageError> {
    let b = a.bind(g)?;
    if let Some(step) = run.iter().position(|c| c.len() != g.node_count()) {
        return Err(LanguageError::IllegalRun { step, reason: format!("configuration has {} states", run[step].len()) });
    }
    Ok(b)
}

/// Checks that `run` starts in the initial configuration, that every step is
/// a global successor, and that it stops at its first permanent configuration.
pub fn check_run(a: &Automaton, g: &LabeledGraph, run: &[Configuration]) -> Result<(), LanguageError> {
    let b = bind_run(a, g, run)?;
    let Some(first) = run.first() else {
        return Err(LanguageError::IllegalRun { step: 0, reason: "run is empty".into() });
    };
    if *first != a.initial_configuration_bound(&b) {
        return Err(LanguageError::IllegalRun { step: 0, reason: "not the initial configuration".into() });
    }
    for (i, pair) in run.windows(2).enumerate() {
        let (c, next) = (&pair[0], &pair[1]);
        if a.configuration_kind(c).is_permanent() {
            return Err(LanguageError::IllegalRun { step: i + 1, reason: "continues after a permanent configuration".into() });
        }
        let table = a.local_successor_table(&b, c);
        if let Some(v) = (0..next.len()).find(|&v| !table[v].contains(next.state(v))) {
            return Err(LanguageError::IllegalRun {
                step: i + 1,
                reason: format!("node {v} cannot move from {} to {}", a.name(c.state(v)), a.name(next.state(v))),
            });
        }
    }
    Ok(())
}

/// [`check_run`] and acceptance of the last configuration.
pub fn check_accepting_run(a: &Automaton, g: &LabeledGraph, run: &[Configuration]) -> Result<(), LanguageError> {
    check_run(a, g, run)?;
    let last = run.last().expect("checked runs are nonempty");
    if a.is_accepting_configuration(last) {
        Ok(())
    } else {
        Err(LanguageError::NotAccepting)
    }
}

/// Outcome of mirroring a node set in an input graph.
#[derive(Clone, Debug)]
pub struct MirroringEvidence {
    pub mirroring: Mirroring,
    /// Accepting run on the original graph, if any.
    pub original_run: Option<Vec<Configuration>>,
    /// Imitation run on the mirrored graph: originals keep their states and
    /// every copy repeats its original. Present iff `original_run` is.
    pub run: Option<Vec<Configuration>>,
}

/// Mirrors `u` in `g` and, if `a` accepts `g`, builds the imitation run on
/// the mirrored graph and checks that it is a legal accepting run.
pub fn check_mirroring(a: &Automaton, g: &LabeledGraph, u: &NodeSubset) -> Result<MirroringEvidence, LanguageError> {
    if a.has_universal() {
        return Err(LanguageError::UniversalStates);
    }
    let mirroring = mirror(g, u)?;
    let original_run = Acceptor::new(a).accepting_path(g)?;
    let run = match &original_run {
        None => None,
        Some(path) => {
            let run: Vec<Configuration> = path
                .iter()
                .map(|c| {
                    let mut states = c.states().to_vec();
                    states.extend(mirroring.copies.iter().map(|&(v, _)| c.state(v)));
                    Configuration(states)
                })
                .collect();
            check_accepting_run(a, &mirroring.graph, &run)?;
            Some(run)
        }
    };
    Ok(MirroringEvidence { mirroring, original_run, run })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MergeMode {
    /// Nodes with equal state sequences; `w` inherits the outgoing edges of `w2`.
    Asymmetric,
    /// Nodes with equal local views; `w` inherits all edges of `w2`.
    Symmetric,
}

/// A merged graph and the run replayed on it.
#[derive(Clone, Debug)]
pub struct MergeEvidence {
    pub w: usize,
    pub w2: usize,
    pub graph: LabeledGraph,
    pub run: Vec<Configuration>,
}

/// First pair `w < w2` that `mode` allows to merge along the accepting
/// `run`, with the merged graph and the run with `w2` removed, which is
/// checked to be legal and accepting.
pub fn find_merge_pair(
    a: &Automaton,
    g: &LabeledGraph,
    run: &[Configuration],
    mode: MergeMode,
) -> Result<Option<MergeEvidence>, LanguageError> {
    if a.has_universal() {
        return Err(LanguageError::UniversalStates);
    }
    check_accepting_run(a, g, run)?;
    let b = a.bind(g)?;
    let views: Vec<LocalView> = g.nodes().map(|v| view(a, &b, run, v)).collect();
    let same = |x: usize, y: usize| match mode {
        MergeMode::Asymmetric => views[x].states().eq(views[y].states()),
        MergeMode::Symmetric => views[x] == views[y],
    };
    let n = g.node_count();
    let Some((w, w2)) = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).find(|&(x, y)| same(x, y)) else {
        return Ok(None);
    };
    let graph = match mode {
        MergeMode::Asymmetric => merge_asym(g, w, w2)?,
        MergeMode::Symmetric => merge_sym(g, w, w2)?,
    };
    let merged: Vec<Configuration> = run
        .iter()
        .map(|c| Configuration(c.states().iter().enumerate().filter(|&(v, _)| v != w2).map(|(_, &q)| q).collect()))
        .collect();
    check_accepting_run(a, &graph, &merged)?;
    Ok(Some(MergeEvidence { w, w2, graph, run: merged }))
}

#[derive(Clone, Debug)]
pub enum EmptinessStatus {
    NonEmpty { witness: LabeledGraph, run: Vec<Configuration> },
    /// No accepted graph with at most this many nodes.
    EmptyUpTo(usize),
    /// The search covered the theoretical bound.
    EmptyProven,
}

#[derive(Clone, Debug)]
pub struct EmptinessVerdict {
    pub status: EmptinessStatus,
    /// Largest node count searched.
    pub bound_used: usize,
    /// Node count beyond which a nonempty language always has a smaller member.
    pub theoretical_bound: BigUint,
    pub undirected: bool,
}

impl EmptinessVerdict {
    pub fn is_empty_so_far(&self) -> bool {
        !matches!(self.status, EmptinessStatus::NonEmpty { .. })
    }

    pub fn to_json(&self, a: &Automaton) -> Value {
        let bound = match u64::try_from(&self.theoretical_bound) {
            Ok(x) => json!(x),
            Err(_) => json!(self.theoretical_bound.to_string()),
        };
        let mut out = json!({
            "bound_used": self.bound_used,
            "theoretical_bound": bound,
            "undirected": self.undirected,
        });
        match &self.status {
            EmptinessStatus::NonEmpty { witness, run } => {
                out["status"] = json!("nonempty");
                out["witness"] = witness.to_json();
                out["run"] = run_to_json(a, run);
            }
            EmptinessStatus::EmptyUpTo(n) => {
                out["status"] = json!("empty-up-to");
                out["nodes"] = json!(n);
            }
            EmptinessStatus::EmptyProven => out["status"] = json!("empty-proven"),
        }
        out
    }
}

/// Configurations as lists of state names.
pub fn run_to_json(a: &Automaton, run: &[Configuration]) -> Value {
    Value::Array(run.iter().map(|c| json!(c.states().iter().map(|&q| a.name(q)).collect::<Vec<_>>())).collect())
}

/// `|Q|^(len+1)`, or `(|Q|·2^(|Γ|·|Q|))^(len+1)` for undirected graphs.
pub fn theoretical_bound(a: &Automaton, undirected: bool) -> BigUint {
    let s = BigUint::from(a.siz());
    let base = if undirected { s << (a.gamma().len() * a.siz()) } else { s };
    base.pow(a.len() as u32 + 1)
}

/// Searches graphs by ascending node count up to `min(cap, bound)`;
/// the first accepted graph is the witness.
pub fn ndga_emptiness(a: &Automaton, cap: usize, undirected: bool) -> Result<EmptinessVerdict, LanguageError> {
    if classify(a) == Variant::Adga {
        return Err(LanguageError::Undecidable);
    }
    let theoretical_bound = theoretical_bound(a, undirected);
    let bound_used = match usize::try_from(&theoretical_bound) {
        Ok(t) => cap.min(t),
        Err(_) => cap,
    };
    let acceptor = Acceptor::new(a);
    for g in enumerate_graphs(bound_used, a.sigma(), a.gamma()) {
        if undirected && !is_undirected(&g) {
            continue;
        }
        if let Some(run) = acceptor.accepting_path(&g)? {
            return Ok(EmptinessVerdict {
                status: EmptinessStatus::NonEmpty { witness: g, run },
                bound_used,
                theoretical_bound,
                undirected,
            });
        }
    }
    let status = if BigUint::from(bound_used) >= theoretical_bound {
        EmptinessStatus::EmptyProven
    } else {
        EmptinessStatus::EmptyUpTo(bound_used)
    };
    Ok(EmptinessVerdict { status, bound_used, theoretical_bound, undirected })
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub graph: LabeledGraph,
    pub accepted_by_first: bool,
}

#[derive(Clone, Debug)]
pub struct LanguageComparison {
    pub equal: bool,
    pub counterexample: Option<Counterexample>,
    pub graphs_checked: usize,
}

/// Compares acceptance on every graph with at most `n_max` nodes, stopping
/// at the first disagreement.
pub fn bounded_language_equal(a1: &Automaton, a2: &Automaton, n_max: usize) -> Result<LanguageComparison, LanguageError> {
    if a1.sigma() != a2.sigma() || a1.gamma() != a2.gamma() {
        return Err(LanguageError::AlphabetMismatch);
    }
    let (x1, x2) = (Acceptor::new(a1), Acceptor::new(a2));
    let mut graphs_checked = 0;
    for g in enumerate_graphs(n_max, a1.sigma(), a1.gamma()) {
        graphs_checked += 1;
        let r1 = x1.accepts(&g)?;
        if r1 != x2.accepts(&g)? {
            let counterexample = Some(Counterexample { graph: g, accepted_by_first: r1 });
            return Ok(LanguageComparison { equal: false, counterexample, graphs_checked });
        }
    }
    Ok(LanguageComparison { equal: true, counterexample: None, graphs_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn isolated_node_sees_nothing() {
        let a = fixtures::a_3color();
        let g = LabeledGraph::blank(2, &[]).unwrap();
        let run = Acceptor::new(&a).accepting_path(&g).unwrap().unwrap();
        let view = local_view(&a, &g, &run, 1).unwrap();
        assert_eq!(view.len(), run.len());
        assert!(view.0.iter().all(|(_, fam)| fam.iter().all(StateSet::is_empty)));
        assert!(matches!(local_view(&a, &g, &run, 2), Err(LanguageError::NodeOutOfRange(2))));
    }

    #[test]
    fn empty_mirroring_keeps_the_run() {
        let a = fixtures::a_min3();
        let g = LabeledGraph::blank(3, &[]).unwrap();
        let e = check_mirroring(&a, &g, &NodeSubset::empty()).unwrap();
        assert_eq!(e.run, e.original_run);
        assert!(e.run.is_some());
    }

    #[test]
    fn single_node_has_no_merge_pair() {
        let a = fixtures::a_3color();
        let g = LabeledGraph::blank(1, &[]).unwrap();
        let run = Acceptor::new(&a).accepting_path(&g).unwrap().unwrap();
        for mode in [MergeMode::Asymmetric, MergeMode::Symmetric] {
            assert!(find_merge_pair(&a, &g, &run, mode).unwrap().is_none());
        }
    }

    #[test]
    fn bounds_match_hand_computation() {
        let a = fixtures::a_min3();
        assert_eq!((a.siz(), a.len()), (4, 1));
        assert_eq!(theoretical_bound(&a, false), BigUint::from(16u32));
        assert_eq!(theoretical_bound(&a, true), BigUint::from(64u32 * 64));
    }

    #[test]
    fn universal_states_are_rejected() {
        let a = fixtures::a_max2();
        assert!(matches!(ndga_emptiness(&a, 2, false), Err(LanguageError::Undecidable)));
        let g = LabeledGraph::blank(1, &[]).unwrap();
        assert!(matches!(check_mirroring(&a, &g, &NodeSubset::empty()), Err(LanguageError::UniversalStates)));
    }

    #[test]
    fn illegal_runs_are_reported() {
        let a = fixtures::a_min3();
        let g = LabeledGraph::blank(3, &[]).unwrap();
        let mut run = Acceptor::new(&a).accepting_path(&g).unwrap().unwrap();
        check_accepting_run(&a, &g, &run).unwrap();
        let last = run.last().unwrap().clone();
        run[1] = Configuration(vec![last.state(0); 3]);
        assert!(check_accepting_run(&a, &g, &run).is_err());
    }
}

//! Normal forms and closure constructions.
//!
//! Every construction returns the new automaton together with a
//! [`TransformReport`] recording sizes before and after, so the size and
//! length guarantees of each construction can be asserted by callers.

mod closure;
mod normal;
mod product;

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::automaton::{
    Acceptance, Automaton, AutomatonError, AutomatonParts, ExpansionCapExceeded, Rule, State, StateId, StateKind,
};
use crate::game::GameError;
use crate::graph::{enumerate_graphs, LabeledGraph};

pub use closure::{extend_alphabet, intersection, project, union};
pub use normal::{align_levels, dual, make_nonblocking, to_anf, trim};
pub use product::{complement_ddga, product, ProductMode, CARD_EXPANSION_CAP};

/// Graph size up to which [`is_nonblocking`] explores when guard analysis is inconclusive.
pub const DEFAULT_NONBLOCKING_UNIVERSE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("construction needs an automaton without universal states")]
    UniversalStates,
    #[error("construction needs a deterministic nonblocking automaton, got {0:?}")]
    NotDeterministic(crate::automaton::Variant),
    #[error("label `{0}` has no image")]
    Unmapped(String),
    #[error("label `{0}` is not in the target alphabet")]
    UnknownTarget(String),
    #[error("cardinality guard over {states} states exceeds the expansion cap of {cap}")]
    CardExpansion { states: usize, cap: usize },
    #[error(transparent)]
    Expansion(#[from] ExpansionCapExceeded),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Sizes around one construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub construction: String,
    pub input_siz: Vec<usize>,
    pub input_len: Vec<usize>,
    /// Sizes after internal normalization, equal to the inputs when none applies.
    pub normalized_siz: Vec<usize>,
    pub normalized_len: Vec<usize>,
    pub output_siz: usize,
    pub output_len: usize,
    /// Fresh state name to its role.
    pub fresh_states: BTreeMap<String, String>,
    /// Nested reports of internal normalization steps.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<TransformReport>,
}

impl TransformReport {
    fn new(construction: &str, inputs: &[&Automaton], normalized: &[&Automaton], out: &Automaton) -> Self {
        TransformReport {
            construction: construction.into(),
            input_siz: inputs.iter().map(|a| a.siz()).collect(),
            input_len: inputs.iter().map(|a| a.len()).collect(),
            normalized_siz: normalized.iter().map(|a| a.siz()).collect(),
            normalized_len: normalized.iter().map(|a| a.len()).collect(),
            output_siz: out.siz(),
            output_len: out.len(),
            fresh_states: BTreeMap::new(),
            steps: Vec::new(),
        }
    }
}

/// Evidence that no reachable configuration lacks a successor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum NonblockingCertificate {
    /// Every nonpermanent state has a matching rule for every level-consistent family.
    SyntacticallyComplete,
    /// No blocked configuration is reachable on any graph with at most `nodes` nodes.
    VerifiedUpTo { nodes: usize },
    /// The exploration exceeded the position cap on some graph of at most `nodes` nodes.
    UnverifiedBeyondCap { nodes: usize },
    Blocking { graph: serde_json::Value, configuration: Vec<String> },
    NotChecked,
}

impl NonblockingCertificate {
    /// Complete, or verified on the explored universe.
    pub fn holds(&self) -> bool {
        matches!(self, NonblockingCertificate::SyntacticallyComplete | NonblockingCertificate::VerifiedUpTo { .. })
    }
}

/// Syntactic completeness when guard analysis settles it, otherwise an
/// exhaustive search of reachable configurations on graphs up to `universe_cap` nodes.
pub fn is_nonblocking(a: &Automaton, universe_cap: usize) -> NonblockingCertificate {
    if a.completeness() == crate::automaton::Completeness::Complete {
        return NonblockingCertificate::SyntacticallyComplete;
    }
    let cap = crate::game::position_cap();
    for g in enumerate_graphs(universe_cap, a.sigma(), a.gamma()) {
        match blocked_configuration(a, &g, cap) {
            Ok(None) => {}
            Ok(Some(c)) => {
                return NonblockingCertificate::Blocking {
                    graph: g.to_json(),
                    configuration: c.states().iter().map(|&q| a.name(q).to_string()).collect(),
                }
            }
            Err(_) => return NonblockingCertificate::UnverifiedBeyondCap { nodes: universe_cap },
        }
    }
    NonblockingCertificate::VerifiedUpTo { nodes: universe_cap }
}

/// First reachable nonpermanent configuration without successors.
pub fn blocked_configuration(
    a: &Automaton,
    g: &LabeledGraph,
    cap: usize,
) -> Result<Option<crate::automaton::Configuration>, GameError> {
    let b = a.bind(g)?;
    let start = a.initial_configuration_bound(&b);
    let mut seen = rustc_hash::FxHashSet::default();
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        if a.configuration_kind(&c).is_permanent() || !seen.insert(c.clone()) {
            continue;
        }
        if seen.len() > cap {
            return Err(GameError::PositionCap { cap });
        }
        let succ = a.global_successors(&b, &c);
        if succ.is_empty() {
            return Ok(Some(c));
        }
        stack.extend(succ);
    }
    Ok(None)
}

/// Mutable automaton under construction with collision-free naming.
#[derive(Clone, Debug)]
struct Draft {
    sigma: Alphabet,
    gamma: Alphabet,
    states: Vec<State>,
    rules: Vec<Rule>,
    init: Vec<StateId>,
    taken: HashSet<String>,
    fresh: BTreeMap<String, String>,
}

impl Draft {
    fn new(sigma: Alphabet, gamma: Alphabet) -> Self {
        Draft {
            sigma,
            gamma,
            states: Vec::new(),
            rules: Vec::new(),
            init: Vec::new(),
            taken: HashSet::new(),
            fresh: BTreeMap::new(),
        }
    }

    /// Copy of `a` with the same ids.
    fn from_automaton(a: &Automaton) -> Self {
        let p = a.parts().clone();
        Draft {
            taken: p.states.iter().map(|s| s.name.clone()).collect(),
            sigma: p.sigma,
            gamma: p.gamma,
            states: p.states,
            rules: p.rules,
            init: p.init,
            fresh: BTreeMap::new(),
        }
    }

    fn unique(&self, base: &str) -> String {
        if !self.taken.contains(base) {
            return base.to_string();
        }
        (2..).map(|i| format!("{base}#{i}")).find(|n| !self.taken.contains(n)).expect("unbounded suffixes")
    }

    /// Adds a state, suffixing its name on collision.
    fn add(&mut self, name: &str, kind: StateKind) -> StateId {
        let name = self.unique(name);
        self.taken.insert(name.clone());
        self.states.push(State { name, kind });
        (self.states.len() - 1) as StateId
    }

    /// Adds a construction-specific state and records its role.
    fn add_fresh(&mut self, name: &str, kind: StateKind, role: &str) -> StateId {
        let q = self.add(name, kind);
        self.fresh.insert(self.states[q as usize].name.clone(), role.to_string());
        q
    }

    /// Appends all states of `a`; returns the id offset.
    fn absorb(&mut self, a: &Automaton) -> StateId {
        let offset = self.states.len() as StateId;
        for s in a.states() {
            self.add(&s.name, s.kind);
        }
        for r in a.rules() {
            self.rules.push(Rule {
                source: r.source + offset,
                guard: r.guard.remap(|q| Some(q + offset)),
                successors: r.successors.iter().map(|q| q + offset).collect(),
            });
        }
        offset
    }

    fn finish(self, accepting: Acceptance) -> Result<(Automaton, BTreeMap<String, String>), TransformError> {
        let a = Automaton::new(AutomatonParts {
            sigma: self.sigma,
            gamma: self.gamma,
            states: self.states,
            init: self.init,
            rules: self.rules,
            accepting,
        })?;
        Ok((a, self.fresh))
    }
}

fn same_alphabets(a1: &Automaton, a2: &Automaton) -> Result<(), TransformError> {
    if a1.sigma() == a2.sigma() && a1.gamma() == a2.gamma() {
        Ok(())
    } else {
        Err(TransformError::AlphabetMismatch)
    }
}

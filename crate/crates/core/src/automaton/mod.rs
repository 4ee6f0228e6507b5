//! Alternating distributed graph automata.
//!
//! States are existential, universal or permanent. Transitions are guarded
//! rules: `δ(q, S)` is the union of the successor sets of all rules of `q`
//! whose guard holds on `S`, and permanent states only loop on themselves.
//! Levels are derived from the rules by [`Automaton::new`].

mod acceptance;
mod analysis;
mod guard;
mod json;
mod semantics;
mod types;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::alphabet::Alphabet;

pub use acceptance::{Acceptance, ExpansionCapExceeded, Outlook};
pub use analysis::{
    classify, classify_detailed, Classification, Completeness, Determinism, GuardDomain, Sat, Variant,
    SAT_ENUMERATION_CAP,
};
pub use guard::{Guard, GuardParseError};
pub use json::{AcceptanceExpr, AutomatonFile, RuleEntry, StateEntry};
pub use semantics::{Configuration, GraphBinding};
pub use types::{is_valid_name, Cmp, StateId, StateKind, StateSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub name: String,
    pub kind: StateKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub source: StateId,
    pub guard: Guard,
    pub successors: StateSet,
}

/// Unvalidated components of an automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonParts {
    pub sigma: Alphabet,
    pub gamma: Alphabet,
    pub states: Vec<State>,
    /// Initial state per node-alphabet index.
    pub init: Vec<StateId>,
    pub rules: Vec<Rule>,
    pub accepting: Acceptance,
}

/// A validated automaton with derived levels.
#[derive(Clone, PartialEq, Eq)]
pub struct Automaton {
    parts: AutomatonParts,
    levels: Vec<usize>,
    len: usize,
    rules_by_source: Vec<Vec<u32>>,
    by_name: HashMap<String, StateId>,
}

/// One violated well-formedness clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum Diagnostic {
    NoPermanentStates,
    InvalidStateName { name: String },
    DuplicateStateName { name: String },
    UnknownStateName { name: String, context: String },
    UnknownState { index: StateId, context: String },
    UnknownSymbol { symbol: String, context: String },
    InitIncomplete { label: String },
    InitNotLevelZero { label: String, state: String, level: usize },
    RuleFromPermanent { rule: usize, state: String },
    EmptySuccessors { rule: usize },
    LevelConflict { state: String, first: usize, second: usize },
    UnleveledState { state: String },
    MixedLevelKinds { level: usize },
    AcceptingNotPermanent { state: String },
    GuardSyntax { rule: usize, message: String },
}

impl Diagnostic {
    pub fn code(&self) -> &'static str {
        match self {
            Diagnostic::NoPermanentStates => "no-permanent-states",
            Diagnostic::InvalidStateName { .. } => "invalid-state-name",
            Diagnostic::DuplicateStateName { .. } => "duplicate-state-name",
            Diagnostic::UnknownStateName { .. } => "unknown-state-name",
            Diagnostic::UnknownState { .. } => "unknown-state",
            Diagnostic::UnknownSymbol { .. } => "unknown-symbol",
            Diagnostic::InitIncomplete { .. } => "init-incomplete",
            Diagnostic::InitNotLevelZero { .. } => "init-not-level-zero",
            Diagnostic::RuleFromPermanent { .. } => "rule-from-permanent",
            Diagnostic::EmptySuccessors { .. } => "empty-successors",
            Diagnostic::LevelConflict { .. } => "level-conflict",
            Diagnostic::UnleveledState { .. } => "unleveled-state",
            Diagnostic::MixedLevelKinds { .. } => "mixed-level-kinds",
            Diagnostic::AcceptingNotPermanent { .. } => "accepting-not-permanent",
            Diagnostic::GuardSyntax { .. } => "guard-syntax",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let detail = serde_json::to_string(self).unwrap_or_default();
        write!(f, "{}: {detail}", self.code())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("invalid automaton: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("invalid automaton file: {0}")]
    Format(String),
    #[error("graph label `{0}` is not in the automaton's node alphabet")]
    LabelOutsideSigma(String),
    #[error("graph edge symbol `{0}` is not in the automaton's edge alphabet")]
    EdgeSymbolOutsideGamma(String),
}

impl AutomatonError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            AutomatonError::Invalid(d) => d,
            _ => &[],
        }
    }
}

impl Automaton {
    /// Validates `parts`, deriving levels; reports every violated clause.
    pub fn new(parts: AutomatonParts) -> Result<Automaton, AutomatonError> {
        let (levels, len, diagnostics) = validate_parts(&parts);
        if !diagnostics.is_empty() {
            return Err(AutomatonError::Invalid(diagnostics));
        }
        let mut rules_by_source = vec![Vec::new(); parts.states.len()];
        for (i, r) in parts.rules.iter().enumerate() {
            rules_by_source[r.source as usize].push(i as u32);
        }
        let by_name = parts.states.iter().enumerate().map(|(i, s)| (s.name.clone(), i as StateId)).collect();
        Ok(Automaton { parts, levels, len, rules_by_source, by_name })
    }

    pub fn parts(&self) -> &AutomatonParts {
        &self.parts
    }

    pub fn into_parts(self) -> AutomatonParts {
        self.parts
    }

    pub fn sigma(&self) -> &Alphabet {
        &self.parts.sigma
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.parts.gamma
    }

    /// Number of states.
    pub fn siz(&self) -> usize {
        self.parts.states.len()
    }

    /// Number of nonpermanent levels; permanent states sit on level `len`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Whether there are no nonpermanent states.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn states(&self) -> &[State] {
        &self.parts.states
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        0..self.siz() as StateId
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.parts.states[q as usize].name
    }

    pub fn kind(&self, q: StateId) -> StateKind {
        self.parts.states[q as usize].kind
    }

    pub fn is_permanent(&self, q: StateId) -> bool {
        self.kind(q).is_permanent()
    }

    pub fn level(&self, q: StateId) -> usize {
        self.levels[q as usize]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.by_name.get(name).copied()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.parts.rules
    }

    pub fn rules_of(&self, q: StateId) -> impl Iterator<Item = &Rule> {
        self.rules_by_source[q as usize].iter().map(|&i| &self.parts.rules[i as usize])
    }

    pub fn init(&self, label: usize) -> StateId {
        self.parts.init[label]
    }

    pub fn init_by_name(&self, label: &str) -> Option<StateId> {
        self.sigma().index_of(label).map(|a| self.init(a))
    }

    pub fn accepting(&self) -> &Acceptance {
        &self.parts.accepting
    }

    pub fn level_states(&self, i: usize) -> StateSet {
        self.state_ids().filter(|&q| self.level(q) == i && (i == self.len || !self.is_permanent(q))).collect()
    }

    pub fn permanent_states(&self) -> StateSet {
        self.state_ids().filter(|&q| self.is_permanent(q)).collect()
    }

    pub fn nonpermanent_states(&self) -> StateSet {
        self.state_ids().filter(|&q| !self.is_permanent(q)).collect()
    }

    /// Kind shared by the states on nonpermanent level `i`.
    pub fn level_kind(&self, i: usize) -> Option<StateKind> {
        if i >= self.len {
            return (i == self.len).then_some(StateKind::Permanent);
        }
        self.state_ids().find(|&q| self.level(q) == i && !self.is_permanent(q)).map(|q| self.kind(q))
    }

    /// Kinds of levels `0..len`.
    pub fn quantifier_sequence(&self) -> Vec<StateKind> {
        (0..self.len).map(|i| self.level_kind(i).expect("every level below len is inhabited")).collect()
    }

    pub fn has_universal(&self) -> bool {
        self.parts.states.iter().any(|s| s.kind == StateKind::Universal)
    }

    pub fn has_existential(&self) -> bool {
        self.parts.states.iter().any(|s| s.kind == StateKind::Existential)
    }

    /// Adjacent nonpermanent levels differ in kind.
    pub fn is_anf(&self) -> bool {
        self.quantifier_sequence().windows(2).all(|w| w[0] != w[1])
    }

    pub fn render_guard(&self, g: &Guard) -> String {
        g.render(&|q| self.name(q).to_string(), self.gamma())
    }

    pub fn parse_guard(&self, text: &str) -> Result<Guard, GuardParseError> {
        Guard::parse(text, &|n| self.state_id(n), self.gamma())
    }

    /// Same automaton with another accepting family.
    pub fn with_accepting(&self, accepting: Acceptance) -> Result<Automaton, AutomatonError> {
        let mut parts = self.parts.clone();
        parts.accepting = accepting;
        Automaton::new(parts)
    }
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

fn validate_parts(p: &AutomatonParts) -> (Vec<usize>, usize, Vec<Diagnostic>) {
    let mut d = Vec::new();
    let n = p.states.len();
    let name = |q: StateId| p.states.get(q as usize).map_or_else(|| format!("#{q}"), |s| s.name.clone());
    let in_range = |q: StateId| (q as usize) < n;

    let mut seen = HashMap::new();
    for s in &p.states {
        if !is_valid_name(&s.name) {
            d.push(Diagnostic::InvalidStateName { name: s.name.clone() });
        }
        if seen.insert(s.name.as_str(), ()).is_some() {
            d.push(Diagnostic::DuplicateStateName { name: s.name.clone() });
        }
    }
    for g in p.gamma.iter() {
        if !is_valid_name(g) {
            d.push(Diagnostic::UnknownSymbol { symbol: g.to_string(), context: "edge symbol is not a valid name".into() });
        }
    }
    if !p.states.iter().any(|s| s.kind.is_permanent()) {
        d.push(Diagnostic::NoPermanentStates);
    }
    let permanent = |q: StateId| in_range(q) && p.states[q as usize].kind.is_permanent();

    if p.init.len() != p.sigma.len() {
        for a in p.sigma.iter().skip(p.init.len()) {
            d.push(Diagnostic::InitIncomplete { label: a.to_string() });
        }
    }
    for (a, &q) in p.init.iter().enumerate() {
        if !in_range(q) {
            d.push(Diagnostic::UnknownState { index: q, context: format!("init of label {a}") });
        }
    }

    for (i, r) in p.rules.iter().enumerate() {
        if !in_range(r.source) {
            d.push(Diagnostic::UnknownState { index: r.source, context: format!("source of rule {i}") });
        } else if permanent(r.source) {
            d.push(Diagnostic::RuleFromPermanent { rule: i, state: name(r.source) });
        }
        if r.successors.is_empty() {
            d.push(Diagnostic::EmptySuccessors { rule: i });
        }
        for q in r.successors.iter().filter(|&q| !in_range(q)) {
            d.push(Diagnostic::UnknownState { index: q, context: format!("successor in rule {i}") });
        }
        let mut bad = Vec::new();
        r.guard.for_each_state(&mut |q| {
            if !in_range(q) {
                bad.push(q)
            }
        });
        for q in bad {
            d.push(Diagnostic::UnknownState { index: q, context: format!("guard of rule {i}") });
        }
        if r.guard.max_gamma().is_some_and(|g| g >= p.gamma.len()) {
            d.push(Diagnostic::UnknownSymbol { symbol: "?".into(), context: format!("guard of rule {i}") });
        }
    }

    let mut bad_accepting = Vec::new();
    p.accepting.for_each_state(&mut |q| {
        if !permanent(q) {
            bad_accepting.push(q)
        }
    });
    bad_accepting.sort_unstable();
    bad_accepting.dedup();
    for q in bad_accepting {
        if in_range(q) {
            d.push(Diagnostic::AcceptingNotPermanent { state: name(q) });
        } else {
            d.push(Diagnostic::UnknownState { index: q, context: "accepting family".into() });
        }
    }
    if !d.is_empty() {
        return (Vec::new(), 0, d);
    }

    // Levels: nonpermanent states without incoming rules start at 0 and
    // every successor of a level-i state sits on level i+1.
    let mut has_incoming = vec![false; n];
    for r in &p.rules {
        for q in r.successors.iter() {
            has_incoming[q as usize] = true;
        }
    }
    let mut level: Vec<Option<usize>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for q in 0..n {
        if !p.states[q].kind.is_permanent() && !has_incoming[q] {
            level[q] = Some(0);
            queue.push_back(q);
        }
    }
    let mut by_source = vec![Vec::new(); n];
    for r in &p.rules {
        by_source[r.source as usize].push(r);
    }
    let mut conflicted = vec![false; n];
    while let Some(q) = queue.pop_front() {
        let l = level[q].expect("queued states have levels");
        for r in &by_source[q] {
            for s in r.successors.iter().map(|s| s as usize) {
                if p.states[s].kind.is_permanent() {
                    continue;
                }
                match level[s] {
                    None => {
                        level[s] = Some(l + 1);
                        queue.push_back(s);
                    }
                    Some(ls) if ls != l + 1 && !conflicted[s] => {
                        conflicted[s] = true;
                        d.push(Diagnostic::LevelConflict { state: name(s as StateId), first: ls, second: l + 1 });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    for q in 0..n {
        if !p.states[q].kind.is_permanent() && level[q].is_none() {
            d.push(Diagnostic::UnleveledState { state: name(q as StateId) });
        }
    }
    let len = (0..n)
        .filter(|&q| !p.states[q].kind.is_permanent())
        .filter_map(|q| level[q])
        .max()
        .map_or(0, |m| m + 1);
    let levels: Vec<usize> =
        (0..n).map(|q| if p.states[q].kind.is_permanent() { len } else { level[q].unwrap_or(0) }).collect();

    for (a, &q) in p.init.iter().enumerate() {
        if !permanent(q) && levels[q as usize] != 0 {
            d.push(Diagnostic::InitNotLevelZero {
                label: p.sigma.symbol(a).to_string(),
                state: name(q),
                level: levels[q as usize],
            });
        }
    }
    for i in 0..len {
        let mut kinds = (0..n).filter(|&q| !p.states[q].kind.is_permanent() && levels[q] == i).map(|q| p.states[q].kind);
        if let Some(first) = kinds.next() {
            if kinds.any(|k| k != first) {
                d.push(Diagnostic::MixedLevelKinds { level: i });
            }
        }
    }
    (levels, len, d)
}

/// Incremental construction with name-based helpers.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    parts: AutomatonParts,
    init: Vec<Option<StateId>>,
}

impl AutomatonBuilder {
    pub fn new(sigma: Alphabet, gamma: Alphabet) -> Self {
        let init = vec![None; sigma.len()];
        AutomatonBuilder {
            parts: AutomatonParts { sigma, gamma, states: Vec::new(), init: Vec::new(), rules: Vec::new(), accepting: Acceptance::False },
            init,
        }
    }

    pub fn state(&mut self, name: impl Into<String>, kind: StateKind) -> StateId {
        self.parts.states.push(State { name: name.into(), kind });
        (self.parts.states.len() - 1) as StateId
    }

    pub fn existential(&mut self, name: impl Into<String>) -> StateId {
        self.state(name, StateKind::Existential)
    }

    pub fn universal(&mut self, name: impl Into<String>) -> StateId {
        self.state(name, StateKind::Universal)
    }

    pub fn permanent(&mut self, name: impl Into<String>) -> StateId {
        self.state(name, StateKind::Permanent)
    }

    /// Sets `σ(label) = q`. Panics on an unknown label.
    pub fn init(&mut self, label: &str, q: StateId) -> &mut Self {
        let a = self.parts.sigma.index_of(label).unwrap_or_else(|| panic!("unknown label {label}"));
        self.init[a] = Some(q);
        self
    }

    /// Sets `σ(a) = q` for every label.
    pub fn init_all(&mut self, q: StateId) -> &mut Self {
        self.init.iter_mut().for_each(|x| *x = Some(q));
        self
    }

    pub fn rule<I: IntoIterator<Item = StateId>>(&mut self, source: StateId, guard: Guard, successors: I) -> &mut Self {
        self.parts.rules.push(Rule { source, guard, successors: successors.into_iter().collect() });
        self
    }

    pub fn accepting(&mut self, accepting: Acceptance) -> &mut Self {
        self.parts.accepting = accepting;
        self
    }

    pub fn build(&self) -> Result<Automaton, AutomatonError> {
        let mut parts = self.parts.clone();
        let mut missing = Vec::new();
        parts.init = Vec::with_capacity(self.init.len());
        for (a, q) in self.init.iter().enumerate() {
            match q {
                Some(q) => parts.init.push(*q),
                None => missing.push(Diagnostic::InitIncomplete { label: parts.sigma.symbol(a).to_string() }),
            }
        }
        if !missing.is_empty() {
            return Err(AutomatonError::Invalid(missing));
        }
        Automaton::new(parts)
    }
}

//! Lazy acceptance: positions are expanded on demand and memoized by
//! configuration, and subgames are cut off once their outcome is forced.

use rustc_hash::{FxHashMap, FxHashSet};

use super::{position_cap, GameError};
use crate::automaton::{Automaton, Completeness, Configuration, GraphBinding, StateKind, StateSet};
use crate::graph::LabeledGraph;

/// Reusable acceptance checker for one automaton.
#[derive(Clone, Debug)]
pub struct Acceptor<'a> {
    automaton: &'a Automaton,
    /// Permanent states reachable per state, present only when no reachable
    /// configuration can block.
    reach: Option<Vec<StateSet>>,
    cap: usize,
}

impl<'a> Acceptor<'a> {
    pub fn new(automaton: &'a Automaton) -> Self {
        Self::with_cap(automaton, position_cap())
    }

    pub fn with_cap(automaton: &'a Automaton, cap: usize) -> Self {
        let reach = (automaton.completeness() == Completeness::Complete).then(|| automaton.reachable_permanent());
        Acceptor { automaton, reach, cap }
    }

    pub fn automaton(&self) -> &'a Automaton {
        self.automaton
    }

    pub fn accepts(&self, g: &LabeledGraph) -> Result<bool, GameError> {
        let b = self.automaton.bind(g)?;
        let start = self.automaton.initial_configuration_bound(&b);
        let mut s = Search { acc: self, b: &b, memo: FxHashMap::default() };
        s.win(&start)
    }

    /// Accepting configuration sequence, found by depth-first search.
    pub fn accepting_path(&self, g: &LabeledGraph) -> Result<Option<Vec<Configuration>>, GameError> {
        if self.automaton.has_universal() {
            return Err(GameError::UniversalStates);
        }
        let b = self.automaton.bind(g)?;
        let start = self.automaton.initial_configuration_bound(&b);
        let mut dead = FxHashSet::default();
        let mut path = vec![start];
        if self.path_from(&b, &mut path, &mut dead)? {
            Ok(Some(path))
        } else {
            Ok(None)
        }
    }

    fn path_from(
        &self,
        b: &GraphBinding,
        path: &mut Vec<Configuration>,
        dead: &mut FxHashSet<Configuration>,
    ) -> Result<bool, GameError> {
        let a = self.automaton;
        let c = path.last().expect("path is nonempty").clone();
        if a.configuration_kind(&c).is_permanent() {
            return Ok(a.accepting().contains(c.state_set().as_slice()));
        }
        if dead.contains(&c) {
            return Ok(false);
        }
        for s in a.global_successors(b, &c) {
            path.push(s);
            if self.path_from(b, path, dead)? {
                return Ok(true);
            }
            path.pop();
        }
        dead.insert(c);
        if dead.len() > self.cap {
            return Err(GameError::PositionCap { cap: self.cap });
        }
        Ok(false)
    }
}

struct Search<'s, 'a> {
    acc: &'s Acceptor<'a>,
    b: &'s GraphBinding,
    memo: FxHashMap<Configuration, bool>,
}

impl Search<'_, '_> {
    /// Whether the automaton wins the subgame at `c`.
    fn win(&mut self, c: &Configuration) -> Result<bool, GameError> {
        if let Some(&w) = self.memo.get(c) {
            return Ok(w);
        }
        let a = self.acc.automaton;
        let kind = a.configuration_kind(c);
        let w = if kind.is_permanent() {
            a.accepting().contains(c.state_set().as_slice())
        } else if let Some(forced) = self.forced(c) {
            forced
        } else {
            let table = a.local_successor_table(self.b, c);
            if table.iter().any(StateSet::is_empty) {
                kind == StateKind::Universal
            } else {
                self.expand(&table, kind == StateKind::Existential)?
            }
        };
        self.memo.insert(c.clone(), w);
        if self.memo.len() > self.acc.cap {
            return Err(GameError::PositionCap { cap: self.acc.cap });
        }
        Ok(w)
    }

    /// Outcome implied by the permanent states still reachable per node.
    fn forced(&self, c: &Configuration) -> Option<bool> {
        let reach = self.acc.reach.as_ref()?;
        let sets: Vec<&[u32]> = c.states().iter().map(|&q| reach[q as usize].as_slice()).collect();
        let o = self.acc.automaton.accepting().outlook(&sets);
        if o.certain {
            Some(true)
        } else if !o.possible {
            Some(false)
        } else {
            None
        }
    }

    /// Existential: some successor wins. Universal: every successor wins.
    fn expand(&mut self, table: &[StateSet], existential: bool) -> Result<bool, GameError> {
        let mut idx = vec![0usize; table.len()];
        loop {
            let next = Configuration(idx.iter().zip(table).map(|(&i, s)| s.as_slice()[i]).collect());
            if self.win(&next)? == existential {
                return Ok(existential);
            }
            let mut k = table.len();
            loop {
                if k == 0 {
                    return Ok(!existential);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < table[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Whether `a` accepts `g`, under the configured position cap.
pub fn accepts(a: &Automaton, g: &LabeledGraph) -> Result<bool, GameError> {
    Acceptor::new(a).accepts(g)
}

pub fn accepts_with_cap(a: &Automaton, g: &LabeledGraph, cap: usize) -> Result<bool, GameError> {
    Acceptor::with_cap(a, cap).accepts(g)
}

/// Accepting configuration sequence of an automaton without universal states.
pub fn ndga_accepts_path(a: &Automaton, g: &LabeledGraph) -> Result<Option<Vec<Configuration>>, GameError> {
    Acceptor::new(a).accepting_path(g)
}

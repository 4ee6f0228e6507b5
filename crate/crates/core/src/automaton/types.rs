use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a state within its automaton.
pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateKind {
    #[serde(rename = "E")]
    Existential,
    #[serde(rename = "A")]
    Universal,
    #[serde(rename = "P")]
    Permanent,
}

impl StateKind {
    pub fn is_permanent(self) -> bool {
        self == StateKind::Permanent
    }

    /// Existential and universal swap; permanent is fixed.
    pub fn dual(self) -> StateKind {
        match self {
            StateKind::Existential => StateKind::Universal,
            StateKind::Universal => StateKind::Existential,
            StateKind::Permanent => StateKind::Permanent,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            StateKind::Existential => "E",
            StateKind::Universal => "A",
            StateKind::Permanent => "P",
        }
    }
}

/// Sorted, duplicate-free set of states.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(Vec<StateId>);

impl StateSet {
    pub fn new() -> Self {
        StateSet(Vec::new())
    }

    pub fn from_sorted(v: Vec<StateId>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        StateSet(v)
    }

    pub fn singleton(q: StateId) -> Self {
        StateSet(vec![q])
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn insert(&mut self, q: StateId) -> bool {
        match self.0.binary_search(&q) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, q);
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[StateId] {
        &self.0
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.iter().filter(|&q| other.contains(q)).collect()
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.iter().filter(|&q| !other.contains(q)).collect()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|q| other.contains(q))
    }

    /// Applies `f` to every member, dropping those mapped to `None`.
    pub fn filter_map<F: Fn(StateId) -> Option<StateId>>(&self, f: F) -> StateSet {
        self.iter().filter_map(f).collect()
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        let mut v: Vec<StateId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StateSet(v)
    }
}

impl AsRef<[StateId]> for StateSet {
    fn as_ref(&self) -> &[StateId] {
        &self.0
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Comparison relation of cardinality atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Cmp {
    pub fn holds(self, lhs: usize, rhs: usize) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn parse(s: &str) -> Option<Cmp> {
        Some(match s {
            "<" => Cmp::Lt,
            "<=" => Cmp::Le,
            "=" => Cmp::Eq,
            ">=" => Cmp::Ge,
            ">" => Cmp::Gt,
            _ => return None,
        })
    }
}

/// Characters that may not appear in state names or edge symbols used in guards.
pub const RESERVED_NAME_CHARS: &[char] = &['(', ')', '{', '}', ',', '@', '&', '|', '!', '<', '>', '='];

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || RESERVED_NAME_CHARS.contains(&c))
}

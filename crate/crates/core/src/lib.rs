//! Distributed graph automata over labeled directed graphs.
//!
//! Graphs, alternating automata with symbolic guards, acceptance games,
//! normal forms and closure constructions, translations to and from
//! monadic second-order logic, and bounded language tools.

pub mod alphabet;
pub mod automaton;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod language;
pub mod mso;
pub mod transforms;

pub use alphabet::{Alphabet, BLANK};
pub use automaton::{Acceptance, Automaton, AutomatonBuilder, Configuration, Guard, StateId, StateKind, StateSet};
pub use game::{accepts, Acceptor, GameError, Player};
pub use graph::{LabeledGraph, NodeSubset};
pub use mso::{Assignment, Formula};

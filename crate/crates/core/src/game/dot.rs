//! Graphviz export of games and runs.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Game, Player, Run, Verdict};
use crate::automaton::{Automaton, Configuration, StateKind};

/// State multiset of a configuration, e.g. `{q_a, q_b×2}`.
fn multiset(a: &Automaton, c: &Configuration) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for &q in c.states() {
        *counts.entry(a.name(q)).or_default() += 1;
    }
    let parts: Vec<String> =
        counts.into_iter().map(|(n, k)| if k == 1 { n.to_string() } else { format!("{n}×{k}") }).collect();
    format!("{{{}}}", parts.join(", "))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node_attrs(kind: StateKind, accepting: bool) -> &'static str {
    match kind {
        StateKind::Existential => "shape=box, color=darkgreen",
        StateKind::Universal => "shape=triangle, color=red",
        StateKind::Permanent if accepting => "shape=doublecircle",
        StateKind::Permanent => "shape=circle",
    }
}

/// Game positions with state multisets; strategy moves of the verdict's winner are bold.
pub fn game_to_dot(a: &Automaton, game: &Game, verdict: Option<&Verdict>) -> String {
    let mut out = String::from("digraph game {\n  rankdir=TB;\n");
    for (i, p) in game.positions.iter().enumerate() {
        let _ = writeln!(
            out,
            "  p{i} [label=\"{}\", {}];",
            escape(&multiset(a, &p.configuration)),
            node_attrs(p.kind, p.accepting)
        );
    }
    for (i, p) in game.positions.iter().enumerate() {
        for &j in &p.moves {
            let chosen = verdict.is_some_and(|v| v.strategy.choice.get(&i) == Some(&j));
            let style = match verdict.map(|v| v.winner) {
                Some(Player::Automaton) if chosen => " [color=darkgreen, penwidth=2]",
                Some(Player::Pathfinder) if chosen => " [color=red, penwidth=2]",
                _ => "",
            };
            let _ = writeln!(out, "  p{i} -> p{j}{style};");
        }
    }
    out.push_str("}\n");
    out
}

/// Run configurations; accepting permanent configurations are double-circled.
pub fn run_to_dot(a: &Automaton, run: &Run) -> String {
    let mut out = String::from("digraph run {\n  rankdir=TB;\n");
    for (i, c) in run.configurations.iter().enumerate() {
        let kind = a.configuration_kind(c);
        let accepting = kind.is_permanent() && a.accepting().contains(c.state_set().as_slice());
        let _ = writeln!(out, "  c{i} [label=\"{}\", {}];", escape(&multiset(a, c)), node_attrs(kind, accepting));
    }
    for (i, j) in &run.edges {
        let _ = writeln!(out, "  c{i} -> c{j};");
    }
    out.push_str("}\n");
    out
}

//! Monadic second-order logic on labeled graphs.
//!
//! Node variables start with a lowercase letter, set variables with an
//! uppercase one. Concrete syntax, loosest binding first:
//!
//! ```text
//! φ <=> ψ      φ => ψ (right-associative)      φ | ψ      φ & ψ      !φ
//! lab[a](x)    x ->[g] y    x -> y    x = y    x in X    true    false
//! exists x, Y (φ)    forall X (φ)
//! ```

mod compile;
mod encode;
mod eval;
mod parse;
mod translate;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use compile::{compile, compile_with_report, one_node_automaton, unique_carriers_automaton, CompileReport, CompileStep};
pub use encode::{decode_assignment, encode_assignment, pair_alphabet, pair_label, split_pair_label};
pub use eval::{evaluate, evaluate_sentence, Assignment, Evaluator};
pub use parse::{parse, ParseError};
pub use translate::{automaton_to_sentence, automaton_to_sentence_with_cap, SENTENCE_FAMILY_CAP};

use crate::automaton::ExpansionCapExceeded;
use crate::graph::GraphError;
use crate::transforms::TransformError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `lab[a](x)`
    Lab { label: String, var: String },
    /// `x ->[g] y`; `None` stands for the only relation of a single-relation alphabet.
    Edge { from: String, gamma: Option<String>, to: String },
    Eq(String, String),
    /// `x in X`
    In { var: String, set: String },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ExistsNode(String, Box<Formula>),
    ForallNode(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

#[derive(Debug, Error)]
pub enum MsoError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("label `{0}` is not in the node alphabet")]
    UnknownLabel(String),
    #[error("relation `{0}` is not in the edge alphabet")]
    UnknownRelation(String),
    #[error("`->` without a relation needs a single-relation edge alphabet, found {0} relations")]
    AmbiguousRelation(usize),
    #[error("free variable `{0}` has no value")]
    Unassigned(String),
    #[error("`{0}` is not a {1} variable")]
    WrongSort(String, &'static str),
    #[error("node {0} assigned to `{1}` is out of range")]
    NodeOutOfRange(usize, String),
    #[error("malformed pair label `{0}`")]
    PairLabel(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Expansion(#[from] ExpansionCapExceeded),
    #[error("round {round} needs {families} neighborhood families, over the cap of {cap}")]
    TranslationCap { round: usize, families: usize, cap: usize },
}

pub fn is_set_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

pub fn is_node_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_lowercase())
}

pub(crate) const KEYWORDS: &[&str] = &["exists", "forall", "in", "lab", "true", "false"];

impl Formula {
    pub fn lab(label: impl Into<String>, var: impl Into<String>) -> Formula {
        Formula::Lab { label: label.into(), var: var.into() }
    }

    pub fn edge(from: impl Into<String>, to: impl Into<String>) -> Formula {
        Formula::Edge { from: from.into(), gamma: None, to: to.into() }
    }

    pub fn edge_in(from: impl Into<String>, gamma: impl Into<String>, to: impl Into<String>) -> Formula {
        Formula::Edge { from: from.into(), gamma: Some(gamma.into()), to: to.into() }
    }

    pub fn eq(x: impl Into<String>, y: impl Into<String>) -> Formula {
        Formula::Eq(x.into(), y.into())
    }

    pub fn member(var: impl Into<String>, set: impl Into<String>) -> Formula {
        Formula::In { var: var.into(), set: set.into() }
    }

    /// Negation with `!true`, `!false` and `!!φ` folded.
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    /// Conjunction with constants folded and nested conjunctions flattened.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().expect("one element"),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with constants folded and nested disjunctions flattened.
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().expect("one element"),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (Formula::True, b) => b,
            (a, Formula::False) => Formula::not(a),
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Quantifier over a node or set variable, chosen by the case of `var`.
    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        let var = var.into();
        match body {
            Formula::True | Formula::False => body,
            _ if is_set_var(&var) => Formula::ExistsSet(var, Box::new(body)),
            _ => Formula::ExistsNode(var, Box::new(body)),
        }
    }

    /// Quantifier over a node or set variable, chosen by the case of `var`.
    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        let var = var.into();
        match body {
            Formula::True | Formula::False => body,
            _ if is_set_var(&var) => Formula::ForallSet(var, Box::new(body)),
            _ => Formula::ForallNode(var, Box::new(body)),
        }
    }

    /// `exists v1 (exists v2 (... body))`
    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    /// `forall v1 (forall v2 (... body))`
    pub fn forall_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut use_var = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Lab { var, .. } => use_var(var, bound),
            Formula::Edge { from, to, .. } => {
                use_var(from, bound);
                use_var(to, bound);
            }
            Formula::Eq(x, y) => {
                use_var(x, bound);
                use_var(y, bound);
            }
            Formula::In { var, set } => {
                use_var(var, bound);
                use_var(set, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ExistsNode(v, f) | Formula::ForallNode(v, f) | Formula::ExistsSet(v, f) | Formula::ForallSet(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Formula::Not(f)
            | Formula::ExistsNode(_, f)
            | Formula::ForallNode(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => f.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.size() + b.size(),
            _ => 0,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(fs) if fs.len() >= 2 => 3,
            Formula::And(fs) if fs.len() >= 2 => 4,
            _ => 5,
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

fn write_chain(f: &mut fmt::Formatter<'_>, parts: &[Formula], op: &str, prec: u8) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write_child(f, p, p.precedence() <= prec)?;
    }
    Ok(())
}

/// Renders in the concrete syntax; nested chains of the same connective keep
/// their parentheses so that parsing gives back the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Lab { label, var } => write!(f, "lab[{label}]({var})"),
            Formula::Edge { from, gamma: None, to } => write!(f, "{from} -> {to}"),
            Formula::Edge { from, gamma: Some(g), to } => write!(f, "{from} ->[{g}] {to}"),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::In { var, set } => write!(f, "{var} in {set}"),
            Formula::Not(inner) => {
                f.write_str("!")?;
                write_child(f, inner, inner.precedence() < 5)
            }
            Formula::And(fs) if fs.is_empty() => f.write_str("true"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("false"),
            Formula::And(fs) if fs.len() == 1 => write!(f, "{}", fs[0]),
            Formula::Or(fs) if fs.len() == 1 => write!(f, "{}", fs[0]),
            Formula::And(fs) => write_chain(f, fs, "&", 4),
            Formula::Or(fs) => write_chain(f, fs, "|", 3),
            Formula::Implies(a, b) => {
                write_child(f, a, a.precedence() <= 2)?;
                f.write_str(" => ")?;
                write_child(f, b, b.precedence() < 2)
            }
            Formula::Iff(a, b) => {
                write_child(f, a, a.precedence() < 1)?;
                f.write_str(" <=> ")?;
                write_child(f, b, b.precedence() <= 1)
            }
            Formula::ExistsNode(v, body) | Formula::ExistsSet(v, body) => write!(f, "exists {v} ({body})"),
            Formula::ForallNode(v, body) | Formula::ForallSet(v, body) => write!(f, "forall {v} ({body})"),
        }
    }
}

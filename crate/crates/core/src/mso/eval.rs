//! Brute-force model checking: node quantifiers range over all nodes, set
//! quantifiers over all `2^|V|` subsets.

use std::collections::{BTreeMap, HashMap};

use super::{is_set_var, Formula, MsoError};
use crate::alphabet::Alphabet;
use crate::graph::{LabeledGraph, NodeSubset};

/// Values of free variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub nodes: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, NodeSubset>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with_node(mut self, var: impl Into<String>, v: usize) -> Self {
        self.nodes.insert(var.into(), v);
        self
    }

    pub fn with_set(mut self, var: impl Into<String>, set: NodeSubset) -> Self {
        self.sets.insert(var.into(), set);
        self
    }

    /// Names of all assigned variables.
    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.nodes.keys().chain(self.sets.keys())
    }
}

/// Formula with variables resolved to slots and symbols to indices.
#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Lab { slot: usize, label: usize },
    Edge { gamma: usize, from: usize, to: usize },
    Eq(usize, usize),
    In { slot: usize, set: usize },
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists { slot: usize, set: bool, body: Box<Node> },
    Forall { slot: usize, set: bool, body: Box<Node> },
}

/// A formula prepared for repeated evaluation over one pair of alphabets.
#[derive(Clone, Debug)]
pub struct Evaluator {
    root: Node,
    free: Vec<String>,
    slots: usize,
    sigma: Alphabet,
    gamma: Alphabet,
}

impl Evaluator {
    pub fn new(f: &Formula, sigma: &Alphabet, gamma: &Alphabet) -> Result<Evaluator, MsoError> {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut r = Resolver { sigma, gamma, scope: HashMap::new(), slots: 0 };
        for v in &free {
            let s = r.fresh();
            r.scope.entry(v.clone()).or_default().push(s);
        }
        let root = r.resolve(f)?;
        Ok(Evaluator { root, free, slots: r.slots, sigma: sigma.clone(), gamma: gamma.clone() })
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn eval(&self, g: &LabeledGraph, alpha: &Assignment) -> Result<bool, MsoError> {
        if g.sigma() != &self.sigma || g.gamma() != &self.gamma {
            return Err(MsoError::Graph(crate::graph::GraphError::Precondition(
                "graph alphabets differ from the evaluator's".into(),
            )));
        }
        let mut env = vec![0u64; self.slots];
        for (slot, v) in self.free.iter().enumerate() {
            if is_set_var(v) {
                let set = alpha.sets.get(v).ok_or_else(|| MsoError::Unassigned(v.clone()))?;
                if let Some(bad) = set.iter().find(|&u| u >= g.node_count()) {
                    return Err(MsoError::NodeOutOfRange(bad, v.clone()));
                }
                env[slot] = set.mask();
            } else {
                let &node = alpha.nodes.get(v).ok_or_else(|| MsoError::Unassigned(v.clone()))?;
                if node >= g.node_count() {
                    return Err(MsoError::NodeOutOfRange(node, v.clone()));
                }
                env[slot] = node as u64;
            }
        }
        Ok(holds(&self.root, g, &mut env))
    }

    pub fn eval_sentence(&self, g: &LabeledGraph) -> Result<bool, MsoError> {
        self.eval(g, &Assignment::default())
    }
}

struct Resolver<'a> {
    sigma: &'a Alphabet,
    gamma: &'a Alphabet,
    scope: HashMap<String, Vec<usize>>,
    slots: usize,
}

impl Resolver<'_> {
    fn fresh(&mut self) -> usize {
        self.slots += 1;
        self.slots - 1
    }

    fn slot(&self, v: &str) -> Result<usize, MsoError> {
        self.scope.get(v).and_then(|s| s.last().copied()).ok_or_else(|| MsoError::Unassigned(v.to_string()))
    }

    fn node_slot(&self, v: &str) -> Result<usize, MsoError> {
        if is_set_var(v) {
            return Err(MsoError::WrongSort(v.to_string(), "node"));
        }
        self.slot(v)
    }

    fn resolve(&mut self, f: &Formula) -> Result<Node, MsoError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Lab { label, var } => {
                let label = self.sigma.index_of(label).ok_or_else(|| MsoError::UnknownLabel(label.clone()))?;
                Node::Lab { slot: self.node_slot(var)?, label }
            }
            Formula::Edge { from, gamma, to } => {
                let gamma = resolve_relation(self.gamma, gamma.as_deref())?;
                Node::Edge { gamma, from: self.node_slot(from)?, to: self.node_slot(to)? }
            }
            Formula::Eq(x, y) => Node::Eq(self.node_slot(x)?, self.node_slot(y)?),
            Formula::In { var, set } => {
                if !is_set_var(set) {
                    return Err(MsoError::WrongSort(set.clone(), "set"));
                }
                Node::In { slot: self.node_slot(var)?, set: self.slot(set)? }
            }
            Formula::Not(a) => Node::Not(Box::new(self.resolve(a)?)),
            Formula::And(fs) => Node::And(fs.iter().map(|x| self.resolve(x)).collect::<Result<_, _>>()?),
            Formula::Or(fs) => Node::Or(fs.iter().map(|x| self.resolve(x)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.resolve(a)?), Box::new(self.resolve(b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(self.resolve(a)?), Box::new(self.resolve(b)?)),
            Formula::ExistsNode(v, body)
            | Formula::ForallNode(v, body)
            | Formula::ExistsSet(v, body)
            | Formula::ForallSet(v, body) => {
                let set = matches!(f, Formula::ExistsSet(..) | Formula::ForallSet(..));
                if set != is_set_var(v) {
                    return Err(MsoError::WrongSort(v.clone(), if set { "set" } else { "node" }));
                }
                let slot = self.fresh();
                self.scope.entry(v.clone()).or_default().push(slot);
                let body = Box::new(self.resolve(body)?);
                self.scope.get_mut(v).expect("pushed above").pop();
                if matches!(f, Formula::ExistsNode(..) | Formula::ExistsSet(..)) {
                    Node::Exists { slot, set, body }
                } else {
                    Node::Forall { slot, set, body }
                }
            }
        })
    }
}

pub(crate) fn resolve_relation(gamma: &Alphabet, name: Option<&str>) -> Result<usize, MsoError> {
    match name {
        Some(n) => gamma.index_of(n).ok_or_else(|| MsoError::UnknownRelation(n.to_string())),
        None if gamma.len() == 1 => Ok(0),
        None => Err(MsoError::AmbiguousRelation(gamma.len())),
    }
}

fn holds(node: &Node, g: &LabeledGraph, env: &mut [u64]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Lab { slot, label } => g.label(env[*slot] as usize) == *label,
        Node::Edge { gamma, from, to } => g.has_edge(*gamma, env[*from] as usize, env[*to] as usize),
        Node::Eq(x, y) => env[*x] == env[*y],
        Node::In { slot, set } => env[*set] >> env[*slot] & 1 == 1,
        Node::Not(a) => !holds(a, g, env),
        Node::And(fs) => fs.iter().all(|f| holds(f, g, env)),
        Node::Or(fs) => fs.iter().any(|f| holds(f, g, env)),
        Node::Implies(a, b) => !holds(a, g, env) || holds(b, g, env),
        Node::Iff(a, b) => holds(a, g, env) == holds(b, g, env),
        Node::Exists { slot, set, body } => range(g, *set).any(|x| {
            env[*slot] = x;
            holds(body, g, env)
        }),
        Node::Forall { slot, set, body } => range(g, *set).all(|x| {
            env[*slot] = x;
            holds(body, g, env)
        }),
    }
}

fn range(g: &LabeledGraph, set: bool) -> std::ops::Range<u64> {
    let n = g.node_count() as u64;
    if set {
        assert!(n < 64, "set quantification over {n} nodes is out of reach");
        0..1u64 << n
    } else {
        0..n
    }
}

/// `⟨g, alpha⟩ ⊨ f`
pub fn evaluate(f: &Formula, g: &LabeledGraph, alpha: &Assignment) -> Result<bool, MsoError> {
    Evaluator::new(f, g.sigma(), g.gamma())?.eval(g, alpha)
}

pub fn evaluate_sentence(f: &Formula, g: &LabeledGraph) -> Result<bool, MsoError> {
    evaluate(f, g, &Assignment::default())
}

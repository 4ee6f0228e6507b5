//! JSON interchange format for automata.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Acceptance, Automaton, AutomatonError, AutomatonParts, Cmp, Diagnostic, Rule, State, StateId, StateKind};
use crate::alphabet::Alphabet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    pub name: String,
    pub kind: StateKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleEntry {
    pub from: String,
    #[serde(default = "true_guard")]
    pub guard: String,
    pub to: Vec<String>,
}

fn true_guard() -> String {
    "true".into()
}

/// Accepting family: a plain list of sets, a boolean, or an expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AcceptanceExpr {
    Const(bool),
    Sets(Vec<Vec<String>>),
    Node(Box<AcceptanceNode>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AcceptanceNode {
    Sets(Vec<Vec<String>>),
    Has(String),
    SubsetOf(Vec<String>),
    Card { cmp: Cmp, k: usize },
    Not(AcceptanceExpr),
    All(Vec<AcceptanceExpr>),
    Any(Vec<AcceptanceExpr>),
    /// `inner` is stated over `names`; `map` sends states to names.
    Image { map: BTreeMap<String, String>, names: Vec<String>, inner: AcceptanceExpr },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub sigma: Vec<String>,
    pub gamma: Vec<String>,
    pub states: Vec<StateEntry>,
    pub init: BTreeMap<String, String>,
    pub rules: Vec<RuleEntry>,
    pub accepting: AcceptanceExpr,
    /// Free-form metadata, ignored on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

impl AcceptanceExpr {
    pub fn from_acceptance(a: &Acceptance, name: &dyn Fn(StateId) -> String) -> AcceptanceExpr {
        let names = |s: &super::StateSet| s.iter().map(name).collect::<Vec<_>>();
        let node = |n: AcceptanceNode| AcceptanceExpr::Node(Box::new(n));
        match a {
            Acceptance::True => AcceptanceExpr::Const(true),
            Acceptance::False => AcceptanceExpr::Const(false),
            Acceptance::Sets(list) => AcceptanceExpr::Sets(list.iter().map(names).collect()),
            Acceptance::Has(q) => node(AcceptanceNode::Has(name(*q))),
            Acceptance::Subset(s) => node(AcceptanceNode::SubsetOf(names(s))),
            Acceptance::Card(cmp, k) => node(AcceptanceNode::Card { cmp: *cmp, k: *k }),
            Acceptance::Not(inner) => node(AcceptanceNode::Not(Self::from_acceptance(inner, name))),
            Acceptance::And(parts) => node(AcceptanceNode::All(parts.iter().map(|p| Self::from_acceptance(p, name)).collect())),
            Acceptance::Or(parts) => node(AcceptanceNode::Any(parts.iter().map(|p| Self::from_acceptance(p, name)).collect())),
            Acceptance::Image { map, names: targets, inner } => {
                let m = map
                    .iter()
                    .enumerate()
                    .filter_map(|(q, t)| t.map(|t| (name(q as StateId), targets[t as usize].clone())))
                    .collect();
                let inner_name = |q: StateId| targets[q as usize].clone();
                node(AcceptanceNode::Image {
                    map: m,
                    names: targets.clone(),
                    inner: Self::from_acceptance(inner, &inner_name),
                })
            }
        }
    }

    /// Resolves names; unresolved names are pushed to `missing`.
    pub fn to_acceptance(&self, resolve: &dyn Fn(&str) -> Option<StateId>, missing: &mut Vec<String>) -> Acceptance {
        let id = |n: &str, missing: &mut Vec<String>| {
            resolve(n).or_else(|| {
                missing.push(n.to_string());
                None
            })
        };
        match self {
            AcceptanceExpr::Const(true) => Acceptance::True,
            AcceptanceExpr::Const(false) => Acceptance::False,
            AcceptanceExpr::Sets(list) => sets(list, &mut |n| id(n, missing)),
            AcceptanceExpr::Node(n) => match n.as_ref() {
                AcceptanceNode::Sets(list) => sets(list, &mut |n| id(n, missing)),
                AcceptanceNode::Has(q) => id(q, missing).map_or(Acceptance::False, Acceptance::Has),
                AcceptanceNode::SubsetOf(qs) => Acceptance::Subset(qs.iter().filter_map(|q| id(q, missing)).collect()),
                AcceptanceNode::Card { cmp, k } => Acceptance::Card(*cmp, *k),
                AcceptanceNode::Not(e) => Acceptance::not(e.to_acceptance(resolve, missing)),
                AcceptanceNode::All(es) => Acceptance::and(es.iter().map(|e| e.to_acceptance(resolve, missing)).collect()),
                AcceptanceNode::Any(es) => Acceptance::or(es.iter().map(|e| e.to_acceptance(resolve, missing)).collect()),
                AcceptanceNode::Image { map, names, inner } => {
                    let target = |n: &str| names.iter().position(|m| m == n).map(|i| i as StateId);
                    let mut pairs = Vec::new();
                    for (from, to) in map {
                        match (id(from, missing), target(to)) {
                            (Some(f), Some(t)) => pairs.push((f, t)),
                            (_, None) => missing.push(to.clone()),
                            _ => {}
                        }
                    }
                    let len = pairs.iter().map(|p| p.0 as usize + 1).max().unwrap_or(0);
                    let mut m = vec![None; len];
                    for (f, t) in pairs {
                        m[f as usize] = Some(t);
                    }
                    Acceptance::Image {
                        map: m,
                        names: names.clone(),
                        inner: Box::new(inner.to_acceptance(&target, missing)),
                    }
                }
            },
        }
    }
}

fn sets(list: &[Vec<String>], id: &mut dyn FnMut(&str) -> Option<StateId>) -> Acceptance {
    let mut out = Vec::new();
    for s in list {
        let ids: Vec<Option<StateId>> = s.iter().map(|n| id(n)).collect();
        if ids.iter().all(Option::is_some) {
            out.push(ids.into_iter().flatten().collect::<Vec<_>>());
        }
    }
    Acceptance::sets(out)
}

impl AutomatonFile {
    pub fn from_automaton(a: &Automaton) -> AutomatonFile {
        let name = |q: StateId| a.name(q).to_string();
        AutomatonFile {
            sigma: a.sigma().symbols().to_vec(),
            gamma: a.gamma().symbols().to_vec(),
            states: a.states().iter().map(|s| StateEntry { name: s.name.clone(), kind: s.kind }).collect(),
            init: a.sigma().iter().enumerate().map(|(i, s)| (s.to_string(), name(a.init(i)))).collect(),
            rules: a
                .rules()
                .iter()
                .map(|r| RuleEntry {
                    from: name(r.source),
                    guard: a.render_guard(&r.guard),
                    to: r.successors.iter().map(name).collect(),
                })
                .collect(),
            accepting: AcceptanceExpr::from_acceptance(a.accepting(), &name),
            report: None,
        }
    }

    /// Resolves names and validates, collecting every problem.
    pub fn to_automaton(&self) -> Result<Automaton, AutomatonError> {
        let sigma = Alphabet::new(self.sigma.iter().cloned()).map_err(|e| AutomatonError::Format(format!("sigma: {e}")))?;
        let gamma = Alphabet::new(self.gamma.iter().cloned()).map_err(|e| AutomatonError::Format(format!("gamma: {e}")))?;
        let states: Vec<State> = self.states.iter().map(|s| State { name: s.name.clone(), kind: s.kind }).collect();
        let mut index = std::collections::HashMap::new();
        for (i, s) in states.iter().enumerate() {
            index.entry(s.name.clone()).or_insert(i as StateId);
        }
        let resolve = |n: &str| index.get(n).copied();
        let mut d = Vec::new();
        let unknown = |name: &str, context: String, d: &mut Vec<Diagnostic>| {
            d.push(Diagnostic::UnknownStateName { name: name.to_string(), context });
        };

        for label in self.init.keys() {
            if sigma.index_of(label).is_none() {
                d.push(Diagnostic::UnknownSymbol { symbol: label.clone(), context: "init".into() });
            }
        }
        let mut init = Vec::with_capacity(sigma.len());
        for label in sigma.iter() {
            match self.init.get(label) {
                None => d.push(Diagnostic::InitIncomplete { label: label.to_string() }),
                Some(q) => match resolve(q) {
                    Some(id) => init.push(id),
                    None => unknown(q, format!("init of {label}"), &mut d),
                },
            }
        }

        let mut rules = Vec::with_capacity(self.rules.len());
        for (i, r) in self.rules.iter().enumerate() {
            let source = resolve(&r.from);
            if source.is_none() {
                unknown(&r.from, format!("source of rule {i}"), &mut d);
            }
            let mut successors = Vec::new();
            for t in &r.to {
                match resolve(t) {
                    Some(q) => successors.push(q),
                    None => unknown(t, format!("successor in rule {i}"), &mut d),
                }
            }
            let guard = match super::Guard::parse(&r.guard, &resolve, &gamma) {
                Ok(g) => Some(g),
                Err(e) => {
                    d.push(Diagnostic::GuardSyntax { rule: i, message: e.to_string() });
                    None
                }
            };
            if let (Some(source), Some(guard)) = (source, guard) {
                rules.push(Rule { source, guard, successors: successors.into_iter().collect() });
            }
        }

        let mut missing = Vec::new();
        let accepting = self.accepting.to_acceptance(&resolve, &mut missing);
        for m in missing {
            unknown(&m, "accepting family".into(), &mut d);
        }
        if !d.is_empty() {
            return Err(AutomatonError::Invalid(d));
        }
        Automaton::new(AutomatonParts { sigma, gamma, states, init, rules, accepting })
    }
}

impl Automaton {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(AutomatonFile::from_automaton(self)).expect("automaton files serialize")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&AutomatonFile::from_automaton(self)).expect("automaton files serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Automaton, AutomatonError> {
        let file: AutomatonFile = serde_json::from_str(text).map_err(|e| AutomatonError::Format(e.to_string()))?;
        file.to_automaton()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = r#"{
        "sigma": ["a", "b"], "gamma": ["_"],
        "states": [{"name": "q", "kind": "E"}, {"name": "yes", "kind": "P"}, {"name": "no", "kind": "P"}],
        "init": {"a": "q", "b": "no"},
        "rules": [{"from": "q", "guard": "has(no)", "to": ["yes"]}, {"from": "q", "guard": "!has(no)", "to": ["no"]}],
        "accepting": [["yes"], ["yes", "no"]]
    }"#;

    #[test]
    fn round_trips_through_json() {
        let a = Automaton::from_json_str(TEXT).unwrap();
        assert_eq!((a.siz(), a.len()), (3, 1));
        let b = Automaton::from_json_str(&a.to_json_string()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn expression_families_round_trip() {
        let mut a = Automaton::from_json_str(TEXT).unwrap();
        let yes = a.state_id("yes").unwrap();
        let no = a.state_id("no").unwrap();
        let fam = Acceptance::or(vec![
            Acceptance::not(Acceptance::Has(no)),
            Acceptance::and(vec![Acceptance::Card(Cmp::Ge, 2), Acceptance::Subset([yes, no].into_iter().collect())]),
        ]);
        a = a.with_accepting(fam).unwrap();
        let b = Automaton::from_json_str(&a.to_json_string()).unwrap();
        assert_eq!(a.accepting(), b.accepting());
    }

    #[test]
    fn unknown_names_are_all_reported() {
        let text = TEXT.replace("\"to\": [\"yes\"]", "\"to\": [\"maybe\"]").replace("[\"yes\", \"no\"]", "[\"nope\"]");
        let err = Automaton::from_json_str(&text).unwrap_err();
        let codes: Vec<_> = err.diagnostics().iter().map(Diagnostic::code).collect();
        assert_eq!(codes, ["unknown-state-name", "unknown-state-name"]);
    }
}

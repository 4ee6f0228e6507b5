//! Formula to automaton by structural induction.
//!
//! A formula with free variables `V` is compiled over node labels `Σ × 2^V`;
//! the encoded graph of `⟨G, α⟩` is accepted iff `⟨G, α⟩ ⊨ φ`. Sentences
//! are relabeled back to `Σ` at the end.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::encode::{pair_alphabet, pair_label, split_pair_label};
use super::eval::resolve_relation;
use super::{is_set_var, Formula, MsoError};
use crate::alphabet::Alphabet;
use crate::automaton::{Acceptance, Automaton, AutomatonBuilder, Guard, StateId, StateSet};
use crate::transforms::{
    align_levels, dual, extend_alphabet, intersection, make_nonblocking, product, project, trim, union, ProductMode,
    TransformReport,
};

/// One construction performed while compiling.
#[derive(Clone, Debug, Serialize)]
pub struct CompileStep {
    pub construction: String,
    pub siz: usize,
    pub len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<TransformReport>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CompileReport {
    pub steps: Vec<CompileStep>,
    pub peak_siz: usize,
}

impl CompileReport {
    fn push(&mut self, construction: &str, a: &Automaton, report: Option<TransformReport>) {
        self.peak_siz = self.peak_siz.max(a.siz());
        self.steps.push(CompileStep { construction: construction.to_string(), siz: a.siz(), len: a.len(), report });
    }
}

pub fn compile(f: &Formula, sigma: &Alphabet, gamma: &Alphabet) -> Result<Automaton, MsoError> {
    compile_with_report(f, sigma, gamma).map(|(a, _)| a)
}

pub fn compile_with_report(f: &Formula, sigma: &Alphabet, gamma: &Alphabet) -> Result<(Automaton, CompileReport), MsoError> {
    let mut c = Compiler { sigma, gamma, report: CompileReport::default() };
    let (a, vars) = c.go(f)?;
    let a = if vars.is_empty() {
        let flat = extend_alphabet(&a, sigma, &|b| Some(pair_label::<&str>(b, &[])))?;
        c.report.push("flatten", &flat, None);
        flat
    } else {
        a
    };
    Ok((a, c.report))
}

/// Accepts an encoded graph iff exactly one node carries `x`.
pub fn one_node_automaton(sigma: &Alphabet, gamma: &Alphabet, vars: &[String], x: &str) -> Automaton {
    unique_carriers_automaton(sigma, gamma, vars, &[x.to_string()])
}

/// Accepts an encoded graph iff each of `xs` has exactly one carrier:
/// carriers branch universally over a color per carried variable, and every
/// branch must show each variable in exactly one color.
pub fn unique_carriers_automaton(sigma: &Alphabet, gamma: &Alphabet, vars: &[String], xs: &[String]) -> Automaton {
    let labels = pair_alphabet(sigma, vars);
    let mut b = AutomatonBuilder::new(labels.clone(), gamma.clone());
    let idle = b.permanent("idle");
    let mut split: BTreeMap<Vec<usize>, StateId> = BTreeMap::new();
    // (variable index, black) -> states showing it
    let mut shows: BTreeMap<(usize, bool), Vec<StateId>> = BTreeMap::new();
    for l in labels.iter() {
        let (_, m) = split_pair_label(l).expect("pair label");
        let carried: Vec<usize> = (0..xs.len()).filter(|&i| m.contains(&xs[i])).collect();
        if carried.is_empty() {
            b.init(l, idle);
            continue;
        }
        let q = match split.get(&carried) {
            Some(&q) => q,
            None => {
                let tag: Vec<&str> = carried.iter().map(|&i| xs[i].as_str()).collect();
                let q = b.universal(format!("carry_{}", tag.join("_")));
                let mut colored = Vec::new();
                for mask in 0u32..1 << carried.len() {
                    let name: Vec<String> = carried
                        .iter()
                        .enumerate()
                        .map(|(j, &i)| format!("{}_{}", xs[i], if mask >> j & 1 == 1 { "black" } else { "white" }))
                        .collect();
                    let p = b.permanent(name.join("_"));
                    for (j, &i) in carried.iter().enumerate() {
                        shows.entry((i, mask >> j & 1 == 1)).or_default().push(p);
                    }
                    colored.push(p);
                }
                b.rule(q, Guard::True, colored);
                split.insert(carried, q);
                q
            }
        };
        b.init(l, q);
    }
    let any = |key| Acceptance::or(shows.get(&key).into_iter().flatten().map(|&p| Acceptance::Has(p)).collect());
    let per_var = (0..xs.len()).map(|i| Acceptance::iff(any((i, true)), Acceptance::not(any((i, false))))).collect();
    b.accepting(Acceptance::and(per_var));
    b.build().expect("valid automaton")
}

type Compiled = (Automaton, Vec<String>);

struct Compiler<'a> {
    sigma: &'a Alphabet,
    gamma: &'a Alphabet,
    report: CompileReport,
}

impl Compiler<'_> {
    fn builder(&self, vars: &[String]) -> (AutomatonBuilder, Alphabet) {
        let labels = pair_alphabet(self.sigma, vars);
        (AutomatonBuilder::new(labels.clone(), self.gamma.clone()), labels)
    }

    fn go(&mut self, f: &Formula) -> Result<Compiled, MsoError> {
        if is_compound_quantifier_free(f) {
            return self.quantifier_free(f);
        }
        match f {
            Formula::True | Formula::False => {
                let (mut b, _) = self.builder(&[]);
                let p = b.permanent("done");
                b.init_all(p);
                b.accepting(if *f == Formula::True { Acceptance::True } else { Acceptance::False });
                self.base("constant", &b, vec![])
            }
            Formula::Lab { label, var } => {
                if !self.sigma.contains(label) {
                    return Err(MsoError::UnknownLabel(label.clone()));
                }
                let vars = vec![var.clone()];
                self.local(vars, |a, m| match m {
                    [_] if a == label => Answer::Yes,
                    [_] => Answer::No,
                    _ => Answer::Maybe,
                })
            }
            Formula::Eq(x, y) => {
                let vars = sorted(&[x, y]);
                let both = vars.len();
                self.local(vars, move |_, m| match m.len() {
                    0 => Answer::Maybe,
                    n if n == both => Answer::Yes,
                    _ => Answer::No,
                })
            }
            Formula::In { var, set } => {
                let vars = sorted(&[var, set]);
                let var = var.clone();
                self.local(vars, move |_, m| match m {
                    [_, _] => Answer::Yes,
                    [v] if *v == var => Answer::No,
                    _ => Answer::Maybe,
                })
            }
            Formula::Edge { from, gamma, to } => self.edge(from, gamma.as_deref(), to),
            Formula::Not(inner) => {
                let (a, vars) = self.go(inner)?;
                let d = dual(&a);
                self.report.push("dual", &d, None);
                Ok((d, vars))
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let conj = matches!(f, Formula::And(_));
                // quantifier-free operands are decided together
                let (local, rest): (Vec<&Formula>, Vec<&Formula>) = fs.iter().partition(|g| is_quantifier_free(g));
                let mut parts: Vec<Formula> = rest.into_iter().cloned().collect();
                match local.len() {
                    0 => {}
                    1 => parts.push(local[0].clone()),
                    _ => {
                        let joined = local.into_iter().cloned().collect();
                        parts.push(if conj { Formula::And(joined) } else { Formula::Or(joined) });
                    }
                }
                if parts.is_empty() {
                    return self.go(if conj { &Formula::True } else { &Formula::False });
                }
                let mut layer = parts.iter().map(|g| self.go(g)).collect::<Result<Vec<_>, _>>()?;
                // balanced, so the length grows with the logarithm of the arity
                while layer.len() > 1 {
                    let mut next = Vec::with_capacity(layer.len().div_ceil(2));
                    let mut it = layer.into_iter();
                    while let Some(x) = it.next() {
                        next.push(match it.next() {
                            Some(y) => self.combine(x, y, conj)?,
                            None => x,
                        });
                    }
                    layer = next;
                }
                Ok(layer.pop().expect("nonempty layer"))
            }
            Formula::Implies(a, b) => self.go(&Formula::Or(vec![Formula::Not(a.clone()), (**b).clone()])),
            Formula::Iff(a, b) => self.go(&Formula::And(vec![
                Formula::Implies(a.clone(), b.clone()),
                Formula::Implies(b.clone(), a.clone()),
            ])),
            Formula::ForallNode(..) | Formula::ForallSet(..) => {
                let (vars, body) = quantifier_block(f);
                if let Some(done) = self.local_quantifier(false, &vars, body)? {
                    return Ok(done);
                }
                let (a, vars) = self.exists_block(&vars, &Formula::Not(Box::new(body.clone())))?;
                let d = dual(&a);
                self.report.push("dual", &d, None);
                Ok((d, vars))
            }
            Formula::ExistsNode(..) | Formula::ExistsSet(..) => {
                let (vars, body) = quantifier_block(f);
                if let Some(done) = self.local_quantifier(true, &vars, body)? {
                    return Ok(done);
                }
                self.exists_block(&vars, body)
            }
        }
    }

    /// `∃ bound (body)` with one intersection and one projection for the whole block.
    fn exists_block(&mut self, bound: &[String], body: &Formula) -> Result<Compiled, MsoError> {
        let (a, vars) = self.go(body)?;
        // graphs are nonempty, so vacuous quantifiers change nothing
        let live: Vec<String> = bound.iter().filter(|v| vars.contains(v)).cloned().collect();
        if live.is_empty() {
            return Ok((a, vars));
        }
        let nodes: Vec<String> = live.iter().filter(|v| !is_set_var(v)).cloned().collect();
        let a = if nodes.is_empty() {
            a
        } else {
            let unique = unique_carriers_automaton(self.sigma, self.gamma, &vars, &nodes);
            let (both, report) = intersection(&a, &unique)?;
            self.trimmed("intersection", both, report)?
        };
        self.project_out(a, &vars, &live)
    }

    /// Two shapes decided without guessing: one node variable over a body
    /// that only reads that node, decided at initialization; and two node
    /// variables whose body is constant unless one edge joins them, decided
    /// by the edge's head from its predecessors in one round.
    fn local_quantifier(&mut self, existential: bool, bound: &[String], body: &Formula) -> Result<Option<Compiled>, MsoError> {
        if !is_quantifier_free(body) || bound.iter().any(|v| is_set_var(v)) {
            return Ok(None);
        }
        let free = body.free_vars();
        if free.iter().any(|v| !is_set_var(v) && !bound.contains(v)) {
            return Ok(None);
        }
        let mut atoms = Vec::new();
        collect_atoms(body, &mut atoms);
        let sets: Vec<String> = free.iter().filter(|v| is_set_var(v)).cloned().collect();
        let classes = self.classes(&sets)?;
        let edges: Vec<&Formula> = atoms.iter().filter(|a| matches!(a, Formula::Edge { .. })).collect();
        let mixed_eq = atoms.iter().any(|a| matches!(a, Formula::Eq(x, y) if x != y));
        let nodes: BTreeSet<&String> = bound.iter().filter(|v| free.contains(*v)).collect();
        let (mut b, labels) = self.builder(&sets);
        let good = b.permanent("good");
        let bad = b.permanent("bad");
        match (nodes.len(), edges.as_slice()) {
            (1, []) if !mixed_eq => {
                let x = nodes.into_iter().next().expect("one variable");
                for (l, class) in labels.iter().zip(&classes) {
                    let holds = eval_local(body, &|v| (v == x).then_some(class), None);
                    b.init(l, if holds { good } else { bad });
                }
            }
            (2, [Formula::Edge { from, gamma, to }]) if from != to && !mixed_eq => {
                let tau = resolve_relation(self.gamma, gamma.as_deref())?;
                let value = |cf: &Class, ct: &Class, e: bool| -> bool {
                    eval_local(body, &|v| if v == from { Some(cf) } else if v == to { Some(ct) } else { None }, Some(e))
                };
                // without the edge the body must be neutral for the quantifier
                if classes.iter().any(|cf| classes.iter().any(|ct| value(cf, ct, false) == existential)) {
                    return Ok(None);
                }
                let heads: Vec<StateId> = (0..classes.len()).map(|i| b.existential(format!("c{i}"))).collect();
                for (i, ct) in classes.iter().enumerate() {
                    b.init(labels.symbol(i), heads[i]);
                    let hits: StateSet =
                        classes.iter().enumerate().filter(|(_, cf)| value(cf, ct, true) == existential).map(|(j, _)| heads[j]).collect();
                    let (hit, miss) = if existential { (good, bad) } else { (bad, good) };
                    if hits.is_empty() {
                        b.rule(heads[i], Guard::True, [miss]);
                    } else {
                        b.rule(heads[i], Guard::any_of(tau, hits.clone()), [hit]);
                        b.rule(heads[i], Guard::none_of(tau, hits), [miss]);
                    }
                }
            }
            _ => return Ok(None),
        }
        b.accepting(if existential { Acceptance::Has(good) } else { Acceptance::not(Acceptance::Has(bad)) });
        let a = b.build().map_err(crate::transforms::TransformError::from)?;
        let (a, _) = trim(&a)?;
        self.report.push("local-quantifier", &a, None);
        Ok(Some((a, sets)))
    }

    /// Label and set memberships of a node, in pair alphabet order.
    fn classes(&self, sets: &[String]) -> Result<Vec<Class>, MsoError> {
        pair_alphabet(self.sigma, sets).iter().map(split_pair_label).collect()
    }

    fn base(&mut self, name: &str, b: &AutomatonBuilder, vars: Vec<String>) -> Result<Compiled, MsoError> {
        let a = b.build().map_err(crate::transforms::TransformError::from)?;
        self.report.push(name, &a, None);
        Ok((a, vars))
    }

    /// Atoms decided at initialization by the node carrying the variables.
    fn local<F>(&mut self, vars: Vec<String>, answer: F) -> Result<Compiled, MsoError>
    where
        F: Fn(&str, &[String]) -> Answer,
    {
        let (mut b, labels) = self.builder(&vars);
        let yes = b.permanent("yes");
        let no = b.permanent("no");
        let maybe = b.permanent("maybe");
        for l in labels.iter() {
            let (a, m) = split_pair_label(l)?;
            let q = match answer(&a, &m) {
                Answer::Yes => yes,
                Answer::No => no,
                Answer::Maybe => maybe,
            };
            b.init(l, q);
        }
        b.accepting(Acceptance::sets([vec![yes], vec![yes, maybe]]));
        self.base("atom", &b, vars)
    }

    /// `x ->[τ] y` needs one round: the node carrying `y` looks for `x` among its τ-predecessors.
    fn edge(&mut self, x: &str, gamma: Option<&str>, y: &str) -> Result<Compiled, MsoError> {
        let tau = resolve_relation(self.gamma, gamma)?;
        let vars = sorted(&[x, y]);
        let (mut b, labels) = self.builder(&vars);
        let yes = b.permanent("yes");
        let no = b.permanent("no");
        let maybe = b.permanent("maybe");
        let at_xy = b.existential("at_xy");
        let at_x = (x != y).then(|| b.existential("at_x"));
        let at_y = (x != y).then(|| b.existential("at_y"));
        for l in labels.iter() {
            let (_, m) = split_pair_label(l)?;
            let q = match (m.len(), at_x, at_y) {
                (0, _, _) => maybe,
                (1, Some(qx), Some(qy)) => {
                    if m[0] == x {
                        qx
                    } else {
                        qy
                    }
                }
                _ => at_xy,
            };
            b.init(l, q);
        }
        if let (Some(qx), Some(qy)) = (at_x, at_y) {
            b.rule(qx, Guard::True, [maybe]);
            b.rule(qy, Guard::has(qx, tau), [yes]).rule(qy, Guard::not(Guard::has(qx, tau)), [no]);
        }
        b.rule(at_xy, Guard::has(at_xy, tau), [yes]).rule(at_xy, Guard::not(Guard::has(at_xy, tau)), [no]);
        b.accepting(Acceptance::sets([vec![yes], vec![yes, maybe]]));
        self.base("edge", &b, vars)
    }

    /// A quantifier-free formula in at most one round. Every node records
    /// which atoms it witnesses; an atom holds iff some node witnesses it,
    /// given that each node variable has exactly one carrier.
    fn quantifier_free(&mut self, f: &Formula) -> Result<Compiled, MsoError> {
        let vars: Vec<String> = f.free_vars().into_iter().collect();
        let mut atoms = Vec::new();
        collect_atoms(f, &mut atoms);
        let mut edges = Vec::new();
        for atom in &atoms {
            match atom {
                Formula::Lab { label, .. } if !self.sigma.contains(label) => {
                    return Err(MsoError::UnknownLabel(label.clone()));
                }
                Formula::Edge { from, gamma, to } => {
                    edges.push((from.clone(), resolve_relation(self.gamma, gamma.as_deref())?, to.clone()));
                }
                _ => {}
            }
        }
        let (mut b, labels) = self.builder(&vars);
        // permanent states keyed by (witnessed atoms, carried edge sources)
        let mut perm: BTreeMap<(Vec<usize>, Vec<String>), StateId> = BTreeMap::new();
        let mut first: BTreeMap<(Vec<usize>, Vec<String>, Vec<String>), StateId> = BTreeMap::new();
        let mut sources_of: Vec<(StateId, Vec<String>)> = Vec::new();
        let mut pending = Vec::new();
        for l in labels.iter() {
            let (a, m) = split_pair_label(l)?;
            let here: Vec<usize> = atoms
                .iter()
                .enumerate()
                .filter(|(_, atom)| match atom {
                    Formula::Lab { label, var } => m.contains(var) && a == *label,
                    Formula::Eq(x, y) => m.contains(x) && m.contains(y),
                    Formula::In { var, set } => m.contains(var) && m.contains(set),
                    _ => false,
                })
                .map(|(i, _)| i)
                .collect();
            let sources: Vec<String> = m.iter().filter(|x| edges.iter().any(|(s, _, _)| s == *x)).cloned().collect();
            let targets: Vec<String> = m.iter().filter(|x| edges.iter().any(|(_, _, t)| t == *x)).cloned().collect();
            let q = if targets.is_empty() {
                let key = (here, sources.clone());
                let next = perm.len();
                *perm.entry(key).or_insert_with(|| {
                    let q = b.permanent(format!("p{next}"));
                    sources_of.push((q, sources));
                    q
                })
            } else {
                let key = (here.clone(), sources.clone(), targets.clone());
                let next = first.len();
                *first.entry(key).or_insert_with(|| {
                    let q = b.existential(format!("s{next}"));
                    sources_of.push((q, sources));
                    pending.push((q, here, targets));
                    q
                })
            };
            b.init(l, q);
        }
        for (q, here, targets) in pending {
            let relevant: Vec<usize> = atoms
                .iter()
                .enumerate()
                .filter(|(_, atom)| matches!(atom, Formula::Edge { to, .. } if targets.contains(to)))
                .map(|(i, _)| i)
                .collect();
            let seen: Vec<Guard> = relevant
                .iter()
                .map(|&i| {
                    let Formula::Edge { from, gamma, .. } = &atoms[i] else { unreachable!() };
                    let tau = resolve_relation(self.gamma, gamma.as_deref())?;
                    let carriers = sources_of.iter().filter(|(_, s)| s.contains(from)).map(|(r, _)| *r).collect();
                    Ok(Guard::any_of(tau, carriers))
                })
                .collect::<Result<_, MsoError>>()?;
            for mask in 0u32..1 << relevant.len() {
                let guard = Guard::and(
                    seen.iter()
                        .enumerate()
                        .map(|(j, g)| if mask >> j & 1 == 1 { g.clone() } else { Guard::not(g.clone()) })
                        .collect(),
                );
                let mut witnessed = here.clone();
                witnessed.extend(relevant.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &i)| i));
                witnessed.sort_unstable();
                let next = perm.len();
                let target = *perm.entry((witnessed, Vec::new())).or_insert_with(|| b.permanent(format!("p{next}")));
                b.rule(q, guard, [target]);
            }
        }
        let witnesses = |i: usize| {
            Acceptance::or(perm.iter().filter(|((w, _), _)| w.contains(&i)).map(|(_, &q)| Acceptance::Has(q)).collect())
        };
        b.accepting(acceptance_of(f, &atoms, &witnesses));
        self.base("quantifier-free", &b, vars)
    }

    fn trimmed(&mut self, name: &str, a: Automaton, report: TransformReport) -> Result<Automaton, MsoError> {
        self.report.push(name, &a, Some(report));
        let (t, report) = trim(&a)?;
        self.report.push("trim", &t, Some(report));
        Ok(t)
    }

    fn combine(&mut self, (a1, v1): Compiled, (a2, v2): Compiled, conj: bool) -> Result<Compiled, MsoError> {
        let mut vars = v1.clone();
        vars.extend(v2.iter().cloned());
        vars.sort();
        vars.dedup();
        let a1 = self.widen(a1, &v1, &vars)?;
        let a2 = self.widen(a2, &v2, &vars)?;
        if !a1.has_universal() && !a2.has_universal() {
            let mode = if conj { ProductMode::And } else { ProductMode::Or };
            let (out, report) = product(&a1, &a2, mode)?;
            return Ok((self.trimmed("product", out, report)?, vars));
        }
        if !a1.has_existential() && !a2.has_existential() {
            let mode = if conj { ProductMode::Or } else { ProductMode::And };
            let (out, report) = product(&dual(&a1), &dual(&a2), mode)?;
            let out = dual(&self.trimmed("product", out, report)?);
            self.report.push("dual", &out, None);
            return Ok((out, vars));
        }
        // agreeing quantifier sequences let the closure skip normal form
        let (a1, _) = make_nonblocking(&a1)?;
        let (a2, _) = make_nonblocking(&a2)?;
        let (a1, a2) = align_levels(&trim(&a1)?.0, &trim(&a2)?.0)?;
        let (out, report) = if conj { intersection(&a1, &a2)? } else { union(&a1, &a2)? };
        let out = self.trimmed(if conj { "intersection" } else { "union" }, out, report)?;
        Ok((out, vars))
    }

    /// Same automaton over `Σ × 2^to`, ignoring the variables outside `from`.
    fn widen(&mut self, a: Automaton, from: &[String], to: &[String]) -> Result<Automaton, MsoError> {
        if from == to {
            return Ok(a);
        }
        let sigma = pair_alphabet(self.sigma, to);
        let out = extend_alphabet(&a, &sigma, &|l| {
            let (s, m) = split_pair_label(l).ok()?;
            let kept: Vec<&String> = m.iter().filter(|v| from.contains(v)).collect();
            Some(pair_label(&s, &kept))
        })?;
        self.report.push("extend-alphabet", &out, None);
        Ok(out)
    }

    /// Projection `⟨a, M⟩ ↦ ⟨a, M ∖ gone⟩`.
    fn project_out(&mut self, a: Automaton, vars: &[String], gone: &[String]) -> Result<Compiled, MsoError> {
        let rest: Vec<String> = vars.iter().filter(|x| !gone.contains(x)).cloned().collect();
        let target = pair_alphabet(self.sigma, &rest);
        let mut h = Vec::with_capacity(a.sigma().len());
        for l in a.sigma().iter() {
            let (s, m) = split_pair_label(l)?;
            let kept: Vec<&String> = m.iter().filter(|x| !gone.contains(x)).collect();
            let image = pair_label(&s, &kept);
            h.push(target.index_of(&image).ok_or(MsoError::PairLabel(image))?);
        }
        let (p, report) = project(&a, &h, &target)?;
        let p = self.trimmed("project", p, report)?;
        Ok((p, rest))
    }
}

/// Label and carried set variables of one node.
type Class = (String, Vec<String>);

/// Truth of a quantifier-free formula whose node variables sit on nodes of
/// the given classes; `edge` is the value of its edge atoms.
fn eval_local<'c>(f: &Formula, class: &dyn Fn(&str) -> Option<&'c Class>, edge: Option<bool>) -> bool {
    let rec = |g: &Formula| eval_local(g, class, edge);
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lab { label, var } => class(var).is_some_and(|(a, _)| a == label),
        Formula::In { var, set } => class(var).is_some_and(|(_, m)| m.contains(set)),
        Formula::Eq(x, y) => x == y,
        Formula::Edge { .. } => edge.expect("edge atom outside the edge shape"),
        Formula::Not(g) => !rec(g),
        Formula::And(fs) => fs.iter().all(rec),
        Formula::Or(fs) => fs.iter().any(rec),
        Formula::Implies(a, b) => !rec(a) || rec(b),
        Formula::Iff(a, b) => rec(a) == rec(b),
        _ => unreachable!("quantifier-free"),
    }
}

/// Variables of a maximal run of quantifiers of one polarity, and the body below it.
fn quantifier_block(f: &Formula) -> (Vec<String>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    let existential = matches!(f, Formula::ExistsNode(..) | Formula::ExistsSet(..));
    loop {
        match cur {
            Formula::ExistsNode(v, body) | Formula::ExistsSet(v, body) if existential => {
                vars.push(v.clone());
                cur = body;
            }
            Formula::ForallNode(v, body) | Formula::ForallSet(v, body) if !existential => {
                vars.push(v.clone());
                cur = body;
            }
            _ => return (vars, cur),
        }
    }
}

fn is_quantifier_free(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Lab { .. } | Formula::Edge { .. } | Formula::Eq(..) | Formula::In { .. } => true,
        Formula::Not(g) => is_quantifier_free(g),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().all(is_quantifier_free),
        Formula::Implies(a, b) | Formula::Iff(a, b) => is_quantifier_free(a) && is_quantifier_free(b),
        _ => false,
    }
}

/// Quantifier-free with at least one connective over an atom.
fn is_compound_quantifier_free(f: &Formula) -> bool {
    matches!(f, Formula::Not(_) | Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..))
        && is_quantifier_free(f)
        && !f.free_vars().is_empty()
}

fn collect_atoms(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Lab { .. } | Formula::Edge { .. } | Formula::Eq(..) | Formula::In { .. } => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Formula::Not(g) => collect_atoms(g, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| collect_atoms(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        _ => {}
    }
}

fn acceptance_of(f: &Formula, atoms: &[Formula], witnesses: &dyn Fn(usize) -> Acceptance) -> Acceptance {
    let rec = |g: &Formula| acceptance_of(g, atoms, witnesses);
    match f {
        Formula::True => Acceptance::True,
        Formula::False => Acceptance::False,
        Formula::Not(g) => Acceptance::not(rec(g)),
        Formula::And(fs) => Acceptance::and(fs.iter().map(rec).collect()),
        Formula::Or(fs) => Acceptance::or(fs.iter().map(rec).collect()),
        Formula::Implies(a, b) => Acceptance::or(vec![Acceptance::not(rec(a)), rec(b)]),
        Formula::Iff(a, b) => Acceptance::iff(rec(a), rec(b)),
        atom => witnesses(atoms.iter().position(|x| x == atom).expect("collected atom")),
    }
}

enum Answer {
    Yes,
    No,
    Maybe,
}

fn sorted<S: AsRef<str>>(vars: &[S]) -> Vec<String> {
    let mut v: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::accepts;
    use crate::graph::{enumerate_graphs, LabeledGraph};
    use crate::mso::{encode_assignment, evaluate_sentence, parse, Assignment};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn label_atom_on_single_nodes() {
        let a = compile(&parse("lab[a](x)").unwrap(), &ab(), &Alphabet::blank()).unwrap();
        for (label, expected) in [("a", true), ("b", false)] {
            let g = LabeledGraph::simple(ab(), &[label], &[]).unwrap();
            let e = encode_assignment(&g, &Assignment::new().with_node("x", 0), &["x".into()]).unwrap();
            assert_eq!(accepts(&a, &e).unwrap(), expected);
        }
    }

    #[test]
    fn exactly_one_carrier() {
        let vars = vec!["x".to_string()];
        let a = one_node_automaton(&Alphabet::blank(), &Alphabet::blank(), &vars, "x");
        let sigma = pair_alphabet(&Alphabet::blank(), &vars);
        for g in enumerate_graphs(4, &sigma, &Alphabet::blank()) {
            let carriers = g.nodes().filter(|&v| g.label_name(v) == "_|{x}").count();
            assert_eq!(accepts(&a, &g).unwrap(), carriers == 1, "{}", g.to_json_string());
        }
    }

    #[test]
    fn existential_label_sentence_matches_evaluation() {
        let f = parse("exists x (lab[a](x))").unwrap();
        let a = compile(&f, &ab(), &Alphabet::blank()).unwrap();
        for g in enumerate_graphs(3, &ab(), &Alphabet::blank()) {
            assert_eq!(accepts(&a, &g).unwrap(), evaluate_sentence(&f, &g).unwrap());
        }
    }

    #[test]
    fn edge_sentences_match_evaluation() {
        for text in ["exists x, y (x -> y & !(x = y))", "forall x (x -> x)", "exists x (forall y (y -> x))"] {
            let f = parse(text).unwrap();
            let a = compile(&f, &Alphabet::blank(), &Alphabet::blank()).unwrap();
            for g in enumerate_graphs(3, &Alphabet::blank(), &Alphabet::blank()) {
                assert_eq!(accepts(&a, &g).unwrap(), evaluate_sentence(&f, &g).unwrap(), "{text} on {}", g.to_json_string());
            }
        }
    }

    #[test]
    fn shortcut_shapes_and_fallbacks_match_evaluation() {
        let texts = [
            "forall x (lab[a](x) | lab[b](x))",
            "exists X (forall x (x in X <=> lab[a](x)) & exists x, y (x -> y & x in X & !(y in X)))",
            "forall x, y (y -> x => lab[a](x) | lab[b](y))",
            "exists x, y (x -> y & x = y)",
            "forall x, y (x -> y | lab[a](x))",
            "exists x (lab[a](x) & forall y (y -> x => lab[b](y)))",
        ];
        for text in texts {
            let f = parse(text).unwrap();
            let a = compile(&f, &ab(), &Alphabet::blank()).unwrap();
            for g in enumerate_graphs(3, &ab(), &Alphabet::blank()) {
                assert_eq!(accepts(&a, &g).unwrap(), evaluate_sentence(&f, &g).unwrap(), "{text} on {}", g.to_json_string());
            }
        }
    }

    #[test]
    fn quantifier_free_body_with_free_variables() {
        let f = parse("x -> y & (y in Y | lab[a](x))").unwrap();
        let a = compile(&f, &ab(), &Alphabet::blank()).unwrap();
        let scope: Vec<String> = ["Y", "x", "y"].map(String::from).to_vec();
        for g in enumerate_graphs(2, &ab(), &Alphabet::blank()) {
            for (x, y, m) in assignments(g.node_count()) {
                let alpha = Assignment::new().with_node("x", x).with_node("y", y).with_set("Y", crate::graph::NodeSubset::from_mask(m));
                let e = encode_assignment(&g, &alpha, &scope).unwrap();
                assert_eq!(accepts(&a, &e).unwrap(), crate::mso::evaluate(&f, &g, &alpha).unwrap());
            }
        }
    }

    fn assignments(n: usize) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for m in 0..1u64 << n {
                    out.push((x, y, m));
                }
            }
        }
        out
    }

    #[test]
    fn block_quantifiers_keep_length_small() {
        let (a, report) = compile_with_report(&crate::fixtures::phi_3color(), &Alphabet::blank(), &Alphabet::blank()).unwrap();
        assert!(a.len() <= 3, "len {}", a.len());
        assert!(report.steps.iter().any(|s| s.construction == "local-quantifier"));
    }
}

//! Union, intersection, projection and alphabet extension.

use super::{make_nonblocking, same_alphabets, to_anf, trim, Draft, TransformError, TransformReport};
use crate::alphabet::Alphabet;
use crate::automaton::{Acceptance, Automaton, Guard, Rule, StateId, StateKind, StateSet};

/// Recognizes `L(a1) ∪ L(a2)`: every node first picks which automaton to
/// follow and mixed choices are routed to a rejecting sink.
pub fn union(a1: &Automaton, a2: &Automaton) -> Result<(Automaton, TransformReport), TransformError> {
    combine(a1, a2, false)
}

/// Recognizes `L(a1) ∩ L(a2)`: the choice is universal and mixed choices
/// are routed to an accepting sink.
pub fn intersection(a1: &Automaton, a2: &Automaton) -> Result<(Automaton, TransformReport), TransformError> {
    combine(a1, a2, true)
}

fn combine(a1: &Automaton, a2: &Automaton, conjunctive: bool) -> Result<(Automaton, TransformReport), TransformError> {
    same_alphabets(a1, a2)?;
    let mut steps = Vec::new();
    let (n1, n2) = normalize_pair(a1, a2, &mut steps)?;

    let mut d = Draft::new(a1.sigma().clone(), a1.gamma().clone());
    let o1 = d.absorb(&n1);
    let o2 = d.absorb(&n2);
    let (choice_kind, sink_name, sink_role) = if conjunctive {
        (StateKind::Universal, "#acc", "accepting sink for mixed choices")
    } else {
        (StateKind::Existential, "#rej", "rejecting sink for mixed choices")
    };
    let choices: Vec<StateId> = (0..a1.sigma().len())
        .map(|i| d.add_fresh(&format!("#u{i}"), choice_kind, &format!("choice state of label {}", a1.sigma().symbol(i))))
        .collect();
    let sink = d.add_fresh(sink_name, StateKind::Permanent, sink_role);
    d.init = choices.clone();
    for (i, &c) in choices.iter().enumerate() {
        let succ: StateSet = [n1.init(i) + o1, n2.init(i) + o2].into_iter().collect();
        d.rules.push(Rule { source: c, guard: Guard::True, successors: succ });
    }

    // Restrict each component's rules to neighbor sets free of the other
    // component's states of the same round; anything else goes to the sink.
    let n_gamma = a1.gamma().len();
    let mut rules = std::mem::take(&mut d.rules);
    let mut extra = Vec::new();
    for (own, other, own_off, other_off) in [(&n1, &n2, o1, o2), (&n2, &n1, o2, o1)] {
        for i in 0..own.len() {
            let mut foreign: StateSet = other.permanent_states().iter().map(|q| q + other_off).collect();
            if i < other.len() {
                foreign = foreign.union(&other.level_states(i).iter().map(|q| q + other_off).collect());
            }
            foreign.insert(sink);
            let pure = Guard::and((0..n_gamma).map(|g| Guard::none_of(g, foreign.clone())).collect());
            for q in own.level_states(i).iter().map(|q| q + own_off) {
                let mut covered = Vec::new();
                for r in rules.iter_mut().filter(|r| r.source == q) {
                    r.guard = Guard::and(vec![r.guard.clone(), pure.clone()]);
                    covered.push(r.guard.clone());
                }
                extra.push(Rule { source: q, guard: Guard::not(Guard::or(covered)), successors: StateSet::singleton(sink) });
            }
        }
    }
    rules.extend(extra.into_iter().filter(|r| r.guard != Guard::False));
    d.rules = rules;

    let p1: StateSet = n1.permanent_states().iter().map(|q| q + o1).collect();
    let p2: StateSet = n2.permanent_states().iter().map(|q| q + o2).collect();
    let total = d.states.len();
    let f1 = n1.accepting().remap(|q| Some(q + o1), n1.siz(), total);
    let f2 = n2.accepting().remap(|q| Some(q + o2), n2.siz(), total);
    let mut family = vec![
        Acceptance::and(vec![Acceptance::Subset(p1.clone()), f1]),
        Acceptance::and(vec![Acceptance::Subset(p2.clone()), f2]),
    ];
    if conjunctive {
        family.push(Acceptance::and(vec![
            Acceptance::not(Acceptance::Subset(p1)),
            Acceptance::not(Acceptance::Subset(p2)),
        ]));
    }
    let (out, fresh) = d.finish(Acceptance::or(family))?;
    let name = if conjunctive { "intersection" } else { "union" };
    let mut report = TransformReport::new(name, &[a1, a2], &[&n1, &n2], &out);
    report.fresh_states = fresh;
    report.steps = steps;
    Ok((out, report))
}

/// Nonblocking and trim, then alternating normal form plus one leading
/// dummy level on `a2` when the quantifier sequences disagree.
fn normalize_pair(
    a1: &Automaton,
    a2: &Automaton,
    steps: &mut Vec<TransformReport>,
) -> Result<(Automaton, Automaton), TransformError> {
    let mut norm = |a: &Automaton| -> Result<Automaton, TransformError> {
        let (nb, r1) = make_nonblocking(a)?;
        let (t, r2) = trim(&nb)?;
        steps.extend([r1, r2]);
        Ok(t)
    };
    let mut n1 = norm(a1)?;
    let mut n2 = norm(a2)?;
    if agree(&n1, &n2) {
        return Ok((n1, n2));
    }
    let (x1, r1) = to_anf(&n1)?;
    let (x2, r2) = to_anf(&n2)?;
    steps.extend([r1, r2]);
    n1 = x1;
    n2 = x2;
    if !agree(&n1, &n2) {
        let (x2, r) = prepend_dummy_level(&n2)?;
        steps.push(r);
        n2 = x2;
    }
    debug_assert!(agree(&n1, &n2));
    Ok((n1, n2))
}

fn agree(a1: &Automaton, a2: &Automaton) -> bool {
    a1.quantifier_sequence().iter().zip(a2.quantifier_sequence()).all(|(x, y)| *x == y)
}

/// New level 0 of the opposite kind whose states forward to the old initial states.
fn prepend_dummy_level(a: &Automaton) -> Result<(Automaton, TransformReport), TransformError> {
    let mut d = Draft::from_automaton(a);
    let mut copy = vec![None; a.siz()];
    for q in a.level_states(0).iter() {
        let c = d.add_fresh(&format!("{}#pre", a.name(q)), a.kind(q).dual(), &format!("dummy predecessor of {}", a.name(q)));
        d.rules.push(Rule { source: c, guard: Guard::True, successors: StateSet::singleton(q) });
        copy[q as usize] = Some(c);
    }
    d.init = d.init.iter().map(|&q| copy[q as usize].unwrap_or(q)).collect();
    let (out, fresh) = d.finish(a.accepting().clone())?;
    let mut report = TransformReport::new("dummy-level", &[a], &[a], &out);
    report.fresh_states = fresh;
    Ok((out, report))
}

/// Recognizes `h(L(a))` for the relabeling `h`, given as the target label
/// index per source label: each node guesses a preimage of its label.
pub fn project(a: &Automaton, h: &[usize], target: &Alphabet) -> Result<(Automaton, TransformReport), TransformError> {
    if h.len() != a.sigma().len() {
        let missing = a.sigma().symbol(h.len().min(a.sigma().len().saturating_sub(1)));
        return Err(TransformError::Unmapped(missing.to_string()));
    }
    if let Some(i) = h.iter().position(|&b| b >= target.len()) {
        return Err(TransformError::UnknownTarget(a.sigma().symbol(i).to_string()));
    }
    let (t, step) = trim(a)?;
    let mut d = Draft::from_automaton(&t);
    d.sigma = target.clone();
    let guesses: Vec<StateId> = (0..target.len())
        .map(|b| d.add_fresh(&format!("#p{b}"), StateKind::Existential, &format!("guess state of label {}", target.symbol(b))))
        .collect();
    for (b, &qb) in guesses.iter().enumerate() {
        let succ: StateSet = (0..h.len()).filter(|&x| h[x] == b).map(|x| t.init(x)).collect();
        if !succ.is_empty() {
            d.rules.push(Rule { source: qb, guard: Guard::True, successors: succ });
        }
    }
    d.init = guesses;
    let (out, fresh) = d.finish(t.accepting().clone())?;
    let mut report = TransformReport::new("project", &[a], &[&t], &out);
    report.fresh_states = fresh;
    report.steps.push(step);
    Ok((out, report))
}

/// Same automaton over `sigma`, where label `b` is initialized like
/// `preimage(b)` of the old alphabet.
pub fn extend_alphabet(
    a: &Automaton,
    sigma: &Alphabet,
    preimage: &dyn Fn(&str) -> Option<String>,
) -> Result<Automaton, TransformError> {
    let mut parts = a.parts().clone();
    parts.init = Vec::with_capacity(sigma.len());
    for b in sigma.iter() {
        let old = preimage(b).ok_or_else(|| TransformError::Unmapped(b.to_string()))?;
        let i = a.sigma().index_of(&old).ok_or_else(|| TransformError::UnknownTarget(old.clone()))?;
        parts.init.push(a.init(i));
    }
    parts.sigma = sigma.clone();
    Ok(Automaton::new(parts)?)
}

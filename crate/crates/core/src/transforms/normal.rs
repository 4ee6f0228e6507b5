//! Nonblocking, trim and alternating normal forms, and the dual automaton.

use super::{Draft, TransformError, TransformReport};
use crate::automaton::{Acceptance, Automaton, Guard, Rule, StateId, StateKind, StateSet};

/// Routes every blocked nonpermanent state of level `i` to a fresh permanent
/// stop state; a final set containing stop states is accepting iff the lowest
/// stopped level is universal.
pub fn make_nonblocking(a: &Automaton) -> Result<(Automaton, TransformReport), TransformError> {
    if a.is_empty() {
        let mut report = TransformReport::new("nonblocking", &[a], &[a], a);
        report.construction = "nonblocking".into();
        return Ok((a.clone(), report));
    }
    let mut d = Draft::from_automaton(a);
    let merged = !a.has_existential() || !a.has_universal();
    let stops: Vec<StateId> = if merged {
        let q = d.add_fresh("#stop", StateKind::Permanent, "stop state of every level");
        vec![q; a.len()]
    } else {
        (0..a.len())
            .map(|i| d.add_fresh(&format!("#stop{i}"), StateKind::Permanent, &format!("stop state of level {i}")))
            .collect()
    };
    for q in a.nonpermanent_states().iter() {
        let covered = Guard::or(a.rules_of(q).map(|r| r.guard.clone()).collect());
        let blocked = Guard::not(covered);
        if blocked != Guard::False {
            d.rules.push(Rule { source: q, guard: blocked, successors: StateSet::singleton(stops[a.level(q)]) });
        }
    }
    let original = Acceptance::and(vec![Acceptance::Subset(a.permanent_states()), a.accepting().clone()]);
    let stopped = if merged {
        if a.has_universal() {
            Acceptance::Has(stops[0])
        } else {
            Acceptance::False
        }
    } else {
        Acceptance::or(
            (0..a.len())
                .filter(|&j| a.level_kind(j) == Some(StateKind::Universal))
                .map(|j| {
                    let mut parts = vec![Acceptance::Has(stops[j])];
                    parts.extend((0..j).map(|i| Acceptance::not(Acceptance::Has(stops[i]))));
                    Acceptance::and(parts)
                })
                .collect(),
        )
    };
    let (out, fresh) = d.finish(Acceptance::or(vec![original, stopped]))?;
    let mut report = TransformReport::new("nonblocking", &[a], &[a], &out);
    report.fresh_states = fresh;
    Ok((out, report))
}

/// Removes states that are not potentially reachable.
///
/// A rule fires in the fixpoint once its guard is satisfiable by neighbor
/// sets drawn from the reachable states of its source's round.
pub fn trim(a: &Automaton) -> Result<(Automaton, TransformReport), TransformError> {
    let n = a.siz();
    let mut reach = vec![false; n];
    for i in 0..a.sigma().len() {
        reach[a.init(i) as usize] = true;
    }
    let mut fired = vec![false; a.rules().len()];
    loop {
        let mut changed = false;
        for (ri, r) in a.rules().iter().enumerate() {
            if fired[ri] || !reach[r.source as usize] {
                continue;
            }
            let lvl = a.level(r.source);
            let domain: StateSet = a
                .state_ids()
                .filter(|&q| reach[q as usize] && (a.is_permanent(q) || a.level(q) == lvl))
                .collect();
            if a.sat(&r.guard, &domain).is_possible() {
                fired[ri] = true;
                changed = true;
                for s in r.successors.iter() {
                    reach[s as usize] = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if !a.state_ids().any(|q| reach[q as usize] && a.is_permanent(q)) {
        // Keep one permanent state so the result stays well-formed.
        let p = a.permanent_states().iter().next().expect("validated automata have permanent states");
        reach[p as usize] = true;
    }
    if reach.iter().all(|&r| r) && fired.iter().zip(a.rules()).all(|(&f, _)| f) {
        let report = TransformReport::new("trim", &[a], &[a], a);
        return Ok((a.clone(), report));
    }

    let mut map = vec![None; n];
    let mut parts = a.parts().clone();
    parts.states.clear();
    for q in a.state_ids().filter(|&q| reach[q as usize]) {
        map[q as usize] = Some(parts.states.len() as StateId);
        parts.states.push(a.states()[q as usize].clone());
    }
    let f = |q: StateId| map[q as usize];
    parts.rules = a
        .rules()
        .iter()
        .zip(&fired)
        .filter(|(_, &fired)| fired)
        .map(|(r, _)| Rule {
            source: f(r.source).expect("fired rules have reachable sources"),
            guard: r.guard.remap(f),
            successors: r.successors.filter_map(f),
        })
        .collect();
    parts.init = parts.init.iter().map(|&q| f(q).expect("initial states are reachable")).collect();
    parts.accepting = a.accepting().remap(f, n, parts.states.len());
    let out = Automaton::new(parts)?;
    let report = TransformReport::new("trim", &[a], &[a], &out);
    Ok((out, report))
}

/// Inserts a copy level of the opposite kind between any two consecutive
/// nonpermanent levels of the same kind.
pub fn to_anf(a: &Automaton) -> Result<(Automaton, TransformReport), TransformError> {
    let seq = a.quantifier_sequence();
    let doubled: Vec<usize> = (0..seq.len().saturating_sub(1)).filter(|&i| seq[i] == seq[i + 1]).map(|i| i + 1).collect();
    if doubled.is_empty() {
        return Ok((a.clone(), TransformReport::new("anf", &[a], &[a], a)));
    }
    let mut d = Draft::from_automaton(a);
    let mut copy: Vec<Option<StateId>> = vec![None; a.siz()];
    for &i in &doubled {
        for q in a.level_states(i).iter() {
            let name = format!("{}#anf", a.name(q));
            let c = d.add_fresh(&name, a.kind(q).dual(), &format!("copy of {} on an inserted level", a.name(q)));
            copy[q as usize] = Some(c);
        }
    }
    for r in d.rules.iter_mut() {
        r.successors = r.successors.iter().map(|q| copy[q as usize].unwrap_or(q)).collect();
    }
    for q in a.state_ids() {
        if let Some(c) = copy[q as usize] {
            d.rules.push(Rule { source: c, guard: Guard::True, successors: StateSet::singleton(q) });
        }
    }
    let (out, fresh) = d.finish(a.accepting().clone())?;
    let mut report = TransformReport::new("anf", &[a], &[a], &out);
    report.fresh_states = fresh;
    Ok((out, report))
}

/// Pads both automata with forwarding levels so that their quantifier
/// sequences agree on the common prefix. The padding follows a shortest
/// common supersequence, so it is never longer than alternating normal form.
pub fn align_levels(a1: &Automaton, a2: &Automaton) -> Result<(Automaton, Automaton), TransformError> {
    let (s1, s2) = (a1.quantifier_sequence(), a2.quantifier_sequence());
    let common = shortest_common_supersequence(&s1, &s2);
    Ok((pad_levels(a1, &common)?, pad_levels(a2, &common)?))
}

fn shortest_common_supersequence(x: &[StateKind], y: &[StateKind]) -> Vec<StateKind> {
    let (n, m) = (x.len(), y.len());
    // best[i][j]: length of a shortest supersequence of x[i..] and y[j..]
    let mut best = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            best[i][j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else if x[i] == y[j] {
                1 + best[i + 1][j + 1]
            } else {
                1 + best[i + 1][j].min(best[i][j + 1])
            };
        }
    }
    let (mut i, mut j, mut out) = (0, 0, Vec::with_capacity(best[0][0]));
    while i < n || j < m {
        if i < n && j < m && x[i] == y[j] {
            out.push(x[i]);
            i += 1;
            j += 1;
        } else if j == m || (i < n && best[i + 1][j] <= best[i][j + 1]) {
            out.push(x[i]);
            i += 1;
        } else {
            out.push(y[j]);
            j += 1;
        }
    }
    out
}

/// Inserts forwarding levels so that the quantifier sequence becomes a
/// prefix of `target`, which must contain it as a subsequence.
fn pad_levels(a: &Automaton, target: &[StateKind]) -> Result<Automaton, TransformError> {
    let seq = a.quantifier_sequence();
    // kinds of the levels inserted in front of each original level
    let mut gaps: Vec<Vec<StateKind>> = vec![Vec::new(); seq.len()];
    let mut t = 0;
    for (i, k) in seq.iter().enumerate() {
        while target[t] != *k {
            gaps[i].push(target[t]);
            t += 1;
        }
        t += 1;
    }
    if gaps.iter().all(Vec::is_empty) {
        return Ok(a.clone());
    }
    let mut d = Draft::from_automaton(a);
    let mut head: Vec<Option<StateId>> = vec![None; a.siz()];
    let mut chains = Vec::new();
    for (i, kinds) in gaps.iter().enumerate().filter(|(_, k)| !k.is_empty()) {
        for q in a.level_states(i).iter() {
            let mut next = q;
            for (j, &kind) in kinds.iter().enumerate().rev() {
                let c = d.add_fresh(&format!("{}#pad{j}", a.name(q)), kind, &format!("forwarding copy of {}", a.name(q)));
                chains.push(Rule { source: c, guard: Guard::True, successors: StateSet::singleton(next) });
                next = c;
            }
            head[q as usize] = Some(next);
        }
    }
    for r in d.rules.iter_mut() {
        r.successors = r.successors.iter().map(|q| head[q as usize].unwrap_or(q)).collect();
    }
    d.rules.extend(chains);
    d.init = d.init.iter().map(|&q| head[q as usize].unwrap_or(q)).collect();
    let (out, _) = d.finish(a.accepting().clone())?;
    Ok(out)
}

/// Swaps existential and universal states and complements the accepting family.
pub fn dual(a: &Automaton) -> Automaton {
    let mut parts = a.parts().clone();
    for s in &mut parts.states {
        s.kind = s.kind.dual();
    }
    parts.accepting = Acceptance::not(parts.accepting);
    Automaton::new(parts).expect("dualization preserves well-formedness")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::accepts;
    use crate::graph::enumerate_graphs;

    #[test]
    fn supersequence_is_shortest() {
        use StateKind::{Existential as E, Universal as U};
        assert_eq!(shortest_common_supersequence(&[E, U], &[U, E]).len(), 3);
        assert_eq!(shortest_common_supersequence(&[E, U, E], &[U]), vec![E, U, E]);
        assert_eq!(shortest_common_supersequence(&[], &[U, U]), vec![U, U]);
    }

    #[test]
    fn aligned_automata_agree_and_keep_their_languages() {
        let a1 = fixtures::a_centric();
        let a2 = fixtures::a_conn();
        let (b1, b2) = align_levels(&a1, &a2).unwrap();
        let (s1, s2) = (b1.quantifier_sequence(), b2.quantifier_sequence());
        assert!(s1.iter().zip(&s2).all(|(x, y)| x == y));
        assert!(b1.len() <= a1.len() + a2.len());
        for (a, b) in [(&a1, &b1), (&a2, &b2)] {
            for g in enumerate_graphs(3, a.sigma(), a.gamma()) {
                assert_eq!(accepts(a, &g).unwrap(), accepts(b, &g).unwrap());
            }
        }
    }
}

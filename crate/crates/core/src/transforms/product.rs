//! Synchronous product of automata without universal states, and
//! complementation of deterministic automata.

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::{make_nonblocking, same_alphabets, trim, Draft, TransformError, TransformReport};
use crate::automaton::{classify, Acceptance, Automaton, Guard, Rule, StateId, StateKind, StateSet, Variant};

/// Largest number of component subsets a cardinality guard may expand into.
pub const CARD_EXPANSION_CAP: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    And,
    Or,
}

/// Pair automaton running both inputs in lockstep; each component reads
/// the projection of the neighbor sets onto its own states. Only pairs
/// reachable from the initial pairs are built.
pub fn product(a1: &Automaton, a2: &Automaton, mode: ProductMode) -> Result<(Automaton, TransformReport), TransformError> {
    same_alphabets(a1, a2)?;
    if a1.has_universal() || a2.has_universal() {
        return Err(TransformError::UniversalStates);
    }
    let mut steps = Vec::new();
    let mut norm = |a: &Automaton| -> Result<Automaton, TransformError> {
        let (nb, r1) = make_nonblocking(a)?;
        let (t, r2) = trim(&nb)?;
        steps.extend([r1, r2]);
        Ok(t)
    };
    let n1 = norm(a1)?;
    let n2 = norm(a2)?;
    let comps = [&n1, &n2];

    // Local rules per component state: permanent states keep themselves.
    let local = |a: &Automaton, q: StateId| -> Vec<(Guard, StateSet)> {
        if a.is_permanent(q) {
            vec![(Guard::True, StateSet::singleton(q))]
        } else {
            a.rules_of(q).map(|r| (r.guard.clone(), r.successors.clone())).collect()
        }
    };

    let mut index: FxHashMap<(StateId, StateId), StateId> = FxHashMap::default();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut intern = |p: (StateId, StateId), pairs: &mut Vec<(StateId, StateId)>| -> StateId {
        *index.entry(p).or_insert_with(|| {
            pairs.push(p);
            (pairs.len() - 1) as StateId
        })
    };
    let init: Vec<StateId> = (0..a1.sigma().len()).map(|a| intern((n1.init(a), n2.init(a)), &mut pairs)).collect();
    let mut pair_rules: Vec<(StateId, usize, usize, Vec<StateId>)> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (q1, q2) = pairs[i];
        if !(n1.is_permanent(q1) && n2.is_permanent(q2)) {
            let (l1, l2) = (local(&n1, q1), local(&n2, q2));
            for (j1, (_, s1)) in l1.iter().enumerate() {
                for (j2, (_, s2)) in l2.iter().enumerate() {
                    let succ = s1.iter().flat_map(|x| s2.iter().map(move |y| (x, y))).collect::<Vec<_>>();
                    let ids = succ.into_iter().map(|p| intern(p, &mut pairs)).collect();
                    pair_rules.push((i as StateId, j1, j2, ids));
                }
            }
        }
        i += 1;
    }

    let mut d = Draft::new(a1.sigma().clone(), a1.gamma().clone());
    for &(q1, q2) in &pairs {
        let kind = if n1.is_permanent(q1) && n2.is_permanent(q2) { StateKind::Permanent } else { StateKind::Existential };
        d.add(&format!("[{};{}]", n1.name(q1), n2.name(q2)), kind);
    }
    d.init = init;

    // Pair states per component state.
    let mut with: [Vec<StateSet>; 2] = [vec![StateSet::new(); n1.siz()], vec![StateSet::new(); n2.siz()]];
    for (p, &(q1, q2)) in pairs.iter().enumerate() {
        with[0][q1 as usize].insert(p as StateId);
        with[1][q2 as usize].insert(p as StateId);
    }
    let mut cache: FxHashMap<(usize, StateId, usize), Guard> = FxHashMap::default();
    for (p, j1, j2, succ) in pair_rules {
        let (q1, q2) = pairs[p as usize];
        let g1 = &local(&n1, q1)[j1].0;
        let g2 = &local(&n2, q2)[j2].0;
        let mut proj = |k: usize, q: StateId, j: usize, g: &Guard| -> Result<Guard, TransformError> {
            if let Some(x) = cache.get(&(k, q, j)) {
                return Ok(x.clone());
            }
            let x = project_guard(g, &with[k], comps[k].siz())?;
            cache.insert((k, q, j), x.clone());
            Ok(x)
        };
        let guard = Guard::and(vec![proj(0, q1, j1, g1)?, proj(1, q2, j2, g2)?]);
        if guard != Guard::False {
            d.rules.push(Rule { source: p, guard, successors: succ.into_iter().collect() });
        }
    }

    let image = |k: usize| -> Acceptance {
        let a = comps[k];
        let map = pairs
            .iter()
            .map(|&(q1, q2)| {
                let q = if k == 0 { q1 } else { q2 };
                (n1.is_permanent(q1) && n2.is_permanent(q2)).then_some(q)
            })
            .collect();
        Acceptance::Image {
            map,
            names: a.states().iter().map(|s| s.name.clone()).collect(),
            inner: Box::new(a.accepting().clone()),
        }
    };
    let family = match mode {
        ProductMode::And => Acceptance::and(vec![image(0), image(1)]),
        ProductMode::Or => Acceptance::or(vec![image(0), image(1)]),
    };
    let (out, _) = d.finish(family)?;
    let name = match mode {
        ProductMode::And => "product-and",
        ProductMode::Or => "product-or",
    };
    let mut report = TransformReport::new(name, &[a1, a2], &[&n1, &n2], &out);
    report.steps = steps;
    Ok((out, report))
}

/// Rewrites a component guard over pair states: a component atom holds iff
/// it holds on the projection `{q | some pair with component q is in S_γ}`.
fn project_guard(g: &Guard, with: &[StateSet], n: usize) -> Result<Guard, TransformError> {
    let all = |set: &StateSet| -> StateSet {
        let mut out = StateSet::new();
        for q in set.iter() {
            out = out.union(&with[q as usize]);
        }
        out
    };
    Ok(match g {
        Guard::True | Guard::False => g.clone(),
        Guard::Has { state, gamma } => Guard::any_of(*gamma, with[*state as usize].clone()),
        Guard::NoneOf { gamma, set } => Guard::none_of(*gamma, all(set)),
        Guard::Eq { gamma, set } => eq_projection(*gamma, set, with, n),
        Guard::Card { gamma, cmp, k } => {
            let present: Vec<StateId> = (0..n as StateId).filter(|&q| !with[q as usize].is_empty()).collect();
            if present.len() >= usize::BITS as usize - 1 || (1usize << present.len()) > CARD_EXPANSION_CAP {
                return Err(TransformError::CardExpansion { states: present.len(), cap: CARD_EXPANSION_CAP });
            }
            let mut options = Vec::new();
            for m in 0usize..(1 << present.len()) {
                if cmp.holds(m.count_ones() as usize, *k) {
                    let t: StateSet = present.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &q)| q).collect();
                    options.push(eq_projection(*gamma, &t, with, n));
                }
            }
            Guard::or(options)
        }
        Guard::Not(inner) => Guard::not(project_guard(inner, with, n)?),
        Guard::And(gs) => Guard::and(gs.iter().map(|x| project_guard(x, with, n)).collect::<Result<_, _>>()?),
        Guard::Or(gs) => Guard::or(gs.iter().map(|x| project_guard(x, with, n)).collect::<Result<_, _>>()?),
    })
}

/// `prj(S_γ) = set`
fn eq_projection(gamma: usize, set: &StateSet, with: &[StateSet], n: usize) -> Guard {
    let mut parts = Vec::with_capacity(set.len() + 1);
    let mut outside = StateSet::new();
    for q in (0..n as StateId).filter(|&q| !set.contains(q)) {
        outside = outside.union(&with[q as usize]);
    }
    parts.push(Guard::none_of(gamma, outside));
    for q in set.iter() {
        parts.push(Guard::any_of(gamma, with[q as usize].clone()));
    }
    Guard::and(parts)
}

/// Complements the accepting family of a deterministic nonblocking automaton.
pub fn complement_ddga(a: &Automaton) -> Result<Automaton, TransformError> {
    match classify(a) {
        Variant::Ddga => Ok(a.with_accepting(Acceptance::not(a.accepting().clone()))?),
        v => Err(TransformError::NotDeterministic(v)),
    }
}

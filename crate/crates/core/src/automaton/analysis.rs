//! Static guard analysis: satisfiability over level-consistent neighbor
//! families, syntactic completeness, determinism and classification.

use serde::Serialize;

use super::{Automaton, Guard, StateId, StateSet};

/// Largest number of class-count combinations tried by [`Automaton::sat`].
pub const SAT_ENUMERATION_CAP: usize = 1 << 16;

/// Outcome of a satisfiability query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sat {
    /// Witness family, one set per edge symbol.
    Yes(Vec<StateSet>),
    No,
    Unknown,
}

impl Sat {
    pub fn is_possible(&self) -> bool {
        !matches!(self, Sat::No)
    }
}

/// States that may occur in some incoming-neighbor set at each round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardDomain {
    pub per_level: Vec<StateSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Completeness {
    Complete,
    Incomplete { state: String, witness: Vec<Vec<String>> },
    Unknown { state: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Determinism {
    Deterministic,
    Nondeterministic { state: String, witness: Vec<Vec<String>> },
    Unverified { state: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    Adga,
    Ndga,
    Ddga,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub variant: Variant,
    pub determinism: Determinism,
    pub nonblocking: crate::transforms::NonblockingCertificate,
}

impl Automaton {
    /// Permanent states that may be present at each round `0..=len`.
    pub fn permanent_by_round(&self) -> Vec<StateSet> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut cur: StateSet = (0..self.sigma().len()).map(|a| self.init(a)).filter(|&q| self.is_permanent(q)).collect();
        out.push(cur.clone());
        for i in 0..self.len() {
            for r in self.rules() {
                if self.level(r.source) == i {
                    cur = cur.union(&r.successors.iter().filter(|&q| self.is_permanent(q)).collect());
                }
            }
            out.push(cur.clone());
        }
        out
    }

    /// `lev_i ∪ perm_i` for every round `i`.
    pub fn guard_domain(&self) -> GuardDomain {
        let perm = self.permanent_by_round();
        let per_level = (0..=self.len())
            .map(|i| if i == self.len() { perm[i].clone() } else { self.level_states(i).union(&perm[i]) })
            .collect();
        GuardDomain { per_level }
    }

    /// Permanent states syntactically reachable from each state.
    pub fn reachable_permanent(&self) -> Vec<StateSet> {
        let mut out = vec![StateSet::new(); self.siz()];
        let mut order: Vec<StateId> = self.state_ids().collect();
        order.sort_by_key(|&q| std::cmp::Reverse(self.level(q)));
        for q in order {
            out[q as usize] = if self.is_permanent(q) {
                StateSet::singleton(q)
            } else {
                let mut acc = StateSet::new();
                for r in self.rules_of(q) {
                    for s in r.successors.iter() {
                        acc = acc.union(&out[s as usize]);
                    }
                }
                acc
            };
        }
        out
    }

    /// Exact satisfiability of `g` over families with every `S_γ ⊆ domain`.
    ///
    /// States of `domain` are grouped per edge symbol into classes that no
    /// atom distinguishes. Only the number of members taken from each class
    /// matters, and without cardinality atoms the counts `0`, `1` and the
    /// class size realize every atom valuation.
    pub fn sat(&self, g: &Guard, domain: &StateSet) -> Sat {
        sat(g, domain, self.gamma().len())
    }

    /// Whether every nonpermanent state has a matching rule for every level-consistent family.
    pub fn completeness(&self) -> Completeness {
        let dom = self.guard_domain();
        for q in self.nonpermanent_states().iter() {
            let any = Guard::or(self.rules_of(q).map(|r| r.guard.clone()).collect());
            match self.sat(&Guard::not(any), &dom.per_level[self.level(q)]) {
                Sat::No => {}
                Sat::Yes(w) => {
                    return Completeness::Incomplete { state: self.name(q).to_string(), witness: self.family_names(&w) }
                }
                Sat::Unknown => return Completeness::Unknown { state: self.name(q).to_string() },
            }
        }
        Completeness::Complete
    }

    /// Whether `|δ(q,S)| ≤ 1` for every level-consistent family.
    pub fn determinism(&self) -> Determinism {
        let dom = self.guard_domain();
        let mut unverified = None;
        for q in self.nonpermanent_states().iter() {
            let d = &dom.per_level[self.level(q)];
            let rules: Vec<_> = self.rules_of(q).collect();
            let mut check = |g: Guard| -> Option<Determinism> {
                match self.sat(&g, d) {
                    Sat::No => None,
                    Sat::Yes(w) => Some(Determinism::Nondeterministic {
                        state: self.name(q).to_string(),
                        witness: self.family_names(&w),
                    }),
                    Sat::Unknown => {
                        unverified.get_or_insert_with(|| self.name(q).to_string());
                        None
                    }
                }
            };
            for (i, r) in rules.iter().enumerate() {
                if r.successors.len() > 1 {
                    if let Some(v) = check(r.guard.clone()) {
                        return v;
                    }
                }
                for r2 in &rules[i + 1..] {
                    if r.successors != r2.successors {
                        if let Some(v) = check(Guard::and(vec![r.guard.clone(), r2.guard.clone()])) {
                            return v;
                        }
                    }
                }
            }
        }
        match unverified {
            Some(state) => Determinism::Unverified { state },
            None => Determinism::Deterministic,
        }
    }

    fn family_names(&self, family: &[StateSet]) -> Vec<Vec<String>> {
        family.iter().map(|s| s.iter().map(|q| self.name(q).to_string()).collect()).collect()
    }
}

/// ADGA if universal states exist; DDGA if deterministic and nonblocking; NDGA otherwise.
pub fn classify(a: &Automaton) -> Variant {
    classify_detailed(a).variant
}

pub fn classify_detailed(a: &Automaton) -> Classification {
    use crate::transforms::{is_nonblocking, NonblockingCertificate, DEFAULT_NONBLOCKING_UNIVERSE};
    if a.has_universal() {
        return Classification {
            variant: Variant::Adga,
            determinism: a.determinism(),
            nonblocking: NonblockingCertificate::NotChecked,
        };
    }
    let determinism = a.determinism();
    if determinism != Determinism::Deterministic {
        return Classification { variant: Variant::Ndga, determinism, nonblocking: NonblockingCertificate::NotChecked };
    }
    let nonblocking = is_nonblocking(a, DEFAULT_NONBLOCKING_UNIVERSE);
    let variant = if nonblocking.holds() { Variant::Ddga } else { Variant::Ndga };
    Classification { variant, determinism, nonblocking }
}

pub(crate) fn sat(g: &Guard, domain: &StateSet, n_gamma: usize) -> Sat {
    // Mention sets and cardinality flags per edge symbol.
    let mut mentions: Vec<Vec<StateSet>> = vec![Vec::new(); n_gamma];
    let mut card = vec![false; n_gamma];
    g.for_each_atom(&mut |atom| match atom {
        Guard::Has { state, gamma } => mentions[*gamma].push(StateSet::singleton(*state)),
        Guard::Eq { gamma, set } | Guard::NoneOf { gamma, set } => mentions[*gamma].push(set.clone()),
        Guard::Card { gamma, .. } => card[*gamma] = true,
        _ => {}
    });

    // Classes of indistinguishable domain states, each with its count choices.
    let mut classes: Vec<(usize, Vec<StateId>, Vec<usize>)> = Vec::new();
    for gamma in 0..n_gamma {
        let mut groups: Vec<(Vec<bool>, Vec<StateId>)> = Vec::new();
        for q in domain.iter() {
            let sig: Vec<bool> = mentions[gamma].iter().map(|m| m.contains(q)).collect();
            match groups.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, members)) => members.push(q),
                None => groups.push((sig, vec![q])),
            }
        }
        for (_, members) in groups {
            let n = members.len();
            let counts = if card[gamma] {
                (0..=n).collect()
            } else if n >= 2 {
                vec![0, 1, n]
            } else {
                vec![0, 1]
            };
            classes.push((gamma, members, counts));
        }
    }

    let total = classes.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.2.len()));
    let capped = total.map_or(true, |t| t > SAT_ENUMERATION_CAP);
    let mut idx = vec![0usize; classes.len()];
    let mut tried = 0usize;
    loop {
        let mut family: Vec<Vec<StateId>> = vec![Vec::new(); n_gamma];
        for (c, &i) in classes.iter().zip(&idx) {
            family[c.0].extend_from_slice(&c.1[..c.2[i]]);
        }
        let family: Vec<StateSet> = family.into_iter().map(|v| v.into_iter().collect()).collect();
        if g.eval(&family) {
            return Sat::Yes(family);
        }
        tried += 1;
        if capped && tried >= SAT_ENUMERATION_CAP {
            return Sat::Unknown;
        }
        let mut k = classes.len();
        loop {
            if k == 0 {
                return Sat::No;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < classes[k].2.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

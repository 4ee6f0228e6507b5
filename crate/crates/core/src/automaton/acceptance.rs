//! Symbolic families of accepting sets `𝔽 ⊆ 2^{Q_P}`.
//!
//! A family is a predicate on the set `F` of permanent states present in a
//! permanent configuration. Complements stay symbolic, so dualization never
//! materializes `2^{Q_P} ∖ 𝔽`.

use thiserror::Error;

use super::types::{Cmp, StateId, StateSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Acceptance {
    True,
    False,
    /// `F` is one of the listed sets.
    Sets(Vec<StateSet>),
    /// `q ∈ F`
    Has(StateId),
    /// `F ⊆ set`
    Subset(StateSet),
    /// `|F| cmp k`
    Card(Cmp, usize),
    Not(Box<Acceptance>),
    And(Vec<Acceptance>),
    Or(Vec<Acceptance>),
    /// `inner` evaluated on the image of `F` under `map`, false if some
    /// member of `F` has no image. `inner` refers to indices into `names`.
    Image { map: Vec<Option<StateId>>, names: Vec<String>, inner: Box<Acceptance> },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("accepting family over {permanent} permanent states exceeds the expansion cap of {cap} subsets")]
pub struct ExpansionCapExceeded {
    pub permanent: usize,
    pub cap: usize,
}

/// Three-valued outlook of a family given the possible final states of each node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outlook {
    pub possible: bool,
    pub certain: bool,
}

impl Acceptance {
    pub fn sets<I, S>(sets: I) -> Acceptance
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = StateId>,
    {
        let mut list: Vec<StateSet> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        list.sort();
        list.dedup();
        Acceptance::Sets(list)
    }

    pub fn not(a: Acceptance) -> Acceptance {
        match a {
            Acceptance::True => Acceptance::False,
            Acceptance::False => Acceptance::True,
            Acceptance::Not(inner) => *inner,
            other => Acceptance::Not(Box::new(other)),
        }
    }

    pub fn and(parts: Vec<Acceptance>) -> Acceptance {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Acceptance::True => {}
                Acceptance::False => return Acceptance::False,
                Acceptance::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Acceptance::True,
            1 => out.pop().expect("one element"),
            _ => Acceptance::And(out),
        }
    }

    pub fn or(parts: Vec<Acceptance>) -> Acceptance {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Acceptance::False => {}
                Acceptance::True => return Acceptance::True,
                Acceptance::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Acceptance::False,
            1 => out.pop().expect("one element"),
            _ => Acceptance::Or(out),
        }
    }

    pub fn iff(a: Acceptance, b: Acceptance) -> Acceptance {
        Acceptance::or(vec![
            Acceptance::and(vec![a.clone(), b.clone()]),
            Acceptance::and(vec![Acceptance::not(a), Acceptance::not(b)]),
        ])
    }

    /// Membership of a sorted, duplicate-free set.
    pub fn contains(&self, f: &[StateId]) -> bool {
        match self {
            Acceptance::True => true,
            Acceptance::False => false,
            Acceptance::Sets(list) => list.iter().any(|s| s.as_slice() == f),
            Acceptance::Has(q) => f.binary_search(q).is_ok(),
            Acceptance::Subset(set) => f.iter().all(|&q| set.contains(q)),
            Acceptance::Card(cmp, k) => cmp.holds(f.len(), *k),
            Acceptance::Not(a) => !a.contains(f),
            Acceptance::And(parts) => parts.iter().all(|a| a.contains(f)),
            Acceptance::Or(parts) => parts.iter().any(|a| a.contains(f)),
            Acceptance::Image { map, inner, .. } => {
                let mut image = Vec::with_capacity(f.len());
                for &q in f {
                    match map.get(q as usize).copied().flatten() {
                        Some(t) => image.push(t),
                        None => return false,
                    }
                }
                image.sort_unstable();
                image.dedup();
                inner.contains(&image)
            }
        }
    }

    /// Renames states into a space of `new_len` states; members mapped to
    /// `None` are removed, which makes every set containing them non-accepting.
    pub fn remap<F: Fn(StateId) -> Option<StateId> + Copy>(&self, f: F, old_len: usize, new_len: usize) -> Acceptance {
        match self {
            Acceptance::True | Acceptance::False | Acceptance::Card(..) => self.clone(),
            Acceptance::Sets(list) => Acceptance::Sets({
                let mut out: Vec<StateSet> = list
                    .iter()
                    .filter_map(|s| {
                        let m = s.filter_map(f);
                        (m.len() == s.len()).then_some(m)
                    })
                    .collect();
                out.sort();
                out
            }),
            Acceptance::Has(q) => match f(*q) {
                Some(r) => Acceptance::Has(r),
                None => Acceptance::False,
            },
            Acceptance::Subset(set) => Acceptance::Subset(set.filter_map(f)),
            Acceptance::Not(a) => Acceptance::not(a.remap(f, old_len, new_len)),
            Acceptance::And(parts) => Acceptance::and(parts.iter().map(|a| a.remap(f, old_len, new_len)).collect()),
            Acceptance::Or(parts) => Acceptance::or(parts.iter().map(|a| a.remap(f, old_len, new_len)).collect()),
            Acceptance::Image { map, names, inner } => {
                let mut new_map = vec![None; new_len];
                for old in 0..old_len.min(map.len()) {
                    if let Some(new) = f(old as StateId) {
                        new_map[new as usize] = map[old];
                    }
                }
                Acceptance::Image { map: new_map, names: names.clone(), inner: inner.clone() }
            }
        }
    }

    /// Calls `f` on every state referenced at this level (not inside images).
    pub fn for_each_state(&self, f: &mut dyn FnMut(StateId)) {
        match self {
            Acceptance::True | Acceptance::False | Acceptance::Card(..) => {}
            Acceptance::Sets(list) => list.iter().flat_map(|s| s.iter()).for_each(f),
            Acceptance::Has(q) => f(*q),
            Acceptance::Subset(set) => set.iter().for_each(f),
            Acceptance::Not(a) => a.for_each_state(f),
            Acceptance::And(parts) | Acceptance::Or(parts) => parts.iter().for_each(|a| a.for_each_state(f)),
            Acceptance::Image { map, .. } => map.iter().enumerate().filter(|(_, t)| t.is_some()).for_each(|(q, _)| f(q as StateId)),
        }
    }

    /// All nonempty accepted subsets of `permanent`, or an error beyond `cap` candidates.
    pub fn materialize(&self, permanent: &StateSet, cap: usize) -> Result<Vec<StateSet>, ExpansionCapExceeded> {
        let k = permanent.len();
        if k >= usize::BITS as usize - 1 || (1usize << k) > cap {
            return Err(ExpansionCapExceeded { permanent: k, cap });
        }
        let members = permanent.as_slice();
        let mut out = Vec::new();
        for mask in 1usize..(1 << k) {
            let f: Vec<StateId> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| members[i]).collect();
            if self.contains(&f) {
                out.push(StateSet::from_sorted(f));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Bounds membership of the final state set when node `v` will end in
    /// some state of `reach[v]` (each sorted and nonempty).
    ///
    /// `possible` over-approximates and `certain` under-approximates.
    pub fn outlook(&self, reach: &[&[StateId]]) -> Outlook {
        let yes = Outlook { possible: true, certain: true };
        let no = Outlook { possible: false, certain: false };
        match self {
            Acceptance::True => yes,
            Acceptance::False => no,
            Acceptance::Has(q) => Outlook {
                possible: reach.iter().any(|r| r.binary_search(q).is_ok()),
                certain: reach.iter().any(|r| r == &[*q]),
            },
            Acceptance::Subset(set) => Outlook {
                possible: reach.iter().all(|r| r.iter().any(|&q| set.contains(q))),
                certain: reach.iter().all(|r| r.iter().all(|&q| set.contains(q))),
            },
            Acceptance::Card(cmp, k) => {
                let forced: StateSet = reach.iter().filter(|r| r.len() == 1).map(|r| r[0]).collect();
                let all: StateSet = reach.iter().flat_map(|r| r.iter().copied()).collect();
                let lo = forced.len().max(1);
                let hi = all.len().min(reach.len());
                Outlook {
                    possible: (lo..=hi).any(|c| cmp.holds(c, *k)),
                    certain: lo <= hi && (lo..=hi).all(|c| cmp.holds(c, *k)),
                }
            }
            Acceptance::Sets(list) => {
                if reach.iter().all(|r| r.len() == 1) {
                    let f: StateSet = reach.iter().map(|r| r[0]).collect();
                    let v = self.contains(f.as_slice());
                    return Outlook { possible: v, certain: v };
                }
                let forced: StateSet = reach.iter().filter(|r| r.len() == 1).map(|r| r[0]).collect();
                let possible = list.iter().any(|s| {
                    forced.is_subset(s)
                        && reach.iter().all(|r| r.iter().any(|&q| s.contains(q)))
                        && s.iter().all(|q| reach.iter().any(|r| r.binary_search(&q).is_ok()))
                });
                Outlook { possible, certain: false }
            }
            Acceptance::Not(a) => {
                let o = a.outlook(reach);
                Outlook { possible: !o.certain, certain: !o.possible }
            }
            Acceptance::And(parts) => {
                let mut out = yes;
                for p in parts {
                    let o = p.outlook(reach);
                    out.possible &= o.possible;
                    out.certain &= o.certain;
                    if !out.possible {
                        break;
                    }
                }
                out
            }
            Acceptance::Or(parts) => {
                let mut out = no;
                for p in parts {
                    let o = p.outlook(reach);
                    out.possible |= o.possible;
                    out.certain |= o.certain;
                    if out.certain {
                        break;
                    }
                }
                out
            }
            Acceptance::Image { map, inner, .. } => {
                let image = |q: StateId| map.get(q as usize).copied().flatten();
                let all_mapped = reach.iter().all(|r| r.iter().all(|&q| image(q).is_some()));
                let mapped: Vec<Vec<StateId>> = reach
                    .iter()
                    .map(|r| {
                        let s: StateSet = r.iter().filter_map(|&q| image(q)).collect();
                        s.as_slice().to_vec()
                    })
                    .collect();
                if mapped.iter().any(Vec::is_empty) {
                    return no;
                }
                let slices: Vec<&[StateId]> = mapped.iter().map(Vec::as_slice).collect();
                let o = inner.outlook(&slices);
                Outlook { possible: o.possible, certain: o.certain && all_mapped }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn subsets(n: u32) -> impl Iterator<Item = Vec<StateId>> {
        (1u32..(1 << n)).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
    }

    #[test]
    fn double_negation_is_structural_identity() {
        let a = Acceptance::or(vec![Acceptance::Has(1), Acceptance::Card(Cmp::Le, 2)]);
        assert_eq!(Acceptance::not(Acceptance::not(a.clone())), a);
    }

    #[test]
    fn materialize_card() {
        let perm: StateSet = [0, 1, 2].into_iter().collect();
        let fam = Acceptance::Card(Cmp::Le, 2).materialize(&perm, 1 << 10).unwrap();
        assert_eq!(fam.len(), 6);
        assert!(Acceptance::True.materialize(&(0..20).collect(), 1000).is_err());
    }

    #[test]
    fn image_requires_total_map() {
        // states 0,1 map to token 0; state 2 unmapped
        let a = Acceptance::Image { map: vec![Some(0), Some(0), None], names: vec!["t".into()], inner: Box::new(Acceptance::Has(0)) };
        assert!(a.contains(&[0, 1]));
        assert!(!a.contains(&[0, 2]));
    }

    fn arb_acceptance() -> impl Strategy<Value = Acceptance> {
        let leaf = prop_oneof![
            (0u32..4).prop_map(Acceptance::Has),
            prop::collection::vec(0u32..4, 0..3).prop_map(|v| Acceptance::Subset(v.into_iter().collect())),
            (0usize..4, prop_oneof![Just(Cmp::Lt), Just(Cmp::Le), Just(Cmp::Eq), Just(Cmp::Ge), Just(Cmp::Gt)])
                .prop_map(|(k, c)| Acceptance::Card(c, k)),
            prop::collection::vec(prop::collection::vec(0u32..4, 1..3), 0..3).prop_map(Acceptance::sets),
        ];
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Acceptance::not),
                prop::collection::vec(inner.clone(), 1..3).prop_map(Acceptance::and),
                prop::collection::vec(inner, 1..3).prop_map(Acceptance::or),
            ]
        })
    }

    proptest! {
        #[test]
        fn outlook_brackets_every_realizable_final_set(
            a in arb_acceptance(),
            reach in prop::collection::vec(prop::collection::vec(0u32..4, 1..3), 1..4),
        ) {
            let reach: Vec<Vec<StateId>> = reach.into_iter().map(|r| r.into_iter().collect::<StateSet>().as_slice().to_vec()).collect();
            let slices: Vec<&[StateId]> = reach.iter().map(Vec::as_slice).collect();
            let o = a.outlook(&slices);
            // enumerate every choice of one state per node
            let mut idx = vec![0usize; reach.len()];
            'choices: loop {
                let f: StateSet = idx.iter().zip(&reach).map(|(&i, r)| r[i]).collect();
                let v = a.contains(f.as_slice());
                prop_assert!(!v || o.possible);
                prop_assert!(v || !o.certain);
                let mut p = 0;
                loop {
                    if p == idx.len() { break 'choices; }
                    idx[p] += 1;
                    if idx[p] < reach[p].len() { break; }
                    idx[p] = 0;
                    p += 1;
                }
            }
        }

        #[test]
        fn negation_complements_membership(a in arb_acceptance()) {
            for f in subsets(4) {
                prop_assert_eq!(Acceptance::not(a.clone()).contains(&f), !a.contains(&f));
            }
        }
    }
}

//! Automaton to sentence: the sentence states that the automaton wins its
//! acceptance game. Set variable `U{i}q{q}` holds the nodes in state `q` in
//! round `i`; round 0 is read off the labels.

use super::{Formula, MsoError};
use crate::automaton::{Automaton, StateId, StateSet};

/// Largest number of accepting sets expanded from a symbolic family, and
/// largest number of neighborhood families enumerated for one round.
pub const SENTENCE_FAMILY_CAP: usize = 1 << 16;

pub fn automaton_to_sentence(a: &Automaton) -> Result<Formula, MsoError> {
    automaton_to_sentence_with_cap(a, SENTENCE_FAMILY_CAP)
}

pub fn automaton_to_sentence_with_cap(a: &Automaton, cap: usize) -> Result<Formula, MsoError> {
    let t = Translator::new(a);
    for i in 1..=a.len() {
        let k = t.rounds[i - 1].len() * a.gamma().len();
        let families = if k >= 63 { usize::MAX } else { (1usize << k).saturating_mul(t.rounds[i - 1].len()) };
        if families > cap {
            return Err(MsoError::TranslationCap { round: i, families, cap });
        }
    }
    let family = a.accepting().materialize(&a.permanent_states(), cap)?;
    let n = a.len();
    let mut win = t.win_last(&family);
    for i in (1..=n).rev() {
        let vars = t.set_vars(i);
        let legal = t.legal(i);
        win = if a.level_kind(i - 1) == Some(crate::automaton::StateKind::Universal) {
            Formula::forall_all(&vars, Formula::implies(legal, win))
        } else {
            Formula::exists_all(&vars, Formula::and(vec![legal, win]))
        };
    }
    Ok(win)
}

struct Translator<'a> {
    a: &'a Automaton,
    /// `Q_i`: level-`i` states and the permanent states reachable by round `i`.
    rounds: Vec<Vec<StateId>>,
    single_relation: bool,
}

impl<'a> Translator<'a> {
    fn new(a: &'a Automaton) -> Self {
        let perm = a.permanent_by_round();
        let rounds = (0..=a.len()).map(|i| a.level_states(i).union(&perm[i]).iter().collect()).collect();
        Translator { a, rounds, single_relation: a.gamma().len() == 1 }
    }

    fn set_var(&self, i: usize, q: StateId) -> String {
        format!("U{i}q{q}")
    }

    fn set_vars(&self, i: usize) -> Vec<String> {
        self.rounds[i].iter().map(|&q| self.set_var(i, q)).collect()
    }

    fn edge(&self, from: &str, gamma: usize, to: &str) -> Formula {
        if self.single_relation {
            Formula::edge(from, to)
        } else {
            Formula::edge_in(from, self.a.gamma().symbol(gamma), to)
        }
    }

    /// Node `x` is in state `q` in round `i`.
    fn state(&self, i: usize, q: StateId, x: &str) -> Formula {
        if i == 0 {
            let labels = self.a.sigma().iter().enumerate().filter(|&(l, _)| self.a.init(l) == q);
            Formula::or(labels.map(|(_, name)| Formula::lab(name, x)).collect())
        } else {
            Formula::member(x, self.set_var(i, q))
        }
    }

    /// `v` is in state `p` in round `i` and sees exactly `family` on its incoming edges.
    fn neigh(&self, i: usize, p: StateId, family: &[StateSet]) -> Formula {
        let mut parts = vec![self.state(i, p, "v")];
        for (g, s) in family.iter().enumerate() {
            for r in s.iter() {
                parts.push(Formula::exists("u", Formula::and(vec![self.state(i, r, "u"), self.edge("u", g, "v")])));
            }
        }
        let closed = (0..family.len())
            .map(|g| {
                let seen = Formula::or(family[g].iter().map(|r| self.state(i, r, "u")).collect());
                Formula::implies(self.edge("u", g, "v"), seen)
            })
            .collect();
        parts.push(Formula::forall("u", Formula::and(closed)));
        Formula::and(parts)
    }

    /// Round `i` is a legal successor of round `i - 1`.
    fn legal(&self, i: usize) -> Formula {
        let prev = &self.rounds[i - 1];
        let mut parts = Vec::new();
        for &p in prev {
            if i == 1 && self.state(0, p, "v") == Formula::False {
                continue;
            }
            for family in families(prev, self.a.gamma().len()) {
                let succ = self.a.local_successors(p, &family);
                let target = Formula::or(succ.iter().map(|q| self.state(i, q, "v")).collect());
                parts.push(Formula::implies(self.neigh(i - 1, p, &family), target));
            }
        }
        let here = &self.rounds[i];
        for (k, &q) in here.iter().enumerate() {
            for &r in &here[k + 1..] {
                parts.push(Formula::not(Formula::and(vec![self.state(i, q, "v"), self.state(i, r, "v")])));
            }
        }
        Formula::forall("v", Formula::and(parts))
    }

    /// The final configuration is accepting.
    fn win_last(&self, family: &[StateSet]) -> Formula {
        let n = self.a.len();
        let options = family.iter().map(|f| {
            let mut parts: Vec<Formula> = f.iter().map(|q| Formula::exists("v", self.state(n, q, "v"))).collect();
            parts.push(Formula::forall("v", Formula::or(f.iter().map(|q| self.state(n, q, "v")).collect())));
            Formula::and(parts)
        });
        Formula::or(options.collect())
    }
}

/// All families `⟨S_γ⟩` with `S_γ ⊆ states`.
fn families(states: &[StateId], relations: usize) -> Vec<Vec<StateSet>> {
    let k = states.len();
    let subsets: Vec<StateSet> =
        (0u64..1 << k).map(|m| (0..k).filter(|j| m >> j & 1 == 1).map(|j| states[j]).collect()).collect();
    let mut out: Vec<Vec<StateSet>> = vec![Vec::new()];
    for _ in 0..relations {
        out = out.into_iter().flat_map(|prefix| subsets.iter().map(move |s| [prefix.clone(), vec![s.clone()]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Acceptance, AutomatonBuilder};
    use crate::graph::{enumerate_graphs, LabeledGraph};
    use crate::mso::evaluate_sentence;
    use crate::Alphabet;

    #[test]
    fn length_zero_is_the_accepting_disjunction() {
        let mut b = AutomatonBuilder::new(Alphabet::new(["a", "b"]).unwrap(), Alphabet::blank());
        let p = b.permanent("p");
        let q = b.permanent("q");
        b.init("a", p).init("b", q);
        b.accepting(Acceptance::sets([[p, q]]));
        let a = b.build().unwrap();
        let phi = automaton_to_sentence(&a).unwrap();
        assert!(!phi.render().contains("U"));
        let sigma = a.sigma().clone();
        for g in enumerate_graphs(3, &sigma, &Alphabet::blank()) {
            let both = g.nodes().any(|v| g.label_name(v) == "a") && g.nodes().any(|v| g.label_name(v) == "b");
            assert_eq!(evaluate_sentence(&phi, &g).unwrap(), both);
        }
    }

    #[test]
    fn single_round_agrees_with_acceptance() {
        // accept iff no node has an incoming edge
        let mut b = AutomatonBuilder::new(Alphabet::blank(), Alphabet::blank());
        let s = b.existential("s");
        let ok = b.permanent("ok");
        let bad = b.permanent("bad");
        b.init_all(s)
            .rule(s, crate::Guard::has(s, 0), [bad])
            .rule(s, crate::Guard::not(crate::Guard::has(s, 0)), [ok])
            .accepting(Acceptance::Subset([ok].into_iter().collect()));
        let a = b.build().unwrap();
        let phi = automaton_to_sentence(&a).unwrap();
        for g in [LabeledGraph::blank(2, &[(0, 1)]).unwrap(), LabeledGraph::blank(2, &[(1, 1)]).unwrap()] {
            assert_eq!(evaluate_sentence(&phi, &g).unwrap(), crate::accepts(&a, &g).unwrap());
        }
    }
}

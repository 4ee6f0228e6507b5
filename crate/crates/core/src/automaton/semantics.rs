//! Configurations and the local and global transition functions.

use std::fmt;

use super::{Automaton, AutomatonError, StateId, StateKind, StateSet};
use crate::graph::{bits, LabeledGraph};

/// A state per node of a fixed graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(pub Vec<StateId>);

impl Configuration {
    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn state(&self, v: usize) -> StateId {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Set of states occurring in the configuration.
    pub fn state_set(&self) -> StateSet {
        self.0.iter().copied().collect()
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A graph resolved against an automaton's alphabets.
#[derive(Clone, Debug)]
pub struct GraphBinding {
    /// Automaton node-alphabet index per node.
    pub labels: Vec<usize>,
    /// Incoming-neighbor mask per node and automaton edge symbol.
    pub incoming: Vec<Vec<u64>>,
}

impl GraphBinding {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }
}

impl Automaton {
    /// Resolves labels and edge symbols of `g` by name.
    pub fn bind(&self, g: &LabeledGraph) -> Result<GraphBinding, AutomatonError> {
        let mut labels = Vec::with_capacity(g.node_count());
        for v in g.nodes() {
            let name = g.label_name(v);
            labels.push(self.sigma().index_of(name).ok_or_else(|| AutomatonError::LabelOutsideSigma(name.to_string()))?);
        }
        let mut gamma_map = Vec::with_capacity(g.gamma().len());
        for sym in g.gamma().iter() {
            gamma_map.push(self.gamma().index_of(sym));
        }
        let mut incoming = vec![vec![0u64; self.gamma().len()]; g.node_count()];
        for (gi, u, v) in g.edges() {
            let ai = gamma_map[gi].ok_or_else(|| AutomatonError::EdgeSymbolOutsideGamma(g.gamma().symbol(gi).to_string()))?;
            incoming[v][ai] |= 1u64 << u;
        }
        Ok(GraphBinding { labels, incoming })
    }

    pub fn initial_configuration(&self, g: &LabeledGraph) -> Result<Configuration, AutomatonError> {
        Ok(self.initial_configuration_bound(&self.bind(g)?))
    }

    pub fn initial_configuration_bound(&self, b: &GraphBinding) -> Configuration {
        Configuration(b.labels.iter().map(|&a| self.init(a)).collect())
    }

    /// `⟨{κ(u) | u →γ v}⟩_γ`
    pub fn neighbor_family(&self, b: &GraphBinding, c: &Configuration, v: usize) -> Vec<StateSet> {
        b.incoming[v].iter().map(|&mask| bits(mask).map(|u| c.state(u)).collect()).collect()
    }

    /// `δ(q, S)`: `{q}` for permanent `q`, else the union of the successors of matching rules.
    pub fn local_successors<S: AsRef<[StateId]>>(&self, q: StateId, family: &[S]) -> StateSet {
        if self.is_permanent(q) {
            return StateSet::singleton(q);
        }
        let mut out = StateSet::new();
        for r in self.rules_of(q) {
            if r.guard.eval(family) {
                out = out.union(&r.successors);
            }
        }
        out
    }

    /// `δ(κ(v), S_v)` for every node `v`.
    pub fn local_successor_table(&self, b: &GraphBinding, c: &Configuration) -> Vec<StateSet> {
        (0..c.len())
            .map(|v| {
                let q = c.state(v);
                if self.is_permanent(q) {
                    StateSet::singleton(q)
                } else {
                    self.local_successors(q, &self.neighbor_family(b, c, v))
                }
            })
            .collect()
    }

    /// `δ^cloud(c)`, in lexicographic order of the per-node choices.
    pub fn global_successors(&self, b: &GraphBinding, c: &Configuration) -> Vec<Configuration> {
        product(&self.local_successor_table(b, c))
    }

    /// Kind of a configuration: permanent iff every state is, else the kind of its nonpermanent states.
    pub fn configuration_kind(&self, c: &Configuration) -> StateKind {
        let mut kind = StateKind::Permanent;
        for &q in c.states() {
            let k = self.kind(q);
            if k.is_permanent() {
                continue;
            }
            debug_assert!(kind.is_permanent() || kind == k, "mixed configuration");
            kind = k;
        }
        kind
    }

    pub fn is_accepting_configuration(&self, c: &Configuration) -> bool {
        self.configuration_kind(c).is_permanent() && self.accepting().contains(c.state_set().as_slice())
    }
}

/// Cartesian product of per-node choices; empty if some choice set is empty.
pub fn product(choices: &[StateSet]) -> Vec<Configuration> {
    if choices.iter().any(StateSet::is_empty) {
        return Vec::new();
    }
    let total: usize = choices.iter().map(StateSet::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; choices.len()];
    loop {
        out.push(Configuration(idx.iter().zip(choices).map(|(&i, s)| s.as_slice()[i]).collect()));
        let mut k = choices.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automaton::{Acceptance, AutomatonBuilder, Guard};

    fn three_color() -> Automaton {
        let mut b = AutomatonBuilder::new(Alphabet::blank(), Alphabet::blank());
        let ini = b.existential("ini");
        let colors: Vec<_> = ["s", "h", "c"].iter().map(|c| b.existential(*c)).collect();
        let yes = b.permanent("yes");
        let no = b.permanent("no");
        b.init_all(ini).rule(ini, Guard::True, colors.clone());
        for &c in &colors {
            b.rule(c, Guard::has(c, 0), [no]).rule(c, Guard::not(Guard::has(c, 0)), [yes]);
        }
        b.accepting(Acceptance::sets([[yes]]));
        b.build().unwrap()
    }

    #[test]
    fn edgeless_pair_has_nine_successors() {
        let a = three_color();
        let g = LabeledGraph::blank(2, &[]).unwrap();
        let b = a.bind(&g).unwrap();
        let c = a.initial_configuration_bound(&b);
        assert_eq!(a.global_successors(&b, &c).len(), 9);
    }

    #[test]
    fn permanent_configuration_is_fixed() {
        let a = three_color();
        let g = LabeledGraph::blank(2, &[(0, 1)]).unwrap();
        let b = a.bind(&g).unwrap();
        let yes = a.state_id("yes").unwrap();
        let c = Configuration(vec![yes, yes]);
        assert_eq!(a.global_successors(&b, &c), vec![c.clone()]);
    }

    #[test]
    fn own_color_in_neighborhood_rejects() {
        let a = three_color();
        let s = a.state_id("s").unwrap();
        let fam = [StateSet::singleton(s)];
        assert_eq!(a.local_successors(s, &fam), StateSet::singleton(a.state_id("no").unwrap()));
    }

    #[test]
    fn product_size_matches() {
        let sets = vec![[1, 2].into_iter().collect(), StateSet::singleton(3), [4, 5, 6].into_iter().collect()];
        assert_eq!(product(&sets).len(), 6);
        assert!(product(&[StateSet::new(), StateSet::singleton(1)]).is_empty());
    }
}

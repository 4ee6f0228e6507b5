//! Example sentences in concrete syntax.

use crate::mso::{parse, Formula};

fn parsed(text: &str) -> Formula {
    parse(text).expect("fixture sentence parses")
}

/// Over `⟨{_}, {_}⟩`: the nodes split into three color classes with no edge inside a class.
pub fn phi_3color() -> Formula {
    parsed(
        "exists Spade, Heart, Club (\
           forall u ((u in Spade | u in Heart | u in Club) \
             & !(u in Spade & u in Heart) & !(u in Spade & u in Club) & !(u in Heart & u in Club)) \
           & forall u, v (u -> v => !(u in Spade & v in Spade) & !(u in Heart & v in Heart) \
             & !(u in Club & v in Club)))",
    )
}

/// Over `⟨{a,b,c}, {_}⟩`.
pub fn phi_centric() -> Formula {
    parsed(
        "forall u, v (u -> v => !(lab[b](u) & lab[b](v)) & !(lab[c](u) & lab[c](v))) \
         & exists va (forall u ((lab[a](u) <=> u = va) & (u -> va | va -> u => lab[b](u))) \
           & exists u1, u2 (u1 -> va & u2 -> va & !(u1 = u2)))",
    )
}

/// Over `⟨{_}, {_}⟩`, meant for undirected graphs: three pairwise disjoint,
/// nonempty, connected node sets that are pairwise adjacent.
pub fn phi_minor_k3() -> Formula {
    let sets = ["A", "B", "C"];
    let mut parts = Vec::new();
    for s in sets {
        parts.push(format!("exists x (x in {s})"));
        parts.push(connected(s));
    }
    for (i, s) in sets.iter().enumerate() {
        let t = sets[(i + 1) % 3];
        parts.push(format!("forall x (!(x in {s} & x in {t}))"));
        parts.push(format!("exists x, y (x in {s} & y in {t} & x -> y)"));
    }
    parsed(&format!("exists A, B, C ({})", parts.join(" & ")))
}

/// Every nonempty subset of `s` that is closed under edges inside `s` is all of `s`.
fn connected(s: &str) -> String {
    format!(
        "forall X ((exists x (x in X) & forall x (x in X => x in {s}) \
           & forall x, y (x in X & y in {s} & x -> y => y in X)) \
           => forall x (x in {s} => x in X))"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{centric, centric_in, centric_out, has_k3_minor, k3, self_loop, three_colorable};
    use crate::graph::{enumerate_graphs, is_undirected, LabeledGraph};
    use crate::mso::evaluate_sentence;
    use crate::Alphabet;

    #[test]
    fn three_coloring_sentence() {
        let phi = phi_3color();
        assert!(evaluate_sentence(&phi, &k3()).unwrap());
        assert!(!evaluate_sentence(&phi, &self_loop()).unwrap());
        let k4 = LabeledGraph::blank(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!evaluate_sentence(&phi, &k4).unwrap());
        for g in enumerate_graphs(3, &Alphabet::blank(), &Alphabet::blank()) {
            assert_eq!(evaluate_sentence(&phi, &g).unwrap(), three_colorable(&g));
        }
    }

    #[test]
    fn centric_sentence_matches_examples() {
        let phi = phi_centric();
        assert!(phi.is_sentence());
        assert!(evaluate_sentence(&phi, &centric_in()).unwrap());
        assert!(!evaluate_sentence(&phi, &centric_out()).unwrap());
        assert!(centric(&centric_in()));
        assert!(!centric(&centric_out()));
    }

    #[test]
    fn render_round_trip_of_fixtures() {
        for phi in [phi_3color(), phi_centric(), phi_minor_k3()] {
            assert_eq!(parse(&phi.render()).unwrap(), phi);
        }
    }

    #[test]
    fn minor_sentence_on_undirected_graphs() {
        let phi = phi_minor_k3();
        for g in enumerate_graphs(3, &Alphabet::blank(), &Alphabet::blank()).filter(is_undirected) {
            assert_eq!(evaluate_sentence(&phi, &g).unwrap(), has_k3_minor(&g), "{}", g.to_json_string());
        }
    }
}

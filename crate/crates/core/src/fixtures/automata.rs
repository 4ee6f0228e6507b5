//! Example automata over a single edge relation.

use crate::alphabet::Alphabet;
use crate::automaton::{Acceptance, Automaton, AutomatonBuilder, Cmp, Guard, StateId, StateSet};
use crate::transforms::{dual, intersection};

fn set(states: &[StateId]) -> StateSet {
    states.iter().copied().collect()
}

fn has(q: StateId) -> Guard {
    Guard::has(q, 0)
}

fn blank() -> AutomatonBuilder {
    AutomatonBuilder::new(Alphabet::blank(), Alphabet::blank())
}

fn abc() -> Alphabet {
    Alphabet::new(["a", "b", "c"]).expect("valid alphabet")
}

fn finish(b: &AutomatonBuilder) -> Automaton {
    b.build().expect("fixture automaton is valid")
}

/// Guess a color, then check that no incoming neighbor has the same one.
pub fn a_3color() -> Automaton {
    let mut b = blank();
    let ini = b.existential("ini");
    let colors = [b.existential("spade"), b.existential("heart"), b.existential("club")];
    let yes = b.permanent("yes");
    let no = b.permanent("no");
    b.init_all(ini).rule(ini, Guard::True, colors);
    for c in colors {
        b.rule(c, has(c), [no]).rule(c, Guard::not(has(c)), [yes]);
    }
    b.accepting(Acceptance::sets([[yes]]));
    finish(&b)
}

/// Branch universally over all colorings; accept iff some node finds a conflict in every branch.
pub fn a_not3color() -> Automaton {
    let mut b = blank();
    let ini = b.universal("ini");
    let colors = [b.universal("spade"), b.universal("heart"), b.universal("club")];
    let yes = b.permanent("yes");
    let no = b.permanent("no");
    b.init_all(ini).rule(ini, Guard::True, colors);
    for c in colors {
        b.rule(c, has(c), [no]).rule(c, Guard::not(has(c)), [yes]);
    }
    b.accepting(Acceptance::sets([vec![no], vec![yes, no]]));
    finish(&b)
}

/// Valid 3-coloring, a unique `a`-node whose neighbors are all `b`-nodes,
/// at least two of them incoming.
pub fn a_centric() -> Automaton {
    let mut b = AutomatonBuilder::new(abc(), Alphabet::blank());
    let qa = b.existential("a");
    let qb = b.existential("b");
    let qc = b.existential("c");
    let qa1 = b.universal("a1");
    let club = b.universal("b_club");
    let diamond = b.universal("b_diamond");
    let spade = b.permanent("spade");
    let heart = b.permanent("heart");
    let yes = b.permanent("yes");
    let no = b.permanent("no");
    b.init("a", qa).init("b", qb).init("c", qc);
    b.rule(qa, Guard::True, [qa1]);
    b.rule(qb, Guard::not(has(qb)), [club, diamond]).rule(qb, has(qb), [no]);
    let c_ok = Guard::none_of(0, set(&[qa, qc]));
    b.rule(qc, c_ok.clone(), [yes]).rule(qc, Guard::not(c_ok), [no]);
    let a_ok = Guard::Eq { gamma: 0, set: set(&[club, diamond]) };
    b.rule(qa1, a_ok.clone(), [spade, heart]).rule(qa1, Guard::not(a_ok), [no]);
    b.rule(club, Guard::True, [yes]).rule(diamond, Guard::True, [yes]);
    b.accepting(Acceptance::sets([[spade, yes], [heart, yes]]));
    finish(&b)
}

/// Weakly connected graphs: every universal two-coloring is monochromatic or has a visible discordance.
pub fn a_conn() -> Automaton {
    a_conn_over(&Alphabet::blank(), &Alphabet::blank())
}

/// [`a_conn`] over any alphabets; a discordance may cross any edge relation.
pub fn a_conn_over(sigma: &Alphabet, gamma: &Alphabet) -> Automaton {
    let mut b = AutomatonBuilder::new(sigma.clone(), gamma.clone());
    let ini = b.universal("ini");
    let spade = b.existential("spade");
    let heart = b.existential("heart");
    let spade1 = b.permanent("spade1");
    let heart1 = b.permanent("heart1");
    let acc = b.permanent("acc");
    let seen = |q| Guard::or((0..gamma.len()).map(|g| Guard::has(q, g)).collect());
    b.init_all(ini).rule(ini, Guard::True, [spade, heart]);
    b.rule(spade, Guard::not(seen(heart)), [spade1]).rule(spade, seen(heart), [acc]);
    b.rule(heart, Guard::not(seen(spade)), [heart1]).rule(heart, seen(spade), [acc]);
    b.accepting(Acceptance::not(Acceptance::sets([[spade1, heart1]])));
    finish(&b)
}

/// On connected inputs: directed trees with all edges directed away from the root.
pub fn a_tree() -> Automaton {
    let mut b = blank();
    let ini = b.existential("ini");
    let root = b.universal("no_parent");
    let child = b.universal("parent");
    let c_spade = b.existential("child_spade");
    let c_heart = b.existential("child_heart");
    let spade = b.permanent("spade");
    let heart = b.permanent("heart");
    let yes = b.permanent("yes");
    let no = b.permanent("no");
    b.init_all(ini);
    let lonely = Guard::Card { gamma: 0, cmp: Cmp::Eq, k: 0 };
    b.rule(ini, lonely.clone(), [root]).rule(ini, Guard::not(lonely), [child]);
    b.rule(root, Guard::True, [spade, heart]);
    b.rule(child, Guard::True, [c_spade, c_heart]);
    let single = Guard::Card { gamma: 0, cmp: Cmp::Eq, k: 1 };
    for q in [c_spade, c_heart] {
        b.rule(q, single.clone(), [yes]).rule(q, Guard::not(single.clone()), [no]);
    }
    b.accepting(Acceptance::and(vec![
        Acceptance::not(Acceptance::Has(no)),
        Acceptance::iff(Acceptance::Has(spade), Acceptance::not(Acceptance::Has(heart))),
    ]));
    finish(&b)
}

/// Undirected graphs: in every branch, a sender sees no silent neighbor that missed its message.
pub fn a_undir() -> Automaton {
    undir_in(&Alphabet::blank(), &Alphabet::blank(), 0)
}

/// [`a_undir`] over any alphabets: the intersection of one check per edge relation.
pub fn a_undir_over(sigma: &Alphabet, gamma: &Alphabet) -> Automaton {
    let mut out = undir_in(sigma, gamma, 0);
    for g in 1..gamma.len() {
        out = intersection(&out, &undir_in(sigma, gamma, g)).expect("same alphabets").0;
    }
    out
}

fn undir_in(sigma: &Alphabet, gamma: &Alphabet, g: usize) -> Automaton {
    let mut b = AutomatonBuilder::new(sigma.clone(), gamma.clone());
    let has = |q| Guard::has(q, g);
    let ini = b.universal("ini");
    let send = b.existential("send");
    let silent = b.existential("silent");
    let sent = b.existential("sent");
    let got = b.existential("received");
    let missed = b.existential("missed");
    let yes = b.permanent("yes");
    let no = b.permanent("no");
    b.init_all(ini).rule(ini, Guard::True, [send, silent]);
    b.rule(send, Guard::True, [sent]);
    b.rule(silent, has(send), [got]).rule(silent, Guard::not(has(send)), [missed]);
    b.rule(sent, has(missed), [no]).rule(sent, Guard::not(has(missed)), [yes]);
    b.rule(got, Guard::True, [yes]).rule(missed, Guard::True, [yes]);
    b.accepting(Acceptance::sets([[yes]]));
    finish(&b)
}

/// On undirected inputs: graphs with `K3` as a minor.
///
/// Participating nodes guess one of three witness sets, branch universally
/// over a marker, then report a discordance inside their set or whether
/// they touch the next set.
pub fn a_minor_k3() -> Automaton {
    let mut b = blank();
    let ini = b.existential("ini");
    let out = b.permanent("out");
    let acc = b.permanent("acc");
    let sets: Vec<StateId> = (1..=3).map(|i| b.universal(format!("u{i}"))).collect();
    let markers = ["spade", "heart"];
    // marked[i][m]
    let marked: Vec<[StateId; 2]> =
        (1..=3).map(|i| markers.map(|m| b.existential(format!("u{i}_{m}")))).collect();
    // report[i][m][touches next set]
    let report: Vec<[[StateId; 2]; 2]> = (1..=3)
        .map(|i| markers.map(|m| [b.permanent(format!("u{i}_{m}_alone")), b.permanent(format!("u{i}_{m}_linked"))]))
        .collect();
    b.init_all(ini);
    b.rule(ini, Guard::True, [out, sets[0], sets[1], sets[2]]);
    for i in 0..3 {
        b.rule(sets[i], Guard::True, marked[i]);
        let next = (i + 1) % 3;
        let touches = Guard::any_of(0, set(&marked[next]));
        for m in 0..2 {
            let q = marked[i][m];
            let discord = has(marked[i][1 - m]);
            b.rule(q, discord.clone(), [acc]);
            b.rule(q, Guard::and(vec![Guard::not(discord.clone()), touches.clone()]), [report[i][m][1]]);
            b.rule(q, Guard::and(vec![Guard::not(discord), Guard::not(touches.clone())]), [report[i][m][0]]);
        }
    }
    let any = |qs: &[StateId]| Acceptance::or(qs.iter().map(|&q| Acceptance::Has(q)).collect());
    let per_set = (0..3).map(|i| {
        let with = |m: usize| any(&report[i][m]);
        Acceptance::and(vec![
            Acceptance::not(Acceptance::and(vec![with(0), with(1)])),
            any(&[report[i][0][1], report[i][1][1]]),
        ])
    });
    b.accepting(Acceptance::or(vec![Acceptance::Has(acc), Acceptance::and(per_set.collect())]));
    finish(&b)
}

/// At most two nodes: every node picks one of three markers in a universal branch.
pub fn a_max2() -> Automaton {
    let mut b = blank();
    let ini = b.universal("ini");
    let markers = [b.permanent("m1"), b.permanent("m2"), b.permanent("m3")];
    b.init_all(ini).rule(ini, Guard::True, markers);
    b.accepting(Acceptance::Card(Cmp::Le, 2));
    finish(&b)
}

/// At least three nodes, as the dual of [`a_max2`].
pub fn a_min3() -> Automaton {
    dual(&a_max2())
}

/// Each of the labels `a`, `b`, `c` occurs.
pub fn a_occur() -> Automaton {
    let mut b = AutomatonBuilder::new(abc(), Alphabet::blank());
    let qs = [b.permanent("a"), b.permanent("b"), b.permanent("c")];
    b.init("a", qs[0]).init("b", qs[1]).init("c", qs[2]);
    b.accepting(Acceptance::sets([qs]));
    finish(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::accepts;
    use crate::graph::{enumerate_graphs, is_connected, is_undirected};

    #[test]
    fn restriction_automata_over_larger_alphabets() {
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        let gamma = Alphabet::new(["r", "s"]).unwrap();
        let (conn, undir) = (a_conn_over(&sigma, &gamma), a_undir_over(&sigma, &gamma));
        for g in enumerate_graphs(2, &sigma, &gamma) {
            assert_eq!(accepts(&conn, &g).unwrap(), is_connected(&g), "{}", g.to_json_string());
            assert_eq!(accepts(&undir, &g).unwrap(), is_undirected(&g), "{}", g.to_json_string());
        }
    }
}

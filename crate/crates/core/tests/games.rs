use dga_core::automaton::{classify, Variant};
use dga_core::fixtures::{self, AUTOMATA};
use dga_core::game::{build_game, extract_run, ndga_accepts_path, position_cap, solve, verify_strategy, Game};
use dga_core::graph::enumerate_graphs;
use dga_core::{accepts, Automaton, Configuration, LabeledGraph, Player, StateKind, StateSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(i: usize) -> Automaton {
    (AUTOMATA[i % AUTOMATA.len()].build)()
}

fn random_graph(a: &Automaton, n: usize, seed: u64) -> LabeledGraph {
    LabeledGraph::random(&mut ChaCha8Rng::seed_from_u64(seed), n, a.sigma(), a.gamma(), 0.4)
}

/// Smallest nonpermanent level in `c`, or `None` if every node is permanent.
fn min_level(a: &Automaton, c: &Configuration) -> Option<usize> {
    c.states().iter().filter(|&&q| !a.is_permanent(q)).map(|&q| a.level(q)).min()
}

/// Naive per-node expansion of local successor choices.
fn expand(table: &[StateSet]) -> Vec<Configuration> {
    let mut out = vec![Vec::new()];
    for choices in table {
        out = out.into_iter().flat_map(|prefix: Vec<_>| choices.iter().map(move |q| [prefix.clone(), vec![q]].concat())).collect();
    }
    out.into_iter().map(Configuration).collect()
}

fn sorted(mut v: Vec<Configuration>) -> Vec<Vec<dga_core::StateId>> {
    let mut out: Vec<_> = v.drain(..).map(|c| c.0).collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn successors_advance_one_level(i: usize, n in 1usize..=3, seed: u64) {
        let a = fixture(i);
        let g = random_graph(&a, n, seed);
        let b = a.bind(&g).unwrap();
        let mut frontier = vec![a.initial_configuration_bound(&b)];
        while let Some(c) = frontier.pop() {
            let table = a.local_successor_table(&b, &c);
            let next = a.global_successors(&b, &c);
            // cardinality is the product of the local choices
            prop_assert_eq!(next.len(), table.iter().map(StateSet::len).product::<usize>());
            prop_assert_eq!(sorted(next.clone()), sorted(expand(&table)));
            for d in &next {
                for v in g.nodes() {
                    let (p, q) = (c.state(v), d.state(v));
                    if a.is_permanent(p) {
                        prop_assert_eq!(p, q);
                    } else {
                        prop_assert!(a.is_permanent(q) || a.level(q) == a.level(p) + 1);
                    }
                }
            }
            if a.configuration_kind(&c) != StateKind::Permanent && frontier.len() < 200 {
                frontier.extend(next);
            }
        }
    }

    #[test]
    fn permanent_states_ignore_their_neighbors(i: usize, picks in proptest::collection::vec(any::<u64>(), 1..4)) {
        let a = fixture(i);
        let all: Vec<_> = a.state_ids().collect();
        for p in a.permanent_states().iter() {
            for &bits in &picks {
                let family: Vec<StateSet> = (0..a.gamma().len())
                    .map(|k| all.iter().copied().filter(|&q| (bits >> ((q as usize + 7 * k) % 64)) & 1 == 1).collect())
                    .collect();
                prop_assert_eq!(a.local_successors(p, &family), StateSet::singleton(p));
            }
        }
    }
}

/// Start is the only source, sinks are permanent or blocked, and every move raises the least nonpermanent level.
fn check_shape(a: &Automaton, g: &LabeledGraph, game: &Game) {
    let mut has_pred = vec![false; game.len()];
    for i in 0..game.len() {
        let p = game.position(i);
        for &j in &p.moves {
            has_pred[j] = true;
            let (from, to) = (min_level(a, &p.configuration), min_level(a, &game.position(j).configuration));
            assert!(from.is_some());
            assert!(to.map_or(true, |t| t > from.unwrap()));
        }
        if p.moves.is_empty() && p.kind != StateKind::Permanent {
            assert!(a.global_successors(&a.bind(g).unwrap(), &p.configuration).is_empty());
        }
        assert_eq!(p.is_sink(), p.moves.is_empty());
    }
    assert!(!has_pred[Game::START]);
    assert!(has_pred.iter().skip(1).all(|&x| x));
}

#[test]
fn game_shape_on_every_fixture() {
    for f in AUTOMATA {
        let a = (f.build)();
        for g in enumerate_graphs(2, a.sigma(), a.gamma()) {
            check_shape(&a, &g, &build_game(&a, &g, position_cap()).unwrap());
        }
    }
}

#[test]
fn path_search_agrees_with_the_game_for_ndga() {
    for f in AUTOMATA {
        let a = (f.build)();
        if classify(&a) == Variant::Adga {
            continue;
        }
        for g in enumerate_graphs(3, a.sigma(), a.gamma()) {
            let path = ndga_accepts_path(&a, &g).unwrap();
            assert_eq!(path.is_some(), accepts(&a, &g).unwrap(), "{} on {}", f.name, g.to_json_string());
            if let Some(p) = path {
                assert!(a.is_accepting_configuration(p.last().unwrap()));
            }
        }
    }
}

#[test]
fn extracted_runs_are_accepting() {
    for f in AUTOMATA {
        let a = (f.build)();
        for g in enumerate_graphs(2, a.sigma(), a.gamma()) {
            let game = build_game(&a, &g, position_cap()).unwrap();
            let v = solve(&game);
            assert!(verify_strategy(&game, &v));
            match v.winner {
                Player::Automaton => assert!(extract_run(&game, &v).unwrap().is_accepting(&a), "{}", f.name),
                Player::Pathfinder => assert!(extract_run(&game, &v).is_err()),
            }
        }
    }
}

#[test]
fn position_cap_is_a_reported_error() {
    let a = fixtures::a_3color();
    assert!(build_game(&a, &fixtures::k3(), 3).is_err());
}

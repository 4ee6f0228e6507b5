//! Acceptance games: the automaton owns existential positions, the
//! pathfinder owns universal ones, and permanent positions are sinks won by
//! the automaton iff they are accepting.

mod dot;
mod solver;

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError, Configuration, StateKind};
use crate::graph::LabeledGraph;

pub use dot::{game_to_dot, run_to_dot};
pub use solver::{accepts, accepts_with_cap, ndga_accepts_path, Acceptor};

pub const DEFAULT_POSITION_CAP: usize = 1_000_000;

/// Position cap from `DGA_POSITION_CAP`, else [`DEFAULT_POSITION_CAP`].
pub fn position_cap() -> usize {
    std::env::var("DGA_POSITION_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_POSITION_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("game exceeds the position cap of {cap}")]
    PositionCap { cap: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("run search needs an automaton without universal states")]
    UniversalStates,
    #[error("a run can only be extracted from a verdict won by the automaton")]
    PathfinderWins,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Automaton,
    Pathfinder,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Automaton => Player::Pathfinder,
            Player::Pathfinder => Player::Automaton,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub configuration: Configuration,
    pub kind: StateKind,
    /// Indices of successor positions; empty for sinks.
    pub moves: Vec<usize>,
    /// Whether a permanent position is accepting.
    pub accepting: bool,
}

impl Position {
    pub fn owner(&self) -> Option<Player> {
        match self.kind {
            StateKind::Existential => Some(Player::Automaton),
            StateKind::Universal => Some(Player::Pathfinder),
            StateKind::Permanent => None,
        }
    }

    pub fn is_sink(&self) -> bool {
        self.moves.is_empty()
    }

    /// Winner of a sink: accepting permanent positions go to the automaton,
    /// a blocked position is lost by its owner.
    pub fn sink_winner(&self) -> Player {
        match self.owner() {
            None if self.accepting => Player::Automaton,
            None => Player::Pathfinder,
            Some(owner) => owner.opponent(),
        }
    }
}

/// The game of reachable configurations; position 0 is the start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    pub positions: Vec<Position>,
}

impl Game {
    pub const START: usize = 0;

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, i: usize) -> &Position {
        &self.positions[i]
    }

    pub fn move_count(&self) -> usize {
        self.positions.iter().map(|p| p.moves.len()).sum()
    }
}

/// Builds every position reachable from the initial configuration.
pub fn build_game(a: &Automaton, g: &LabeledGraph, cap: usize) -> Result<Game, GameError> {
    let b = a.bind(g)?;
    let start = a.initial_configuration_bound(&b);
    let mut index: FxHashMap<Configuration, usize> = FxHashMap::default();
    let mut positions = Vec::new();
    index.insert(start.clone(), 0);
    positions.push(start);
    let mut moves: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < positions.len() {
        let c = positions[i].clone();
        let mut out = Vec::new();
        if !a.configuration_kind(&c).is_permanent() {
            for s in a.global_successors(&b, &c) {
                let next = index.len();
                let j = *index.entry(s.clone()).or_insert_with(|| {
                    positions.push(s);
                    next
                });
                out.push(j);
            }
            if positions.len() > cap {
                return Err(GameError::PositionCap { cap });
            }
        }
        moves.push(out);
        i += 1;
    }
    let positions = positions
        .into_iter()
        .zip(moves)
        .map(|(configuration, moves)| {
            let kind = a.configuration_kind(&configuration);
            let accepting = kind.is_permanent() && a.accepting().contains(configuration.state_set().as_slice());
            Position { configuration, kind, moves, accepting }
        })
        .collect();
    Ok(Game { positions })
}

/// Positional strategy: the move chosen at each owned non-sink position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub owner: Player,
    pub choice: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub winner: Player,
    /// Winning strategy of `winner`.
    pub strategy: Strategy,
    /// Best-effort strategy of the loser.
    pub counter: Strategy,
    /// Winner of the subgame at each position.
    pub winners: Vec<Player>,
}

impl Verdict {
    pub fn strategy_of(&self, p: Player) -> &Strategy {
        if self.strategy.owner == p {
            &self.strategy
        } else {
            &self.counter
        }
    }
}

/// Backward induction over the whole game.
pub fn solve(game: &Game) -> Verdict {
    let n = game.len();
    let mut winners: Vec<Option<Player>> = vec![None; n];
    let mut automaton = BTreeMap::new();
    let mut pathfinder = BTreeMap::new();
    // Iterative post-order; the game is a DAG.
    let mut stack = vec![(Game::START, false)];
    while let Some((i, expanded)) = stack.pop() {
        if winners[i].is_some() {
            continue;
        }
        let p = &game.positions[i];
        if p.is_sink() {
            winners[i] = Some(p.sink_winner());
            continue;
        }
        if !expanded {
            stack.push((i, true));
            stack.extend(p.moves.iter().filter(|&&j| winners[j].is_none()).map(|&j| (j, false)));
            continue;
        }
        let owner = p.owner().expect("non-sink positions are owned");
        let good = p.moves.iter().copied().find(|&j| winners[j] == Some(owner));
        let w = if good.is_some() { owner } else { owner.opponent() };
        let choice = good.unwrap_or(p.moves[0]);
        match owner {
            Player::Automaton => automaton.insert(i, choice),
            Player::Pathfinder => pathfinder.insert(i, choice),
        };
        winners[i] = Some(w);
    }
    let winners: Vec<Player> = winners.into_iter().map(|w| w.unwrap_or(Player::Automaton)).collect();
    let winner = winners[Game::START];
    let a = Strategy { owner: Player::Automaton, choice: automaton };
    let b = Strategy { owner: Player::Pathfinder, choice: pathfinder };
    let (strategy, counter) = if winner == Player::Automaton { (a, b) } else { (b, a) };
    Verdict { winner, strategy, counter, winners }
}

/// Plays the winner's strategy against every opponent move and checks that
/// each play ends in a sink won by the winner.
pub fn verify_strategy(game: &Game, verdict: &Verdict) -> bool {
    let me = verdict.winner;
    let mut ok: Vec<Option<bool>> = vec![None; game.len()];
    let mut stack = vec![(Game::START, false)];
    while let Some((i, expanded)) = stack.pop() {
        if ok[i].is_some() {
            continue;
        }
        let p = &game.positions[i];
        if p.is_sink() {
            ok[i] = Some(p.sink_winner() == me);
            continue;
        }
        let next: Vec<usize> = if p.owner() == Some(me) {
            match verdict.strategy.choice.get(&i) {
                Some(&j) if p.moves.contains(&j) => vec![j],
                _ => {
                    ok[i] = Some(false);
                    continue;
                }
            }
        } else {
            p.moves.clone()
        };
        if !expanded {
            stack.push((i, true));
            stack.extend(next.iter().filter(|&&j| ok[j].is_none()).map(|&j| (j, false)));
            continue;
        }
        ok[i] = Some(next.iter().all(|&j| ok[j] == Some(true)));
    }
    ok[Game::START] == Some(true)
}

/// A run as a DAG of configurations; configuration 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub configurations: Vec<Configuration>,
    pub edges: Vec<(usize, usize)>,
}

impl Run {
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == i).map(|e| e.1)
    }

    /// Every leaf is an accepting permanent configuration or a blocked universal one.
    pub fn is_accepting(&self, a: &Automaton) -> bool {
        (0..self.configurations.len()).all(|i| {
            if self.successors(i).next().is_some() {
                return true;
            }
            let c = &self.configurations[i];
            match a.configuration_kind(c) {
                StateKind::Permanent => a.accepting().contains(c.state_set().as_slice()),
                StateKind::Universal => true,
                StateKind::Existential => false,
            }
        })
    }
}

/// Run induced by an automaton-winning verdict: the chosen move at
/// existential positions and every move at universal ones.
pub fn extract_run(game: &Game, verdict: &Verdict) -> Result<Run, GameError> {
    if verdict.winner != Player::Automaton {
        return Err(GameError::PathfinderWins);
    }
    let mut map: FxHashMap<usize, usize> = FxHashMap::default();
    let mut run = Run { configurations: Vec::new(), edges: Vec::new() };
    let mut queue = std::collections::VecDeque::from([Game::START]);
    map.insert(Game::START, 0);
    run.configurations.push(game.positions[Game::START].configuration.clone());
    while let Some(i) = queue.pop_front() {
        let p = &game.positions[i];
        let next: Vec<usize> = match p.owner() {
            Some(Player::Automaton) if !p.is_sink() => vec![verdict.strategy.choice[&i]],
            _ => p.moves.clone(),
        };
        for j in next {
            let k = *map.entry(j).or_insert_with(|| {
                run.configurations.push(game.positions[j].configuration.clone());
                queue.push_back(j);
                run.configurations.len() - 1
            });
            run.edges.push((map[&i], k));
        }
    }
    Ok(run)
}

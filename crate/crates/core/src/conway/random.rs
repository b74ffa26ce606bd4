//! Seeded generators for property tests.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use super::game::{Game, Move, Polarity};
use super::payoff::{is_winning, payoff_implication, PayoffGame};
use super::strategy::Strategy;
use crate::lattice::Lattice;

fn polarity<R: Rng>(rng: &mut R) -> Polarity {
    if rng.gen_bool(0.5) {
        Polarity::Opponent
    } else {
        Polarity::Proponent
    }
}

/// An acyclic game with between 1 and `max_vertices` positions. Each
/// position other than the root hangs off an earlier one, so all are
/// reachable; a few extra forward moves are added on top.
pub fn random_game<R: Rng>(rng: &mut R, max_vertices: usize) -> Game {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let mut moves = Vec::new();
    for to in 1..n {
        moves.push(Move {
            from: rng.gen_range(0..to),
            to,
            polarity: polarity(rng),
        });
    }
    for from in 0..n {
        for to in (from + 1)..n {
            if rng.gen_bool(0.2) && !moves.iter().any(|m| m.from == from && m.to == to) {
                moves.push(Move {
                    from,
                    to,
                    polarity: polarity(rng),
                });
            }
        }
    }
    moves.sort();
    Game::new(names, 0, moves).expect("generated game is well formed")
}

/// A distributive lattice with at most `max_elements` elements (at least 2),
/// built as the down-sets of a random poset.
pub fn random_distributive_lattice<R: Rng>(rng: &mut R, max_elements: usize) -> Lattice {
    assert!(max_elements >= 2, "need room for bottom and top");
    loop {
        let k = rng.gen_range(1..=4);
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
        for i in 0..k {
            for j in 0..i {
                if rng.gen_bool(0.45) {
                    let inherited = below[j].clone();
                    below[i].insert(j);
                    below[i].extend(inherited);
                }
            }
        }
        let points: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
        let below: Vec<Vec<usize>> = below.into_iter().map(|s| s.into_iter().collect()).collect();
        let l = Lattice::of_downsets(&points, &below).expect("down-sets form a lattice");
        if l.len() <= max_elements {
            return l;
        }
    }
}

/// Uniform weights on every position.
pub fn random_payoff<R: Rng>(rng: &mut R, game: Arc<Game>, lattice: Arc<Lattice>) -> PayoffGame {
    let elems: Vec<_> = lattice.elements().collect();
    let k = (0..game.vertex_count())
        .map(|_| elems[rng.gen_range(0..elems.len())])
        .collect();
    PayoffGame::new(game, lattice, k).expect("weights come from a distributive lattice")
}

/// A random strategy: each opponent move is answered, with probability
/// `answer_rate`, by a uniformly chosen proponent move. Only acyclic games
/// are supported.
pub fn random_strategy<R: Rng>(rng: &mut R, game: Arc<Game>, answer_rate: f64) -> Strategy {
    assert!(game.is_acyclic(), "random strategies need an acyclic game");
    let mut plays = BTreeSet::new();
    let mut stack = vec![(game.root(), Vec::new())];
    while let Some((v, play)) = stack.pop() {
        for (id, m) in game.moves_from(v) {
            if m.polarity != Polarity::Opponent || !rng.gen_bool(answer_rate) {
                continue;
            }
            let answers: Vec<(usize, usize)> = game
                .moves_from(m.to)
                .filter(|(_, a)| a.polarity == Polarity::Proponent)
                .map(|(a_id, a)| (a_id, a.to))
                .collect();
            if answers.is_empty() {
                continue;
            }
            let (a_id, w) = answers[rng.gen_range(0..answers.len())];
            let mut next: Vec<usize> = play.clone();
            next.extend([id, a_id]);
            stack.push((w, next));
        }
        plays.insert(play);
    }
    Strategy::new(game, plays).expect("generated plays satisfy every clause")
}

/// Draws random strategies until one wins `pg`, giving up after `attempts`.
pub fn random_winning_strategy<R: Rng>(rng: &mut R, pg: &PayoffGame, attempts: usize) -> Option<Strategy> {
    (0..attempts).find_map(|_| {
        let rate = rng.gen_range(0.3..=1.0);
        let s = random_strategy(rng, pg.game().clone(), rate);
        is_winning(&s, pg).expect("strategy is on the payoff game").then_some(s)
    })
}

/// One instance of the composition property: `X ⊸ Z` with its payoffs and
/// winning strategies on `X ⊸ Y` and `Y ⊸ Z`, all over one lattice.
#[derive(Clone, Debug)]
pub struct CompositionCase {
    pub lattice: Arc<Lattice>,
    pub xz: PayoffGame,
    pub sigma: Strategy,
    pub tau: Strategy,
}

/// Draws games with at most `max_vertices` positions, a distributive
/// lattice with at most `max_elements` elements and random weights, then
/// looks for winning strategies on both sides. `None` when either search
/// gives up after `attempts` tries.
pub fn random_composition_case<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_elements: usize,
    attempts: usize,
) -> Option<CompositionCase> {
    let lattice = Arc::new(random_distributive_lattice(rng, max_elements));
    let factor = |rng: &mut R| {
        let g = Arc::new(random_game(rng, max_vertices));
        random_payoff(rng, g, lattice.clone())
    };
    let (x, y, z) = (factor(rng), factor(rng), factor(rng));
    let xy = payoff_implication(&x, &y).expect("same lattice");
    let yz = payoff_implication(&y, &z).expect("same lattice");
    let sigma = random_winning_strategy(rng, &xy, attempts)?;
    let tau = random_winning_strategy(rng, &yz, attempts)?;
    Some(CompositionCase {
        xz: payoff_implication(&x, &z).expect("same lattice"),
        lattice,
        sigma,
        tau,
    })
}

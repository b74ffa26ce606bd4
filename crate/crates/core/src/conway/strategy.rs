use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use super::game::{implication_game, Game, Polarity, Shape, Side};
use super::GameError;

/// One of the defining conditions of a strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    NonEmpty,
    Path,
    Alternation,
    EvenLength,
    OpponentStarts,
    PrefixClosure,
    Determinism,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::NonEmpty => "non-empty",
            Clause::Path => "path from the root",
            Clause::Alternation => "alternation",
            Clause::EvenLength => "even length",
            Clause::OpponentStarts => "opponent starts",
            Clause::PrefixClosure => "even-prefix closure",
            Clause::Determinism => "determinism",
        })
    }
}

/// Checks every strategy condition and reports the first failure.
pub fn validate_strategy(game: &Game, plays: &BTreeSet<Vec<usize>>) -> Result<(), GameError> {
    let fail = |clause, play: &[usize]| {
        Err(GameError::InvalidStrategy {
            clause,
            play: play.to_vec(),
        })
    };
    if plays.is_empty() {
        return fail(Clause::NonEmpty, &[]);
    }
    let mut answers: BTreeMap<&[usize], usize> = BTreeMap::new();
    for play in plays {
        if game.endpoint(play).is_none() {
            return fail(Clause::Path, play);
        }
        if play.len() % 2 != 0 {
            return fail(Clause::EvenLength, play);
        }
        if let Some(&first) = play.first() {
            if game.moves()[first].polarity != Polarity::Opponent {
                return fail(Clause::OpponentStarts, play);
            }
        }
        if !game.is_alternated(play) {
            return fail(Clause::Alternation, play);
        }
        if let Some(rest) = play.len().checked_sub(2) {
            if !plays.contains(&play[..rest]) {
                return fail(Clause::PrefixClosure, play);
            }
            let last = play[play.len() - 1];
            if let Some(&other) = answers.get(&play[..play.len() - 1]) {
                if other != last {
                    return fail(Clause::Determinism, play);
                }
            }
            answers.insert(&play[..play.len() - 1], last);
        }
    }
    Ok(())
}

/// A validated set of plays on a game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    game: Arc<Game>,
    plays: BTreeSet<Vec<usize>>,
}

impl Strategy {
    pub fn new(game: Arc<Game>, plays: BTreeSet<Vec<usize>>) -> Result<Self, GameError> {
        validate_strategy(&game, &plays)?;
        Ok(Self { game, plays })
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.game
    }

    pub fn plays(&self) -> &BTreeSet<Vec<usize>> {
        &self.plays
    }

    /// Plays with no extension in the strategy.
    pub fn maximal_plays(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        // extensions of a play sort directly after it
        let mut it = self.plays.iter().peekable();
        std::iter::from_fn(move || loop {
            let p = it.next()?;
            match it.peek() {
                Some(next) if next.starts_with(p) => continue,
                _ => return Some(p),
            }
        })
    }
}

fn implication_parts(g: &Game) -> Result<(&Game, &Game), GameError> {
    match g.shape() {
        Shape::Implication(a, b) => Ok((a, b)),
        _ => Err(GameError::NotAnImplication),
    }
}

/// The copycat strategy on `X ⊸ X`, enumerated to full depth on acyclic
/// games. Cyclic games are cut after one move per vertex of `x`.
pub fn copycat(x: &Game) -> Strategy {
    copycat_with_depth(x, x.vertex_count())
}

/// Copycat with at most `max_rounds` opponent/answer pairs per play.
pub fn copycat_with_depth(x: &Game, max_rounds: usize) -> Strategy {
    let game = Arc::new(implication_game(x, x));
    let mut plays = BTreeSet::new();
    let mut stack = vec![(x.root(), Vec::new())];
    while let Some((v, play)) = stack.pop() {
        let done = play.len() / 2 >= max_rounds;
        plays.insert(play.clone());
        if done {
            continue;
        }
        let here = v * x.vertex_count() + v;
        for (id, m) in game.moves_from(here) {
            if m.polarity != Polarity::Opponent {
                continue;
            }
            let (side, e) = game.split_move(id).expect("implication game has two factors");
            let w = x.moves()[e].to;
            let answer = match side {
                Side::Left => game.join_move(Side::Right, e, w),
                Side::Right => game.join_move(Side::Left, e, w),
            }
            .expect("implication game has two factors");
            let mut next = play.clone();
            next.extend([id, answer]);
            stack.push((w, next));
        }
    }
    Strategy::new(game, plays).expect("copycat satisfies every strategy clause")
}

type Step = (Side, usize);

struct Tree {
    children: BTreeMap<Vec<Step>, BTreeSet<Step>>,
    complete: HashSet<Vec<Step>>,
}

impl Tree {
    fn of(s: &Strategy) -> Self {
        let mut children: BTreeMap<Vec<Step>, BTreeSet<Step>> = BTreeMap::new();
        let mut complete = HashSet::new();
        for play in s.plays() {
            let steps: Vec<Step> = play
                .iter()
                .map(|&id| s.game().split_move(id).expect("implication game has two factors"))
                .collect();
            for k in 0..steps.len() {
                children.entry(steps[..k].to_vec()).or_default().insert(steps[k]);
            }
            complete.insert(steps);
        }
        Self { children, complete }
    }

    fn next(&self, at: &[Step], side: Side) -> impl Iterator<Item = usize> + '_ {
        self.children
            .get(at)
            .into_iter()
            .flatten()
            .filter(move |(s, _)| *s == side)
            .map(|&(_, e)| e)
    }

    fn allows(&self, at: &[Step], step: Step) -> bool {
        self.children.get(at).is_some_and(|c| c.contains(&step))
    }
}

struct Interaction {
    sigma: Vec<Step>,
    tau: Vec<Step>,
    visible: Vec<Step>,
    hidden_run: usize,
}

/// Parallel composition with hiding: interaction sequences over `X`, `Y`, `Z`
/// whose `X,Y` part is a play of `sigma` and whose `Y,Z` part is a play of
/// `tau`, restricted to `X,Z`.
///
/// The restriction must itself be a legal play of `X ⊸ Z`. Polarities in
/// these graphs are arbitrary, so the two strategies' independent outer
/// moves could otherwise interleave into a non-alternating play; such
/// interactions are discarded as soon as a visible move has the wrong
/// polarity.
pub fn compose_strategies(sigma: &Strategy, tau: &Strategy) -> Result<Strategy, GameError> {
    let (x, y) = implication_parts(sigma.game())?;
    let (y2, z) = implication_parts(tau.game())?;
    if y != y2 {
        return Err(GameError::ComponentMismatch);
    }
    let target = Arc::new(implication_game(x, z));
    let cap = x.vertex_count() * y.vertex_count() * z.vertex_count() * 4;
    let (ts, tt) = (Tree::of(sigma), Tree::of(tau));

    let mut visible_plays = BTreeSet::new();
    let mut stack = vec![Interaction {
        sigma: Vec::new(),
        tau: Vec::new(),
        visible: Vec::new(),
        hidden_run: 0,
    }];
    while let Some(st) = stack.pop() {
        if ts.complete.contains(&st.sigma) && tt.complete.contains(&st.tau) {
            visible_plays.insert(st.visible.clone());
        }
        let expected = if st.visible.len() % 2 == 0 {
            Polarity::Opponent
        } else {
            Polarity::Proponent
        };
        for e in ts.next(&st.sigma, Side::Left) {
            if x.moves()[e].polarity.flip() != expected {
                continue;
            }
            let mut n = extend(&st, Some((Side::Left, e)), None, Some((Side::Left, e)));
            n.hidden_run = 0;
            stack.push(n);
        }
        for e in tt.next(&st.tau, Side::Right) {
            if z.moves()[e].polarity != expected {
                continue;
            }
            let mut n = extend(&st, None, Some((Side::Right, e)), Some((Side::Right, e)));
            n.hidden_run = 0;
            stack.push(n);
        }
        for e in ts.next(&st.sigma, Side::Right) {
            if tt.allows(&st.tau, (Side::Left, e)) {
                let mut n = extend(&st, Some((Side::Right, e)), Some((Side::Left, e)), None);
                n.hidden_run = st.hidden_run + 1;
                if n.hidden_run > cap {
                    return Err(GameError::StepCapExceeded { cap });
                }
                stack.push(n);
            }
        }
    }

    let plays = visible_plays
        .into_iter()
        .map(|steps| encode(&target, x, z, &steps))
        .collect();
    Strategy::new(target, plays)
}

fn extend(st: &Interaction, s: Option<Step>, t: Option<Step>, v: Option<Step>) -> Interaction {
    let push = |base: &Vec<Step>, step: Option<Step>| {
        let mut out = base.clone();
        out.extend(step);
        out
    };
    Interaction {
        sigma: push(&st.sigma, s),
        tau: push(&st.tau, t),
        visible: push(&st.visible, v),
        hidden_run: st.hidden_run,
    }
}

fn encode(target: &Game, x: &Game, z: &Game, steps: &[Step]) -> Vec<usize> {
    let (mut px, mut pz) = (x.root(), z.root());
    steps
        .iter()
        .map(|&(side, e)| {
            let id = match side {
                Side::Left => {
                    let id = target.join_move(Side::Left, e, pz);
                    px = x.moves()[e].to;
                    id
                }
                Side::Right => {
                    let id = target.join_move(Side::Right, e, px);
                    pz = z.moves()[e].to;
                    id
                }
            };
            id.expect("implication game has two factors")
        })
        .collect()
}

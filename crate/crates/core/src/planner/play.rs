use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::scenario::{Cell, Dir, Scenario};
use super::PlanError;
use crate::conway::{implication_game, tensor_game, DualPayoff, Game, Move, Polarity};
use crate::lattice::Element;

pub(crate) fn chebyshev(a: Cell, b: Cell) -> usize {
    a.0.abs_diff(b.0).max(a.1.abs_diff(b.1))
}

/// Number of features of an `n`-feature object revealed at distance `d`:
/// `⌈n·(1 − d/(h+1))⌉` within the horizon `h`, none beyond it.
pub fn revealed(n: usize, d: usize, horizon: usize) -> usize {
    if d > horizon {
        return 0;
    }
    let h1 = horizon + 1;
    (n * (h1 - d)).div_ceil(h1)
}

pub(crate) fn visible_mask(sc: &Scenario, object: usize, p: Cell) -> u32 {
    let o = &sc.objects[object];
    let m = revealed(o.features.len(), chebyshev(p, o.cell), sc.horizon);
    (1u32 << m) - 1
}

/// Reward of every object seen from `p`, in the object's feature powerset.
pub fn visible_rewards(sc: &Scenario, p: Cell) -> Vec<Element> {
    (0..sc.objects.len())
        .map(|i| sc.objects[i].reward(visible_mask(sc, i, p)))
        .collect()
}

/// Reading of the play objective.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `max ⋃ k^{A^⊥} ∪ ⋃ (k^{B_1} & ... & k^{B_k})`
    #[default]
    Practical,
    /// `max ⋃ [k^A ⇒ (k^{B_1} & ... & k^{B_k})]`
    Strict,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "practical" => Ok(Mode::Practical),
            "strict" => Ok(Mode::Strict),
            _ => Err(format!("unknown mode `{s}` (practical | strict)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Practical => "practical",
            Mode::Strict => "strict",
        })
    }
}

/// Highest level of the free-move chain: the number of open directions.
pub const FREEDOM_TOP: u8 = 4;

/// Free-move payoff at a cell: how many directions are open from it, in the
/// chain `0 < 1 < 2 < 3 < 4`.
pub fn freedom(sc: &Scenario, p: Cell) -> u8 {
    sc.neighbours(p).count() as u8
}

fn chain_neg(x: u8) -> u8 {
    if x == 0 {
        FREEDOM_TOP
    } else {
        0
    }
}

/// A value of the product of the free-move chain and the goals' feature
/// powersets, ordered componentwise. Powerset elements are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductValue {
    pub free: u8,
    pub goals: Vec<u32>,
}

impl ProductValue {
    pub fn bottom(k: usize) -> Self {
        Self {
            free: 0,
            goals: vec![0; k],
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        Self {
            free: self.free.max(other.free),
            goals: self.goals.iter().zip(&other.goals).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.free <= other.free && self.goals.iter().zip(&other.goals).all(|(a, b)| a & !b == 0)
    }

    /// Join-irreducibles below: chain height plus features.
    pub fn rank(&self) -> usize {
        self.free as usize + self.goals.iter().map(|m| m.count_ones() as usize).sum::<usize>()
    }

    pub fn is_bottom(&self) -> bool {
        self.free == 0 && self.goals.iter().all(|&m| m == 0)
    }

    pub fn render(&self, sc: &Scenario, goals: &[usize]) -> String {
        let parts: Vec<String> = goals
            .iter()
            .zip(&self.goals)
            .map(|(&g, &m)| format!("{}={}", sc.objects[g].id, sc.objects[g].rewards.name(sc.objects[g].reward(m))))
            .collect();
        format!("(free={}; {})", self.free, parts.join(", "))
    }
}

/// Payoff of one position of the play in the product, before joining.
fn position_value(sc: &Scenario, p: Cell, goals: &[usize], mode: Mode, dual: DualPayoff) -> ProductValue {
    let k_a = freedom(sc, p);
    let free = match (mode, dual) {
        // k^A ⇒ (…) with k^A injected as (k^A, ⊤, …, ⊤) gives ¬k^A in the
        // free-move component
        (Mode::Strict, _) | (Mode::Practical, DualPayoff::Negate) => chain_neg(k_a),
        (Mode::Practical, DualPayoff::Copy) => k_a,
    };
    ProductValue {
        free,
        goals: goals.iter().map(|&g| visible_mask(sc, g, p)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub moves: Vec<Dir>,
    /// Positions visited, starting with the current one.
    pub cells: Vec<Cell>,
    pub objective: ProductValue,
    pub enumerated: usize,
    /// Distinct non-dominated objectives among the enumerated plays.
    pub maximal_objectives: usize,
    /// Several plays reached a non-dominated objective, so the choice used
    /// the rank, length and move-order tie-breaks.
    pub tie_broken: bool,
    /// Goals whose cell cannot be reached on the grid at all.
    pub unreachable: Vec<usize>,
}

/// Options for [`plan_play`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlanOptions {
    pub mode: Mode,
    pub dual_payoff: DualPayoff,
}

/// Enumerates every play of one to `horizon` system moves (each followed by
/// the environment's reveal) from `from` and returns one whose objective is
/// maximal. `images` are joined into the goal components, so plays are
/// scored by what they would add to the current images.
pub fn plan_play(
    sc: &Scenario,
    from: Cell,
    goals: &[usize],
    images: Option<&[u32]>,
    opts: PlanOptions,
) -> Result<Plan, PlanError> {
    if sc.neighbours(from).next().is_none() {
        return Err(PlanError::HorizonEmpty);
    }
    let depth = sc.horizon.max(1);
    let mut base = position_value(sc, from, goals, opts.mode, opts.dual_payoff);
    if let Some(images) = images {
        for (slot, &g) in base.goals.iter_mut().zip(goals) {
            *slot |= images[g];
        }
    }

    let mut plays: Vec<(Vec<Dir>, Vec<Cell>, ProductValue)> = Vec::new();
    let mut stack = vec![(Vec::new(), vec![from], base)];
    while let Some((moves, cells, value)) = stack.pop() {
        if moves.len() < depth {
            let at = *cells.last().expect("plays start somewhere");
            for (d, next) in sc.neighbours(at) {
                let v = value.join(&position_value(sc, next, goals, opts.mode, opts.dual_payoff));
                let mut m = moves.clone();
                m.push(d);
                let mut c = cells.clone();
                c.push(next);
                stack.push((m, c, v));
            }
        }
        if !moves.is_empty() {
            plays.push((moves, cells, value));
        }
    }

    let distinct: BTreeSet<&ProductValue> = plays.iter().map(|p| &p.2).collect();
    let maximal: Vec<&ProductValue> = distinct
        .iter()
        .copied()
        .filter(|v| !distinct.iter().any(|w| w != v && v.leq(w)))
        .collect();
    let on_maximal = plays.iter().filter(|p| maximal.contains(&&p.2)).count();
    let best = plays
        .iter()
        .min_by(|a, b| {
            b.2.rank()
                .cmp(&a.2.rank())
                .then(a.0.len().cmp(&b.0.len()))
                .then(a.0.cmp(&b.0))
        })
        .expect("a legal move exists");

    let reach = reachable(sc, from, usize::MAX);
    let unreachable = goals
        .iter()
        .copied()
        .filter(|&g| !reach.contains_key(&sc.objects[g].cell))
        .collect();
    Ok(Plan {
        moves: best.0.clone(),
        cells: best.1.clone(),
        objective: best.2.clone(),
        enumerated: plays.len(),
        maximal_objectives: maximal.len(),
        tie_broken: on_maximal > 1,
        unreachable,
    })
}

/// Free cells within `limit` moves of `from`, with their distance.
pub(crate) fn reachable(sc: &Scenario, from: Cell, limit: usize) -> HashMap<Cell, usize> {
    let mut dist = HashMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d == limit {
            continue;
        }
        for (_, q) in sc.neighbours(p) {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(q) {
                slot.insert(d + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

/// `A ⊸ B_1 ⊗ ... ⊗ B_k` around the current position.
#[derive(Clone, Debug)]
pub struct CompoundGame {
    pub game: Arc<Game>,
    /// The movement game `A` inside the horizon.
    pub movement: Arc<Game>,
    /// Cell of each vertex of `A`.
    pub movement_cells: Vec<Cell>,
    /// The reveal chain `B_i` of each goal.
    pub goal_games: Vec<Arc<Game>>,
    /// Features revealed at each vertex of each `B_i`.
    pub goal_levels: Vec<Vec<u32>>,
    pub goals: Vec<usize>,
}

impl CompoundGame {
    /// Payoff at a vertex of the compound game: the free-move component
    /// follows `dual` (as in the practical objective) and the goal
    /// components are the meet `k^{B_1} & ... & k^{B_k}` in the product.
    pub fn payoff(&self, sc: &Scenario, v: usize, dual: DualPayoff) -> ProductValue {
        let (a, mut b) = self.game.split_vertex(v).expect("compound games have two factors");
        let mut goals = vec![0; self.goal_games.len()];
        for i in (0..self.goal_games.len()).rev() {
            let n = self.goal_games[i].vertex_count();
            goals[i] = self.goal_levels[i][b % n];
            b /= n;
        }
        let k_a = freedom(sc, self.movement_cells[a]);
        let free = match dual {
            DualPayoff::Negate => chain_neg(k_a),
            DualPayoff::Copy => k_a,
        };
        ProductValue { free, goals }
    }

    pub fn root_is_winning(&self, sc: &Scenario, dual: DualPayoff) -> bool {
        !self.payoff(sc, self.game.root(), dual).is_bottom()
    }
}

/// Builds the movement game inside the horizon (system moves are Opponent
/// moves into a pending cell, the environment's reveal is the Proponent
/// move out of it), one reveal chain per goal starting at what is visible
/// from `from`, and the compound `A ⊸ B_1 ⊗ ... ⊗ B_k`.
pub fn build_compound_game(sc: &Scenario, from: Cell, goals: &[usize]) -> Result<CompoundGame, PlanError> {
    let region = reachable(sc, from, usize::MAX)
        .into_keys()
        .filter(|&c| chebyshev(c, from) <= sc.horizon)
        .collect::<BTreeSet<Cell>>();
    let mut names = Vec::new();
    let mut cells = Vec::new();
    let mut index = HashMap::new();
    for &c in &region {
        index.insert((c, false), names.len());
        names.push(format!("{},{}", c.0, c.1));
        cells.push(c);
    }
    let mut moves = Vec::new();
    for &c in &region {
        for (_, d) in sc.neighbours(c) {
            if !region.contains(&d) {
                continue;
            }
            let pending = *index.entry((d, true)).or_insert_with(|| {
                names.push(format!("{},{}'", d.0, d.1));
                cells.push(d);
                names.len() - 1
            });
            moves.push(Move {
                from: index[&(c, false)],
                to: pending,
                polarity: Polarity::Opponent,
            });
        }
    }
    for &c in &region {
        if let Some(&pending) = index.get(&(c, true)) {
            moves.push(Move {
                from: pending,
                to: index[&(c, false)],
                polarity: Polarity::Proponent,
            });
        }
    }
    let root_has_reward = goals.iter().any(|&g| visible_mask(sc, g, from) != 0);
    if moves.is_empty() && !root_has_reward {
        return Err(PlanError::HorizonEmpty);
    }
    let movement = Game::new(names, index[&(from, false)], moves).map_err(PlanError::Game)?;

    let mut goal_games = Vec::new();
    let mut goal_levels = Vec::new();
    for &g in goals {
        let o = &sc.objects[g];
        let start = visible_mask(sc, g, from).count_ones() as usize;
        let n = o.features.len();
        let mut names = vec![format!("{}:{start}", o.id)];
        let mut levels = vec![(1u32 << start) - 1];
        let mut moves = Vec::new();
        for level in start..n {
            let here = names.len() - 1;
            names.push(format!("{}:{level}'", o.id));
            levels.push((1u32 << level) - 1);
            names.push(format!("{}:{}", o.id, level + 1));
            levels.push((1u32 << (level + 1)) - 1);
            moves.push(Move {
                from: here,
                to: here + 1,
                polarity: Polarity::Opponent,
            });
            moves.push(Move {
                from: here + 1,
                to: here + 2,
                polarity: Polarity::Proponent,
            });
        }
        goal_games.push(Arc::new(Game::new(names, 0, moves).map_err(PlanError::Game)?));
        goal_levels.push(levels);
    }
    let goals_game = goal_games
        .iter()
        .skip(1)
        .fold(goal_games.first().map_or_else(Game::unit, |g| (**g).clone()), |acc, g| {
            tensor_game(&acc, g)
        });
    let game = implication_game(&movement, &goals_game);
    Ok(CompoundGame {
        game: Arc::new(game),
        movement: Arc::new(movement),
        movement_cells: cells,
        goal_games,
        goal_levels,
        goals: goals.to_vec(),
    })
}

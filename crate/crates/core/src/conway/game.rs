use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GameError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "O")]
    Opponent,
    #[serde(rename = "P")]
    Proponent,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Opponent => Polarity::Proponent,
            Polarity::Proponent => Polarity::Opponent,
        }
    }

    /// `-1` for Opponent, `+1` for Proponent.
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Opponent => -1,
            Polarity::Proponent => 1,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Opponent => "O",
            Polarity::Proponent => "P",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub from: usize,
    pub to: usize,
    pub polarity: Polarity,
}

/// Which factor of a two-factor game a move belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// How a game was assembled. Only used to take composite games apart again.
#[derive(Clone, Debug)]
pub enum Shape {
    Atomic,
    Tensor(Box<Game>, Box<Game>),
    /// `X ⊸ Y`, laid out as the tensor `X^⊥ ⊗ Y`.
    Implication(Box<Game>, Box<Game>),
}

/// A rooted graph of positions with polarized moves.
///
/// Equality compares the graph (names, root, moves) and ignores how it was
/// built.
#[derive(Clone, Debug)]
pub struct Game {
    names: Vec<String>,
    root: usize,
    moves: Vec<Move>,
    out: Vec<Vec<usize>>,
    shape: Shape,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.root == other.root && self.moves == other.moves
    }
}

impl Eq for Game {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDoc {
    pub vertices: Vec<String>,
    pub root: String,
    pub edges: Vec<(String, String, Polarity)>,
    /// Payoff lattice file, relative to the game file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<BTreeMap<String, String>>,
}

impl Game {
    pub fn new(names: Vec<String>, root: usize, moves: Vec<Move>) -> Result<Self, GameError> {
        let n = names.len();
        let mut seen = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(GameError::DuplicateVertex(name.clone()));
            }
        }
        if root >= n {
            return Err(GameError::UnknownVertex(format!("#{root}")));
        }
        let mut out = vec![Vec::new(); n];
        for (id, m) in moves.iter().enumerate() {
            if m.from >= n || m.to >= n {
                return Err(GameError::UnknownVertex(format!("#{}", m.from.max(m.to))));
            }
            out[m.from].push(id);
        }
        let mut reached = vec![false; n];
        reached[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &id in &out[v] {
                let w = moves[id].to;
                if !reached[w] {
                    reached[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = reached.iter().position(|r| !r) {
            return Err(GameError::Unreachable(names[v].clone()));
        }
        Ok(Self {
            names,
            root,
            moves,
            out,
            shape: Shape::Atomic,
        })
    }

    /// The one-position game with no moves; the unit of `⊗`.
    pub fn unit() -> Self {
        Self::new(vec!["*".into()], 0, Vec::new()).expect("unit game is valid")
    }

    pub fn from_doc(doc: &GameDoc) -> Result<Self, GameError> {
        let idx = |n: &str| {
            doc.vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| GameError::UnknownVertex(n.to_string()))
        };
        let moves = doc
            .edges
            .iter()
            .map(|(a, b, p)| {
                Ok(Move {
                    from: idx(a)?,
                    to: idx(b)?,
                    polarity: *p,
                })
            })
            .collect::<Result<Vec<_>, GameError>>()?;
        Self::new(doc.vertices.clone(), idx(&doc.root)?, moves)
    }

    pub fn to_doc(&self) -> GameDoc {
        GameDoc {
            vertices: self.names.clone(),
            root: self.names[self.root].clone(),
            edges: self
                .moves
                .iter()
                .map(|m| (self.names[m.from].clone(), self.names[m.to].clone(), m.polarity))
                .collect(),
            lattice: None,
            k: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn moves_from(&self, v: usize) -> impl Iterator<Item = (usize, &Move)> + '_ {
        self.out[v].iter().map(move |&id| (id, &self.moves[id]))
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        for m in &self.moves {
            indegree[m.to] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &id in &self.out[v] {
                let w = self.moves[id].to;
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        seen == n
    }

    /// Position reached by `play`, or `None` if it is not a path from the root.
    pub fn endpoint(&self, play: &[usize]) -> Option<usize> {
        let mut at = self.root;
        for &id in play {
            let m = self.moves.get(id)?;
            if m.from != at {
                return None;
            }
            at = m.to;
        }
        Some(at)
    }

    /// Adjacent moves have different polarities.
    pub fn is_alternated(&self, play: &[usize]) -> bool {
        play.windows(2)
            .all(|w| self.moves[w[0]].polarity != self.moves[w[1]].polarity)
    }

    /// For a two-factor game: the side and factor move of an ambient move.
    pub fn split_move(&self, id: usize) -> Option<(Side, usize)> {
        let (left, right) = self.factors()?;
        let left_block = left.moves.len() * right.vertex_count();
        Some(if id < left_block {
            (Side::Left, id / right.vertex_count())
        } else {
            (Side::Right, (id - left_block) / left.vertex_count())
        })
    }

    /// For a two-factor game: the ambient move for factor move `factor_move`
    /// on `side`, with the other factor sitting at `other`.
    pub fn join_move(&self, side: Side, factor_move: usize, other: usize) -> Option<usize> {
        let (left, right) = self.factors()?;
        Some(match side {
            Side::Left => factor_move * right.vertex_count() + other,
            Side::Right => {
                left.moves.len() * right.vertex_count() + factor_move * left.vertex_count() + other
            }
        })
    }

    /// Factor positions of an ambient position.
    pub fn split_vertex(&self, v: usize) -> Option<(usize, usize)> {
        let (_, right) = self.factors()?;
        Some((v / right.vertex_count(), v % right.vertex_count()))
    }

    /// The two factors of a tensor, or `(X, Y)` of `X ⊸ Y` (not `X^⊥`).
    pub fn factors(&self) -> Option<(&Game, &Game)> {
        match &self.shape {
            Shape::Atomic => None,
            Shape::Tensor(a, b) | Shape::Implication(a, b) => Some((a, b)),
        }
    }
}

/// Same graph, every polarity reversed.
pub fn dual_game(g: &Game) -> Game {
    Game {
        names: g.names.clone(),
        root: g.root,
        moves: g
            .moves
            .iter()
            .map(|m| Move {
                polarity: m.polarity.flip(),
                ..*m
            })
            .collect(),
        out: g.out.clone(),
        shape: Shape::Atomic,
    }
}

fn pair_name(a: &str, b: &str) -> String {
    let wrap = |s: &str| {
        if s.contains('⊗') {
            format!("({s})")
        } else {
            s.to_string()
        }
    };
    format!("{}⊗{}", wrap(a), wrap(b))
}

fn product(x: &Game, y: &Game) -> Game {
    let (nx, ny) = (x.vertex_count(), y.vertex_count());
    let mut names = Vec::with_capacity(nx * ny);
    for a in &x.names {
        for b in &y.names {
            names.push(pair_name(a, b));
        }
    }
    let mut moves = Vec::with_capacity(x.moves.len() * ny + y.moves.len() * nx);
    for m in &x.moves {
        for j in 0..ny {
            moves.push(Move {
                from: m.from * ny + j,
                to: m.to * ny + j,
                polarity: m.polarity,
            });
        }
    }
    for m in &y.moves {
        for i in 0..nx {
            moves.push(Move {
                from: i * ny + m.from,
                to: i * ny + m.to,
                polarity: m.polarity,
            });
        }
    }
    let mut out = vec![Vec::new(); nx * ny];
    for (id, m) in moves.iter().enumerate() {
        out[m.from].push(id);
    }
    Game {
        names,
        root: x.root * ny + y.root,
        moves,
        out,
        shape: Shape::Atomic,
    }
}

/// Product of the underlying graphs; each move keeps its factor's polarity.
pub fn tensor_game(x: &Game, y: &Game) -> Game {
    let mut g = product(x, y);
    g.shape = Shape::Tensor(Box::new(x.clone()), Box::new(y.clone()));
    g
}

/// `X ⊸ Y = X^⊥ ⅋ Y`, with `⅋` identified with `⊗` on underlying graphs.
pub fn implication_game(x: &Game, y: &Game) -> Game {
    let mut g = product(&dual_game(x), y);
    g.shape = Shape::Implication(Box::new(x.clone()), Box::new(y.clone()));
    g
}

/// Whether `vertex_map`/`move_map` carry `a` onto `b` exactly: root to root,
/// every move to a move with the same endpoints' images and polarity.
pub fn is_isomorphism(a: &Game, b: &Game, vertex_map: &[usize], move_map: &[usize]) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.moves.len() != b.moves.len()
        || vertex_map.len() != a.vertex_count()
        || move_map.len() != a.moves.len()
    {
        return false;
    }
    let mut hit_v = vec![false; b.vertex_count()];
    for &v in vertex_map {
        if v >= hit_v.len() || std::mem::replace(&mut hit_v[v], true) {
            return false;
        }
    }
    let mut hit_m = vec![false; b.moves.len()];
    for (id, m) in a.moves.iter().enumerate() {
        let target = move_map[id];
        if target >= hit_m.len() || std::mem::replace(&mut hit_m[target], true) {
            return false;
        }
        let t = &b.moves[target];
        if t.from != vertex_map[m.from] || t.to != vertex_map[m.to] || t.polarity != m.polarity {
            return false;
        }
    }
    vertex_map[a.root] == b.root
}

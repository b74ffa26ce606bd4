use std::path::Path;
use std::sync::Arc;

use super::game::{dual_game, implication_game, tensor_game, Game, GameDoc};
use super::strategy::Strategy;
use super::GameError;
use crate::lattice::{Element, Lattice, LatticeError};

/// A game with a weight in a distributive lattice at every position.
#[derive(Clone, Debug)]
pub struct PayoffGame {
    game: Arc<Game>,
    lattice: Arc<Lattice>,
    k: Vec<Element>,
}

/// How the payoff of `X^⊥` is read off the payoff of `X`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DualPayoff {
    /// Heyting negation, `k(v) ⇒ 0`.
    #[default]
    Negate,
    /// The same weight.
    Copy,
}

impl std::str::FromStr for DualPayoff {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "negate" => Ok(DualPayoff::Negate),
            "copy" => Ok(DualPayoff::Copy),
            _ => Err(format!("unknown dual payoff `{s}` (negate | copy)")),
        }
    }
}

impl std::fmt::Display for DualPayoff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DualPayoff::Negate => "negate",
            DualPayoff::Copy => "copy",
        })
    }
}

impl PayoffGame {
    pub fn new(game: Arc<Game>, lattice: Arc<Lattice>, k: Vec<Element>) -> Result<Self, GameError> {
        if k.len() != game.vertex_count() {
            let missing = game.names().get(k.len()).cloned().unwrap_or_default();
            return Err(GameError::PayoffMissing(missing));
        }
        for &x in &k {
            lattice.check(x)?;
        }
        if !lattice.is_distributive() {
            let (a, b) = (lattice.bottom(), lattice.top());
            return Err(LatticeError::NotHeyting {
                a: lattice.name(a).to_string(),
                b: lattice.name(b).to_string(),
            }
            .into());
        }
        Ok(Self { game, lattice, k })
    }

    /// Reads a game document with `lattice` and `k`. The lattice path is
    /// resolved against the game file's directory.
    pub fn from_doc(doc: &GameDoc, base: &Path) -> Result<Self, crate::Error> {
        let game = Game::from_doc(doc)?;
        let rel = doc
            .lattice
            .as_deref()
            .ok_or_else(|| GameError::PayoffMissing(game.names()[0].clone()))?;
        let lattice = Arc::new(Lattice::from_json(&crate::error::read_file(&base.join(rel))?)?);
        let k_doc = doc.k.clone().unwrap_or_default();
        let k = game
            .names()
            .iter()
            .map(|v| {
                let name = k_doc.get(v).ok_or_else(|| GameError::PayoffMissing(v.clone()))?;
                lattice.element(name).map_err(GameError::from)
            })
            .collect::<Result<Vec<_>, GameError>>()?;
        Ok(Self::new(Arc::new(game), lattice, k)?)
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.game
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn k(&self, v: usize) -> Element {
        self.k[v]
    }

    pub fn weights(&self) -> &[Element] {
        &self.k
    }
}

fn same_lattice(a: &PayoffGame, b: &PayoffGame) -> Result<(), GameError> {
    if a.lattice.id() != b.lattice.id() {
        return Err(GameError::LatticeMismatch);
    }
    Ok(())
}

/// `k(x⊗y) = k(x) ∧ k(y)`.
pub fn payoff_tensor(a: &PayoffGame, b: &PayoffGame) -> Result<PayoffGame, GameError> {
    same_lattice(a, b)?;
    let l = &a.lattice;
    let ny = b.game.vertex_count();
    let k = (0..a.game.vertex_count() * ny)
        .map(|v| l.meet2(a.k[v / ny], b.k[v % ny]))
        .collect::<Result<Vec<_>, _>>()?;
    PayoffGame::new(Arc::new(tensor_game(&a.game, &b.game)), l.clone(), k)
}

/// `k(x⊸y) = k(x) ⇒ k(y)`.
pub fn payoff_implication(a: &PayoffGame, b: &PayoffGame) -> Result<PayoffGame, GameError> {
    same_lattice(a, b)?;
    let l = &a.lattice;
    let ny = b.game.vertex_count();
    let k = (0..a.game.vertex_count() * ny)
        .map(|v| l.heyting_implies(a.k[v / ny], b.k[v % ny]))
        .collect::<Result<Vec<_>, _>>()?;
    PayoffGame::new(Arc::new(implication_game(&a.game, &b.game)), l.clone(), k)
}

pub fn payoff_dual(a: &PayoffGame, mode: DualPayoff) -> Result<PayoffGame, GameError> {
    let k = match mode {
        DualPayoff::Copy => a.k.clone(),
        DualPayoff::Negate => a
            .k
            .iter()
            .map(|&x| a.lattice.heyting_neg(x))
            .collect::<Result<Vec<_>, _>>()?,
    };
    PayoffGame::new(Arc::new(dual_game(&a.game)), a.lattice.clone(), k)
}

/// Every maximal play of `s` ends at a position with non-bottom weight.
pub fn is_winning(s: &Strategy, pg: &PayoffGame) -> Result<bool, GameError> {
    if **s.game() != *pg.game {
        return Err(GameError::GameMismatch);
    }
    let bottom = pg.lattice.bottom();
    Ok(s.maximal_plays().all(|p| {
        let v = pg.game.endpoint(p).expect("strategy plays are paths");
        pg.k[v] != bottom
    }))
}

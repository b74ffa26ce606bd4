use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use super::PlanError;
use crate::lattice::Element;

/// Most objects a selection may range over (it enumerates all subsets).
pub const MAX_DISCOVERED: usize = 12;

/// Priority `a ⊸ b_1 × ... × b_k = (a × (b_1 × ... × b_k)^⊥)^⊥` of running
/// the goals of `goals` (object indices) in parallel, with `×` the raw
/// monoid product.
pub fn eval_priority(sc: &Scenario, goals: &[usize]) -> Result<Element, PlanError> {
    let (first, rest) = goals.split_first().ok_or(PlanError::NoGoals)?;
    let ps = &sc.phase;
    let mut product = sc.objects[*first].goal;
    for &g in rest {
        product = ps.mult(product, sc.objects[g].goal)?;
    }
    let inner = ps.mult(sc.free_move_goal, ps.dual(product)?)?;
    Ok(ps.dual(inner)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalProcessSet {
    /// Object indices in scenario order.
    pub goals: Vec<usize>,
    pub priority: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    /// Every evaluated subset, in scenario order of subsets.
    pub candidates: Vec<GoalProcessSet>,
    /// The maximal-priority subsets with the most goals, best first.
    pub selected: Vec<GoalProcessSet>,
    /// Every candidate has the same priority, so the goal lattice does not
    /// tell the variants apart and the choice rests on tie-breaks alone.
    pub indistinguishable: bool,
    /// How the first selected set was singled out.
    pub tie_break: TieBreak,
}

impl Selection {
    pub fn chosen(&self) -> &GoalProcessSet {
        &self.selected[0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// One set dominates.
    None,
    GoalCount,
    Attractiveness,
    NameOrder,
}

/// All non-empty subsets of `discovered` (containing `must_include` when it
/// is given and discovered), ranked by priority.
pub fn select_goal_sets(
    sc: &Scenario,
    discovered: &[usize],
    must_include: Option<usize>,
) -> Result<Selection, PlanError> {
    let mut pool: Vec<usize> = discovered.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if pool.is_empty() {
        return Err(PlanError::NoGoals);
    }
    if pool.len() > MAX_DISCOVERED {
        return Err(PlanError::TooManyGoals(pool.len()));
    }
    let must = must_include.filter(|m| pool.contains(m));
    let subsets = (1u32..(1 << pool.len()))
        .map(|mask| {
            (0..pool.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pool[i])
                .collect::<Vec<_>>()
        })
        .filter(|s| must.is_none_or(|m| s.contains(&m)));
    select_among(sc, subsets)
}

/// Ranks the given goal sets.
pub fn select_among(
    sc: &Scenario,
    sets: impl IntoIterator<Item = Vec<usize>>,
) -> Result<Selection, PlanError> {
    let mut candidates = Vec::new();
    for mut goals in sets {
        goals.sort_unstable();
        goals.dedup();
        if candidates.iter().any(|c: &GoalProcessSet| c.goals == goals) {
            continue;
        }
        let priority = eval_priority(sc, &goals)?;
        candidates.push(GoalProcessSet { goals, priority });
    }
    candidates.sort_by(|a, b| name_key(sc, a).cmp(&name_key(sc, b)));
    if candidates.is_empty() {
        return Err(PlanError::NoGoals);
    }
    let l = sc.phase.lattice();
    let strictly_below = |x: Element, y: Element| x != y && l.leq(x, y).unwrap_or(false);
    let maximal: Vec<&GoalProcessSet> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| strictly_below(c.priority, d.priority)))
        .collect();
    let most = maximal.iter().map(|c| c.goals.len()).max().unwrap_or(0);
    let mut selected: Vec<GoalProcessSet> = maximal
        .iter()
        .filter(|c| c.goals.len() == most)
        .map(|c| (*c).clone())
        .collect();
    selected.sort_by(|a, b| {
        attractiveness_key(sc, a)
            .cmp(&attractiveness_key(sc, b))
            .then_with(|| name_key(sc, a).cmp(&name_key(sc, b)))
    });

    let tie_break = if maximal.len() == 1 {
        TieBreak::None
    } else if selected.len() == 1 {
        TieBreak::GoalCount
    } else if attractiveness_key(sc, &selected[0]).cmp(&attractiveness_key(sc, &selected[1])) == Ordering::Less {
        TieBreak::Attractiveness
    } else {
        TieBreak::NameOrder
    };
    let first = candidates[0].priority;
    let indistinguishable = candidates.len() > 1 && candidates.iter().all(|c| c.priority == first);
    Ok(Selection {
        candidates,
        selected,
        indistinguishable,
        tie_break,
    })
}

fn attractiveness_key(sc: &Scenario, s: &GoalProcessSet) -> Vec<u32> {
    let mut ranks: Vec<u32> = s
        .goals
        .iter()
        .map(|&g| sc.objects[g].attractiveness.unwrap_or(u32::MAX))
        .collect();
    ranks.sort_unstable();
    ranks
}

fn name_key<'a>(sc: &'a Scenario, s: &GoalProcessSet) -> Vec<&'a str> {
    let mut names: Vec<&str> = s.goals.iter().map(|&g| sc.objects[g].id.as_str()).collect();
    names.sort_unstable();
    names
}

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PlanError;
use crate::lattice::{Element, Lattice};
use crate::phase::{lattice_for_table, load_phase, PhaseStructure, TableDoc};

/// `(row, column)`, row 0 at the top.
pub type Cell = (usize, usize);

/// Most features an object may carry; its reward lattice is their powerset.
pub const MAX_FEATURES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDoc {
    pub id: String,
    pub cell: Cell,
    /// In the order they are revealed.
    pub features: Vec<String>,
    pub goal: String,
    /// Lower ranks are more attractive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attractiveness: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    #[serde(default)]
    pub name: String,
    /// Rows of `.` (free) and `#` (wall).
    pub grid: Vec<String>,
    pub start: Cell,
    pub horizon: usize,
    /// Phase file, relative to the scenario file.
    pub goal_phase: String,
    /// Overrides the lattice named by the phase file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_lattice: Option<String>,
    pub free_move_goal: String,
    #[serde(default)]
    pub objects: Vec<ObjectDoc>,
    /// Object every selected goal set must contain. When absent the
    /// best-seen discovered object is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub must_include: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Object {
    pub id: String,
    pub cell: Cell,
    pub features: Vec<String>,
    pub goal: Element,
    pub attractiveness: Option<u32>,
    /// Powerset of `features`; element index = bitmask.
    pub rewards: Arc<Lattice>,
}

impl Object {
    pub fn full_mask(&self) -> u32 {
        (1u32 << self.features.len()) - 1
    }

    pub fn reward(&self, mask: u32) -> Element {
        self.rewards.at(mask as usize)
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub width: usize,
    pub height: usize,
    passable: Vec<bool>,
    pub start: Cell,
    pub horizon: usize,
    pub phase: Arc<PhaseStructure>,
    pub free_move_goal: Element,
    pub objects: Vec<Object>,
    pub must_include: Option<usize>,
}

impl Scenario {
    pub fn from_doc(doc: &ScenarioDoc, phase: Arc<PhaseStructure>) -> Result<Self, PlanError> {
        let height = doc.grid.len();
        let width = doc.grid.first().map_or(0, |r| r.chars().count());
        if height == 0 || width == 0 {
            return Err(PlanError::BadGrid("grid is empty".into()));
        }
        let mut passable = Vec::with_capacity(width * height);
        for (r, row) in doc.grid.iter().enumerate() {
            if row.chars().count() != width {
                return Err(PlanError::BadGrid(format!("row {r} has a different width")));
            }
            for c in row.chars() {
                passable.push(match c {
                    '.' => true,
                    '#' => false,
                    other => return Err(PlanError::BadGrid(format!("unknown cell `{other}` in row {r}"))),
                });
            }
        }
        let in_grid = |(r, c): Cell| r < height && c < width;
        if !in_grid(doc.start) || !passable[doc.start.0 * width + doc.start.1] {
            return Err(PlanError::BadGrid(format!("start {:?} is not a free cell", doc.start)));
        }

        let lattice = phase.lattice().clone();
        let goal_element = |name: &str| {
            lattice
                .element(name)
                .map_err(|_| PlanError::UnknownGoalElement(name.to_string()))
        };
        let free_move_goal = goal_element(&doc.free_move_goal)?;
        let mut objects: Vec<Object> = Vec::with_capacity(doc.objects.len());
        for o in &doc.objects {
            if !in_grid(o.cell) {
                return Err(PlanError::BadGrid(format!("object `{}` lies outside the grid", o.id)));
            }
            if o.features.is_empty() || o.features.len() > MAX_FEATURES {
                return Err(PlanError::BadObject(format!(
                    "object `{}` needs between 1 and {MAX_FEATURES} features",
                    o.id
                )));
            }
            if objects.iter().any(|p| p.id == o.id) {
                return Err(PlanError::BadObject(format!("duplicate object `{}`", o.id)));
            }
            let goal = goal_element(&o.goal)?;
            if !is_goal_element(&lattice, goal, free_move_goal) {
                return Err(PlanError::UnknownGoalElement(o.goal.clone()));
            }
            if objects.iter().any(|p| p.goal == goal) {
                return Err(PlanError::BadObject(format!("goal `{}` is used twice", o.goal)));
            }
            let rewards = Lattice::powerset(&o.features)
                .map_err(|e| PlanError::BadObject(format!("object `{}`: {e}", o.id)))?;
            objects.push(Object {
                id: o.id.clone(),
                cell: o.cell,
                features: o.features.clone(),
                goal,
                attractiveness: o.attractiveness,
                rewards: Arc::new(rewards),
            });
        }
        let must_include = match &doc.must_include {
            None => None,
            Some(id) => Some(
                objects
                    .iter()
                    .position(|o| &o.id == id)
                    .ok_or_else(|| PlanError::BadObject(format!("must_include names unknown object `{id}`")))?,
            ),
        };
        Ok(Self {
            name: doc.name.clone(),
            width,
            height,
            passable,
            start: doc.start,
            horizon: doc.horizon,
            phase,
            free_move_goal,
            objects,
            must_include,
        })
    }

    /// The same scenario over another phase structure on an equal lattice.
    pub fn with_phase(&self, phase: Arc<PhaseStructure>) -> Result<Self, PlanError> {
        let old = self.phase.lattice();
        let new = phase.lattice();
        let rebind = |x: Element| {
            let name = old.name(x);
            new.element(name)
                .map_err(|_| PlanError::UnknownGoalElement(name.to_string()))
        };
        let mut out = self.clone();
        out.free_move_goal = rebind(self.free_move_goal)?;
        for o in &mut out.objects {
            o.goal = rebind(o.goal)?;
        }
        out.phase = phase;
        Ok(out)
    }

    pub fn is_passable(&self, (r, c): Cell) -> bool {
        r < self.height && c < self.width && self.passable[r * self.width + c]
    }

    pub fn object(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }

    /// Free cells one step away, in the order north, east, south, west.
    pub fn neighbours(&self, (r, c): Cell) -> impl Iterator<Item = (Dir, Cell)> + '_ {
        Dir::ALL.into_iter().filter_map(move |d| {
            let (dr, dc) = d.offset();
            let nr = r.checked_add_signed(dr)?;
            let nc = c.checked_add_signed(dc)?;
            self.is_passable((nr, nc)).then_some((d, (nr, nc)))
        })
    }
}

/// A generator, or the join of a generator with the free-move goal (the
/// `J_{1a}` form for a goal together with its achieving process).
fn is_goal_element(l: &Lattice, x: Element, free_move: Element) -> bool {
    if l.is_join_irreducible(x) {
        return true;
    }
    l.elements().any(|g| {
        g != free_move && l.is_join_irreducible(g) && l.join2(g, free_move).ok() == Some(x)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    fn offset(self) -> (isize, isize) {
        match self {
            Dir::N => (-1, 0),
            Dir::E => (0, 1),
            Dir::S => (1, 0),
            Dir::W => (0, -1),
        }
    }
}

/// Reads a scenario and the phase file it references.
pub fn load_scenario(path: &Path) -> Result<Scenario, crate::Error> {
    let doc: ScenarioDoc = serde_json::from_str(&crate::error::read_file(path)?)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let phase_path = base.join(&doc.goal_phase);
    let lattice_path = doc.goal_lattice.as_ref().map(|p| base.join(p));
    let phase = (|| -> Result<PhaseStructure, crate::Error> {
        let table: TableDoc = serde_json::from_str(&crate::error::read_file(&phase_path)?)?;
        let lattice = lattice_for_table(&phase_path, &table, lattice_path.as_deref())?;
        Ok(load_phase(lattice, &table)?)
    })()
    .map_err(|e| {
        if e.is_parse_error() {
            e
        } else {
            PlanError::PhaseLoadFailure(e.to_string()).into()
        }
    })?;
    Ok(Scenario::from_doc(&doc, Arc::new(phase))?)
}

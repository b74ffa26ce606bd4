use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::play::{plan_play, reachable, visible_mask, Mode, PlanOptions};
use super::scenario::{Cell, Scenario};
use super::select::{select_among, select_goal_sets, Selection, TieBreak};
use super::PlanError;
use crate::conway::DualPayoff;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CognitionOptions {
    pub mode: Mode,
    pub dual_payoff: DualPayoff,
    pub max_steps: usize,
    /// Recorded in the trace header. The loop itself is deterministic.
    pub seed: u64,
    /// How far ahead saturation is checked; the horizon when `None`.
    pub saturation_depth: Option<usize>,
}

impl Default for CognitionOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Practical,
            dual_payoff: DualPayoff::Negate,
            max_steps: 50,
            seed: 0,
            saturation_depth: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    System,
    Environment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub scenario: String,
    pub mode: Mode,
    pub dual_payoff: String,
    pub seed: u64,
    pub max_steps: usize,
    pub horizon: usize,
    pub saturation_depth: usize,
    /// How payoffs of the movement game and the goal games are combined.
    pub objective_carrier: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub actor: Actor,
    /// A compass direction for the system, `reveal` for the environment.
    pub action: String,
    pub position: Cell,
    /// Accumulated image of every object after this entry.
    pub images: BTreeMap<String, String>,
    /// Objective of the plan the system move came from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub goals: Vec<String>,
    pub priority: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Decision {
    Discovered {
        step: usize,
        objects: Vec<String>,
    },
    Selected {
        step: usize,
        must_include: Option<String>,
        candidates: Vec<Candidate>,
        selected: Vec<Vec<String>>,
        chosen: Vec<String>,
        tie_break: TieBreak,
        indistinguishable: bool,
    },
    Planned {
        step: usize,
        goals: Vec<String>,
        enumerated: usize,
        maximal_objectives: usize,
        tie_broken: bool,
        objective: String,
        unreachable: Vec<String>,
    },
    Saturated {
        step: usize,
        goals: Vec<String>,
    },
    Shrunk {
        step: usize,
        from: Vec<String>,
        to: Vec<String>,
    },
    Wander {
        step: usize,
    },
    Stuck {
        step: usize,
    },
    StepLimit {
        step: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub header: TraceHeader,
    pub initial_images: BTreeMap<String, String>,
    pub steps: Vec<TraceStep>,
    /// Cells of the executed play, starting at the start cell.
    pub play: Vec<Cell>,
    pub decisions: Vec<Decision>,
    pub final_goals: Vec<String>,
    pub final_images: BTreeMap<String, String>,
    /// False when the run stopped at the step limit.
    pub complete: bool,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize") + "\n"
    }
}

struct Run<'a> {
    sc: &'a Scenario,
    depth: usize,
    pos: Cell,
    images: Vec<u32>,
    discovered: Vec<usize>,
    active: Option<Vec<usize>>,
    decisions: Vec<Decision>,
    steps: Vec<TraceStep>,
    play: Vec<Cell>,
}

impl Run<'_> {
    fn ids(&self, goals: &[usize]) -> Vec<String> {
        goals.iter().map(|&g| self.sc.objects[g].id.clone()).collect()
    }

    fn image_names(&self) -> BTreeMap<String, String> {
        self.sc
            .objects
            .iter()
            .zip(&self.images)
            .map(|(o, &m)| (o.id.clone(), o.rewards.name(o.reward(m)).to_string()))
            .collect()
    }

    fn reveal(&mut self) {
        for (i, img) in self.images.iter_mut().enumerate() {
            *img |= visible_mask(self.sc, i, self.pos);
        }
    }

    fn discover(&mut self, step: usize) -> bool {
        let new: Vec<usize> = (0..self.sc.objects.len())
            .filter(|i| !self.discovered.contains(i) && self.images[*i] != 0)
            .collect();
        if new.is_empty() {
            return false;
        }
        self.decisions.push(Decision::Discovered {
            step,
            objects: self.ids(&new),
        });
        self.discovered.extend(new);
        self.discovered.sort_unstable();
        true
    }

    /// The scenario's declared object, or else the best-seen discovered one
    /// (most features known, then nearest, then attractiveness, then name).
    fn must_include(&self) -> Option<usize> {
        if let Some(m) = self.sc.must_include {
            return self.discovered.contains(&m).then_some(m);
        }
        self.discovered.iter().copied().min_by_key(|&i| {
            let o = &self.sc.objects[i];
            (
                std::cmp::Reverse(self.images[i].count_ones()),
                super::play::chebyshev(self.pos, o.cell),
                o.attractiveness.unwrap_or(u32::MAX),
                o.id.clone(),
            )
        })
    }

    fn record_selection(&mut self, step: usize, sel: &Selection, must: Option<usize>) {
        let l = self.sc.phase.lattice();
        self.decisions.push(Decision::Selected {
            step,
            must_include: must.map(|m| self.sc.objects[m].id.clone()),
            candidates: sel
                .candidates
                .iter()
                .map(|c| Candidate {
                    goals: self.ids(&c.goals),
                    priority: l.name(c.priority).to_string(),
                })
                .collect(),
            selected: sel.selected.iter().map(|s| self.ids(&s.goals)).collect(),
            chosen: self.ids(&sel.chosen().goals),
            tie_break: sel.tie_break,
            indistinguishable: sel.indistinguishable,
        });
    }

    /// No cell within the lookahead shows an active goal more than its image.
    fn saturated(&self, goals: &[usize]) -> bool {
        reachable(self.sc, self.pos, self.depth).keys().all(|&c| {
            goals
                .iter()
                .all(|&g| visible_mask(self.sc, g, c) & !self.images[g] == 0)
        })
    }
}

/// The cognition loop: discover, select goal sets, plan, move one step,
/// let the environment reveal, and shrink the active set whenever its
/// images saturate, until a single saturated goal remains.
pub fn run_cognition(sc: &Scenario, opts: CognitionOptions) -> Result<Trace, PlanError> {
    let depth = opts.saturation_depth.unwrap_or(sc.horizon);
    let mut run = Run {
        sc,
        depth,
        pos: sc.start,
        images: vec![0; sc.objects.len()],
        discovered: Vec::new(),
        active: None,
        decisions: Vec::new(),
        steps: Vec::new(),
        play: vec![sc.start],
    };
    run.reveal();
    let initial_images = run.image_names();
    let plan_opts = PlanOptions {
        mode: opts.mode,
        dual_payoff: opts.dual_payoff,
    };

    let mut complete = false;
    let mut step = 0;
    'outer: while step < opts.max_steps {
        if run.discover(step) || (run.active.is_none() && !run.discovered.is_empty()) {
            let must = run.must_include();
            let sel = select_goal_sets(sc, &run.discovered, must)?;
            run.record_selection(step, &sel, must);
            run.active = Some(sel.chosen().goals.clone());
        }
        let goals = loop {
            let Some(active) = run.active.clone() else {
                break Vec::new();
            };
            if !run.saturated(&active) {
                break active;
            }
            run.decisions.push(Decision::Saturated {
                step,
                goals: run.ids(&active),
            });
            if active.len() == 1 {
                complete = true;
                break 'outer;
            }
            let must = run.must_include().filter(|m| active.contains(m));
            let smaller = (1u32..(1 << active.len()))
                .filter(|mask| (mask.count_ones() as usize) < active.len())
                .map(|mask| {
                    (0..active.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| active[i])
                        .collect::<Vec<_>>()
                })
                .filter(|s| must.is_none_or(|m| s.contains(&m)));
            let sel = select_among(sc, smaller)?;
            run.record_selection(step, &sel, must);
            let next = sel.chosen().goals.clone();
            run.decisions.push(Decision::Shrunk {
                step,
                from: run.ids(&active),
                to: run.ids(&next),
            });
            run.active = Some(next);
        };
        if goals.is_empty() {
            run.decisions.push(Decision::Wander { step });
        }
        let plan = match plan_play(sc, run.pos, &goals, Some(&run.images), plan_opts) {
            Ok(p) => p,
            Err(PlanError::HorizonEmpty) => {
                run.decisions.push(Decision::Stuck { step });
                break;
            }
            Err(e) => return Err(e),
        };
        let objective = plan.objective.render(sc, &goals);
        run.decisions.push(Decision::Planned {
            step,
            goals: run.ids(&goals),
            enumerated: plan.enumerated,
            maximal_objectives: plan.maximal_objectives,
            tie_broken: plan.tie_broken,
            objective: objective.clone(),
            unreachable: run.ids(&plan.unreachable),
        });

        run.pos = plan.cells[1];
        run.play.push(run.pos);
        run.steps.push(TraceStep {
            step,
            actor: Actor::System,
            action: format!("{:?}", plan.moves[0]),
            position: run.pos,
            images: run.image_names(),
            objective: Some(objective),
        });
        run.reveal();
        run.steps.push(TraceStep {
            step,
            actor: Actor::Environment,
            action: "reveal".into(),
            position: run.pos,
            images: run.image_names(),
            objective: None,
        });
        step += 1;
    }
    if !complete && step >= opts.max_steps {
        run.decisions.push(Decision::StepLimit { step });
    }

    let final_goals = run.active.as_deref().map(|a| run.ids(a)).unwrap_or_default();
    Ok(Trace {
        header: TraceHeader {
            scenario: sc.name.clone(),
            mode: opts.mode,
            dual_payoff: opts.dual_payoff.to_string(),
            seed: opts.seed,
            max_steps: opts.max_steps,
            horizon: sc.horizon,
            saturation_depth: depth,
            objective_carrier: "componentwise product of the free-move chain and each goal's feature powerset"
                .into(),
        },
        initial_images,
        final_images: run.image_names(),
        steps: run.steps,
        play: run.play,
        decisions: run.decisions,
        final_goals,
        complete,
    })
}

/// The accumulated image masks recorded in a trace, in step order, checked
/// for monotonicity: every entry's image contains the previous one.
pub fn images_monotone(sc: &Scenario, trace: &Trace) -> bool {
    let mask_of = |id: &str, name: &str| -> Option<u32> {
        let o = &sc.objects[sc.object(id)?];
        let e = o.rewards.element(name).ok()?;
        Some(e.index() as u32)
    };
    let mut prev: BTreeMap<&str, u32> = BTreeMap::new();
    for images in std::iter::once(&trace.initial_images).chain(trace.steps.iter().map(|s| &s.images)) {
        for (id, name) in images {
            let Some(m) = mask_of(id, name) else {
                return false;
            };
            if let Some(&p) = prev.get(id.as_str()) {
                if p & !m != 0 {
                    return false;
                }
            }
            prev.insert(id, m);
        }
    }
    true
}

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{resolved, scenario};
use phaselog::conway::DualPayoff;
use phaselog::planner::{
    build_compound_game, eval_priority, images_monotone, plan_play, revealed, run_cognition, select_among,
    select_goal_sets, visible_rewards, Cell, CognitionOptions, Decision, Mode, PlanError, PlanOptions, Scenario,
    ScenarioDoc,
};
use serde_json::json;

const SCENARIOS: [&str; 5] = ["fig2", "empty", "single_cell", "object_at_start", "walled"];

fn ids(sc: &Scenario, names: &[&str]) -> Vec<usize> {
    names.iter().map(|n| sc.object(n).unwrap()).collect()
}

fn names(sc: &Scenario, goals: &[usize]) -> BTreeSet<String> {
    goals.iter().map(|&g| sc.objects[g].id.clone()).collect()
}

#[test]
fn shipped_scenarios_load() {
    for name in SCENARIOS {
        scenario(name);
    }
    let fig2 = scenario("fig2");
    assert_eq!(fig2.objects.len(), 4);
    // e is seen better than the others from the start
    let seen = visible_rewards(&fig2, fig2.start);
    let count = |i: usize| seen[i].index().count_ones();
    let e = fig2.object("e").unwrap();
    for i in (0..4).filter(|&i| i != e) {
        assert!(count(e) > count(i), "{}", fig2.objects[i].id);
    }
}

#[test]
fn goals_must_be_generators() {
    let doc: ScenarioDoc = serde_json::from_value(json!({
        "name": "bad", "grid": ["..."], "start": [0, 0], "horizon": 1,
        "goal_phase": "unused", "free_move_goal": "a",
        "objects": [{ "id": "x", "cell": [0, 2], "features": ["f"], "goal": "J12" }]
    }))
    .unwrap();
    let err = Scenario::from_doc(&doc, Arc::new(resolved())).unwrap_err();
    assert!(matches!(err, PlanError::UnknownGoalElement(..)), "{err}");
}

#[test]
fn reveal_schedule() {
    for h in 0..5 {
        for n in 1..6 {
            assert_eq!(revealed(n, 0, h), n);
            assert_eq!(revealed(n, h + 1, h), 0);
            assert!(revealed(n, h, h) >= 1);
            for d in 1..=h {
                assert!(revealed(n, d, h) <= revealed(n, d - 1, h));
            }
        }
    }
    assert_eq!(revealed(4, 3, 3), 1);
}

#[test]
fn visible_rewards_at_the_object_and_beyond_the_horizon() {
    let sc = scenario("fig2");
    for (i, o) in sc.objects.iter().enumerate() {
        assert_eq!(visible_rewards(&sc, o.cell)[i], o.rewards.top());
    }
    let far = scenario("walled");
    assert_eq!(visible_rewards(&far, (0, 0))[0].index(), 1);
    let b3 = sc.object("b3").unwrap();
    assert_eq!(visible_rewards(&sc, (0, 0))[b3], sc.objects[b3].rewards.bottom());
}

#[test]
fn priorities_of_the_estimated_sets() {
    let sc = scenario("fig2");
    let l = sc.phase.lattice();
    for (set, want) in [
        (&["J1a", "e", "b2"][..], "top"),
        (&["J1a", "e", "b3"][..], "b1"),
        (&["J1a", "e", "b2", "b3"][..], "b1"),
        (&["e", "b2", "b3"][..], "top"),
        (&["e", "b2"][..], "top"),
        (&["e", "b3"][..], "top"),
        (&["J1a", "e"][..], "top"),
        (&["e"][..], "top"),
    ] {
        assert_eq!(l.name(eval_priority(&sc, &ids(&sc, set)).unwrap()), want, "{set:?}");
    }
}

#[test]
fn preferred_variants_with_e_included() {
    let sc = scenario("fig2");
    let all: Vec<usize> = (0..sc.objects.len()).collect();
    let s = select_goal_sets(&sc, &all, sc.object("e")).unwrap();
    let got: BTreeSet<BTreeSet<String>> = s.selected.iter().map(|g| names(&sc, &g.goals)).collect();
    let want: BTreeSet<BTreeSet<String>> = [vec!["J1a", "e", "b2"], vec!["e", "b2", "b3"]]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();
    assert_eq!(got, want);
    assert!(!s.indistinguishable);
    assert_eq!(s.candidates.len(), 8);
}

#[test]
fn selection_ignores_enumeration_order() {
    let sc = scenario("fig2");
    let subsets: Vec<Vec<usize>> = (1u32..16)
        .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    let forward = select_among(&sc, subsets.clone()).unwrap();
    let backward = select_among(&sc, subsets.into_iter().rev()).unwrap();
    assert_eq!(forward.selected, backward.selected);
    assert_eq!(forward.tie_break, backward.tie_break);
}

#[test]
fn single_discovered_goal_is_selected() {
    let sc = scenario("fig2");
    let b3 = sc.object("b3").unwrap();
    let s = select_goal_sets(&sc, &[b3], None).unwrap();
    assert_eq!(s.chosen().goals, vec![b3]);
    assert!(matches!(select_goal_sets(&sc, &[], None), Err(PlanError::NoGoals)));
}

#[test]
fn compound_game_sizes() {
    let sc = scenario("object_at_start");
    let g = build_compound_game(&sc, sc.start, &[0]).unwrap();
    assert!(g.root_is_winning(&sc, DualPayoff::Negate));
    let fig2 = scenario("fig2");
    let goals = ids(&fig2, &["J1a", "e", "b2"]);
    let g = build_compound_game(&fig2, fig2.start, &goals).unwrap();
    let product: usize = g.goal_games.iter().map(|b| b.vertex_count()).product();
    assert_eq!(g.game.vertex_count(), g.movement.vertex_count() * product);
    let dot = phaselog::dot::game_dot(&g.game, None);
    assert!(dot.starts_with("digraph"));
}

#[test]
fn single_cell_has_no_move() {
    let sc = scenario("single_cell");
    let err = plan_play(&sc, sc.start, &[], None, PlanOptions::default()).unwrap_err();
    assert_eq!(err, PlanError::HorizonEmpty);
}

/// Cells reachable in at most `depth` steps, with the plays' visited sets
/// collapsed to "closest approach" since reveals are prefixes.
fn closest_within(sc: &Scenario, from: Cell, target: Cell, depth: usize) -> usize {
    let dist = |a: Cell, b: Cell| a.0.abs_diff(b.0).max(a.1.abs_diff(b.1));
    let mut frontier = vec![from];
    let mut seen: BTreeSet<Cell> = frontier.iter().copied().collect();
    let mut best = dist(from, target);
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in frontier {
            for (_, n) in sc.neighbours(c) {
                if seen.insert(n) {
                    best = best.min(dist(n, target));
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    best
}

#[test]
fn single_goal_plan_reaches_the_best_visible_reward() {
    for (name, id) in [("fig2", "e"), ("fig2", "b3"), ("walled", "b2"), ("object_at_start", "e")] {
        let sc = scenario(name);
        let g = sc.object(id).unwrap();
        let o = &sc.objects[g];
        let opts = PlanOptions {
            mode: Mode::Practical,
            dual_payoff: DualPayoff::Copy,
        };
        let plan = plan_play(&sc, sc.start, &[g], None, opts).unwrap();
        let d = closest_within(&sc, sc.start, o.cell, sc.horizon.max(1));
        let want = (1u32 << revealed(o.features.len(), d, sc.horizon)) - 1;
        assert_eq!(plan.objective.goals[0], want, "{name}/{id}");
    }
}

#[test]
fn adjacent_goal_is_walked_to() {
    let sc = scenario("object_at_start");
    let plan = plan_play(&sc, sc.start, &[0], None, PlanOptions::default()).unwrap();
    assert_eq!(plan.objective.goals[0], sc.objects[0].full_mask());
}

#[test]
fn walled_goal_is_reported_unreachable() {
    let sc = scenario("walled");
    let plan = plan_play(&sc, sc.start, &[0], None, PlanOptions::default()).unwrap();
    assert_eq!(plan.unreachable, vec![0]);
    assert_ne!(plan.objective.goals[0], sc.objects[0].full_mask());
}

#[test]
fn both_modes_produce_traces() {
    let sc = scenario("fig2");
    for mode in [Mode::Practical, Mode::Strict] {
        let t = run_cognition(&sc, CognitionOptions { mode, ..Default::default() }).unwrap();
        assert!(!t.steps.is_empty());
        assert!(images_monotone(&sc, &t));
    }
}

#[test]
fn runs_are_deterministic_and_monotone() {
    for name in SCENARIOS {
        let sc = scenario(name);
        let opts = CognitionOptions {
            seed: 7,
            ..Default::default()
        };
        let a = run_cognition(&sc, opts).unwrap();
        let b = run_cognition(&scenario(name), opts).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{name}");
        assert!(images_monotone(&sc, &a), "{name}");
        for w in a.play.windows(2) {
            assert_eq!(w[0].0.abs_diff(w[1].0) + w[0].1.abs_diff(w[1].1), 1, "{name}: {w:?}");
        }
    }
}

#[test]
fn fig2_shrinks_to_one_fully_seen_goal() {
    let sc = scenario("fig2");
    let t = run_cognition(&sc, CognitionOptions::default()).unwrap();
    assert!(t.complete);
    assert_eq!(t.final_goals.len(), 1);
    let g = &sc.objects[sc.object(&t.final_goals[0]).unwrap()];
    assert_eq!(t.final_images[&g.id], g.rewards.name(g.rewards.top()));
    assert!(t.decisions.iter().any(|d| matches!(d, Decision::Shrunk { .. })));
}

#[test]
fn empty_scenario_wanders_to_the_step_limit() {
    let sc = scenario("empty");
    let t = run_cognition(&sc, CognitionOptions { max_steps: 6, ..Default::default() }).unwrap();
    assert!(!t.complete);
    assert!(t.decisions.iter().any(|d| matches!(d, Decision::Wander { .. })));
    assert!(matches!(t.decisions.last(), Some(Decision::StepLimit { .. })));
}

#[test]
fn object_at_start_finishes_quickly() {
    let sc = scenario("object_at_start");
    let t = run_cognition(&sc, CognitionOptions::default()).unwrap();
    assert!(t.complete);
    assert!(t.steps.iter().filter(|s| s.actor == phaselog::planner::Actor::System).count() <= 2);
}

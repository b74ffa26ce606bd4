//! One PASS/FAIL line per acceptance criterion, with the time budget of
//! each pinned below. Run with `cargo test -p phaselog-cli --test acceptance
//! -- --nocapture` to see the lines.
//!
//! The test itself fails only when a criterion outside `EXPECTED_RED`
//! fails, or when one inside it starts passing (so the list stays honest).
//! The README explains each expected failure.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use phaselog::conway::random::{random_composition_case, random_distributive_lattice, random_game};
use phaselog::conway::{compose_strategies, dual_game, is_winning, tensor_game, validate_strategy};
use phaselog::phase::oracle::{commutative_monoids, subset_phase_oracle, Monoid};
use phaselog::phase::{load_phase_file, verify_laws};
use phaselog::planner::{load_scenario, select_goal_sets, Scenario};
use phaselog::PhaseStructure;
use phaselog_cli::{cmd_eval, cmd_simulate, cmd_solve, Context, Emit, SimulateArgs, Status};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criteria known not to hold; see the README.
const EXPECTED_RED: &[u8] = &[4, 6];

const PROP1_CASES: usize = 200;
const PROP1_SEED: u64 = 2024;
const CURRY_LATTICES: usize = 20;
const STRUCTURAL_GAMES: usize = 100;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn phase_ctx(file: &str) -> Context {
    Context {
        phase: Some(data(file)),
        ..Context::default()
    }
}

const ESTIMATES: [(&str, &str); 8] = [
    ("a -o (J1a x e x b2)", "top"),
    ("a -o (J1a x e x b3)", "b1"),
    ("a -o (J1a x e x b2 x b3)", "b1"),
    ("a -o (e x b2 x b3)", "top"),
    ("a -o (e x b2)", "top"),
    ("a -o (e x b3)", "top"),
    ("a -o (J1a x e)", "top"),
    ("a -o (e)", "top"),
];

fn eval_all(file: &str) -> Result<Vec<String>, String> {
    let ctx = phase_ctx(file);
    ESTIMATES
        .iter()
        .map(|(src, _)| {
            let r = cmd_eval(&ctx, src, false).map_err(|e| e.to_string())?;
            Ok(r.value("value").unwrap_or_default().to_string())
        })
        .collect()
}

fn c1_duals() -> (bool, String) {
    let ps = load_phase_file(&data("fig1_resolved.json")).unwrap();
    let d = |x: &str| ps.name(ps.dual(ps.element(x).unwrap()).unwrap()).to_string();
    let mut want: Vec<(String, &str)> = [
        ("J23", "J1a"),
        ("J23e", "b1"),
        ("J13", "b2"),
        ("J123", "a"),
        ("top", "0"),
        ("J12e", "0"),
        ("J13e", "0"),
        ("J1e", "0"),
        ("J2e", "b1"),
        ("J3e", "b1"),
        ("e", "b1"),
    ]
    .into_iter()
    .map(|(x, v)| (d(x), v))
    .collect();
    // ⊥^⊥ = I is one dual: the falsum is b3 and b3^⊥ = J12
    want.push((d(ps.name(ps.falsum())), "J12"));
    want.push((ps.name(ps.neutral_i()).to_string(), "J12"));
    let bad: Vec<String> = want.iter().filter(|(g, w)| g != w).map(|(g, w)| format!("{g}≠{w}")).collect();
    (bad.is_empty(), format!("{} equations, mismatches: {bad:?}", want.len()))
}

fn has(ps: &PhaseStructure, x: &str, y: &str, v: &str) -> bool {
    let e = |n: &str| ps.element(n).unwrap();
    ps.mult(e(x), e(y)).unwrap() == e(v)
}

/// Every law-abiding completion of the candidate table.
fn completions() -> Result<Vec<PhaseStructure>, String> {
    let dir = tempfile::tempdir().unwrap();
    let ctx = Context {
        out_dir: Some(dir.path().to_path_buf()),
        ..Context::default()
    };
    let report = cmd_solve(&ctx, &data("fig1_eq3_candidates.json"), 64).map_err(|e| e.to_string())?;
    report
        .items
        .iter()
        .filter(|i| i.id.starts_with("solution_"))
        .map(|i| load_phase_file(&dir.path().join(&i.id)).map_err(|e| e.to_string()))
        .collect()
}

fn is_alternative(ps: &PhaseStructure) -> bool {
    has(ps, "b1", "a", "a") && has(ps, "b2", "a", "0")
}

fn c2_solver() -> (bool, String) {
    let solutions = match completions() {
        Ok(s) if s.is_empty() => return (false, "no law-abiding completion".into()),
        Ok(s) => s,
        Err(e) => return (false, e),
    };
    let resolved = solutions.iter().find(|ps| has(ps, "b1", "a", "0") && has(ps, "b2", "a", "a") && has(ps, "a", "b3", "b3"));
    let Some(resolved) = resolved else {
        return (false, format!("{} completions, none with b1a=0, b2a=a, ab3=b3", solutions.len()));
    };
    let violations = verify_laws(resolved).violations();
    let alt = solutions.iter().find(|ps| is_alternative(ps));
    let alt_note = match alt {
        None => "alternative not law-consistent".to_string(),
        Some(ps) => match collapse(ps) {
            Ok(()) => "alternative collapses".to_string(),
            Err(e) => format!("alternative does not collapse: {e}"),
        },
    };
    let ok = violations == 0 && alt.is_none_or(|ps| collapse(ps).is_ok());
    (ok, format!("{} completions, {violations} violations, {alt_note}", solutions.len()))
}

fn c3_estimations() -> (bool, String) {
    match eval_all("fig1_resolved.json") {
        Err(e) => (false, e),
        Ok(got) => {
            let bad: Vec<String> = ESTIMATES
                .iter()
                .zip(&got)
                .filter(|((_, w), g)| g != w)
                .map(|((s, w), g)| format!("{s} = {g}, want {w}"))
                .collect();
            (bad.is_empty(), format!("8 values, mismatches: {bad:?}"))
        }
    }
}

fn fig2() -> Scenario {
    load_scenario(&data("scenarios/fig2.json")).unwrap()
}

/// All eight estimates are J123 and the selection is flagged.
fn collapse(ps: &PhaseStructure) -> Result<(), String> {
    let sc = fig2().with_phase(Arc::new(ps.clone())).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..sc.objects.len()).collect();
    let s = select_goal_sets(&sc, &all, sc.object("e")).map_err(|e| e.to_string())?;
    let l = ps.lattice();
    let values: BTreeSet<&str> = s.candidates.iter().map(|c| l.name(c.priority)).collect();
    if values.len() != 1 || !values.contains("J123") {
        return Err(format!("priorities {values:?}"));
    }
    if !s.indistinguishable {
        return Err("not flagged".into());
    }
    Ok(())
}

/// The branch b1a = a, b2a = 0 must exist as a law-abiding completion and
/// collapse every estimate to J123.
fn c4_indistinguishable() -> (bool, String) {
    let solutions = match completions() {
        Ok(s) => s,
        Err(e) => return (false, e),
    };
    let Some(alt) = solutions.iter().find(|ps| is_alternative(ps)) else {
        return (false, format!("no law-abiding completion with b1a=a, b2a=0 among {}", solutions.len()));
    };
    match collapse(alt) {
        Ok(()) => (true, "all eight estimates J123, selection flagged".into()),
        Err(e) => (false, e),
    }
}

fn c5_preferred() -> (bool, String) {
    let sc = fig2();
    let all: Vec<usize> = (0..sc.objects.len()).collect();
    let s = select_goal_sets(&sc, &all, sc.object("e")).unwrap();
    let got: BTreeSet<BTreeSet<&str>> = s
        .selected
        .iter()
        .map(|g| g.goals.iter().map(|&i| sc.objects[i].id.as_str()).collect())
        .collect();
    let want: BTreeSet<BTreeSet<&str>> = [["J1a", "e", "b2"], ["e", "b2", "b3"]]
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    (got == want, format!("selected {got:?}"))
}

fn c6_composition() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(PROP1_SEED);
    let (mut cases, mut valid, mut winning, mut skipped) = (0, 0, 0, 0);
    while cases < PROP1_CASES {
        let Some(case) = random_composition_case(&mut rng, 5, 8, 200) else {
            skipped += 1;
            continue;
        };
        cases += 1;
        let Ok(rho) = compose_strategies(&case.sigma, &case.tau) else {
            continue;
        };
        if validate_strategy(rho.game(), rho.plays()).is_ok() {
            valid += 1;
        }
        if is_winning(&rho, &case.xz).unwrap_or(false) {
            winning += 1;
        }
    }
    let detail = format!("{cases} cases ({skipped} draws without winning strategies): {valid} valid, {winning} winning");
    (valid == cases && winning == cases, detail)
}

fn c7_currying() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut triples, mut bad) = (0usize, 0usize);
    for _ in 0..CURRY_LATTICES {
        let l = random_distributive_lattice(&mut rng, 8);
        for x in l.elements() {
            for y in l.elements() {
                for z in l.elements() {
                    triples += 1;
                    let lhs = l.heyting_implies(l.meet2(x, y).unwrap(), z).unwrap();
                    let rhs = l.heyting_implies(x, l.heyting_implies(y, z).unwrap()).unwrap();
                    bad += usize::from(lhs != rhs);
                }
            }
        }
    }
    (bad == 0, format!("{CURRY_LATTICES} lattices, {triples} triples, {bad} failures"))
}

fn c8_oracle() -> (bool, String) {
    let mut monoids: Vec<Monoid> = (1..=3).flat_map(commutative_monoids).collect();
    let generated = monoids.len();
    monoids.push(Monoid::cyclic(2).unwrap());
    monoids.push(Monoid::cyclic(3).unwrap());
    let (mut runs, mut violations) = (0usize, 0usize);
    for m in &monoids {
        for f in 0..1u64 << m.len() {
            let r = subset_phase_oracle(m, f);
            runs += 1;
            violations += r.violations() + usize::from(!r.passed() && r.violations() == 0);
        }
    }
    (violations == 0, format!("{generated} generated monoids + ℤ/2, ℤ/3; {runs} ⊥-subsets; {violations} violations"))
}

fn c9_structural() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..STRUCTURAL_GAMES {
        let (x, y) = (random_game(&mut rng, 5), random_game(&mut rng, 5));
        let t = tensor_game(&x, &y);
        bad += usize::from(t.vertex_count() != x.vertex_count() * y.vertex_count());
        bad += usize::from(dual_game(&dual_game(&x)) != x);
    }
    (bad == 0, format!("{STRUCTURAL_GAMES} games, {bad} failures"))
}

const SCENARIOS: [&str; 5] = ["fig2", "empty", "single_cell", "object_at_start", "walled"];
const SIMULATE_BUDGET: Duration = Duration::from_secs(10);

fn simulate_into(dir: &Path, scenario: &Path) -> (phaselog_cli::Report, Vec<Vec<u8>>) {
    let ctx = Context {
        out_dir: Some(dir.to_path_buf()),
        ..Context::default()
    };
    let args = SimulateArgs {
        mode: Default::default(),
        dual_payoff: Default::default(),
        seed: 11,
        max_steps: 50,
        emit: Emit::Both,
        strict_termination: false,
        saturation_depth: None,
    };
    let report = cmd_simulate(&ctx, scenario, args).unwrap();
    let stem = scenario.file_stem().unwrap().to_string_lossy().into_owned();
    let files = ["trace.json", "trace.dot"]
        .iter()
        .map(|ext| std::fs::read(dir.join(format!("{stem}.{ext}"))).unwrap())
        .collect();
    (report, files)
}

fn c10_simulator() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in SCENARIOS {
        let path = data(&format!("scenarios/{name}.json"));
        let start = Instant::now();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (ra, fa) = simulate_into(a.path(), &path);
        let (_, fb) = simulate_into(b.path(), &path);
        let took = start.elapsed() / 2;
        let same = fa == fb;
        let monotone = ra.items.iter().any(|i| i.id == "images monotone" && i.status == Status::Pass);
        let fast = took <= SIMULATE_BUDGET;
        ok &= same && monotone && fast;
        notes.push(format!("{name}: identical={same} monotone={monotone} {:.2}s", took.as_secs_f64()));
    }
    (ok, notes.join("; "))
}

type Check = fn() -> (bool, String);

#[test]
fn acceptance() {
    let criteria: [(u8, &str, Duration, Check); 10] = [
        (1, "reference duals", Duration::from_secs(1), c1_duals),
        (2, "candidate-table solver", Duration::from_secs(60), c2_solver),
        (3, "estimations", Duration::from_secs(1), c3_estimations),
        (4, "indistinguishable branch", Duration::from_secs(60), c4_indistinguishable),
        (5, "preferred variants", Duration::from_secs(1), c5_preferred),
        (6, "composition of winning strategies", Duration::from_secs(60), c6_composition),
        (7, "currying", Duration::from_secs(10), c7_currying),
        (8, "subset oracle", Duration::from_secs(60), c8_oracle),
        (9, "game structure", Duration::from_secs(5), c9_structural),
        (10, "simulator determinism", Duration::from_secs(10 * SCENARIOS.len() as u64), c10_simulator),
    ];
    let mut unexpected = Vec::new();
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = check();
        let took = start.elapsed();
        let pass = ok && took <= budget;
        let status = if pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {id:>2} {name}: {detail} [{:.2}s / {}s]",
            took.as_secs_f64(),
            budget.as_secs()
        );
        if pass == EXPECTED_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}

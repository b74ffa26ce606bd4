//! Command implementations behind the `phaselog` binary.
//!
//! Every command returns a [`Report`]; the binary prints it and exits with
//! its code. Malformed input is a [`CliError::Usage`] (exit 2), anything the
//! engine rejects on its merits is a failed report or [`CliError::Domain`]
//! (exit 1).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use phaselog::conway::DualPayoff;
use phaselog::phase::expr::{self, ParseError};
use phaselog::phase::oracle::{subset_phase_oracle, Monoid, MonoidDoc, OracleError, OracleReport};
use phaselog::phase::solver::{solve_table, AmbiguousTable, SolveOptions};
use phaselog::phase::{classify, lattice_for_table, load_phase, verify_laws, TableDoc, TensorMode};
use phaselog::planner::{images_monotone, load_scenario, run_cognition, CognitionOptions, Decision, Mode};
use phaselog::{dot, Lattice, LatticeError, PhaseError, PhaseStructure};
use serde_json::Value;
use thiserror::Error;

pub use report::{Item, Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<phaselog::Error> for CliError {
    fn from(e: phaselog::Error) -> Self {
        if e.is_parse_error() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Global flags shared by every verb.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub lattice: Option<PathBuf>,
    pub phase: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Context {
    fn out_dir(&self) -> Result<PathBuf> {
        let dir = self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
        Ok(dir)
    }

    fn phase_path(&self) -> Result<&Path> {
        self.phase
            .as_deref()
            .ok_or_else(|| CliError::Usage("this command needs --phase".into()))
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_doc<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_table(ctx: &Context, path: &Path) -> Result<(TableDoc, Arc<Lattice>)> {
    let doc: TableDoc = parse_doc(path, read_json(path)?)?;
    let lattice = lattice_for_table(path, &doc, ctx.lattice.as_deref())?;
    Ok((doc, lattice))
}

/// Loads `--phase` (with `--lattice` overriding the table's own reference).
pub fn load_context_phase(ctx: &Context) -> Result<(PhaseStructure, TableDoc)> {
    let path = ctx.phase_path()?;
    let (doc, lattice) = load_table(ctx, path)?;
    let ps = load_phase(lattice, &doc).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok((ps, doc))
}

fn elements(ps: &PhaseStructure, names: &[String]) -> Result<Vec<phaselog::Element>> {
    names
        .iter()
        .map(|n| ps.element(n).map_err(|e| CliError::Domain(e.to_string())))
        .collect()
}

fn list(ps: &PhaseStructure, xs: impl IntoIterator<Item = phaselog::Element>) -> String {
    let names: Vec<&str> = xs.into_iter().map(|x| ps.name(x)).collect();
    format!("{{{}}}", names.join(", "))
}

/// First pair at which Heyting implication fails, if any.
fn heyting_witness(l: &Lattice) -> Option<LatticeError> {
    l.elements()
        .flat_map(|a| l.elements().map(move |b| (a, b)))
        .find_map(|(a, b)| l.heyting_implies(a, b).err())
}

enum Kind {
    Lattice,
    Phase,
}

fn kind_of(path: &Path, v: &Value) -> Result<Kind> {
    if v.get("mult").is_some() {
        Ok(Kind::Phase)
    } else if v.get("covers").is_some() {
        Ok(Kind::Lattice)
    } else {
        Err(CliError::Usage(format!(
            "{}: neither a lattice (`covers`) nor a phase table (`mult`)",
            path.display()
        )))
    }
}

fn verify_lattice(report: &mut Report, path: &Path, text: Value, heyting: bool) -> Result<()> {
    let doc = parse_doc(path, text)?;
    let label = path.display().to_string();
    let l = match Lattice::from_doc(&doc) {
        Ok(l) => l,
        Err(e) => {
            report.check(format!("lattice {label}"), false, e.to_string());
            return Ok(());
        }
    };
    report.pass(format!("lattice {label}"), format!("{} elements", l.len()));
    let distributive = l.is_distributive();
    if heyting {
        match heyting_witness(&l) {
            None => report.pass("heyting", "residuation holds for every pair"),
            Some(e) => report.check("heyting", false, format!("NotHeyting: {e}")),
        }
    } else {
        let status = if distributive { Status::Pass } else { Status::Warn };
        report.push("distributive", status, if distributive { "yes" } else { "no" });
    }
    Ok(())
}

fn verify_phase(report: &mut Report, ctx: &Context, path: &Path, text: Value) -> Result<()> {
    let doc: TableDoc = parse_doc(path, text)?;
    let lattice = lattice_for_table(path, &doc, ctx.lattice.as_deref())?;
    let label = path.display().to_string();
    let ps = match load_phase(lattice, &doc) {
        Ok(ps) => ps,
        Err(e) => {
            let id = match &e {
                PhaseError::DualLawViolation { law, .. } | PhaseError::OverrideInconsistent { law, .. } => {
                    format!("phase {label}: {law}")
                }
                _ => format!("phase {label}"),
            };
            report.check(id, false, e.to_string());
            return Ok(());
        }
    };
    report.pass(
        format!("phase {label}"),
        format!("{} elements, {} facts", ps.len(), ps.facts().len()),
    );
    for c in verify_laws(&ps).checks {
        let mut value = format!("{} checked", c.checked);
        if c.skipped > 0 {
            value.push_str(&format!(", {} not closed", c.skipped));
        }
        if c.violations > 0 {
            value.push_str(&format!(", {} violated: {}", c.violations, c.witnesses.join(" ")));
        }
        report.check(c.law.to_string(), c.passed(), value);
    }
    if !doc.op_class.is_empty() || !doc.cl_class.is_empty() {
        let op = elements(&ps, &doc.op_class)?;
        let cl = elements(&ps, &doc.cl_class)?;
        match classify(&ps, &op, &cl) {
            Ok(c) => report.pass(
                "Op/Cl classes",
                format!("Op = {}, Cl = {}", list(&ps, c.open_class), list(&ps, c.closed_class)),
            ),
            Err(e) => report.check("Op/Cl classes", false, e.to_string()),
        }
    }
    Ok(())
}

/// `verify`: lattice validity and distributivity, every phase law, and any
/// declared Op/Cl split. Files are told apart by their keys.
pub fn cmd_verify(ctx: &Context, files: &[PathBuf], heyting: bool) -> Result<Report> {
    let mut report = Report::new("verify");
    let mut inputs: Vec<PathBuf> = files.to_vec();
    if let Some(p) = &ctx.phase {
        inputs.push(p.clone());
    } else if let Some(l) = &ctx.lattice {
        inputs.push(l.clone());
    }
    if inputs.is_empty() {
        return Err(CliError::Usage("nothing to verify: give files, --phase or --lattice".into()));
    }
    for path in &inputs {
        let v = read_json(path)?;
        match kind_of(path, &v)? {
            Kind::Lattice => verify_lattice(&mut report, path, v, heyting)?,
            Kind::Phase => verify_phase(&mut report, ctx, path, v)?,
        }
    }
    Ok(report)
}

/// `solve`: every law-abiding completion of an ambiguous table, written as
/// `solution_NNN.json` next to a copy of the lattice.
pub fn cmd_solve(ctx: &Context, file: &Path, max_solutions: usize) -> Result<Report> {
    let (doc, lattice) = load_table(ctx, file)?;
    let at = AmbiguousTable::from_doc(lattice.clone(), &doc).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut report = Report::new("solve");
    let ambiguous = at.ambiguous_pairs();
    report.pass(
        "ambiguous entries",
        format!("{} (search space {:.3e})", ambiguous.len(), at.search_space()),
    );
    let solutions = match solve_table(
        &at,
        SolveOptions {
            max_solutions,
            ..SolveOptions::default()
        },
    ) {
        Ok(s) => s,
        Err(PhaseError::NoSolution) => {
            report.check("solutions", false, "NoSolution");
            return Ok(report);
        }
        Err(e) => return Err(CliError::Domain(e.to_string())),
    };
    let dir = ctx.out_dir()?;
    let lattice_path = dir.join("lattice.json");
    let lattice_json = serde_json::to_string_pretty(&lattice.to_doc()).expect("lattices serialize") + "\n";
    fs::write(&lattice_path, lattice_json).map_err(|e| io_error(&lattice_path, e))?;
    let mut rendered: Vec<(String, PhaseStructure)> = solutions
        .structures
        .into_iter()
        .map(|ps| {
            let entries: Vec<String> = ambiguous
                .iter()
                .map(|&(x, y)| {
                    let v = ps.mult(x, y).expect("own elements");
                    format!("{}·{}={}", ps.name(x), ps.name(y), ps.name(v))
                })
                .collect();
            (entries.join(" "), ps)
        })
        .collect();
    rendered.sort_by(|a, b| a.0.cmp(&b.0));
    for (i, (entries, ps)) in rendered.iter().enumerate() {
        let name = format!("solution_{:03}.json", i + 1);
        let mut out = ps.to_doc(Some("lattice.json".into()));
        out.op_class = doc.op_class.clone();
        out.cl_class = doc.cl_class.clone();
        let path = dir.join(&name);
        let text = serde_json::to_string_pretty(&out).expect("tables serialize") + "\n";
        fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        report.pass(name, entries.clone());
    }
    let status = if solutions.capped { Status::Warn } else { Status::Pass };
    let capped = if solutions.capped { ", capped" } else { "" };
    report.push("solutions", status, format!("{}{capped}", rendered.len()));
    Ok(report)
}

/// `eval`: one formula on `--phase`.
pub fn cmd_eval(ctx: &Context, source: &str, fact_closed: bool) -> Result<Report> {
    let e = expr::parse(source)?;
    let (ps, _) = load_context_phase(ctx)?;
    let mode = if fact_closed { TensorMode::FactClosed } else { TensorMode::Raw };
    let v = expr::eval(&ps, &e, mode).map_err(|err| match err {
        PhaseError::Lattice(LatticeError::UnknownElement(_)) => CliError::Usage(err.to_string()),
        _ => CliError::Domain(err.to_string()),
    })?;
    let mut report = Report::new("eval");
    report.pass("expression", e.to_string());
    report.pass("value", ps.name(v));
    Ok(report)
}

/// `facts`: the fact census, every dual, `I`, and the declared classes.
pub fn cmd_facts(ctx: &Context) -> Result<Report> {
    let (ps, doc) = load_context_phase(ctx)?;
    let l = ps.lattice().clone();
    let mut report = Report::new("facts");
    let facts = ps.facts();
    report.pass("facts", format!("{} of {}: {}", facts.len(), ps.len(), list(&ps, facts.iter().copied())));
    for x in l.elements() {
        let d = ps.dual(x).map_err(|e| CliError::Domain(e.to_string()))?;
        let tag = if ps.is_overridden(x) { " (override)" } else { "" };
        report.pass(format!("{}^⊥", l.name(x)), format!("{}{tag}", l.name(d)));
    }
    report.pass("I = ⊥^⊥", ps.name(ps.neutral_i()));
    if !doc.op_class.is_empty() || !doc.cl_class.is_empty() {
        let op = elements(&ps, &doc.op_class)?;
        let cl = elements(&ps, &doc.cl_class)?;
        match classify(&ps, &op, &cl) {
            Ok(c) => {
                report.pass("Op", list(&ps, c.open_class));
                report.pass("Cl", list(&ps, c.closed_class));
            }
            Err(e) => report.check("Op/Cl classes", false, e.to_string()),
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Json,
    Dot,
    Both,
}

#[derive(Clone, Copy, Debug)]
pub struct SimulateArgs {
    pub mode: Mode,
    pub dual_payoff: DualPayoff,
    pub seed: u64,
    pub max_steps: usize,
    pub emit: Emit,
    pub strict_termination: bool,
    pub saturation_depth: Option<usize>,
}

fn goal_set(ids: &[String]) -> String {
    format!("{{{}}}", ids.join(","))
}

/// `simulate`: runs the cognition loop and writes the trace.
pub fn cmd_simulate(ctx: &Context, scenario: &Path, args: SimulateArgs) -> Result<Report> {
    let sc = load_scenario(scenario)?;
    let trace = run_cognition(
        &sc,
        CognitionOptions {
            mode: args.mode,
            dual_payoff: args.dual_payoff,
            max_steps: args.max_steps,
            seed: args.seed,
            saturation_depth: args.saturation_depth,
        },
    )
    .map_err(|e| CliError::Domain(e.to_string()))?;

    let dir = ctx.out_dir()?;
    let stem = scenario
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let mut report = Report::new("simulate");
    let mut written = Vec::new();
    if matches!(args.emit, Emit::Json | Emit::Both) {
        written.push((dir.join(format!("{stem}.trace.json")), trace.to_json()));
    }
    if matches!(args.emit, Emit::Dot | Emit::Both) {
        written.push((dir.join(format!("{stem}.trace.dot")), dot::trace_dot(&sc, &trace)));
    }
    for (path, text) in &written {
        fs::write(path, text).map_err(|e| io_error(path, e))?;
    }

    let mut selections = 0;
    for d in &trace.decisions {
        match d {
            Decision::Selected {
                step,
                selected,
                tie_break,
                indistinguishable,
                ..
            } => {
                selections += 1;
                let sets: Vec<String> = selected.iter().map(|s| goal_set(s)).collect();
                let mut value = format!("{} ({:?})", sets.join(" "), tie_break);
                if *indistinguishable {
                    value.push_str(" indistinguishable");
                }
                report.pass(format!("step {step} top priority"), value);
            }
            Decision::Shrunk { step, from, to } => {
                report.pass(format!("step {step} shrink"), format!("{} -> {}", goal_set(from), goal_set(to)));
            }
            _ => {}
        }
    }
    if selections == 0 {
        report.pass("goals", "none discovered; wandering");
    }
    let images: Vec<String> = trace.final_images.iter().map(|(k, v)| format!("{k}={v}")).collect();
    report.pass("final images", images.join(" "));
    report.pass("final goals", goal_set(&trace.final_goals));
    report.pass("steps", (trace.play.len() - 1).to_string());
    report.check("images monotone", images_monotone(&sc, &trace), "");
    if !trace.complete {
        let status = if args.strict_termination { Status::Fail } else { Status::Warn };
        report.push("termination", status, format!("StepLimit after {} steps", args.max_steps));
    }
    for (path, _) in &written {
        report.pass("wrote", path.display().to_string());
    }
    Ok(report)
}

/// `oracle`: the subset-level phase laws on a small monoid, for the ⊥
/// subset the document names or else for every subset.
pub fn cmd_oracle(file: &Path) -> Result<Report> {
    let doc: MonoidDoc = parse_doc(file, read_json(file)?)?;
    let m = Monoid::from_doc(&doc).map_err(|e| match e {
        OracleError::SizeExceeded(_) => CliError::Usage(format!("SizeExceeded: {e}")),
        _ => CliError::Usage(e.to_string()),
    })?;
    let falsums: Vec<u64> = match m.falsum_of(&doc).map_err(|e| CliError::Usage(e.to_string()))? {
        Some(f) => vec![f],
        None => (0..1u64 << m.len()).collect(),
    };
    let mut report = Report::new("oracle");
    for f in falsums {
        let r = subset_phase_oracle(&m, f);
        oracle_items(&mut report, &r);
    }
    Ok(report)
}

fn oracle_items(report: &mut Report, r: &OracleReport) {
    let at = format!("⊥={}", r.falsum);
    report.check(
        format!("{at} monoid"),
        r.commutative && r.associative && r.unital,
        format!("commutative {}, associative {}, unital {}", r.commutative, r.associative, r.unital),
    );
    report.pass(format!("{at} facts"), format!("{}: {}", r.facts.len(), r.facts.join(" ")));
    for c in &r.checks {
        let mut value = format!("{} checked", c.checked);
        if c.violations > 0 {
            value.push_str(&format!(", {} violated: {}", c.violations, c.witnesses.join(" ")));
        }
        report.check(format!("{at} {}", c.law), c.violations == 0, value);
    }
}

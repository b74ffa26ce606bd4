use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phaselog::conway::DualPayoff;
use phaselog::planner::Mode;
use phaselog_cli::{
    cmd_eval, cmd_facts, cmd_oracle, cmd_simulate, cmd_solve, cmd_verify, CliError, Context, Emit, Report,
    SimulateArgs,
};

/// Lattice-valued phase semantics, Conway games and a goal-lattice planner.
#[derive(Parser, Debug)]
#[command(name = "phaselog", version)]
struct Cli {
    /// Lattice document; overrides the one a phase table names.
    #[arg(long, global = true)]
    lattice: Option<PathBuf>,
    /// Phase (monoid table) document.
    #[arg(long, global = true)]
    phase: Option<PathBuf>,
    /// Where solutions and traces are written (default: current directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Print nothing but errors and, for eval, the value.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check lattices and phase tables against every law.
    Verify {
        files: Vec<PathBuf>,
        /// Fail unless every lattice is Heyting.
        #[arg(long)]
        heyting: bool,
    },
    /// Resolve an ambiguous multiplication table.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_solutions: usize,
    },
    /// Evaluate a formula, e.g. "a -o (J1a x e x b2)".
    Eval {
        expression: String,
        /// Take `x` as (X·Y)^⊥⊥ instead of the raw monoid product.
        #[arg(long)]
        fact_closed: bool,
    },
    /// Run the cognition loop on a scenario.
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value = "practical")]
        mode: Mode,
        #[arg(long, default_value = "negate")]
        dual_payoff: DualPayoff,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        max_steps: usize,
        #[arg(long, value_enum, default_value = "both")]
        emit: Emit,
        /// Exit 1 when the run hits the step limit.
        #[arg(long)]
        strict_termination: bool,
        /// Saturation lookahead; the scenario horizon by default.
        #[arg(long)]
        saturation_depth: Option<usize>,
    },
    /// Check the subset-level phase laws on a small monoid.
    Oracle { monoid: PathBuf },
    /// Print the fact census, duals and Op/Cl classes of --phase.
    Facts,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let ctx = Context {
        lattice: cli.lattice.clone(),
        phase: cli.phase.clone(),
        out_dir: cli.out_dir.clone(),
    };
    match &cli.command {
        Command::Verify { files, heyting } => cmd_verify(&ctx, files, *heyting),
        Command::Solve { file, max_solutions } => cmd_solve(&ctx, file, *max_solutions),
        Command::Eval { expression, fact_closed } => cmd_eval(&ctx, expression, *fact_closed),
        Command::Simulate {
            scenario,
            mode,
            dual_payoff,
            seed,
            max_steps,
            emit,
            strict_termination,
            saturation_depth,
        } => cmd_simulate(
            &ctx,
            scenario,
            SimulateArgs {
                mode: *mode,
                dual_payoff: *dual_payoff,
                seed: *seed,
                max_steps: *max_steps,
                emit: *emit,
                strict_termination: *strict_termination,
                saturation_depth: *saturation_depth,
            },
        ),
        Command::Oracle { monoid } => cmd_oracle(monoid),
        Command::Facts => cmd_facts(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else if cli.quiet {
                if let Some(v) = report.value("value").filter(|_| report.command == "eval") {
                    println!("{v}");
                }
            } else if report.command == "eval" {
                println!("{}", report.value("value").unwrap_or_default());
            } else {
                print!("{}", report.render());
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

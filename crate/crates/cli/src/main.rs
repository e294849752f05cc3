use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gca_cli::{exit, load_graph, load_scenario, run_audit, run_corpus, run_scenario, scenario, CliError};

#[derive(Parser)]
#[command(name = "gca", version, about = "Group cellular automata: deciders, sweeps and audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file (or an embedded scenario name).
    Run {
        file: String,
        #[arg(long)]
        json: bool,
        /// Omit timings so that reports are byte-identical across runs.
        #[arg(long)]
        no_timings: bool,
    },
    /// Sweep a seeded random corpus and evaluate the implication matrix.
    Corpus {
        file: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_timings: bool,
    },
    /// Recompute the counting chains on a finite labeled graph.
    AuditSofic {
        /// Graph file, `cycle:N` or `torus:N:D`.
        graph: String,
        scenario: String,
        #[arg(long)]
        json: bool,
    },
    /// Embedded example scenarios.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    Show { name: String },
}

fn execute(cmd: Command) -> Result<i32, CliError> {
    let verdict = |ok: bool| if ok { exit::OK } else { exit::CHECK_FAILED };
    match cmd {
        Command::Run { file, json, no_timings } => {
            let (name, scn) = load_scenario(&file)?;
            let report = run_scenario(&scn, &name, !no_timings)?;
            print!("{}", if json { report.to_json() + "\n" } else { report.render_text() });
            Ok(verdict(report.passed()))
        }
        Command::Corpus { file, json, no_timings } => {
            let (name, scn) = load_scenario(&file)?;
            let report = run_corpus(&scn, &name, !no_timings)?;
            print!("{}", if json { report.to_json() + "\n" } else { report.render_text() });
            Ok(verdict(report.passed()))
        }
        Command::AuditSofic { graph, scenario, json } => {
            let g = load_graph(&graph)?;
            let (name, scn) = load_scenario(&scenario)?;
            let report = run_audit(&g, &scn, &name)?;
            print!("{}", if json { report.to_json() + "\n" } else { report.render_text() });
            Ok(verdict(report.passed()))
        }
        Command::Examples { action: ExamplesAction::List } => {
            for (name, about, _) in scenario::EMBEDDED {
                println!("{name:<10} {about}");
            }
            Ok(exit::OK)
        }
        Command::Examples {
            action: ExamplesAction::Show { name },
        } => {
            let text = scenario::embedded(&name)
                .ok_or_else(|| CliError::Validation(format!("no embedded scenario `{name}`")))?;
            print!("{text}");
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = execute(cli.command).unwrap_or_else(|e| {
        eprintln!("gca: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}

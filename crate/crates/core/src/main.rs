use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dianet::analysis::{CheckOptions, Status};
use dianet::composition::{component_view, prune_unreachable, system_net, SystemSpec};
use dianet::io::{emit_report, net_dot, parse_system, prefix_dot, verifier_dot};
use dianet::model::{validate_assumptions, Action, Budget};
use dianet::orchestrator::{run_distributed_for, run_global_for, DistributedOptions, Report};
use dianet::unfolding::unfold;
use dianet::verifier::build_verifier;
use dianet::Error;

const EXIT_DIAGNOSABLE: u8 = 0;
const EXIT_NON_DIAGNOSABLE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Fault diagnosability of distributed systems of automata.
#[derive(Parser)]
#[command(name = "dianet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide diagnosability of every fault (or of one).
    Check {
        file: PathBuf,
        /// Only check this fault.
        #[arg(long)]
        fault: Option<String>,
        /// Component-wise check (the default).
        #[arg(long, conflicts_with = "global")]
        distributed: bool,
        /// Check the full product net directly.
        #[arg(long)]
        global: bool,
        /// Report inconclusive instead of running a global check.
        #[arg(long)]
        no_fallback: bool,
        /// Worker threads for the distributed check [default: available cores].
        #[arg(long)]
        jobs: Option<usize>,
        /// Fail when a component has dead states or unobservable cycles.
        #[arg(long)]
        strict: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a Graphviz drawing.
    ExportDot {
        file: PathBuf,
        /// net, verifier, view:<component> or prefix
        #[arg(long, default_value = "net")]
        what: String,
        #[arg(long)]
        fault: Option<String>,
        /// Drop transitions that lie on no infinite run.
        #[arg(long)]
        prune: bool,
    },
    /// Parse a system and check the modelling assumptions.
    Validate { file: PathBuf },
}

enum Failure {
    Input(String),
    Inconclusive(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ExplorationBudgetExceeded { .. } => Failure::Inconclusive(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<SystemSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn budget() -> Result<Budget, Failure> {
    Budget::from_env().map_err(Failure::Input)
}

fn fault_list(spec: &SystemSpec, fault: Option<String>) -> Result<Vec<Action>, Failure> {
    match fault {
        Some(f) => {
            let f = Action::new(&f)?;
            spec.sigma().require_fault(&f)?;
            Ok(vec![f])
        }
        None => Ok(spec.sigma().faults().iter().cloned().collect()),
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn assumption_problems(spec: &SystemSpec) -> Vec<String> {
    spec.components()
        .iter()
        .map(|a| validate_assumptions(a, spec.sigma()))
        .filter(|r| !r.is_clean())
        .map(|r| r.to_string())
        .collect()
}

fn print_report(r: &Report) {
    for v in &r.verdicts {
        println!(
            "{}: fault {}: {} ({})",
            r.system, v.fault, v.status, v.method
        );
        if let Some(w) = &v.witness {
            let show = |l: &dianet::model::Lasso<Action>| {
                let j = |xs: &[Action]| xs.iter().map(Action::as_str).collect::<Vec<_>>().join(" ");
                format!("{} ({})^ω", j(&l.stem), j(&l.cycle))
                    .trim_start()
                    .to_string()
            };
            println!("  observation: {}", show(&w.observation));
            println!("  faulty:      {}", show(&w.faulty));
            println!("  fault-free:  {}", show(&w.fault_free));
        }
        for warning in &v.warnings {
            println!("  warning: {warning}");
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    file: &Path,
    fault: Option<String>,
    global: bool,
    no_fallback: bool,
    jobs: Option<usize>,
    strict: bool,
    json: Option<PathBuf>,
) -> Result<u8, Failure> {
    let spec = load(file)?;
    let problems = assumption_problems(&spec);
    if strict && !problems.is_empty() {
        return Err(Failure::Input(problems.join("\n")));
    }
    for p in &problems {
        eprintln!("warning: {p}");
    }
    let faults = fault_list(&spec, fault)?;
    let check = CheckOptions {
        budget: budget()?,
        prefilter: false,
    };
    let report = if global {
        run_global_for(&spec, &faults, &check)?
    } else {
        let opts = DistributedOptions {
            check,
            fallback: !no_fallback,
            jobs: jobs.unwrap_or_else(default_jobs),
        };
        run_distributed_for(&spec, &faults, &opts)?
    };
    print_report(&report);
    if let Some(path) = json {
        std::fs::write(&path, emit_report(&report))
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    let worst = report.verdicts.iter().map(|v| v.status);
    Ok(worst.fold(EXIT_DIAGNOSABLE, |acc, s| match s {
        Status::NonDiagnosable => EXIT_NON_DIAGNOSABLE,
        Status::Inconclusive if acc == EXIT_DIAGNOSABLE => EXIT_INCONCLUSIVE,
        _ => acc,
    }))
}

fn export_dot(file: &Path, what: &str, fault: Option<String>, prune: bool) -> Result<u8, Failure> {
    let spec = load(file)?;
    let budget = budget()?;
    let fault = || -> Result<Action, Failure> {
        fault_list(&spec, fault.clone())?
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Input("the system declares no fault".into()))
    };
    let maybe_prune = |pn| {
        if prune {
            prune_unreachable(&pn, budget)
        } else {
            Ok(pn)
        }
    };
    let dot = match what {
        "net" => net_dot(&maybe_prune(system_net(&spec)?)?.net),
        "verifier" => {
            let net = maybe_prune(system_net(&spec)?)?.net;
            verifier_dot(&build_verifier(&net, &fault()?, spec.sigma())?)
        }
        "prefix" => {
            let net = maybe_prune(system_net(&spec)?)?.net;
            prefix_dot(&unfold(&net, budget)?, &net)
        }
        other => match other.strip_prefix("view:") {
            Some(name) => {
                let i = spec
                    .component_index(name)
                    .ok_or_else(|| Failure::Input(format!("no component named `{name}`")))?;
                net_dot(&maybe_prune(component_view(&spec, i, &fault()?)?)?.net)
            }
            None => return Err(Failure::Input(format!("unknown --what `{other}`"))),
        },
    };
    print!("{dot}");
    Ok(0)
}

fn validate(file: &Path) -> Result<u8, Failure> {
    let spec = load(file)?;
    let problems = assumption_problems(&spec);
    if problems.is_empty() {
        println!(
            "{}: {} components, assumptions hold",
            spec.name(),
            spec.components().len()
        );
        Ok(0)
    } else {
        Err(Failure::Input(problems.join("\n")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            file,
            fault,
            distributed: _,
            global,
            no_fallback,
            jobs,
            strict,
            json,
        } => check(&file, fault, global, no_fallback, jobs, strict, json),
        Command::ExportDot {
            file,
            what,
            fault,
            prune,
        } => export_dot(&file, &what, fault, prune),
        Command::Validate { file } => validate(&file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}

//! `upo`: command-line access to the engines in `upo-core`.
//!
//! Exit status is 0 on success, 1 when the input is rejected or a guard
//! trips, 2 on usage errors. Results go to stdout as JSON, diagnostics to
//! stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use upo_core::decide::{joint_is_po_probability_nonzero, joint_is_po_probability_one};
use upo_core::generate::{generate, GeneratorConfig};
use upo_core::io::{
    self, parse_assignment, parse_instance_with, serialize_result, CheckReport, Instance, ModelKind, Names,
    ParseOptions, ProbabilityReport, SolveReport, WitnessReport,
};
use upo_core::prob::{oracle_certainly_dominated, oracle_po_probability};
use upo_core::reductions::{reduce_m2sat_to_lottery, reduce_sdf_to_joint, reduce_sdf_to_lottery};
use upo_core::{
    best_assignment, certainly_dominated, exists_certainly_po, is_pareto_optimal, is_po_probability_nonzero,
    is_po_probability_one, nonzero_witness, po_probability, Assignment, Engine, Limits, UncertaintyModel,
};

const GUARD_ENV: &str = "PO_GUARD_MAX";

#[derive(Parser)]
#[command(name = "upo", version, about = "Pareto optimality of assignments under uncertain preferences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer a yes/no question about an assignment.
    Check {
        #[arg(long)]
        instance: PathBuf,
        /// File, or inline `agent=item,...`.
        #[arg(long)]
        assignment: String,
        #[arg(long, value_enum)]
        question: Question,
        #[arg(long, value_enum, default_value = "auto")]
        engine: CheckEngine,
        /// Include a serial dictatorship witness for `nonzero`.
        #[arg(long)]
        witness: bool,
        /// Merge repeated orders of an agent instead of rejecting the instance.
        #[arg(long)]
        merge_duplicates: bool,
    },
    /// Exact probability that an assignment is Pareto optimal.
    Prob {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        assignment: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: ProbEngine,
        #[arg(long)]
        merge_duplicates: bool,
    },
    /// Search for an assignment.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        goal: Goal,
        #[arg(long)]
        merge_duplicates: bool,
    },
    /// Build an instance from a feasibility or counting problem.
    Reduce {
        #[arg(long, value_enum)]
        from: Source,
        /// Serial dictatorship feasibility JSON, or an m2sat text file.
        #[arg(long)]
        input: PathBuf,
        /// Target model for `--from sdf`.
        #[arg(long, value_enum, default_value = "lottery")]
        to: Target,
        /// Also write the assignment to evaluate (m2sat: the identity).
        #[arg(long)]
        assignment_out: Option<PathBuf>,
    },
    /// Random instance, deterministic in the seed.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        support_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "lottery")]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        joint_support: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Question {
    /// PO with positive probability.
    Nonzero,
    /// PO with probability one.
    One,
    /// Some assignment dominates it in every realization.
    Dominated,
    /// PO for an instance with a single possible profile.
    Po,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckEngine {
    Auto,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbEngine {
    Auto,
    Joint,
    Enum,
    Fpt,
    Oracle,
}

impl From<ProbEngine> for Engine {
    fn from(e: ProbEngine) -> Self {
        match e {
            ProbEngine::Auto => Engine::Auto,
            ProbEngine::Joint => Engine::Joint,
            ProbEngine::Enum => Engine::Enum,
            ProbEngine::Fpt => Engine::Fpt,
            ProbEngine::Oracle => Engine::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Goal {
    Certain,
    Best,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Sdf,
    M2sat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Joint,
    Lottery,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lottery,
    Joint,
}

enum Failure {
    Domain(anyhow::Error),
    Usage(String),
}

impl From<upo_core::Error> for Failure {
    fn from(e: upo_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match limits().and_then(|limits| run(cli.command, &limits)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `PO_GUARD_MAX` raises or lowers the cap on enumerated profiles.
fn limits() -> Result<Limits, Failure> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(|max| Limits::default().with_max_profiles(max))
            .map_err(|_| Failure::Usage(format!("{GUARD_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(Limits::default()),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path, merge_duplicates: bool) -> Result<Instance, Failure> {
    let text = read(path)?;
    parse_instance_with(&text, ParseOptions { merge_duplicates })
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::Domain)
}

/// A path to an existing file is read; anything else is taken as inline text.
fn load_assignment(arg: &str, names: &Names) -> Result<Assignment, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    Ok(parse_assignment(&text, names)?)
}

fn run(command: Command, limits: &Limits) -> Result<String, Failure> {
    match command {
        Command::Check { instance, assignment, question, engine, witness, merge_duplicates } => {
            let inst = load_instance(&instance, merge_duplicates)?;
            let a = load_assignment(&assignment, &inst.names)?;
            check(&inst, &a, question, engine, witness, limits)
        }
        Command::Prob { instance, assignment, engine, merge_duplicates } => {
            let inst = load_instance(&instance, merge_duplicates)?;
            let a = load_assignment(&assignment, &inst.names)?;
            let p = po_probability(&inst.model, &a, engine.into(), limits)?;
            Ok(serialize_result(&ProbabilityReport::new(&inst.names, &a, &p)))
        }
        Command::Solve { instance, goal, merge_duplicates } => {
            let inst = load_instance(&instance, merge_duplicates)?;
            let report = match goal {
                Goal::Certain => SolveReport::certain(&inst.names, exists_certainly_po(&inst.model, limits)?.as_ref()),
                Goal::Best => {
                    let (a, p) = best_assignment(&inst.model, limits)?;
                    SolveReport::best(&inst.names, &a, &p)
                }
            };
            Ok(serialize_result(&report))
        }
        Command::Reduce { from, input, to, assignment_out } => {
            let text = read(&input)?;
            let (inst, assignment) = match from {
                Source::Sdf => {
                    let (sdf, names) = io::parse_sdf(&text)?;
                    let model: UncertaintyModel = match to {
                        Target::Joint => reduce_sdf_to_joint(&sdf)?.into(),
                        Target::Lottery => reduce_sdf_to_lottery(&sdf)?.into(),
                    };
                    (Instance { names, model }, None)
                }
                Source::M2sat => {
                    if matches!(to, Target::Joint) {
                        return Err(Failure::Usage("--from m2sat builds a lottery instance only".into()));
                    }
                    let formula = io::parse_m2sat(&text)?;
                    let (model, identity) = reduce_m2sat_to_lottery(&formula)?;
                    let names = Names::numbered(formula.variables());
                    (Instance { names, model: model.into() }, Some(identity))
                }
            };
            if let Some(path) = assignment_out {
                let a = assignment.ok_or_else(|| {
                    Failure::Usage("--assignment-out applies to --from m2sat; feasibility gadgets are solved with `solve --goal certain`".into())
                })?;
                fs::write(&path, serialize_result(&inst.names.assignment_map(&a)))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(inst.to_json())
        }
        Command::Gen { n, k, support_size, seed, kind, joint_support } => {
            let kind = match kind {
                Kind::Lottery => ModelKind::Lottery,
                Kind::Joint => ModelKind::Joint,
            };
            let config = GeneratorConfig { n, k, support_size, seed, kind, joint_support };
            Ok(generate(&config)?.to_json())
        }
    }
}

fn check(
    inst: &Instance,
    a: &Assignment,
    question: Question,
    engine: CheckEngine,
    want_witness: bool,
    limits: &Limits,
) -> Result<String, Failure> {
    let oracle = matches!(engine, CheckEngine::Oracle);
    if want_witness && !matches!(question, Question::Nonzero) {
        return Err(Failure::Usage("--witness applies to --question nonzero".into()));
    }
    if want_witness && oracle {
        return Err(Failure::Usage("--witness is not available with --engine oracle".into()));
    }
    let model = &inst.model;
    let mut witness = None;
    let (name, answer) = match question {
        Question::Nonzero => {
            let answer = if oracle {
                !num_is_zero(&oracle_po_probability(model, a, limits)?)
            } else {
                match model {
                    UncertaintyModel::Lottery(m) if want_witness => {
                        let w = nonzero_witness(m, a)?;
                        witness = w.as_ref().map(|w| WitnessReport::new(&inst.names, w));
                        w.is_some()
                    }
                    UncertaintyModel::Lottery(m) => is_po_probability_nonzero(m, a)?,
                    UncertaintyModel::Joint(m) => joint_is_po_probability_nonzero(m, a)?,
                }
            };
            ("nonzero", answer)
        }
        Question::One => {
            let answer = if oracle {
                num_is_one(&oracle_po_probability(model, a, limits)?)
            } else {
                match model {
                    UncertaintyModel::Lottery(m) => is_po_probability_one(m, a)?,
                    UncertaintyModel::Joint(m) => joint_is_po_probability_one(m, a)?,
                }
            };
            ("one", answer)
        }
        Question::Dominated => {
            let answer = match model {
                UncertaintyModel::Lottery(m) if !oracle => certainly_dominated(m, a)?,
                // no polynomial test for joint models; brute force within guards
                _ => oracle_certainly_dominated(model, a, limits)?,
            };
            ("dominated", answer)
        }
        Question::Po => {
            let profile = single_profile(model)
                .ok_or_else(|| anyhow!("question po needs an instance with exactly one possible profile"))?;
            let answer = if oracle {
                num_is_one(&oracle_po_probability(model, a, limits)?)
            } else {
                is_pareto_optimal(&profile, a)?
            };
            ("po", answer)
        }
    };
    let report = CheckReport {
        question: name.into(),
        assignment: inst.names.assignment_map(a),
        answer,
        witness,
    };
    Ok(serialize_result(&report))
}

fn single_profile(model: &UncertaintyModel) -> Option<upo_core::Profile> {
    match model {
        UncertaintyModel::Lottery(m) if m.k() == 0 => Some(m.realize(&vec![0; m.n()])),
        UncertaintyModel::Joint(m) if m.entries().len() == 1 => Some(m.entries()[0].profile.clone()),
        _ => None,
    }
}

fn num_is_zero(p: &upo_core::Rational) -> bool {
    *p.numer() == 0.into()
}

fn num_is_one(p: &upo_core::Rational) -> bool {
    p.numer() == p.denom()
}

//! Command-line front end: scenario runner, checkers, statify, diagnosis and
//! a stepwise REPL. Exit codes: 0 pass, 1 violation, 2 usage error.

mod repl;
mod scenario;
mod steps;

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::diagnosis::{check_prop_2_4, diagnosis_trace, Circuit, DiagnosisError};
use crate::kernel::{KernelError, ParseError, Universe};
use crate::plausibility::{check_klm, check_qualitative, parse_measure, Plausibility, PlausibilityError};
use crate::report::{Report, Sampling};
use crate::revision::{self, check_agm, check_agm_primed, oracles, RevisionError, RevisionRanking, TableOracle};
use crate::systems::{self, SystemError, DEFAULT_STATE_CAP};
use crate::update::{check_km, global_min_update, validate_update_structure, KmOracle, UpdateError, UpdateStructure};

pub use repl::{Repl, ReplEvent};
pub use scenario::{default_alphabet, parse_structure, Engine, Mode, Prior, Scenario};
pub use steps::{run_document, run_scenario, step_reports, RunDocument, StepReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario{}: {message}", if path.is_empty() { String::new() } else { format!(" field `{path}`") })]
    Scenario { path: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Plausibility(#[from] PlausibilityError),
    #[error(transparent)]
    Revision(#[from] RevisionError),
    #[error(transparent)]
    Update(#[from] UpdateError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Diagnosis(#[from] DiagnosisError),
}

#[derive(Debug, Parser)]
#[command(name = "belief", version, about = "Belief revision, update and plausibility systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario document (TOML).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Write the machine-readable (JSON) result here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest state space a system constructor may build.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: u128,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterated revision of a ranked prior by the scenario's observations.
    Revise,
    /// Update of the initial belief by the scenario's observations.
    Update,
    /// Beliefs read off the system built from the scenario.
    Simulate,
    /// Run a postulate or system checker.
    Check(CheckArgs),
    /// Print the statified version of the scenario's system.
    Statify,
    /// Diagnoses after each observation of a circuit.
    Diagnose {
        /// Circuit description, one `gate <id> <kind> <inputs...> -> <output>` per line
        #[arg(long)]
        circuit: PathBuf,
        /// Observations over the circuit's lines, one per line
        #[arg(long)]
        obs: Option<PathBuf>,
    },
    /// Read observations one per line from standard input.
    Repl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Agm,
    AgmPrimed,
    Km,
    Klm,
    Qualitative,
    Bcs,
    Rev,
    Upd,
    PrevRule,
    /// Diagnosis dynamics.
    #[value(name = "prop24", alias = "diagnosis")]
    Diagnosis,
    /// The statified system.
    #[value(name = "prop71", alias = "statified")]
    Statified,
    /// Beliefs of an update system follow the update operator.
    #[value(name = "lemA8", alias = "states-follow-update")]
    StatesFollowUpdate,
    /// Correct beliefs persist under sufficient information.
    #[value(name = "thm64", alias = "propagation")]
    Propagation,
}

#[derive(Debug, Parser)]
pub struct CheckArgs {
    pub kind: CheckKind,
    /// Operator to check: grove, drastic, full-meet, empty, table (agm);
    /// epistemic, last-only, reordered, conditioning (agm-primed);
    /// km, global-min (km).
    #[arg(long)]
    pub oracle: Option<String>,
    /// Update structure document (TOML, or JSON by extension).
    #[arg(long)]
    pub structure: Option<PathBuf>,
    /// Measure table for klm/qualitative.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Oracle table for `--oracle table`.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Circuit description for prop24
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Observation file for prop24
    #[arg(long)]
    pub obs: Option<PathBuf>,
    /// Sequence depth for agm-primed.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// The ranking used when no scenario is given: 11 ≺ 10 ≈ 01 ≺ 00 over {p, q}.
pub fn default_ranking() -> RevisionRanking {
    let u = Universe::over(&["p", "q"]).expect("valid vocabulary");
    RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)]).expect("ranks all worlds")
}

struct Context<'a> {
    cli: &'a Cli,
    sampling: Sampling,
}

impl Context<'_> {
    fn scenario(&self, forced: Option<Mode>) -> Result<Scenario, CliError> {
        let path = self.cli.scenario.as_ref().ok_or_else(|| CliError::Usage("this command needs --scenario <file>".into()))?;
        Scenario::parse(&read(path)?, forced)
    }

    fn optional_scenario(&self) -> Result<Option<Scenario>, CliError> {
        match &self.cli.scenario {
            Some(_) => self.scenario(None).map(Some),
            None => Ok(None),
        }
    }

    fn ranking(&self) -> Result<RevisionRanking, CliError> {
        match self.optional_scenario()? {
            Some(s) => s.ranking().cloned().ok_or_else(|| CliError::Usage("the scenario has no ranked prior".into())),
            None => Ok(default_ranking()),
        }
    }

    fn structure(&self, args: &CheckArgs) -> Result<UpdateStructure, CliError> {
        if let Some(p) = &args.structure {
            let json = p.extension().is_some_and(|e| e == "json");
            return parse_structure(&read(p)?, json);
        }
        match self.optional_scenario()? {
            Some(s) => s.structure().cloned().ok_or_else(|| CliError::Usage("the scenario has no distance prior".into())),
            None => Ok(UpdateStructure::hamming(&Universe::over(&["p", "q"])?)?),
        }
    }

    fn circuit(&self, circuit: Option<&PathBuf>, obs: Option<&PathBuf>) -> Result<(Circuit, Vec<crate::kernel::Formula>), CliError> {
        let path = circuit.ok_or_else(|| CliError::Usage("this command needs --circuit <file>".into()))?;
        let c = Circuit::parse(&read(path)?)?;
        let o = match obs {
            Some(p) => c.observations(&read(p)?)?,
            None => Vec::new(),
        };
        Ok((c, o))
    }
}

fn check(ctx: &Context, args: &CheckArgs) -> Result<Report, CliError> {
    let sampling = ctx.sampling;
    let oracle = args.oracle.as_deref();
    Ok(match args.kind {
        CheckKind::Agm => {
            let rk = ctx.ranking()?;
            let u = rk.universe().clone();
            let k = rk.initial_belief();
            match oracle.unwrap_or("grove") {
                "grove" => check_agm(&revision::oracles::Grove(rk), &u, &k, sampling)?,
                "drastic" => check_agm(&oracles::drastic, &u, &k, sampling)?,
                "full-meet" => check_agm(&oracles::full_meet, &u, &k, sampling)?,
                "empty" => check_agm(&oracles::empty, &u, &k, sampling)?,
                "table" => {
                    let path = args.table.as_ref().ok_or_else(|| CliError::Usage("--oracle table needs --table <file>".into()))?;
                    check_agm(&TableOracle::parse(&read(path)?, &u)?, &u, &k, sampling)?
                }
                other => return Err(CliError::Usage(format!("unknown agm oracle `{other}`"))),
            }
        }
        CheckKind::AgmPrimed => match oracle.unwrap_or("epistemic") {
            "reordered" => {
                let o = oracles::reordered();
                let u = o.universe().clone();
                check_agm_primed(&o, &u, args.depth)?
            }
            name => {
                let rk = ctx.ranking()?;
                let u = rk.universe().clone();
                match name {
                    "epistemic" => check_agm_primed(&oracles::Epistemic(rk), &u, args.depth)?,
                    "last-only" => check_agm_primed(&oracles::last_only(rk), &u, args.depth)?,
                    "conditioning" => check_agm_primed(&|e: &[crate::kernel::Formula]| revision::conditioning_bs(&rk, e), &u, args.depth)?,
                    other => return Err(CliError::Usage(format!("unknown agm-primed oracle `{other}`"))),
                }
            }
        },
        CheckKind::Km => {
            let s = ctx.structure(args)?;
            let u = s.universe().clone();
            let mut report = match oracle.unwrap_or("km") {
                "km" => check_km(&KmOracle(s.clone()), &u, sampling)?,
                "global-min" => check_km(&|mu: &crate::kernel::BeliefSet, phi: &crate::kernel::Formula| global_min_update(&s, mu, phi), &u, sampling)?,
                other => return Err(CliError::Usage(format!("unknown km oracle `{other}`"))),
            };
            report.absorb("structure ", validate_update_structure(&s));
            report
        }
        CheckKind::Klm | CheckKind::Qualitative => {
            let qualitative = args.kind == CheckKind::Qualitative;
            match &args.measure {
                Some(p) => {
                    let m = parse_measure(&read(p)?)?;
                    let carrier = m.carrier();
                    if qualitative { check_qualitative(&m, &carrier)? } else { check_klm(&m, &carrier)? }
                }
                None => {
                    let rk = ctx.ranking()?;
                    let m = rk.measure();
                    let carrier = rk.universe().worlds().to_vec();
                    if qualitative { check_qualitative(&m, &carrier)? } else { check_klm(&m, &carrier)? }
                }
            }
        }
        CheckKind::Bcs | CheckKind::Rev | CheckKind::Upd | CheckKind::PrevRule | CheckKind::Statified => {
            let sys = ctx.scenario(None)?.system(ctx.cli.cap)?;
            match args.kind {
                CheckKind::Bcs => systems::validate_bcs(&sys),
                CheckKind::Rev => systems::validate_rev(&sys, sampling),
                CheckKind::Upd => systems::validate_upd(&sys, sampling),
                CheckKind::PrevRule => systems::check_prev_rule(&sys, sampling),
                _ => systems::check_prop_7_1(&sys, sampling)?,
            }
        }
        CheckKind::StatesFollowUpdate | CheckKind::Propagation => {
            let sc = ctx.scenario(None)?;
            let s = sc.structure().ok_or_else(|| CliError::Usage("this check needs a scenario with a distance prior".into()))?;
            let sys = sc.system(ctx.cli.cap)?;
            if args.kind == CheckKind::Propagation {
                systems::check_correctness_propagation(&sys, s)
            } else {
                systems::cross_check_update(&sys, s)
            }
        }
        CheckKind::Diagnosis => {
            let (c, o) = ctx.circuit(args.circuit.as_ref(), args.obs.as_ref())?;
            check_prop_2_4(&c, &o)?
        }
    })
}

#[derive(Serialize)]
struct DiagnosisDocument {
    gates: Vec<String>,
    steps: Vec<DiagnosisStepDocument>,
}

#[derive(Serialize)]
struct DiagnosisStepDocument {
    step: usize,
    observation: Option<String>,
    diagnoses: Vec<Vec<String>>,
    surprising: bool,
}

fn execute(cli: &Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = Context { cli, sampling: Sampling { seed: cli.seed, ..Sampling::default() } };
    let io = |e: std::io::Error| CliError::Io { path: "<stdout>".into(), message: e.to_string() };
    match &cli.command {
        Command::Revise | Command::Update | Command::Simulate => {
            let mode = match cli.command {
                Command::Revise => Mode::Revision,
                Command::Update => Mode::Update,
                _ => Mode::Simulate,
            };
            let s = ctx.scenario(Some(mode))?;
            let reports = run_scenario(&s, cli.cap)?;
            writeln!(stdout, "{} mode, prior: {}", s.mode.name(), s.prior.label()).map_err(io)?;
            for r in &reports {
                writeln!(stdout, "{}", r.line()).map_err(io)?;
            }
            if let Some(p) = &cli.out {
                write_out(p, &to_json(&run_document(&s, reports)))?;
            }
            Ok(0)
        }
        Command::Check(args) => {
            let report = check(&ctx, args)?;
            write!(stdout, "{report}").map_err(io)?;
            if let Some(p) = &cli.out {
                write_out(p, &report.to_json())?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Statify => {
            let sys = ctx.scenario(None)?.system(cli.cap)?;
            let star = systems::statify(&sys)?;
            let dump = systems::write_dump(&star);
            match &cli.out {
                Some(p) => write_out(p, &dump)?,
                None => write!(stdout, "{dump}").map_err(io)?,
            }
            Ok(0)
        }
        Command::Diagnose { circuit, obs } => {
            let (c, o) = ctx.circuit(Some(circuit), obs.as_ref())?;
            let trace = diagnosis_trace(&c, &o);
            let u = c.universe();
            let mut doc = DiagnosisDocument { gates: c.gates().iter().map(|g| g.id.clone()).collect(), steps: Vec::new() };
            for step in trace {
                let sets: Vec<String> = step.diagnoses.iter().map(|f| f.show(&c)).collect();
                let obs_text = step.observation.as_ref().map(|f| u.text(f));
                writeln!(
                    stdout,
                    "step {}  obs={}  diagnoses={{{}}}{}",
                    step.step,
                    obs_text.as_deref().unwrap_or("-"),
                    sets.join(", "),
                    if step.surprising { "  [surprising]" } else { "" }
                )
                .map_err(io)?;
                doc.steps.push(DiagnosisStepDocument {
                    step: step.step,
                    observation: obs_text,
                    diagnoses: step.diagnoses.iter().map(|f| f.members().map(|i| c.gates()[i].id.clone()).collect()).collect(),
                    surprising: step.surprising,
                });
            }
            if let Some(p) = &cli.out {
                write_out(p, &to_json(&doc))?;
            }
            Ok(0)
        }
        Command::Repl => {
            let s = ctx.scenario(None)?;
            let mut repl = Repl::new(s, cli.cap)?;
            writeln!(stdout, "{}", repl.current().line()).map_err(io)?;
            let mut line = String::new();
            loop {
                line.clear();
                if stdin.read_line(&mut line).map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })? == 0 {
                    break;
                }
                match repl.feed_line(&line) {
                    Ok(ReplEvent::Quit) => break,
                    Ok(ReplEvent::Output(text)) if text.is_empty() => {}
                    Ok(ReplEvent::Output(text)) => writeln!(stdout, "{text}").map_err(io)?,
                    Err(e) => writeln!(stdout, "error: {e}").map_err(io)?,
                }
            }
            if let Some(p) = &cli.out {
                let doc = RunDocument {
                    mode: "repl".into(),
                    vocabulary: Vec::new(),
                    prior: String::new(),
                    steps: repl.reports(),
                };
                write_out(p, &to_json(&doc))?;
            }
            Ok(0)
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

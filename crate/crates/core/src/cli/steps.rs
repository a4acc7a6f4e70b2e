use serde::Serialize;

use super::scenario::{Engine, Scenario};
use super::CliError;
use crate::kernel::{BeliefSet, Formula, Universe};

/// Beliefs after one observation (step 0 holds the initial beliefs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub observation: Option<String>,
    /// Belief worlds as bitstrings in vocabulary order.
    pub worlds: Vec<String>,
    /// Canonical DNF of the belief worlds.
    pub formula: String,
    /// The new belief worlds share nothing with the previous ones.
    pub surprising: bool,
    pub inconsistent: bool,
}

impl StepReport {
    pub fn new(u: &Universe, step: usize, observation: Option<&Formula>, beliefs: &BeliefSet, previous: Option<&BeliefSet>) -> Self {
        StepReport {
            step,
            observation: observation.map(|f| u.text(f)),
            worlds: beliefs.bitstrings(),
            formula: beliefs.char_text(),
            surprising: previous.is_some_and(|p| p.worlds().is_disjoint(beliefs.worlds())),
            inconsistent: !beliefs.is_consistent(),
        }
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let mut out = format!(
            "step {}  obs={}  worlds={{{}}}  belief={}",
            self.step,
            self.observation.as_deref().unwrap_or("-"),
            self.worlds.join(","),
            self.formula
        );
        if self.surprising {
            out.push_str("  [surprising]");
        }
        if self.inconsistent {
            out.push_str("  [inconsistent]");
        }
        out
    }
}

/// The machine-readable document for a batch run.
#[derive(Debug, Clone, Serialize)]
pub struct RunDocument {
    pub mode: String,
    pub vocabulary: Vec<String>,
    pub prior: String,
    pub steps: Vec<StepReport>,
}

/// Reports for the prefixes 0..=obs.len() of `obs`.
pub fn step_reports(engine: &Engine, u: &Universe, obs: &[Formula]) -> Result<Vec<StepReport>, CliError> {
    let mut out = Vec::with_capacity(obs.len() + 1);
    let mut previous: Option<BeliefSet> = None;
    for m in 0..=obs.len() {
        let b = engine.beliefs(&obs[..m])?;
        out.push(StepReport::new(u, m, m.checked_sub(1).map(|i| &obs[i]), &b, previous.as_ref()));
        previous = Some(b);
    }
    Ok(out)
}

/// Runs a scenario in batch: one report per observation plus step 0.
pub fn run_scenario(s: &Scenario, cap: u128) -> Result<Vec<StepReport>, CliError> {
    let engine = s.engine(cap)?;
    step_reports(&engine, &s.universe, &s.observations)
}

pub fn run_document(s: &Scenario, steps: Vec<StepReport>) -> RunDocument {
    RunDocument {
        mode: s.mode.name().into(),
        vocabulary: s.universe.vocab().atoms().iter().map(|a| a.to_string()).collect(),
        prior: s.prior.label(),
        steps,
    }
}

use super::scenario::{Engine, Scenario};
use super::steps::StepReport;
use super::CliError;
use crate::kernel::{BeliefSet, Formula};

/// What the session does with one input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplEvent {
    Output(String),
    Quit,
}

/// A stepwise session: each line is one observation, or one of `:undo`,
/// `:worlds` and `:quit`. Beliefs are recomputed from the whole observation
/// sequence, exactly as in batch mode.
pub struct Repl {
    scenario: Scenario,
    engine: Engine,
    observations: Vec<Formula>,
    beliefs: Vec<BeliefSet>,
}

impl Repl {
    pub fn new(scenario: Scenario, cap: u128) -> Result<Self, CliError> {
        if !scenario.observations.is_empty() {
            return Err(CliError::Scenario {
                path: "observations".into(),
                message: "the REPL starts from a scenario without observations".into(),
            });
        }
        let engine = scenario.engine(cap)?;
        let initial = engine.beliefs(&[])?;
        Ok(Repl { scenario, engine, observations: Vec::new(), beliefs: vec![initial] })
    }

    /// The report for the current step.
    pub fn current(&self) -> StepReport {
        let m = self.observations.len();
        StepReport::new(
            &self.scenario.universe,
            m,
            self.observations.last(),
            &self.beliefs[m],
            m.checked_sub(1).map(|i| &self.beliefs[i]),
        )
    }

    pub fn observations(&self) -> &[Formula] {
        &self.observations
    }

    /// Reports for every step so far.
    pub fn reports(&self) -> Vec<StepReport> {
        (0..=self.observations.len())
            .map(|m| {
                StepReport::new(
                    &self.scenario.universe,
                    m,
                    m.checked_sub(1).map(|i| &self.observations[i]),
                    &self.beliefs[m],
                    m.checked_sub(1).map(|i| &self.beliefs[i]),
                )
            })
            .collect()
    }

    /// Handles one line. Errors leave the session unchanged.
    pub fn feed_line(&mut self, line: &str) -> Result<ReplEvent, CliError> {
        let line = line.trim();
        match line {
            "" => Ok(ReplEvent::Output(String::new())),
            ":quit" | ":q" => Ok(ReplEvent::Quit),
            ":undo" => {
                if self.observations.pop().is_some() {
                    self.beliefs.pop();
                }
                Ok(ReplEvent::Output(self.current().line()))
            }
            ":worlds" => {
                let b = &self.beliefs[self.observations.len()];
                Ok(ReplEvent::Output(b.bitstrings().join(" ")))
            }
            _ if line.starts_with(':') => Err(CliError::Usage(format!("unknown command `{line}`; use :undo, :worlds or :quit"))),
            _ => {
                let f = self.scenario.universe.parse(line)?;
                let mut next = self.observations.clone();
                next.push(f);
                let b = self.engine.beliefs(&next)?;
                self.observations = next;
                self.beliefs.push(b);
                Ok(ReplEvent::Output(self.current().line()))
            }
        }
    }
}

//! Belief revision and belief update over finite propositional vocabularies,
//! plus run-based belief change systems that ground both in a prior over runs.

pub mod cli;
pub mod diagnosis;
pub mod kernel;
pub mod plausibility;
pub mod report;
pub mod revision;
pub mod systems;
pub mod update;

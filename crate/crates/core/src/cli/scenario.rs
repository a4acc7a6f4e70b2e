//! Scenario documents (TOML) and structure documents (TOML or JSON).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Deserialize;

use super::CliError;
use crate::kernel::{BeliefSet, Formula, Theory, Universe, Vocabulary, World};
use crate::revision::RevisionRanking;
use crate::systems::{build_revision_system_capped, build_update_system_capped, SystemModel};
use crate::update::{km_update_seq, parse_matrix, DistanceFunction, UpdateStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Revision,
    Update,
    Simulate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Revision => "revision",
            Mode::Update => "update",
            Mode::Simulate => "simulate",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    mode: Option<String>,
    vocabulary: Vec<String>,
    #[serde(default)]
    theory: Vec<String>,
    prior: Option<PriorFile>,
    initial: Option<String>,
    #[serde(default)]
    observations: Vec<String>,
    horizon: Option<usize>,
    alphabet: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PriorFile {
    kind: String,
    ranks: Option<BTreeMap<String, u32>>,
    distance: Option<String>,
    weights: Option<Vec<u64>>,
    matrix: Option<String>,
}

#[derive(Debug, Default)]
struct DistanceFile {
    distance: Option<String>,
    weights: Option<Vec<u64>>,
    matrix: Option<String>,
}

/// A standalone update structure: vocabulary, theory and distance.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    vocabulary: Vec<String>,
    #[serde(default)]
    theory: Vec<String>,
    distance: Option<String>,
    weights: Option<Vec<u64>>,
    matrix: Option<String>,
}

/// The prior of a scenario.
#[derive(Debug, Clone)]
pub enum Prior {
    Ranked(RevisionRanking),
    /// A distance; in simulate mode it induces the lexicographic prior.
    Distance { structure: UpdateStructure, label: String },
}

impl Prior {
    pub fn label(&self) -> String {
        match self {
            Prior::Ranked(_) => "ranked".into(),
            Prior::Distance { label, .. } => label.clone(),
        }
    }
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub mode: Mode,
    pub universe: Arc<Universe>,
    pub prior: Prior,
    /// Update mode only; `true` when omitted.
    pub initial: Option<BeliefSet>,
    pub observations: Vec<Formula>,
    /// Simulate mode only.
    pub horizon: usize,
    /// Simulate mode only.
    pub alphabet: Vec<Formula>,
}

fn err(path: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Scenario { path: path.into(), message: message.to_string() }
}

fn build_universe(vocabulary: &[String], theory: &[String]) -> Result<Arc<Universe>, CliError> {
    let vocab = Vocabulary::from_names(vocabulary).map_err(|e| err("vocabulary", e))?;
    let mut formulas = Vec::new();
    for (i, t) in theory.iter().enumerate() {
        formulas.push(crate::kernel::parse(t, &vocab).map_err(|e| err(format!("theory[{i}]"), e))?);
    }
    Universe::new(vocab, Theory::new(formulas)).map_err(|e| err("theory", e))
}

fn build_distance(u: &Arc<Universe>, d: &DistanceFile, prefix: &str) -> Result<(UpdateStructure, String), CliError> {
    let path = |f: &str| if prefix.is_empty() { f.to_string() } else { format!("{prefix}.{f}") };
    let kind = match (&d.distance, &d.weights, &d.matrix) {
        (Some(k), _, _) => k.as_str(),
        (None, Some(_), _) => "weighted",
        (None, None, Some(_)) => "matrix",
        (None, None, None) => {
            return Ok((UpdateStructure::hamming(u).map_err(|e| err(path("distance"), e))?, "hamming (default)".into()));
        }
    };
    let function = match kind {
        "hamming" => DistanceFunction::Hamming,
        "weighted" => {
            let w = d.weights.as_ref().ok_or_else(|| err(path("weights"), "weighted distance needs `weights`"))?;
            if w.contains(&0) {
                return Err(err(path("weights"), "weights must be positive"));
            }
            DistanceFunction::WeightedHamming(w.iter().map(|&x| Ratio::from_integer(x)).collect())
        }
        "matrix" => {
            let text = d.matrix.as_ref().ok_or_else(|| err(path("matrix"), "matrix distance needs `matrix`"))?;
            parse_matrix(text, u).map_err(|e| err(path("matrix"), e))?
        }
        other => return Err(err(path("distance"), format!("unknown distance `{other}`; expected hamming, weighted or matrix"))),
    };
    let label = function.kind().to_string();
    let s = UpdateStructure::new(u, function).map_err(|e| err(path("distance"), e))?;
    Ok((s, label))
}

fn parse_formula(u: &Universe, text: &str, path: String) -> Result<Formula, CliError> {
    u.parse(text).map_err(|e| err(path, e))
}

/// `true` followed by every literal, positive before negative, in vocabulary order.
pub fn default_alphabet(u: &Universe) -> Vec<Formula> {
    let mut out = vec![Formula::True];
    for i in 0..u.vocab().len() {
        out.push(Formula::Atom(i));
        out.push(Formula::not(Formula::Atom(i)));
    }
    out
}

impl Scenario {
    /// Parses a scenario; `forced` overrides the mode (the subcommand in use)
    /// and must agree with the document's `mode` when both are present.
    pub fn parse(text: &str, forced: Option<Mode>) -> Result<Scenario, CliError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| err("", e.message()))?;
        let declared = match file.mode.as_deref() {
            None => None,
            Some("revision") => Some(Mode::Revision),
            Some("update") => Some(Mode::Update),
            Some("simulate") => Some(Mode::Simulate),
            Some(other) => return Err(err("mode", format!("unknown mode `{other}`; expected revision, update or simulate"))),
        };
        let u = build_universe(&file.vocabulary, &file.theory)?;
        let prior = match &file.prior {
            None => None,
            Some(p) => Some(match p.kind.as_str() {
                "ranked" => {
                    if p.distance.is_some() || p.weights.is_some() || p.matrix.is_some() {
                        return Err(err("prior", "a ranked prior takes only `ranks`"));
                    }
                    let ranks = p.ranks.as_ref().ok_or_else(|| err("prior.ranks", "a ranked prior needs `ranks`"))?;
                    let mut table: BTreeMap<World, u32> = BTreeMap::new();
                    for (bits, &r) in ranks {
                        let w = World::parse_bits(bits).map_err(|e| err(format!("prior.ranks.\"{bits}\""), e))?;
                        if w.len() != u.vocab().len() {
                            return Err(err(format!("prior.ranks.\"{bits}\""), format!("expected {} bits", u.vocab().len())));
                        }
                        table.insert(w, r);
                    }
                    Prior::Ranked(RevisionRanking::new(&u, table).map_err(|e| err("prior.ranks", e))?)
                }
                "distance" | "lex" => {
                    if p.ranks.is_some() {
                        return Err(err("prior.ranks", "ranks belong to a ranked prior"));
                    }
                    let d = DistanceFile { distance: p.distance.clone(), weights: p.weights.clone(), matrix: p.matrix.clone() };
                    let (structure, label) = build_distance(&u, &d, "prior")?;
                    let label = if p.kind == "lex" { format!("lexicographic from {label}") } else { label };
                    Prior::Distance { structure, label }
                }
                other => return Err(err("prior.kind", format!("unknown prior kind `{other}`; expected ranked, distance or lex"))),
            }),
        };
        let mode = match (forced, declared) {
            (Some(f), Some(d)) if f != d => {
                return Err(err("mode", format!("scenario is for {} mode, not {}", d.name(), f.name())));
            }
            (Some(m), _) | (None, Some(m)) => m,
            (None, None) => match &prior {
                Some(Prior::Ranked(_)) => Mode::Revision,
                _ => Mode::Update,
            },
        };
        let prior = match (mode, prior) {
            (Mode::Revision, Some(p @ Prior::Ranked(_))) => p,
            (Mode::Revision, None) => return Err(err("prior", "revision mode needs a ranked prior")),
            (Mode::Revision, Some(_)) => return Err(err("prior.kind", "revision mode needs a ranked prior")),
            (Mode::Update, Some(Prior::Ranked(_))) => return Err(err("prior.kind", "update mode needs a distance prior")),
            (Mode::Update, Some(p)) => p,
            (Mode::Simulate, Some(p)) => p,
            (_, None) => {
                let (structure, label) = build_distance(&u, &DistanceFile::default(), "prior")?;
                Prior::Distance { structure, label }
            }
        };
        if mode != Mode::Update && file.initial.is_some() {
            return Err(err("initial", "an initial belief is only used in update mode"));
        }
        if mode != Mode::Simulate && (file.horizon.is_some() || file.alphabet.is_some()) {
            let field = if file.horizon.is_some() { "horizon" } else { "alphabet" };
            return Err(err(field, "only used in simulate mode"));
        }
        let initial = match (mode, &file.initial) {
            (Mode::Update, Some(t)) => Some(BeliefSet::of_formula(&u, &parse_formula(&u, t, "initial".into())?)),
            (Mode::Update, None) => Some(BeliefSet::of_formula(&u, &Formula::True)),
            _ => None,
        };
        let observations = file
            .observations
            .iter()
            .enumerate()
            .map(|(i, t)| parse_formula(&u, t, format!("observations[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let horizon = file.horizon.unwrap_or(observations.len());
        if horizon < observations.len() {
            return Err(err("horizon", format!("{} observations exceed the horizon {horizon}", observations.len())));
        }
        let alphabet = match &file.alphabet {
            Some(a) => a
                .iter()
                .enumerate()
                .map(|(i, t)| parse_formula(&u, t, format!("alphabet[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
            None => default_alphabet(&u),
        };
        Ok(Scenario { mode, universe: u, prior, initial, observations, horizon, alphabet })
    }

    pub fn ranking(&self) -> Option<&RevisionRanking> {
        match &self.prior {
            Prior::Ranked(rk) => Some(rk),
            Prior::Distance { .. } => None,
        }
    }

    pub fn structure(&self) -> Option<&UpdateStructure> {
        match &self.prior {
            Prior::Distance { structure, .. } => Some(structure),
            Prior::Ranked(_) => None,
        }
    }

    /// The system a simulate scenario describes: a revision system for a
    /// ranked prior, an update system (lexicographic prior) otherwise.
    pub fn system(&self, cap: u128) -> Result<SystemModel, CliError> {
        Ok(match &self.prior {
            Prior::Ranked(rk) => build_revision_system_capped(rk, &self.alphabet, self.horizon, cap)?,
            Prior::Distance { structure, .. } => build_update_system_capped(structure, &self.alphabet, self.horizon, cap)?,
        })
    }

    /// The belief engine for this scenario's mode.
    pub fn engine(&self, cap: u128) -> Result<Engine, CliError> {
        Ok(match (self.mode, &self.prior) {
            (Mode::Revision, Prior::Ranked(rk)) => Engine::Revision(rk.clone()),
            (Mode::Update, Prior::Distance { structure, .. }) => Engine::Update {
                structure: structure.clone(),
                initial: self.initial.clone().expect("update scenarios carry an initial belief"),
            },
            (Mode::Simulate, _) => Engine::Simulate(Box::new(self.system(cap)?)),
            _ => unreachable!("prior kinds are checked at parse time"),
        })
    }
}

/// Parses an update structure document; `json` selects the format.
pub fn parse_structure(text: &str, json: bool) -> Result<UpdateStructure, CliError> {
    let file: StructureFile = if json {
        serde_json::from_str(text).map_err(|e| err("", e))?
    } else {
        toml::from_str(text).map_err(|e| err("", e.message()))?
    };
    let u = build_universe(&file.vocabulary, &file.theory)?;
    let d = DistanceFile { distance: file.distance, weights: file.weights, matrix: file.matrix };
    Ok(build_distance(&u, &d, "")?.0)
}

/// Computes the belief set after a sequence of observations.
pub enum Engine {
    Revision(RevisionRanking),
    Update { structure: UpdateStructure, initial: BeliefSet },
    Simulate(Box<SystemModel>),
}

impl Engine {
    pub fn beliefs(&self, obs: &[Formula]) -> Result<BeliefSet, CliError> {
        Ok(match self {
            Engine::Revision(rk) => crate::revision::epistemic_bs(rk, obs),
            Engine::Update { structure, initial } => km_update_seq(structure, initial, obs),
            Engine::Simulate(sys) => {
                if obs.len() > sys.horizon() {
                    return Err(CliError::System(crate::systems::SystemError::HorizonExceeded { time: obs.len(), horizon: sys.horizon() }));
                }
                sys.bel(obs)
            }
        })
    }
}

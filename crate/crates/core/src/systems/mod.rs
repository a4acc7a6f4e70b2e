//! Finite-horizon interpreted plausibility systems: runs, priors over runs,
//! conditioning on local states, model checking, constructors, validators and
//! the statify transformation.

mod bridge;
mod build;
mod dump;
mod kpt;
mod prior;
mod statify;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{BeliefSet, Formula, KernelError, ParseError, Universe, World, WorldSet};
use crate::plausibility::{ComparisonResult, Measure, Plausibility};
use crate::update::UpdateError;

pub use bridge::{check_correctness_propagation, cross_check_update, trace_run, StepTrace};
pub use build::{build_revision_system, build_revision_system_capped, build_update_system, build_update_system_capped, DEFAULT_STATE_CAP};
pub use dump::write_dump;
pub use kpt::{model_check, parse_kpt, Kpt};
pub use prior::{LexPrior, RunPrior};
pub use statify::{check_prop_7_1, statify, timestamp, MAX_STATIFIED_ATOMS};
pub use validate::{check_prev_rule, validate_bcs, validate_rev, validate_upd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("the observation alphabet is empty")]
    EmptyAlphabet,
    #[error("the observation alphabet must contain `true`")]
    MissingTrue,
    #[error("observation `{0}` is inconsistent with the background theory")]
    InconsistentObservation(String),
    #[error("state space of {size} exceeds the cap of {cap}")]
    StateSpaceTooLarge { size: u128, cap: u128 },
    #[error("time {time} is past the horizon {horizon}")]
    HorizonExceeded { time: usize, horizon: usize },
    #[error("statified vocabulary would need {0} atoms; at most 16 are supported")]
    VocabularyTooLarge(usize),
    #[error("malformed run {run}: {message}")]
    BadRun { run: usize, message: String },
    #[error("bad prior: {0}")]
    BadPrior(String),
    #[error("no run {0}")]
    UnknownRun(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Update(#[from] UpdateError),
}

/// An environment state: a world plus an optional tag that tells apart
/// states sharing a world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnvState {
    pub world: World,
    pub tag: u32,
}

impl EnvState {
    pub fn new(world: World) -> Self {
        EnvState { world, tag: 0 }
    }
}

/// Environment states s₀..s_T and observations o₁..o_T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub env: Vec<EnvState>,
    pub obs: Vec<Formula>,
}

impl Run {
    pub fn new(worlds: &[World], obs: Vec<Formula>) -> Self {
        Run { env: worlds.iter().map(|w| EnvState::new(*w)).collect(), obs }
    }

    pub fn world(&self, m: usize) -> World {
        self.env[m].world
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub run: usize,
    pub time: usize,
}

impl Point {
    pub fn new(run: usize, time: usize) -> Self {
        Point { run, time }
    }
}

pub(crate) type ObsId = u32;

/// I = (R, π, P): runs over a universe with horizon T and a prior over runs.
/// The agent's local state at (r, m) is ⟨o₁..o_m⟩, so the system is
/// synchronous with perfect recall.
#[derive(Debug, Clone)]
pub struct SystemModel {
    universe: Arc<Universe>,
    horizon: usize,
    runs: Vec<Run>,
    obs_ids: Vec<Vec<ObsId>>,
    obs_table: Vec<Formula>,
    obs_index: HashMap<Formula, ObsId>,
    prior: RunPrior,
    alphabet: Vec<Formula>,
    /// Measures replacing the conditioned prior at particular local states.
    overrides: BTreeMap<Vec<ObsId>, Measure<usize>>,
    /// `cells[m][local state]`: sorted runs with that local state at time m.
    cells: Vec<HashMap<Vec<ObsId>, Vec<usize>>>,
}

/// The measure in force at one local state.
pub(crate) enum CellMeasure<'a> {
    Prior(&'a RunPrior),
    Override(&'a Measure<usize>),
}

impl CellMeasure<'_> {
    pub(crate) fn compare(&self, a: &[usize], b: &[usize]) -> ComparisonResult {
        match self {
            CellMeasure::Prior(p) => p.compare(a, b),
            CellMeasure::Override(m) => m.compare(&a.iter().copied().collect(), &b.iter().copied().collect()),
        }
    }

    pub(crate) fn is_bottom(&self, a: &[usize]) -> bool {
        match self {
            CellMeasure::Prior(p) => p.is_bottom(a),
            CellMeasure::Override(m) => m.is_bottom(&a.iter().copied().collect()),
        }
    }

    pub(crate) fn mask_comparator<'b>(&'b self, items: &'b [usize]) -> Box<dyn Fn(u64, u64) -> ComparisonResult + 'b> {
        match self {
            CellMeasure::Prior(p) => p.mask_comparator(items),
            CellMeasure::Override(m) => m.mask_comparator(items),
        }
    }
}

impl SystemModel {
    /// Builds a system from explicit runs. Every run needs T+1 environment
    /// states and T observations; worlds must have the vocabulary's width.
    /// Truthfulness and theory membership are left to `validate_bcs`.
    pub fn new(
        universe: &Arc<Universe>,
        horizon: usize,
        runs: Vec<Run>,
        prior: RunPrior,
        alphabet: Vec<Formula>,
    ) -> Result<Self, SystemError> {
        let width = universe.vocab().len();
        for (i, r) in runs.iter().enumerate() {
            let bad = |message: String| SystemError::BadRun { run: i, message };
            if r.env.len() != horizon + 1 {
                return Err(bad(format!("{} environment states, expected {}", r.env.len(), horizon + 1)));
            }
            if r.obs.len() != horizon {
                return Err(bad(format!("{} observations, expected {horizon}", r.obs.len())));
            }
            if let Some(s) = r.env.iter().find(|s| s.world.len() != width) {
                return Err(bad(format!("world {} has {} bits, expected {width}", s.world, s.world.len())));
            }
        }
        let n = runs.len();
        match &prior {
            RunPrior::Ranked(ranks) if ranks.len() != n => {
                return Err(SystemError::BadPrior(format!("{} ranks for {n} runs", ranks.len())));
            }
            RunPrior::Lex(l) if l.runs() != n => {
                return Err(SystemError::BadPrior(format!("lexicographic prior covers {} runs, system has {n}", l.runs())));
            }
            RunPrior::Preference(p) if p.elements().iter().any(|&r| r >= n) => {
                return Err(SystemError::BadPrior(format!("preference order mentions runs beyond {n}")));
            }
            _ => {}
        }
        let mut obs_table = Vec::new();
        let mut obs_index = HashMap::new();
        let mut obs_ids = Vec::with_capacity(n);
        for r in &runs {
            let ids: Vec<ObsId> = r
                .obs
                .iter()
                .map(|f| {
                    *obs_index.entry(f.clone()).or_insert_with(|| {
                        obs_table.push(f.clone());
                        (obs_table.len() - 1) as ObsId
                    })
                })
                .collect();
            obs_ids.push(ids);
        }
        let mut cells: Vec<HashMap<Vec<ObsId>, Vec<usize>>> = vec![HashMap::new(); horizon + 1];
        for (i, ids) in obs_ids.iter().enumerate() {
            for (m, cell) in cells.iter_mut().enumerate() {
                cell.entry(ids[..m].to_vec()).or_default().push(i);
            }
        }
        Ok(SystemModel {
            universe: universe.clone(),
            horizon,
            runs,
            obs_ids,
            obs_table,
            obs_index,
            prior,
            alphabet,
            overrides: BTreeMap::new(),
            cells,
        })
    }

    /// Replaces the conditioned prior at local state `state` by `measure`,
    /// whose carrier should be the cell's runs. Used to build systems that
    /// break the conditioning rule.
    pub fn with_cell_measure(mut self, state: &[Formula], measure: Measure<usize>) -> Result<Self, SystemError> {
        let key = self.key_of(state).ok_or_else(|| SystemError::BadPrior("unattainable local state".into()))?;
        if !self.cells[key.len()].contains_key(&key) {
            return Err(SystemError::BadPrior("unattainable local state".into()));
        }
        self.overrides.insert(key, measure);
        Ok(self)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn run(&self, i: usize) -> &Run {
        &self.runs[i]
    }

    pub fn prior(&self) -> &RunPrior {
        &self.prior
    }

    pub fn alphabet(&self) -> &[Formula] {
        &self.alphabet
    }

    pub fn has_overrides(&self) -> bool {
        !self.overrides.is_empty()
    }

    /// Number of points (r, m) with m ≤ T.
    pub fn point_count(&self) -> usize {
        self.runs.len() * (self.horizon + 1)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.runs.len()).flat_map(move |r| (0..=self.horizon).map(move |m| Point::new(r, m)))
    }

    pub fn world_at(&self, p: Point) -> World {
        self.runs[p.run].env[p.time].world
    }

    /// The local state ⟨o₁..o_m⟩ at `p`.
    pub fn local_state(&self, p: Point) -> &[Formula] {
        &self.runs[p.run].obs[..p.time]
    }

    pub(crate) fn check_point(&self, p: Point) -> Result<(), SystemError> {
        if p.run >= self.runs.len() {
            return Err(SystemError::UnknownRun(p.run));
        }
        if p.time > self.horizon {
            return Err(SystemError::HorizonExceeded { time: p.time, horizon: self.horizon });
        }
        Ok(())
    }

    pub(crate) fn key_at(&self, p: Point) -> &[ObsId] {
        &self.obs_ids[p.run][..p.time]
    }

    pub(crate) fn obs_id(&self, run: usize, m: usize) -> ObsId {
        self.obs_ids[run][m - 1]
    }

    pub(crate) fn obs_formula(&self, id: ObsId) -> &Formula {
        &self.obs_table[id as usize]
    }

    /// Interned ids of a formula sequence; None if some formula never occurs.
    pub(crate) fn key_of(&self, state: &[Formula]) -> Option<Vec<ObsId>> {
        state.iter().map(|f| self.obs_index.get(f).copied()).collect()
    }

    /// Sorted runs whose local state at time `key.len()` is `key`.
    pub(crate) fn cell(&self, key: &[ObsId]) -> &[usize] {
        self.cells
            .get(key.len())
            .and_then(|c| c.get(key))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// All attainable local states at time m with their runs.
    pub(crate) fn cells_at(&self, m: usize) -> &HashMap<Vec<ObsId>, Vec<usize>> {
        &self.cells[m]
    }

    pub(crate) fn cell_measure(&self, key: &[ObsId]) -> CellMeasure<'_> {
        match self.overrides.get(key) {
            Some(m) => CellMeasure::Override(m),
            None => CellMeasure::Prior(&self.prior),
        }
    }

    /// All points with the same local state as `p`.
    pub fn knowledge_cell(&self, p: Point) -> Result<Vec<Point>, SystemError> {
        self.check_point(p)?;
        Ok(self.cell(self.key_at(p)).iter().map(|&r| Point::new(r, p.time)).collect())
    }

    /// Worlds at time m of the most plausible runs of the cell `key`:
    /// the w with ¬B¬w there. Empty when the cell is ⊥ or unattainable.
    pub(crate) fn cell_states(&self, key: &[ObsId]) -> WorldSet {
        let m = key.len();
        let runs = self.cell(key);
        match self.overrides.get(key) {
            None => self.prior.minimal(runs).into_iter().map(|r| self.runs[r].world(m)).collect(),
            Some(measure) => {
                let cm = CellMeasure::Override(measure);
                if cm.is_bottom(runs) {
                    return WorldSet::new();
                }
                let worlds: WorldSet = runs.iter().map(|&r| self.runs[r].world(m)).collect();
                worlds
                    .into_iter()
                    .filter(|w| {
                        let (yes, no): (Vec<usize>, Vec<usize>) = runs.iter().partition(|&&r| self.runs[r].world(m) == *w);
                        !cm.compare(&no, &yes).gt()
                    })
                    .collect()
            }
        }
    }

    /// States(I, s_a): the worlds the agent considers possible after the
    /// observations `state`; empty if `state` is unattainable.
    pub fn states_possible(&self, state: &[Formula]) -> WorldSet {
        if state.len() > self.horizon {
            return WorldSet::new();
        }
        match self.key_of(state) {
            Some(key) => self.cell_states(&key),
            None => WorldSet::new(),
        }
    }

    /// Bel(I, s_a) as a belief set; inconsistent when unattainable.
    pub fn bel(&self, state: &[Formula]) -> BeliefSet {
        BeliefSet::new(&self.universe, self.states_possible(state))
            .unwrap_or_else(|_| BeliefSet::inconsistent(&self.universe))
    }

    /// The sequence of distinct local states reachable in the system at time m.
    pub fn local_states(&self, m: usize) -> Vec<Vec<Formula>> {
        let mut out: Vec<Vec<Formula>> = self
            .cells
            .get(m)
            .map(|c| c.keys().map(|k| k.iter().map(|&i| self.obs_formula(i).clone()).collect()).collect())
            .unwrap_or_default();
        out.sort_by_cached_key(|s: &Vec<Formula>| s.iter().map(|f| self.universe.text(f)).collect::<Vec<_>>());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plausibility::{PreferenceMeasure, Rank};

    fn tiny() -> SystemModel {
        let u = Universe::over(&["p"]).unwrap();
        let w = |b: &str| u.world(b).unwrap();
        let p = u.parse("p").unwrap();
        let runs = vec![
            Run::new(&[w("1"), w("1")], vec![p.clone()]),
            Run::new(&[w("1"), w("1")], vec![Formula::True]),
            Run::new(&[w("0"), w("0")], vec![Formula::True]),
        ];
        let prior = RunPrior::Ranked(vec![Rank::Finite(1), Rank::Finite(1), Rank::Finite(0)]);
        SystemModel::new(&u, 1, runs, prior, vec![Formula::True, p]).unwrap()
    }

    #[test]
    fn cells_and_states() {
        let s = tiny();
        assert_eq!(s.knowledge_cell(Point::new(0, 0)).unwrap().len(), 3);
        assert_eq!(s.knowledge_cell(Point::new(0, 1)).unwrap(), vec![Point::new(0, 1)]);
        assert_eq!(s.knowledge_cell(Point::new(1, 1)).unwrap().len(), 2);
        assert!(matches!(s.knowledge_cell(Point::new(0, 2)), Err(SystemError::HorizonExceeded { .. })));
        assert_eq!(s.bel(&[]).to_string(), "{0}");
        assert_eq!(s.bel(&[Formula::True]).to_string(), "{0}");
        let p = s.universe().parse("p").unwrap();
        assert_eq!(s.bel(&[p.clone()]).to_string(), "{1}");
        assert!(s.states_possible(&[Formula::False]).is_empty());
        assert!(s.states_possible(&[p.clone(), p]).is_empty());
    }

    #[test]
    fn malformed_runs_are_rejected() {
        let u = Universe::over(&["p"]).unwrap();
        let w = u.world("1").unwrap();
        let r = SystemModel::new(&u, 1, vec![Run::new(&[w], vec![])], RunPrior::Ranked(vec![Rank::Finite(0)]), vec![]);
        assert!(matches!(r, Err(SystemError::BadRun { run: 0, .. })));
        let r = SystemModel::new(&u, 0, vec![Run::new(&[w], vec![])], RunPrior::Ranked(vec![]), vec![]);
        assert!(matches!(r, Err(SystemError::BadPrior(_))));
    }

    #[test]
    fn override_changes_cell_beliefs() {
        let s = tiny();
        // At ⟨true⟩ prefer run 1 (world 1) over run 2 (world 0).
        let m = Measure::Preference(PreferenceMeasure::new([1usize, 2], &[(1, 2)]).unwrap());
        let s = s.with_cell_measure(&[Formula::True], m).unwrap();
        assert_eq!(s.bel(&[Formula::True]).to_string(), "{1}");
        assert!(s.has_overrides());
    }
}

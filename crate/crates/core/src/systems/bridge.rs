//! Cross-checks between update systems and the update operator.

use std::collections::HashMap;

use super::validate::{seq_text, set_text};
use super::{ObsId, Point, SystemError, SystemModel};
use crate::kernel::{show_worlds, Formula, World, WorldSet};
use crate::report::{Check, Report};
use crate::update::{min_u, sufficient_information, UpdateStructure};

/// Memoized States per local state.
struct StatesCache<'a> {
    sys: &'a SystemModel,
    memo: HashMap<Vec<ObsId>, WorldSet>,
}

impl<'a> StatesCache<'a> {
    fn new(sys: &'a SystemModel) -> Self {
        StatesCache { sys, memo: HashMap::new() }
    }

    fn get(&mut self, key: &[ObsId]) -> &WorldSet {
        if !self.memo.contains_key(key) {
            let s = self.sys.cell_states(key);
            self.memo.insert(key.to_vec(), s);
        }
        &self.memo[key]
    }
}

fn state_formulas(sys: &SystemModel, key: &[ObsId]) -> Vec<Formula> {
    key.iter().map(|&i| sys.obs_formula(i).clone()).collect()
}

/// For every attainable s_a shorter than the horizon and every ψ in the
/// alphabet, States(s_a · ψ) = min_U(States(s_a), ⟦ψ⟧).
pub fn cross_check_update(sys: &SystemModel, s: &UpdateStructure) -> Report {
    let u = sys.universe();
    let mut check = Check::new("states-follow-update");
    let mut cache = StatesCache::new(sys);
    for m in 0..sys.horizon() {
        let mut keys: Vec<&Vec<ObsId>> = sys.cells_at(m).keys().collect();
        keys.sort();
        for key in keys {
            let before = cache.get(key).clone();
            for psi in sys.alphabet() {
                let after = match sys.key_of(std::slice::from_ref(psi)) {
                    Some(id) => {
                        let mut child = key.clone();
                        child.extend(id);
                        cache.get(&child).clone()
                    }
                    None => WorldSet::new(),
                };
                let expected = min_u(s, &before, &u.models(psi));
                check.case(after == expected, || {
                    format!(
                        "s_a={} ψ={}: States(s_a·ψ)={} but min_U(States(s_a), ⟦ψ⟧)={}",
                        seq_text(u, &state_formulas(sys, key)),
                        u.text(psi),
                        show_worlds(&after),
                        show_worlds(&expected)
                    )
                });
            }
        }
    }
    let mut report = Report::new(format!("beliefs versus the update operator ({} distance)", s.distance().kind()));
    report.push(check);
    report
}

/// At every point (r, m) with correct beliefs whose next observation gives
/// sufficient information about the change, the beliefs at (r, m+1) are
/// correct as well. Points where the precondition fails are counted.
pub fn check_correctness_propagation(sys: &SystemModel, s: &UpdateStructure) -> Report {
    let u = sys.universe();
    let mut check = Check::new("correctness-propagates");
    let mut cache = StatesCache::new(sys);
    let (mut incorrect, mut insufficient) = (0u64, 0u64);
    let mut example: Option<String> = None;
    for r in 0..sys.runs().len() {
        for m in 0..sys.horizon() {
            let here = sys.key_at(Point::new(r, m)).to_vec();
            let (w, w2) = (sys.run(r).world(m), sys.run(r).world(m + 1));
            if !cache.get(&here).contains(&w) {
                incorrect += 1;
                continue;
            }
            let o = &sys.run(r).obs[m];
            match sufficient_information(s, w, w2, o) {
                Ok(true) => {
                    let next = sys.key_at(Point::new(r, m + 1)).to_vec();
                    let states = cache.get(&next).clone();
                    check.case(states.contains(&w2), || {
                        format!(
                            "(r{r}, {m}): beliefs correct at {w}, {} gives sufficient information about {w}→{w2}, yet States at time {}={}",
                            u.text(o),
                            m + 1,
                            show_worlds(&states)
                        )
                    });
                }
                Ok(false) => {
                    insufficient += 1;
                    if example.is_none() {
                        example = Some(format!(
                            "(r{r}, {m}): {} does not pin down the change {w}→{w2} after {}",
                            u.text(o),
                            seq_text(u, &state_formulas(sys, &here))
                        ));
                    }
                }
                Err(e) => check.fail(format!("(r{r}, {}): {e}", m + 1)),
            }
        }
    }
    let mut report = Report::new(format!("propagation of correct beliefs over {} points", sys.point_count()));
    report.push(check);
    let mut pre = Check::new("precondition-failures").informational();
    pre.cases = insufficient;
    pre.detail = Some(format!("{insufficient} points with correct beliefs lacked sufficient information; {incorrect} points had incorrect beliefs"));
    pre.witness = example;
    report.push(pre);
    report
}

/// One time step of a run as seen by the agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub time: usize,
    pub world: World,
    pub observation: Option<Formula>,
    pub states: WorldSet,
    /// The actual world is among the states considered possible.
    pub correct: bool,
    /// Whether the observation gave sufficient information about the change
    /// into this state, when beliefs were correct before it.
    pub sufficient: Option<bool>,
}

impl StepTrace {
    pub fn describe(&self, sys: &SystemModel) -> String {
        let u = sys.universe();
        let obs = self.observation.as_ref().map(|f| u.text(f)).unwrap_or_else(|| "-".into());
        let suff = match self.sufficient {
            Some(true) => "sufficient",
            Some(false) => "insufficient",
            None => "n/a",
        };
        format!(
            "m={} world={} obs={obs} states={} {} info={suff}",
            self.time,
            self.world,
            set_text(u, &self.states).replace("true", "any"),
            if self.correct { "correct" } else { "incorrect" }
        )
    }
}

/// States, correctness and sufficiency along one run.
pub fn trace_run(sys: &SystemModel, s: &UpdateStructure, run: usize) -> Result<Vec<StepTrace>, SystemError> {
    if run >= sys.runs().len() {
        return Err(SystemError::UnknownRun(run));
    }
    let r = sys.run(run);
    let mut out: Vec<StepTrace> = Vec::new();
    for m in 0..=sys.horizon() {
        let states = sys.cell_states(sys.key_at(Point::new(run, m)));
        let correct = states.contains(&r.world(m));
        let sufficient = match out.last() {
            Some(prev) if prev.correct => Some(sufficient_information(s, r.world(m - 1), r.world(m), &r.obs[m - 1])?),
            _ => None,
        };
        out.push(StepTrace {
            time: m,
            world: r.world(m),
            observation: (m > 0).then(|| r.obs[m - 1].clone()),
            states,
            correct,
            sufficient,
        });
    }
    Ok(out)
}

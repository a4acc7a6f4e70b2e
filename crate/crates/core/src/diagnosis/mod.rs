//! Model-based circuit diagnosis: components may fail persistently, the
//! agent observes line values, and the prior prefers fewer failures.

mod circuit;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{char_formula, Formula, KernelError, ParseError, Universe, World};
use crate::plausibility::Rank;
use crate::report::{Check, Report};
use crate::systems::{model_check, Kpt, Point, Run, RunPrior, SystemError, SystemModel};

pub use circuit::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagnosisError {
    #[error("the circuit has no gates")]
    EmptyCircuit,
    #[error("the circuit has a cycle through gate `{0}`")]
    CyclicCircuit(String),
    #[error("line `{0}` is driven by more than one gate")]
    MultipleDrivers(String),
    #[error("gate `{0}` is declared twice")]
    DuplicateGate(String),
    #[error("gate `{gate}`: {kind} cannot take {inputs} inputs")]
    Arity { gate: String, kind: GateKind, inputs: usize },
    #[error("`{0}` is not a valid name")]
    BadName(String),
    #[error("line `{0}` clashes with a fault atom")]
    NameClash(String),
    #[error("observations may only mention lines, found fault atom `{0}`")]
    FaultInObservation(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// A set of faulty components, bit i standing for gate i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FaultSet(pub u32);

impl FaultSet {
    pub fn contains(self, gate: usize) -> bool {
        self.0 >> gate & 1 == 1
    }

    /// Number of faulty components.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Fault set of a world of the circuit's universe.
    pub fn of_world(c: &Circuit, w: World) -> FaultSet {
        FaultSet((0..c.gates().len()).filter(|&i| w.get(i)).fold(0, |m, i| m | 1 << i))
    }

    /// The complete formula over fault atoms picking out this set.
    pub fn formula(self, c: &Circuit) -> Formula {
        Formula::conjunction((0..c.gates().len()).map(|i| if self.contains(i) { Formula::Atom(i) } else { Formula::not(Formula::Atom(i)) }))
    }

    pub fn show(self, c: &Circuit) -> String {
        let ids: Vec<&str> = self.members().map(|i| c.gates()[i].id.as_str()).collect();
        format!("{{{}}}", ids.join(", "))
    }
}

/// Display helper for a family of fault sets, `{{c1}, {c2, c3}}`.
pub struct ShowFaults<'a>(pub &'a Circuit, pub &'a BTreeSet<FaultSet>);

impl fmt::Display for ShowFaults<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.1.iter().map(|s| s.show(self.0)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn all_fault_sets(c: &Circuit) -> impl Iterator<Item = FaultSet> {
    (0..1u32 << c.gates().len()).map(FaultSet)
}

/// Fault sets under which `o` can hold: some line valuation satisfies the
/// circuit theory with exactly those components faulty.
fn consistent_with(c: &Circuit, o: &Formula) -> BTreeSet<FaultSet> {
    c.universe().worlds().iter().filter(|w| o.eval(**w)).map(|w| FaultSet::of_world(c, *w)).collect()
}

/// Fault sets consistent with every observation. Faults persist, so one
/// set must explain all observations, each under its own line valuation.
pub fn consistent_faults(c: &Circuit, obs: &[Formula]) -> BTreeSet<FaultSet> {
    let mut out: BTreeSet<FaultSet> = all_fault_sets(c).collect();
    for o in obs {
        let ok = consistent_with(c, o);
        out.retain(|f| ok.contains(f));
    }
    out
}

fn minimum_cardinality(sets: &BTreeSet<FaultSet>) -> BTreeSet<FaultSet> {
    match sets.iter().map(|f| f.len()).min() {
        Some(j) => sets.iter().filter(|f| f.len() == j).copied().collect(),
        None => BTreeSet::new(),
    }
}

/// D after `obs`: the consistent fault sets of minimum cardinality.
pub fn diagnoses(c: &Circuit, obs: &[Formula]) -> BTreeSet<FaultSet> {
    minimum_cardinality(&consistent_faults(c, obs))
}

/// The interpreted system for a circuit: one run per fault set and per
/// sequence of `horizon` observations drawn from `alphabet` that the fault
/// set can explain. Each environment state is the first world (in bitstring
/// order) with the run's faults that satisfies the current observation; the
/// prior ranks a run by the size of its fault set.
pub fn diagnosis_system(c: &Circuit, alphabet: &[Formula], horizon: usize) -> Result<SystemModel, DiagnosisError> {
    let u = c.universe();
    let mut witness: BTreeMap<(FaultSet, Option<usize>), World> = BTreeMap::new();
    for w in u.worlds() {
        let f = FaultSet::of_world(c, *w);
        witness.entry((f, None)).or_insert(*w);
        for (k, o) in alphabet.iter().enumerate() {
            if o.eval(*w) {
                witness.entry((f, Some(k))).or_insert(*w);
            }
        }
    }
    let mut runs = Vec::new();
    let mut ranks = Vec::new();
    for f in all_fault_sets(c) {
        let Some(&w0) = witness.get(&(f, None)) else { continue };
        let usable: Vec<usize> = (0..alphabet.len()).filter(|k| witness.contains_key(&(f, Some(*k)))).collect();
        if usable.is_empty() && horizon > 0 {
            continue;
        }
        let mut choice = vec![0usize; horizon];
        loop {
            let mut worlds = vec![w0];
            worlds.extend(choice.iter().map(|&i| witness[&(f, Some(usable[i]))]));
            runs.push(Run::new(&worlds, choice.iter().map(|&i| alphabet[usable[i]].clone()).collect()));
            ranks.push(Rank::Finite(f.len() as u32));
            let mut pos = 0;
            while pos < horizon {
                choice[pos] += 1;
                if choice[pos] < usable.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == horizon {
                break;
            }
        }
    }
    let mut alph: Vec<Formula> = Vec::new();
    for o in alphabet {
        if !alph.contains(o) {
            alph.push(o.clone());
        }
    }
    Ok(SystemModel::new(u, horizon, runs, RunPrior::Ranked(ranks), alph)?)
}

/// D_m for m = 0..|obs| read off a diagnosis system: the fault sets f with
/// ¬B¬f at a point whose local state is ⟨o₁..o_m⟩. The alphabet gets `true`
/// so that every fault set has runs, even one that explains none of `obs`.
pub fn diagnoses_via_system(c: &Circuit, obs: &[Formula]) -> Result<Vec<BTreeSet<FaultSet>>, DiagnosisError> {
    let mut alphabet = vec![Formula::True];
    alphabet.extend(obs.iter().cloned());
    let sys = diagnosis_system(c, &alphabet, obs.len())?;
    let mut out = Vec::new();
    for m in 0..=obs.len() {
        let run = (0..sys.runs().len()).find(|&r| sys.run(r).obs[..m] == obs[..m]);
        let mut d = BTreeSet::new();
        if let Some(r) = run {
            for f in all_fault_sets(c) {
                let possible = Kpt::not(Kpt::b(Kpt::not(Kpt::from(&f.formula(c)))));
                if model_check(&sys, Point::new(r, m), &possible)? {
                    d.insert(f);
                }
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// The fault-only view of a diagnosis system. Its vocabulary holds just the
/// fault atoms, each line observation becomes the formula characterizing the
/// fault sets that can explain it, and every run keeps its fault set fixed.
/// Runs and prior are as in [`diagnosis_system`].
pub fn projected_system(c: &Circuit, alphabet: &[Formula], horizon: usize) -> Result<SystemModel, DiagnosisError> {
    let names: Vec<&str> = c.universe().vocab().atoms()[..c.gates().len()].iter().map(|a| a.name.as_str()).collect();
    let u = Universe::over(&names)?;
    let n = names.len();
    let to_world = |f: FaultSet| (0..n).fold(World::new(0, n as u8), |w, i| w.with(i, f.contains(i)));
    let mut translated: Vec<Formula> = Vec::new();
    let mut explains: Vec<BTreeSet<FaultSet>> = Vec::new();
    for o in alphabet {
        let ok = consistent_with(c, o);
        let g = if ok.len() == 1 << n {
            Formula::True
        } else if ok.is_empty() {
            Formula::False
        } else {
            char_formula(&ok.iter().map(|f| to_world(*f)).collect::<Vec<_>>())
        };
        translated.push(g);
        explains.push(ok);
    }
    let mut runs = Vec::new();
    let mut ranks = Vec::new();
    for f in all_fault_sets(c) {
        let usable: Vec<usize> = (0..alphabet.len()).filter(|&k| explains[k].contains(&f)).collect();
        if usable.is_empty() && horizon > 0 {
            continue;
        }
        let mut choice = vec![0usize; horizon];
        loop {
            runs.push(Run::new(&vec![to_world(f); horizon + 1], choice.iter().map(|&i| translated[usable[i]].clone()).collect()));
            ranks.push(Rank::Finite(f.len() as u32));
            let mut pos = 0;
            while pos < horizon {
                choice[pos] += 1;
                if choice[pos] < usable.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == horizon {
                break;
            }
        }
    }
    let mut alph: Vec<Formula> = Vec::new();
    for g in translated {
        if !alph.contains(&g) {
            alph.push(g);
        }
    }
    Ok(SystemModel::new(&u, horizon, runs, RunPrior::Ranked(ranks), alph)?)
}

/// One step of a diagnosis session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosisStep {
    pub step: usize,
    pub observation: Option<Formula>,
    pub diagnoses: BTreeSet<FaultSet>,
    /// No previous diagnosis survives the new observation.
    pub surprising: bool,
}

pub fn diagnosis_trace(c: &Circuit, obs: &[Formula]) -> Vec<DiagnosisStep> {
    let mut out: Vec<DiagnosisStep> = Vec::new();
    for m in 0..=obs.len() {
        let d = diagnoses(c, &obs[..m]);
        let surprising = match out.last() {
            Some(prev) => prev.diagnoses.is_disjoint(&consistent_with(c, &obs[m - 1])),
            None => false,
        };
        out.push(DiagnosisStep { step: m, observation: (m > 0).then(|| obs[m - 1].clone()), diagnoses: d, surprising });
    }
    out
}

/// Checks how diagnoses evolve along `obs`, taking D_m from the diagnosis
/// system. When some member of D_m is consistent with o_{m+1}, D_{m+1} is
/// exactly those members; otherwise D_{m+1} holds the consistent fault sets
/// of least cardinality, is disjoint from D_m and has larger cardinality.
pub fn check_prop_2_4(c: &Circuit, obs: &[Formula]) -> Result<Report, DiagnosisError> {
    let u = c.universe();
    let ds = diagnoses_via_system(c, obs)?;
    let mut agree = Check::new("system-matches-search");
    let mut filter = Check::new("filter");
    let mut minimal = Check::new("surprise-minimal");
    let mut disjoint = Check::new("surprise-disjoint");
    let mut grows = Check::new("surprise-cardinality-grows");
    let mut surprises = Vec::new();
    for (m, d) in ds.iter().enumerate() {
        let direct = diagnoses(c, &obs[..m]);
        agree.case(*d == direct, || {
            format!("m={m}: system gives {} but search gives {}", ShowFaults(c, d), ShowFaults(c, &direct))
        });
    }
    for m in 0..obs.len() {
        let (before, after) = (&ds[m], &ds[m + 1]);
        let o = &obs[m];
        let ok = consistent_with(c, o);
        if before.iter().any(|f| ok.contains(f)) {
            let expected: BTreeSet<FaultSet> = before.iter().filter(|f| ok.contains(f)).copied().collect();
            filter.case(*after == expected, || {
                format!(
                    "m={}: after {} D={} but filtering D={} gives {}",
                    m + 1,
                    u.text(o),
                    ShowFaults(c, after),
                    ShowFaults(c, before),
                    ShowFaults(c, &expected)
                )
            });
        } else {
            surprises.push(m + 1);
            let expected = minimum_cardinality(&consistent_faults(c, &obs[..=m]));
            minimal.case(*after == expected, || {
                format!("m={}: D={} but the least-cardinality consistent sets are {}", m + 1, ShowFaults(c, after), ShowFaults(c, &expected))
            });
            disjoint.case(before.is_disjoint(after), || {
                format!("m={}: D={} and D={} overlap", m + 1, ShowFaults(c, before), ShowFaults(c, after))
            });
            if let (Some(a), Some(b)) = (before.iter().map(|f| f.len()).max(), after.iter().map(|f| f.len()).min()) {
                grows.case(b > a, || format!("m={}: cardinality went from {a} to {b}", m + 1));
            }
        }
    }
    let mut report = Report::new(format!("diagnosis along {} observations ({} gates)", obs.len(), c.gates().len()));
    for check in [agree, filter, minimal, disjoint, grows] {
        report.push(check);
    }
    if !surprises.is_empty() {
        report.note(format!("surprising observations at steps {surprises:?}"));
    }
    Ok(report)
}

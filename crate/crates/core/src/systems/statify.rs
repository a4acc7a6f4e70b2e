//! Turning a dynamic system into a static one by timestamping atoms.

use super::validate::set_text;
use super::{model_check, validate_bcs, validate_rev, validate_upd, EnvState, Kpt, Point, Run, SystemError, SystemModel};
use crate::kernel::{char_formula, Atom, Formula, Theory, Universe, Vocabulary, World, WorldSet};
use crate::report::{Check, Report, Sampling};

/// Largest statified vocabulary, (T+1)·n atoms.
pub const MAX_STATIFIED_ATOMS: usize = 16;

/// Replaces every atom p of an `atoms`-atom vocabulary by p@m in the
/// time-major statified vocabulary (p@0, q@0, p@1, q@1, …).
pub fn timestamp(f: &Formula, m: usize, atoms: usize) -> Formula {
    f.map_atoms(&|i| m * atoms + i)
}

fn stamped_vocab(vocab: &Vocabulary, horizon: usize) -> Result<Vocabulary, SystemError> {
    let mut atoms = Vec::new();
    for m in 0..=horizon {
        for a in vocab.atoms() {
            if a.timestamp.is_some() {
                return Err(SystemError::BadRun { run: 0, message: format!("atom {a} is already timestamped") });
            }
            atoms.push(Atom::stamped(&a.name, m as u32)?);
        }
    }
    Ok(Vocabulary::new(atoms)?)
}

/// The world of the statified vocabulary recording a whole run.
fn run_world(r: &Run, atoms: usize) -> World {
    let mut w = World::new(0, (r.env.len() * atoms) as u8);
    for (m, s) in r.env.iter().enumerate() {
        for i in 0..atoms {
            w = w.with(m * atoms + i, s.world.get(i));
        }
    }
    w
}

/// Projection of a statified world onto time m.
fn project(w: World, m: usize, atoms: usize) -> World {
    let mut out = World::new(0, atoms as u8);
    for i in 0..atoms {
        out = out.with(i, w.get(m * atoms + i));
    }
    out
}

/// One static run per source run: its environment is the whole source run,
/// its observations are timestamped with their times, and the prior carries
/// over unchanged.
pub fn statify(sys: &SystemModel) -> Result<SystemModel, SystemError> {
    let u = sys.universe();
    let n = u.vocab().len();
    let t = sys.horizon();
    let size = (t + 1) * n;
    if size > MAX_STATIFIED_ATOMS {
        return Err(SystemError::VocabularyTooLarge(size));
    }
    let vocab = stamped_vocab(u.vocab(), t)?;
    let theory: Vec<Formula> = (0..=t).flat_map(|m| u.theory().formulas.iter().map(move |f| timestamp(f, m, n))).collect();
    let star = Universe::new(vocab, Theory::new(theory))?;
    let runs: Vec<Run> = sys
        .runs()
        .iter()
        .map(|r| {
            let w = run_world(r, n);
            Run {
                env: vec![EnvState::new(w); t + 1],
                obs: r.obs.iter().enumerate().map(|(k, f)| timestamp(f, k + 1, n)).collect(),
            }
        })
        .collect();
    let mut alphabet: Vec<Formula> = Vec::new();
    for m in 1..=t {
        for f in sys.alphabet() {
            let g = timestamp(f, m, n);
            if !alphabet.contains(&g) {
                alphabet.push(g);
            }
        }
    }
    if t == 0 {
        alphabet = sys.alphabet().to_vec();
    }
    let mut out = SystemModel::new(&star, t, runs, sys.prior().clone(), alphabet)?;
    for (key, measure) in &sys.overrides {
        let state: Vec<Formula> = key.iter().enumerate().map(|(k, &i)| timestamp(sys.obs_formula(i), k + 1, n)).collect();
        out = out.with_cell_measure(&state, measure.clone())?;
    }
    Ok(out)
}

/// Statifies `sys` and checks the static system: the belief change system
/// conditions and REV1 always; REV3 when the source passed UPD3; REV4′ when
/// the source passed UPD4. Also confirms that unprimed REV4 fails and that
/// beliefs transfer: (I, r, m) ⊨ Bφ iff (I*, r*, m) ⊨ B(timestamp(φ, m)).
pub fn check_prop_7_1(sys: &SystemModel, sampling: Sampling) -> Result<Report, SystemError> {
    let source = validate_upd(sys, sampling);
    let star = statify(sys)?;
    let mut report = Report::new(format!("statified system ({} atoms, {} runs)", star.universe().vocab().len(), star.runs().len()));
    report.absorb("", validate_bcs(&star));
    let rev = validate_rev(&star, sampling);
    let take = |name: &str| rev.get(name).cloned().unwrap_or_else(|| Check::skipped(name, "not evaluated"));

    report.push(take("REV1"));
    let mut rev3 = take("REV3");
    if !source.check_passed("UPD3") {
        rev3 = rev3.informational().with_detail("source fails UPD3");
    }
    report.push(rev3);
    let mut rev4p = take("REV4'");
    if !source.check_passed("UPD4") {
        rev4p = rev4p.informational().with_detail("source fails UPD4");
    }
    report.push(rev4p);
    let rev4 = take("REV4");
    let mut expected = Check::new("REV4-fails");
    match (&rev4.witness, sys.horizon()) {
        (_, 0) => expected = Check::skipped("REV4-fails", "horizon 0: no observations"),
        _ if rev4.status == crate::report::Status::Skipped => {
            expected = Check::skipped("REV4-fails", rev4.detail.clone().unwrap_or_else(|| "REV4 not evaluated".into()))
        }
        (Some(w), _) if rev4.failed() => {
            expected.cases = rev4.cases;
            expected.witness = Some(w.clone());
            expected.detail = Some("observations only mention atoms of the current time".into());
        }
        _ => expected.fail("unprimed REV4 unexpectedly holds for the statified system"),
    }
    report.push(expected);

    let u = sys.universe();
    let n = u.vocab().len();
    let mut runs_match = Check::new("one-run-per-run");
    runs_match.case(star.runs().len() == sys.runs().len(), || format!("{} statified runs for {} source runs", star.runs().len(), sys.runs().len()));
    report.push(runs_match);

    let mut transfer = Check::new("belief-transfer");
    let literal = u.len() <= 8;
    let formulas: Vec<WorldSet> = if literal { (0..1u64 << u.len()).map(|m| u.subset(m)).collect() } else { Vec::new() };
    for m in 0..=sys.horizon() {
        let mut keys: Vec<_> = sys.cells_at(m).keys().cloned().collect();
        keys.sort();
        for key in keys {
            let r = sys.cell(&key)[0];
            let p = Point::new(r, m);
            let here = sys.cell_states(&key);
            let there: WorldSet = star.cell_states(star.key_at(p)).into_iter().map(|w| project(w, m, n)).collect();
            transfer.case(here == there, || {
                format!("(r{r}, {m}): source beliefs {} but statified beliefs project to {}", set_text(u, &here), set_text(u, &there))
            });
            for ws in &formulas {
                let phi = char_or_const(u, ws);
                let a = model_check(sys, p, &Kpt::b(Kpt::from(&phi)))?;
                let b = model_check(&star, p, &Kpt::b(Kpt::from(&timestamp(&phi, m, n))))?;
                transfer.case(a == b, || {
                    format!("(r{r}, {m}): Bφ is {a} but B(timestamp(φ, {m})) is {b} for φ={}", u.text(&phi))
                });
            }
        }
    }
    transfer.detail = Some(if literal {
        "every point's cell, every world-set formula, by model checking".into()
    } else {
        "every point's cell, by comparing belief worlds".into()
    });
    report.push(transfer);
    for c in source.checks {
        report.push(Check { name: format!("source {}", c.name), required: false, ..c });
    }
    Ok(report)
}

fn char_or_const(u: &Universe, ws: &WorldSet) -> Formula {
    if ws.is_empty() {
        Formula::False
    } else if ws.len() == u.len() {
        Formula::True
    } else {
        char_formula(ws)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::build_update_system;
    use crate::update::UpdateStructure;

    #[test]
    fn timestamp_example() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let f = u.parse("p & !q").unwrap();
        let v = stamped_vocab(u.vocab(), 2).unwrap();
        assert_eq!(timestamp(&f, 2, 2).to_text(&v), "p@2 & !q@2");
    }

    #[test]
    fn statified_borrowed_car() {
        let u = Universe::over(&["parked", "full"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let alph: Vec<Formula> = ["true", "parked", "!full"].iter().map(|t| u.parse(t).unwrap()).collect();
        let sys = build_update_system(&s, &alph, 2).unwrap();
        let r = check_prop_7_1(&sys, Sampling::default()).unwrap();
        assert!(r.passed(), "{r}");
        let w = r.get("REV4-fails").unwrap().witness.clone().unwrap();
        assert!(w.starts_with("ō=⟨parked@0⟩"), "{w}");
    }

    #[test]
    fn vocabulary_limit() {
        let u = Universe::over(&["a", "b", "c", "d", "e", "f"]).unwrap();
        let rk = crate::revision::RevisionRanking::new(&u, u.worlds().iter().map(|w| (*w, 0)).collect()).unwrap();
        let sys = crate::systems::build_revision_system(&rk, &[Formula::True], 2).unwrap();
        assert_eq!(statify(&sys).unwrap_err(), SystemError::VocabularyTooLarge(18));
    }
}

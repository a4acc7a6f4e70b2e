//! Systems generated from a revision ranking or an update structure.

use super::{LexPrior, Run, RunPrior, SystemError, SystemModel};
use crate::kernel::{Formula, Universe, World};
use crate::plausibility::Rank;
use crate::revision::RevisionRanking;
use crate::update::UpdateStructure;

/// Default bound on |W|^(T+1) · |alphabet|^T for update systems.
pub const DEFAULT_STATE_CAP: u128 = 1_000_000;

fn checked_alphabet(universe: &Universe, alphabet: &[Formula]) -> Result<Vec<Formula>, SystemError> {
    if alphabet.is_empty() {
        return Err(SystemError::EmptyAlphabet);
    }
    let mut out: Vec<Formula> = Vec::new();
    for f in alphabet {
        if !universe.is_consistent(f) {
            return Err(SystemError::InconsistentObservation(universe.text(f)));
        }
        if !out.contains(f) {
            out.push(f.clone());
        }
    }
    if !out.iter().any(|f| universe.models(f).len() == universe.len()) {
        return Err(SystemError::MissingTrue);
    }
    Ok(out)
}

/// Every sequence of length `len` over `choices[..]`, in odometer order.
fn sequences<T: Clone>(choices: &[T], len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// `build_revision_system_capped` with the default cap.
pub fn build_revision_system(rk: &RevisionRanking, alphabet: &[Formula], horizon: usize) -> Result<SystemModel, SystemError> {
    build_revision_system_capped(rk, alphabet, horizon, DEFAULT_STATE_CAP)
}

/// One run per world w and sequence o₁..o_T of alphabet members true at w;
/// the environment never changes and the run's rank is rk(w).
pub fn build_revision_system_capped(
    rk: &RevisionRanking,
    alphabet: &[Formula],
    horizon: usize,
    cap: u128,
) -> Result<SystemModel, SystemError> {
    let u = rk.universe();
    let alphabet = checked_alphabet(u, alphabet)?;
    let size: u128 = u
        .worlds()
        .iter()
        .map(|w| (alphabet.iter().filter(|f| f.eval(*w)).count() as u128).saturating_pow(horizon as u32))
        .fold(0u128, |a, b| a.saturating_add(b));
    if size > cap {
        return Err(SystemError::StateSpaceTooLarge { size, cap });
    }
    let mut runs = Vec::new();
    let mut ranks = Vec::new();
    for &w in u.worlds() {
        let true_here: Vec<Formula> = alphabet.iter().filter(|f| f.eval(w)).cloned().collect();
        for obs in sequences(&true_here, horizon) {
            runs.push(Run::new(&vec![w; horizon + 1], obs));
            ranks.push(Rank::Finite(rk.rank(w)));
        }
    }
    SystemModel::new(u, horizon, runs, RunPrior::Ranked(ranks), alphabet)
}

/// `build_update_system_capped` with the default cap.
pub fn build_update_system(s: &UpdateStructure, alphabet: &[Formula], horizon: usize) -> Result<SystemModel, SystemError> {
    build_update_system_capped(s, alphabet, horizon, DEFAULT_STATE_CAP)
}

/// All environment sequences over the structure's worlds, each paired with
/// every alphabet sequence true at the respective states, under the
/// lexicographic prior from the structure's distance.
pub fn build_update_system_capped(
    s: &UpdateStructure,
    alphabet: &[Formula],
    horizon: usize,
    cap: u128,
) -> Result<SystemModel, SystemError> {
    let u = s.universe();
    let alphabet = checked_alphabet(u, alphabet)?;
    let worlds = s.worlds();
    let size = (worlds.len() as u128)
        .saturating_pow(horizon as u32 + 1)
        .saturating_mul((alphabet.len() as u128).saturating_pow(horizon as u32));
    if size > cap {
        return Err(SystemError::StateSpaceTooLarge { size, cap });
    }
    let true_at: Vec<Vec<Formula>> = worlds.iter().map(|w| alphabet.iter().filter(|f| f.eval(*w)).cloned().collect()).collect();
    let mut runs = Vec::new();
    let mut envs = Vec::new();
    let indices: Vec<usize> = (0..worlds.len()).collect();
    for seq in sequences(&indices, horizon + 1) {
        let env: Vec<World> = seq.iter().map(|&i| worlds[i]).collect();
        let mut obs_seqs = vec![Vec::new()];
        for &i in &seq[1..] {
            obs_seqs = obs_seqs
                .into_iter()
                .flat_map(|prefix: Vec<Formula>| {
                    true_at[i].iter().map(move |f| {
                        let mut next = prefix.clone();
                        next.push(f.clone());
                        next
                    })
                })
                .collect();
        }
        for obs in obs_seqs {
            runs.push(Run::new(&env, obs));
            envs.push(env.clone());
        }
    }
    let prior = RunPrior::Lex(LexPrior::new(s.clone(), &envs)?);
    SystemModel::new(u, horizon, runs, prior, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Universe;
    use crate::systems::{model_check, Kpt, Point};

    fn ranking() -> RevisionRanking {
        let u = Universe::over(&["p", "q"]).unwrap();
        RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)]).unwrap()
    }

    #[test]
    fn revision_system_counts_and_beliefs() {
        let rk = ranking();
        let u = rk.universe().clone();
        let alph: Vec<Formula> = ["true", "p", "q"].iter().map(|t| u.parse(t).unwrap()).collect();
        let sys = build_revision_system(&rk, &alph, 2).unwrap();
        // Σ_w |{o : w ⊨ o}|^2 counted independently: 11 → 3², 10 → 2², 01 → 2², 00 → 1².
        assert_eq!(sys.runs().len(), 9 + 4 + 4 + 1);
        let at00: Vec<_> = sys.runs().iter().filter(|r| r.world(0) == u.world("00").unwrap()).collect();
        assert_eq!(at00.len(), 1);
        assert!(at00[0].obs.iter().all(|f| *f == Formula::True));
        let pq = Kpt::from(&u.parse("p & q").unwrap());
        assert!(model_check(&sys, Point::new(0, 0), &Kpt::b(pq)).unwrap());

        let alph: Vec<Formula> = ["true", "!p"].iter().map(|t| u.parse(t).unwrap()).collect();
        let sys = build_revision_system(&rk, &alph, 1).unwrap();
        assert_eq!(sys.bel(&[u.parse("!p").unwrap()]).to_string(), "{01}");
    }

    #[test]
    fn alphabet_errors() {
        let rk = ranking();
        let u = rk.universe().clone();
        assert_eq!(build_revision_system(&rk, &[], 1).unwrap_err(), SystemError::EmptyAlphabet);
        assert_eq!(build_revision_system(&rk, &[u.parse("p").unwrap()], 1).unwrap_err(), SystemError::MissingTrue);
        let bad = [Formula::True, u.parse("p & !p").unwrap()];
        assert!(matches!(build_revision_system(&rk, &bad, 1), Err(SystemError::InconsistentObservation(_))));
    }

    #[test]
    fn borrowed_car_update_system() {
        let u = Universe::over(&["parked", "full"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let obs: Vec<Formula> = ["true", "parked", "!full"].iter().map(|t| u.parse(t).unwrap()).collect();
        let sys = build_update_system(&s, &obs, 3).unwrap();
        assert_eq!(sys.bel(&obs).to_string(), "{10}");
        assert!(sys.bel(&[]).worlds().len() == 4);
    }

    #[test]
    fn horizon_zero_is_flat() {
        let u = Universe::over(&["p"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let sys = build_update_system(&s, &[Formula::True], 0).unwrap();
        assert_eq!(sys.runs().len(), 2);
        assert!(!sys.prior().precedes(0, 1) && !sys.prior().precedes(1, 0));
    }

    #[test]
    fn state_cap() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let r = build_update_system_capped(&s, &[Formula::True], 3, 100);
        assert_eq!(r.unwrap_err(), SystemError::StateSpaceTooLarge { size: 256, cap: 100 });
    }
}

//! AGM revision from ranked priors over worlds, revision of epistemic states
//! (observation sequences), ranking extraction from black-box operators and
//! the R-postulate checkers.

mod checks;
pub mod oracles;
mod table;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{minterm, BeliefSet, Formula, KernelError, Universe, World, WorldSet};
use crate::plausibility::{Plausibility, RankedMeasure};

pub use checks::{check_agm, check_agm_primed, AGM_MAX_WORLDS, PRIMED_MAX_DEPTH, PRIMED_MAX_WORLDS};
pub use table::TableOracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RevisionError {
    #[error("world {0} has no rank")]
    UnrankedWorld(String),
    #[error("world {0} is not in the universe")]
    UnknownWorld(String),
    #[error("ranking extraction needs a consistent belief set")]
    InconsistentBelief,
    #[error("oracle answers are not a total preorder at ({a}, {b}): {detail}")]
    NotTotalPreorder { a: String, b: String, detail: String },
    #[error("universe has {size} worlds; this check supports at most {max}")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("sequence depth {0} exceeds the supported maximum of 3")]
    DepthTooLarge(usize),
    #[error("oracle table has no entry for K={k} ; phi={phi}")]
    MissingTableEntry { k: String, phi: String },
    #[error("oracle table line {line}: {message}")]
    TableSyntax { line: usize, message: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Ranked prior over worlds with every world at a finite rank. Its rank-0
/// worlds are the initial belief set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionRanking {
    universe: Arc<Universe>,
    ranks: BTreeMap<World, u32>,
}

impl RevisionRanking {
    /// Ranks are shifted so the least one is 0.
    pub fn new(universe: &Arc<Universe>, ranks: BTreeMap<World, u32>) -> Result<Self, RevisionError> {
        if let Some(w) = ranks.keys().find(|w| !universe.contains(**w)) {
            return Err(RevisionError::UnknownWorld(w.to_string()));
        }
        if let Some(w) = universe.worlds().iter().find(|w| !ranks.contains_key(w)) {
            return Err(RevisionError::UnrankedWorld(w.to_string()));
        }
        let low = ranks.values().copied().min().unwrap_or(0);
        let ranks = ranks.into_iter().map(|(w, r)| (w, r - low)).collect();
        Ok(RevisionRanking { universe: universe.clone(), ranks })
    }

    /// Convenience constructor from `("11", 0)` style pairs.
    pub fn from_bits(universe: &Arc<Universe>, pairs: &[(&str, u32)]) -> Result<Self, RevisionError> {
        let mut ranks = BTreeMap::new();
        for (bits, r) in pairs {
            ranks.insert(universe.world(bits)?, *r);
        }
        RevisionRanking::new(universe, ranks)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn rank(&self, w: World) -> u32 {
        self.ranks[&w]
    }

    pub fn ranks(&self) -> &BTreeMap<World, u32> {
        &self.ranks
    }

    pub fn measure(&self) -> RankedMeasure<World> {
        RankedMeasure::from_finite(self.ranks.iter().map(|(w, r)| (*w, *r))).expect("universe is nonempty")
    }

    /// The belief set K of rank-0 worlds.
    pub fn initial_belief(&self) -> BeliefSet {
        let ws = self.ranks.iter().filter(|(_, r)| **r == 0).map(|(w, _)| *w).collect();
        BeliefSet::from_subset(&self.universe, ws)
    }

    /// Least-rank members of `set`.
    pub fn minimal(&self, set: &WorldSet) -> WorldSet {
        self.measure().minimal(set)
    }
}

/// Black-box AGM operator K ∘ φ.
pub trait RevisionOracle {
    fn revise(&self, k: &BeliefSet, phi: &Formula) -> Result<BeliefSet, RevisionError>;
}

impl<F: Fn(&BeliefSet, &Formula) -> BeliefSet> RevisionOracle for F {
    fn revise(&self, k: &BeliefSet, phi: &Formula) -> Result<BeliefSet, RevisionError> {
        Ok(self(k, phi))
    }
}

/// Black-box BS(E) for epistemic states E (observation sequences); revision is append.
pub trait EpistemicOracle {
    fn belief_set(&self, e: &[Formula]) -> Result<BeliefSet, RevisionError>;
}

impl<F: Fn(&[Formula]) -> BeliefSet> EpistemicOracle for F {
    fn belief_set(&self, e: &[Formula]) -> Result<BeliefSet, RevisionError> {
        Ok(self(e))
    }
}

/// Minimal-rank models of φ.
pub fn grove_revise(rk: &RevisionRanking, phi: &Formula) -> BeliefSet {
    let models = rk.universe.models(phi);
    BeliefSet::from_subset(&rk.universe, rk.minimal(&models))
}

/// ⟨⟩ for ⟨⟩; ⟨false⟩ when the last observation is inconsistent; otherwise the
/// longest suffix whose conjunction is consistent with the theory.
pub fn f_suffix(universe: &Universe, e: &[Formula]) -> Vec<Formula> {
    let Some(last) = e.last() else {
        return Vec::new();
    };
    if !universe.is_consistent(last) {
        return vec![Formula::False];
    }
    // Scan suffixes from the right, keeping the running model set.
    let mut models = universe.models(last);
    let mut k = e.len() - 1;
    while k > 0 {
        let next: WorldSet = models.iter().copied().filter(|w| e[k - 1].eval(*w)).collect();
        if next.is_empty() {
            break;
        }
        models = next;
        k -= 1;
    }
    e[k..].to_vec()
}

/// BS(E): Grove revision by the conjunction of the longest consistent suffix.
pub fn epistemic_bs(rk: &RevisionRanking, e: &[Formula]) -> BeliefSet {
    let suffix = f_suffix(&rk.universe, e);
    grove_revise(rk, &Formula::conjunction(suffix))
}

/// Raw conditioning on the whole sequence, without the suffix rule. Once the
/// observations become jointly inconsistent the result stays empty.
pub fn conditioning_bs(rk: &RevisionRanking, e: &[Formula]) -> BeliefSet {
    grove_revise(rk, &Formula::conjunction(e.iter().cloned()))
}

/// Recovers a ranking from an operator: w ⪰ w′ iff ¬char(w) is not believed
/// after revising by char(w) ∨ char(w′), i.e. w survives in the result.
/// Ranks are layers of ⪰-maximal worlds.
pub fn extract_ranking<O: RevisionOracle + ?Sized>(
    oracle: &O,
    k: &BeliefSet,
    universe: &Arc<Universe>,
) -> Result<RevisionRanking, RevisionError> {
    if !k.is_consistent() {
        return Err(RevisionError::InconsistentBelief);
    }
    let ws = universe.worlds();
    let n = ws.len();
    let mut ge = vec![vec![false; n]; n];
    for i in 0..n {
        ge[i][i] = true;
        for j in i + 1..n {
            let phi = Formula::or(minterm(ws[i]), minterm(ws[j]));
            let r = oracle.revise(k, &phi)?;
            let pair: WorldSet = [ws[i], ws[j]].into();
            if !r.is_consistent() || !r.worlds().is_subset(&pair) {
                return Err(RevisionError::NotTotalPreorder {
                    a: ws[i].to_string(),
                    b: ws[j].to_string(),
                    detail: format!("revising by their disjunction gave {r}"),
                });
            }
            ge[i][j] = r.contains_world(ws[i]);
            ge[j][i] = r.contains_world(ws[j]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !ge[a][b] {
                continue;
            }
            for c in 0..n {
                if ge[b][c] && !ge[a][c] {
                    return Err(RevisionError::NotTotalPreorder {
                        a: ws[a].to_string(),
                        b: ws[c].to_string(),
                        detail: format!("{} ⪰ {} ⪰ {} but not {} ⪰ {}", ws[a], ws[b], ws[c], ws[a], ws[c]),
                    });
                }
            }
        }
    }
    let mut ranks = BTreeMap::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut layer = 0;
    while !remaining.is_empty() {
        let top: Vec<usize> = remaining.iter().copied().filter(|&i| remaining.iter().all(|&j| ge[i][j])).collect();
        if top.is_empty() {
            let (a, b) = (remaining[0], remaining[1.min(remaining.len() - 1)]);
            return Err(RevisionError::NotTotalPreorder {
                a: ws[a].to_string(),
                b: ws[b].to_string(),
                detail: "no maximal world among the remaining ones".into(),
            });
        }
        for &i in &top {
            ranks.insert(ws[i], layer);
        }
        remaining.retain(|i| !top.contains(i));
        layer += 1;
    }
    let rk = RevisionRanking::new(universe, ranks)?;
    if rk.initial_belief().worlds() != k.worlds() {
        return Err(RevisionError::NotTotalPreorder {
            a: k.to_string(),
            b: rk.initial_belief().to_string(),
            detail: "the most plausible layer differs from K".into(),
        });
    }
    Ok(rk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::show_worlds;

    fn setup() -> (Arc<Universe>, RevisionRanking) {
        let u = Universe::over(&["p", "q"]).unwrap();
        let rk = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)]).unwrap();
        (u, rk)
    }

    fn fs(u: &Universe, xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|x| u.parse(x).unwrap()).collect()
    }

    #[test]
    fn grove_examples() {
        let (u, rk) = setup();
        assert_eq!(grove_revise(&rk, &u.parse("!p").unwrap()).to_string(), "{01}");
        assert_eq!(grove_revise(&rk, &Formula::True), rk.initial_belief());
        assert!(!grove_revise(&rk, &u.parse("p & !p").unwrap()).is_consistent());
    }

    #[test]
    fn suffix_rule() {
        let (u, _) = setup();
        assert_eq!(f_suffix(&u, &fs(&u, &["p", "!p"])), fs(&u, &["!p"]));
        assert_eq!(f_suffix(&u, &fs(&u, &["p", "q"])), fs(&u, &["p", "q"]));
        assert_eq!(f_suffix(&u, &fs(&u, &["p", "false"])), vec![Formula::False]);
        assert!(f_suffix(&u, &[]).is_empty());
        assert_eq!(f_suffix(&u, &fs(&u, &["!q", "p", "q"])), fs(&u, &["p", "q"]));
    }

    #[test]
    fn epistemic_examples() {
        let (u, rk) = setup();
        assert_eq!(epistemic_bs(&rk, &fs(&u, &["p"])).to_string(), "{11}");
        assert_eq!(epistemic_bs(&rk, &fs(&u, &["p", "!p"])).to_string(), "{01}");
        assert_eq!(epistemic_bs(&rk, &fs(&u, &["q", "p"])).to_string(), "{11}");
        assert_eq!(epistemic_bs(&rk, &[]), rk.initial_belief());
    }

    #[test]
    fn raw_conditioning_never_recovers() {
        let (u, rk) = setup();
        let mut e = fs(&u, &["p", "!p"]);
        assert!(!conditioning_bs(&rk, &e).is_consistent());
        for extra in ["q", "true", "!p", "p | q"] {
            e.push(u.parse(extra).unwrap());
            assert!(!conditioning_bs(&rk, &e).is_consistent());
            assert!(epistemic_bs(&rk, &e).is_consistent());
        }
    }

    #[test]
    fn extraction_round_trip_on_example() {
        let (u, rk) = setup();
        let oracle = |_: &BeliefSet, phi: &Formula| grove_revise(&rk, phi);
        let got = extract_ranking(&oracle, &rk.initial_belief(), &u).unwrap();
        assert_eq!(got, rk);
        let layers: Vec<String> = (0..3)
            .map(|r| show_worlds(got.ranks().iter().filter(|(_, x)| **x == r).map(|(w, _)| w)))
            .collect();
        assert_eq!(layers, ["{11}", "{01, 10}", "{00}"]);
    }

    #[test]
    fn full_meet_gives_two_layers() {
        let (u, rk) = setup();
        let k = rk.initial_belief();
        let got = extract_ranking(&oracles::full_meet, &k, &u).unwrap();
        assert_eq!(got.rank(u.world("11").unwrap()), 0);
        assert!(u.worlds().iter().filter(|w| w.to_string() != "11").all(|w| got.rank(*w) == 1));
        for m in 0..16 {
            let phi = crate::kernel::char_formula(&u.subset(m));
            assert_eq!(grove_revise(&got, &phi), oracles::full_meet(&k, &phi));
        }
    }

    #[test]
    fn intransitive_oracle_is_rejected() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let k = BeliefSet::new(&u, [u.world("11").unwrap()].into()).unwrap();
        // 10 beats 01, 01 beats 00, 00 beats 10: a cycle below K.
        let beats = [("10", "01"), ("01", "00"), ("00", "10")];
        let uu = u.clone();
        let oracle = move |k: &BeliefSet, phi: &Formula| {
            let m = uu.models(phi);
            let inter: WorldSet = k.worlds().intersection(&m).copied().collect();
            if !inter.is_empty() {
                return BeliefSet::new(&uu, inter).unwrap();
            }
            let keep: WorldSet = m
                .iter()
                .copied()
                .filter(|w| !beats.iter().any(|(a, b)| w.to_string() == *b && m.iter().any(|x| x.to_string() == *a)))
                .collect();
            BeliefSet::new(&uu, if keep.is_empty() { m } else { keep }).unwrap()
        };
        assert!(matches!(extract_ranking(&oracle, &k, &u), Err(RevisionError::NotTotalPreorder { .. })));
    }
}

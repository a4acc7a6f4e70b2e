//! Reference operators, including deliberately broken ones used to exercise
//! the checkers.

use std::sync::Arc;

use super::{epistemic_bs, grove_revise, EpistemicOracle, RevisionError, RevisionOracle, RevisionRanking};
use crate::kernel::{BeliefSet, Formula, Universe, WorldSet};

/// Grove revision from a fixed ranking; K is ignored because the ranking fixes it.
#[derive(Debug, Clone)]
pub struct Grove(pub RevisionRanking);

impl RevisionOracle for Grove {
    fn revise(&self, _: &BeliefSet, phi: &Formula) -> Result<BeliefSet, RevisionError> {
        Ok(grove_revise(&self.0, phi))
    }
}

/// BS(E) from the suffix rule over a fixed ranking.
#[derive(Debug, Clone)]
pub struct Epistemic(pub RevisionRanking);

impl EpistemicOracle for Epistemic {
    fn belief_set(&self, e: &[Formula]) -> Result<BeliefSet, RevisionError> {
        Ok(epistemic_bs(&self.0, e))
    }
}

/// K ∘ φ = models(φ). Forgets K entirely, so it breaks R4.
pub fn drastic(k: &BeliefSet, phi: &Formula) -> BeliefSet {
    BeliefSet::of_formula(k.universe(), phi)
}

/// K ∩ models(φ) when nonempty, otherwise models(φ).
pub fn full_meet(k: &BeliefSet, phi: &Formula) -> BeliefSet {
    let models = k.universe().models(phi);
    let inter: WorldSet = k.worlds().intersection(&models).copied().collect();
    let worlds = if inter.is_empty() { models } else { inter };
    BeliefSet::new(k.universe(), worlds).expect("models lie in the universe")
}

/// Always Cl(false).
pub fn empty(k: &BeliefSet, _: &Formula) -> BeliefSet {
    BeliefSet::inconsistent(k.universe())
}

/// Revises the prior by the latest observation alone, dropping the history.
/// Breaks R9′: BS(⟨¬p, true⟩) = K but BS(⟨¬p ∧ true⟩) ⊨ ¬p.
pub fn last_only(rk: RevisionRanking) -> LastOnly {
    LastOnly(rk)
}

#[derive(Debug, Clone)]
pub struct LastOnly(RevisionRanking);

impl EpistemicOracle for LastOnly {
    fn belief_set(&self, e: &[Formula]) -> Result<BeliefSet, RevisionError> {
        Ok(match e.last() {
            None => self.0.initial_belief(),
            Some(f) => grove_revise(&self.0, f),
        })
    }
}

/// An epistemic oracle over {p, q} whose plausibility ordering depends on what
/// was just observed. Observing exactly p makes 10 the most plausible world;
/// any other last observation keeps the ordering 11 ≻ 10 ≈ 01 ≻ 00. After
/// observing p ∨ q the agent believes q, yet after the stronger observation p
/// it believes ¬q, which R7′/R8′ forbid.
#[derive(Debug, Clone)]
pub struct Reordered {
    default: RevisionRanking,
    after_p: RevisionRanking,
}

pub fn reordered() -> Reordered {
    let u = Universe::over(&["p", "q"]).expect("valid vocabulary");
    let default = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)]).expect("ranks all worlds");
    let after_p = RevisionRanking::from_bits(&u, &[("10", 0), ("11", 1), ("01", 1), ("00", 2)]).expect("ranks all worlds");
    Reordered { default, after_p }
}

impl Reordered {
    pub fn universe(&self) -> &Arc<Universe> {
        self.default.universe()
    }
}

impl EpistemicOracle for Reordered {
    fn belief_set(&self, e: &[Formula]) -> Result<BeliefSet, RevisionError> {
        let u = self.universe();
        let p = u.parse("p").expect("p is in the vocabulary");
        let rk = match e.last() {
            Some(f) if u.models(f) == u.models(&p) => &self.after_p,
            _ => &self.default,
        };
        Ok(epistemic_bs(rk, e))
    }
}

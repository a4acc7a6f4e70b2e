use std::fmt;
use std::sync::Arc;

use super::formula::{char_formula, Formula};
use super::{KernelError, Universe, World, WorldSet};

/// A deductively closed belief set, stored as its set of models.
///
/// The empty world set is the inconsistent belief set Cl(false).
#[derive(Debug, Clone)]
pub struct BeliefSet {
    universe: Arc<Universe>,
    worlds: WorldSet,
}

impl BeliefSet {
    pub fn new(universe: &Arc<Universe>, worlds: WorldSet) -> Result<Self, KernelError> {
        if let Some(w) = worlds.iter().find(|w| !universe.contains(**w)) {
            return Err(KernelError::WorldOutsideUniverse(w.to_string()));
        }
        Ok(BeliefSet { universe: universe.clone(), worlds })
    }

    /// Callers guarantee `worlds ⊆ universe`.
    pub(crate) fn from_subset(universe: &Arc<Universe>, worlds: WorldSet) -> Self {
        debug_assert!(worlds.iter().all(|w| universe.contains(*w)));
        BeliefSet { universe: universe.clone(), worlds }
    }

    /// Cl(Σ ∪ {f}).
    pub fn of_formula(universe: &Arc<Universe>, f: &Formula) -> Self {
        BeliefSet::from_subset(universe, universe.models(f))
    }

    pub fn inconsistent(universe: &Arc<Universe>) -> Self {
        BeliefSet::from_subset(universe, WorldSet::new())
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn worlds(&self) -> &WorldSet {
        &self.worlds
    }

    pub fn into_worlds(self) -> WorldSet {
        self.worlds
    }

    pub fn is_consistent(&self) -> bool {
        !self.worlds.is_empty()
    }

    /// φ ∈ K iff every world of K satisfies φ.
    pub fn contains(&self, f: &Formula) -> bool {
        self.worlds.iter().all(|w| f.eval(*w))
    }

    pub fn contains_world(&self, w: World) -> bool {
        self.worlds.contains(&w)
    }

    pub fn is_complete(&self) -> bool {
        self.worlds.len() == 1
    }

    /// Cl(K ∪ {φ}).
    pub fn cl_add(&self, f: &Formula) -> BeliefSet {
        let worlds = self.worlds.iter().copied().filter(|w| f.eval(*w)).collect();
        BeliefSet { universe: self.universe.clone(), worlds }
    }

    /// Canonical DNF whose models are exactly the worlds of K.
    pub fn char_formula(&self) -> Formula {
        char_formula(&self.worlds)
    }

    pub fn char_text(&self) -> String {
        self.universe.text(&self.char_formula())
    }

    pub fn bitstrings(&self) -> Vec<String> {
        self.worlds.iter().map(|w| w.to_string()).collect()
    }
}

impl PartialEq for BeliefSet {
    fn eq(&self, other: &Self) -> bool {
        self.worlds == other.worlds && self.universe.vocab() == other.universe.vocab()
    }
}

impl Eq for BeliefSet {}

impl fmt::Display for BeliefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::show_worlds(&self.worlds))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let k = BeliefSet::new(&u, [u.world("11").unwrap()].into()).unwrap();
        assert!(k.contains(&u.parse("p").unwrap()));
        assert!(k.is_complete());
        let k2 = BeliefSet::of_formula(&u, &u.parse("p").unwrap());
        assert_eq!(k2.cl_add(&u.parse("q").unwrap()), k);
        let empty = BeliefSet::inconsistent(&u);
        assert!(empty.contains(&Formula::False));
        assert_eq!(empty.char_text(), "false");
        assert!(BeliefSet::new(&u, [World::parse_bits("1").unwrap()].into()).is_err());
    }
}

//! Finite propositional language: atoms, worlds, formulas, background
//! theories and extensional belief sets.

mod belief;
mod formula;
mod parse;
mod world;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

pub use belief::BeliefSet;
pub use formula::{char_formula, minterm, Formula, FormulaDisplay};
pub use parse::{parse, ParseError};
pub(crate) use parse::{parse_iff, Cursor, Tok};
pub use world::{Atom, Vocabulary, World, MAX_ATOMS};

pub type WorldSet = BTreeSet<World>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("vocabulary has {0} atoms; at most 16 are supported")]
    VocabularyTooLarge(usize),
    #[error("`{0}` is not a world bitstring")]
    BadWorld(String),
    #[error("the background theory has no models")]
    EmptyTheoryModels,
    #[error("world {0} is not in the universe")]
    WorldOutsideUniverse(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Background theory Σ: a finite set of formulas constraining which worlds exist.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub formulas: Vec<Formula>,
}

impl Theory {
    pub fn new(formulas: Vec<Formula>) -> Self {
        Theory { formulas }
    }

    pub fn parse<S: AsRef<str>>(lines: &[S], vocab: &Vocabulary) -> Result<Self, ParseError> {
        let formulas = lines.iter().map(|l| parse(l.as_ref(), vocab)).collect::<Result<_, _>>()?;
        Ok(Theory { formulas })
    }

    pub fn satisfied_by(&self, w: World) -> bool {
        self.formulas.iter().all(|f| f.eval(w))
    }
}

/// Models of Σ in ascending order.
pub fn enumerate_worlds(vocab: &Vocabulary, theory: &Theory) -> Result<Vec<World>, KernelError> {
    let worlds: Vec<World> = vocab.all_worlds().filter(|w| theory.satisfied_by(*w)).collect();
    if worlds.is_empty() {
        return Err(KernelError::EmptyTheoryModels);
    }
    Ok(worlds)
}

/// `{w ∈ universe : w ⊨ f}`.
pub fn models<'a, I: IntoIterator<Item = &'a World>>(f: &Formula, universe: I) -> WorldSet {
    universe.into_iter().copied().filter(|w| f.eval(*w)).collect()
}

/// Vocabulary, theory and the theory-constrained world space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    vocab: Vocabulary,
    theory: Theory,
    worlds: Vec<World>,
}

impl Universe {
    pub fn new(vocab: Vocabulary, theory: Theory) -> Result<Arc<Universe>, KernelError> {
        let worlds = enumerate_worlds(&vocab, &theory)?;
        Ok(Arc::new(Universe { vocab, theory, worlds }))
    }

    /// Unconstrained universe over the named atoms.
    pub fn over(names: &[&str]) -> Result<Arc<Universe>, KernelError> {
        Universe::new(Vocabulary::from_names(names)?, Theory::default())
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn contains(&self, w: World) -> bool {
        w.len() == self.vocab.len() && self.worlds.binary_search(&w).is_ok()
    }

    pub fn all(&self) -> WorldSet {
        self.worlds.iter().copied().collect()
    }

    pub fn models(&self, f: &Formula) -> WorldSet {
        models(f, &self.worlds)
    }

    pub fn is_consistent(&self, f: &Formula) -> bool {
        self.worlds.iter().any(|w| f.eval(*w))
    }

    pub fn parse(&self, text: &str) -> Result<Formula, ParseError> {
        parse(text, &self.vocab)
    }

    pub fn world(&self, bits: &str) -> Result<World, KernelError> {
        let w = World::parse_bits(bits)?;
        if !self.contains(w) {
            return Err(KernelError::WorldOutsideUniverse(bits.to_string()));
        }
        Ok(w)
    }

    pub fn text(&self, f: &Formula) -> String {
        f.to_text(&self.vocab)
    }

    /// Worlds picked out by `mask` (bit i selects `worlds()[i]`).
    pub fn subset(&self, mask: u64) -> WorldSet {
        mask_to_set(&self.worlds, mask)
    }

    pub fn mask_of(&self, set: &WorldSet) -> u64 {
        set_to_mask(&self.worlds, set)
    }
}

/// Elements of `items` selected by the bits of `mask`.
pub fn mask_to_set<T: Ord + Copy>(items: &[T], mask: u64) -> BTreeSet<T> {
    items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| *x).collect()
}

pub fn mask_to_set_cloned<T: Ord + Clone>(items: &[T], mask: u64) -> BTreeSet<T> {
    items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect()
}

pub fn set_to_mask<T: Ord>(items: &[T], set: &BTreeSet<T>) -> u64 {
    items.iter().enumerate().filter(|(_, x)| set.contains(x)).fold(0, |m, (i, _)| m | 1 << i)
}

/// Renders a world set as `{10, 11}`.
pub fn show_worlds<'a, I: IntoIterator<Item = &'a World>>(ws: I) -> String {
    let parts: Vec<String> = ws.into_iter().map(|w| w.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(ws: &[World]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn enumeration_respects_theory() {
        let v = Vocabulary::from_names(&["p", "q"]).unwrap();
        assert_eq!(bits(&enumerate_worlds(&v, &Theory::default()).unwrap()), ["00", "01", "10", "11"]);
        let t = Theory::parse(&["p => q"], &v).unwrap();
        assert_eq!(bits(&enumerate_worlds(&v, &t).unwrap()), ["00", "01", "11"]);
        let v1 = Vocabulary::from_names(&["p"]).unwrap();
        let bad = Theory::parse(&["p", "!p"], &v1).unwrap();
        assert_eq!(enumerate_worlds(&v1, &bad), Err(KernelError::EmptyTheoryModels));
    }

    #[test]
    fn eval_and_models() {
        let u = Universe::over(&["p", "q"]).unwrap();
        assert!(u.parse("p & q").unwrap().eval(u.world("11").unwrap()));
        let m: Vec<String> = u.models(&u.parse("p").unwrap()).iter().map(|w| w.to_string()).collect();
        assert_eq!(m, ["10", "11"]);
        assert!(u.models(&u.parse("p & !p").unwrap()).is_empty());
    }

    #[test]
    fn truth_table_oracle_for_connectives() {
        // Independent oracle: truth tables written out by hand.
        let u = Universe::over(&["p", "q"]).unwrap();
        let table = [
            ("p & q", [false, false, false, true]),
            ("p | q", [false, true, true, true]),
            ("p => q", [true, true, false, true]),
            ("p <=> q", [true, false, false, true]),
            ("!p", [true, true, false, false]),
        ];
        for (text, want) in table {
            let f = u.parse(text).unwrap();
            let got: Vec<bool> = u.worlds().iter().map(|w| f.eval(*w)).collect();
            assert_eq!(got, want, "{text}");
        }
    }

    #[test]
    fn masks_round_trip() {
        let u = Universe::over(&["p", "q"]).unwrap();
        for m in 0..16u64 {
            assert_eq!(u.mask_of(&u.subset(m)), m);
        }
    }
}

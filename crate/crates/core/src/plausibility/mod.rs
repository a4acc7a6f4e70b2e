//! Plausibility measures over finite carriers: ranked measures, preference
//! orders compared by dominance, conditionals and belief.

mod checks;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use checks::{check_klm, check_qualitative, KLM_MAX, QUALITATIVE_MAX};
pub use text::{parse_measure, write_measure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlausibilityError {
    #[error("carrier has {size} elements; this check supports at most {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("every element has infinite rank")]
    NoFiniteRank,
    #[error("the order has a cycle through `{0}`")]
    Cyclic(String),
    #[error("`{0}` is not in the carrier")]
    UnknownElement(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Natural number or ∞. Lower is more plausible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rank {
    Finite(u32),
    Infinite,
}

impl Rank {
    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Order {
    #[serde(rename = "LT")]
    Lt,
    #[serde(rename = "EQ")]
    Eq,
    #[serde(rename = "GT")]
    Gt,
    #[serde(rename = "INCOMPARABLE")]
    Incomparable,
}

/// Outcome of comparing Pl(A) with Pl(B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComparisonResult {
    pub order: Order,
    pub left_bottom: bool,
    pub right_bottom: bool,
}

impl ComparisonResult {
    /// Pl(A) ≥ Pl(B).
    pub fn ge(&self) -> bool {
        matches!(self.order, Order::Gt | Order::Eq)
    }

    /// Pl(A) > Pl(B).
    pub fn gt(&self) -> bool {
        self.order == Order::Gt
    }
}

fn from_ge(a_ge_b: bool, b_ge_a: bool) -> Order {
    match (a_ge_b, b_ge_a) {
        (true, true) => Order::Eq,
        (true, false) => Order::Gt,
        (false, true) => Order::Lt,
        (false, false) => Order::Incomparable,
    }
}

/// Anything that compares finite sets of carrier elements.
pub trait Plausibility<T: Ord + Clone> {
    /// Carrier elements in ascending order.
    fn carrier(&self) -> Vec<T>;

    fn compare(&self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> ComparisonResult;

    fn is_bottom(&self, a: &BTreeSet<T>) -> bool;

    /// True for totally preordered (ranked) measures.
    fn is_ranked(&self) -> bool {
        false
    }

    /// Set comparison restricted to `items`, indexed by bitmask. Measures
    /// override this with direct bit-level implementations.
    fn mask_comparator<'a>(&'a self, items: &'a [T]) -> Box<dyn Fn(u64, u64) -> ComparisonResult + 'a> {
        Box::new(move |a, b| {
            self.compare(&crate::kernel::mask_to_set_cloned(items, a), &crate::kernel::mask_to_set_cloned(items, b))
        })
    }

    /// Most plausible elements of `a`: those w for which ¬B(a − {w}) holds relative to `a`.
    fn minimal(&self, a: &BTreeSet<T>) -> BTreeSet<T> {
        belief_worlds(self, a)
    }
}

/// Ranked measure: Pl(A) is the least rank in A; ∅ and all-∞ sets are ⊥.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedMeasure<T: Ord> {
    ranks: BTreeMap<T, Rank>,
}

impl<T: Ord + Clone + fmt::Display> RankedMeasure<T> {
    pub fn new(ranks: BTreeMap<T, Rank>) -> Result<Self, PlausibilityError> {
        if !ranks.values().any(|r| r.is_finite()) {
            return Err(PlausibilityError::NoFiniteRank);
        }
        Ok(RankedMeasure { ranks })
    }

    pub fn from_finite<I: IntoIterator<Item = (T, u32)>>(ranks: I) -> Result<Self, PlausibilityError> {
        RankedMeasure::new(ranks.into_iter().map(|(k, r)| (k, Rank::Finite(r))).collect())
    }

    pub fn rank(&self, x: &T) -> Rank {
        self.ranks.get(x).copied().unwrap_or(Rank::Infinite)
    }

    pub fn ranks(&self) -> &BTreeMap<T, Rank> {
        &self.ranks
    }

    /// Least rank over `a`; ∞ for ⊥ sets.
    pub fn rank_of_set<'a, I: IntoIterator<Item = &'a T>>(&self, a: I) -> Rank
    where
        T: 'a,
    {
        a.into_iter().map(|x| self.rank(x)).min().unwrap_or(Rank::Infinite)
    }
}

impl<T: Ord + Clone + fmt::Display> Plausibility<T> for RankedMeasure<T> {
    fn carrier(&self) -> Vec<T> {
        self.ranks.keys().cloned().collect()
    }

    fn compare(&self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> ComparisonResult {
        compare_ranks(self.rank_of_set(a), self.rank_of_set(b))
    }

    fn is_bottom(&self, a: &BTreeSet<T>) -> bool {
        self.rank_of_set(a) == Rank::Infinite
    }

    fn is_ranked(&self) -> bool {
        true
    }

    fn mask_comparator<'a>(&'a self, items: &'a [T]) -> Box<dyn Fn(u64, u64) -> ComparisonResult + 'a> {
        let ranks: Vec<Rank> = items.iter().map(|x| self.rank(x)).collect();
        Box::new(move |a, b| compare_ranks(mask_rank(&ranks, a), mask_rank(&ranks, b)))
    }

    fn minimal(&self, a: &BTreeSet<T>) -> BTreeSet<T> {
        let best = self.rank_of_set(a);
        if best == Rank::Infinite {
            return BTreeSet::new();
        }
        a.iter().filter(|x| self.rank(x) == best).cloned().collect()
    }
}

fn mask_rank(ranks: &[Rank], mask: u64) -> Rank {
    let mut best = Rank::Infinite;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        best = best.min(ranks[i]);
        m &= m - 1;
    }
    best
}

pub(crate) fn compare_ranks(ra: Rank, rb: Rank) -> ComparisonResult {
    let order = match ra.cmp(&rb) {
        std::cmp::Ordering::Less => Order::Gt,
        std::cmp::Ordering::Equal => Order::Eq,
        std::cmp::Ordering::Greater => Order::Lt,
    };
    ComparisonResult { order, left_bottom: ra == Rank::Infinite, right_bottom: rb == Rank::Infinite }
}

/// Preference measure from a strict partial order ≺ (x ≺ y: x is more
/// plausible), compared by the dominance rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceMeasure<T: Ord> {
    carrier: Vec<T>,
    /// `below[y]` = bitset of x with x ≺ y, over carrier indices.
    below: Vec<Vec<u64>>,
}

impl<T: Ord + Clone + fmt::Display> PreferenceMeasure<T> {
    /// Builds the transitive closure of `edges` (pairs `(x, y)` meaning x ≺ y).
    pub fn new(carrier: impl IntoIterator<Item = T>, edges: &[(T, T)]) -> Result<Self, PlausibilityError> {
        let mut carrier: Vec<T> = carrier.into_iter().collect();
        carrier.sort();
        carrier.dedup();
        let n = carrier.len();
        let words = n.div_ceil(64).max(1);
        let mut below = vec![vec![0u64; words]; n];
        let idx = |x: &T| carrier.binary_search(x).map_err(|_| PlausibilityError::UnknownElement(x.to_string()));
        for (x, y) in edges {
            let (i, j) = (idx(x)?, idx(y)?);
            below[j][i / 64] |= 1 << (i % 64);
        }
        // Warshall closure on bitsets: if k ≺ j then everything below k is below j.
        for k in 0..n {
            let bk = below[k].clone();
            for row in below.iter_mut() {
                if row[k / 64] >> (k % 64) & 1 == 1 {
                    for (w, b) in row.iter_mut().zip(&bk) {
                        *w |= b;
                    }
                }
            }
        }
        for (i, row) in below.iter().enumerate() {
            if row[i / 64] >> (i % 64) & 1 == 1 {
                return Err(PlausibilityError::Cyclic(carrier[i].to_string()));
            }
        }
        Ok(PreferenceMeasure { carrier, below })
    }

    pub fn elements(&self) -> &[T] {
        &self.carrier
    }

    pub fn index(&self, x: &T) -> Option<usize> {
        self.carrier.binary_search(x).ok()
    }

    fn prec_idx(&self, i: usize, j: usize) -> bool {
        self.below[j][i / 64] >> (i % 64) & 1 == 1
    }

    /// x ≺ y.
    pub fn precedes(&self, x: &T, y: &T) -> bool {
        match (self.index(x), self.index(y)) {
            (Some(i), Some(j)) => self.prec_idx(i, j),
            _ => false,
        }
    }

    /// All pairs of the (closed) order, in carrier order.
    pub fn edges(&self) -> Vec<(T, T)> {
        let n = self.carrier.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.prec_idx(i, j) {
                    out.push((self.carrier[i].clone(), self.carrier[j].clone()));
                }
            }
        }
        out
    }

    fn indices(&self, a: &BTreeSet<T>) -> Vec<usize> {
        a.iter().filter_map(|x| self.index(x)).collect()
    }

    /// Pl(A) ≥ Pl(B) by dominance: every e ∈ B − A has some e′ ∈ A with
    /// e′ ≺ e such that nothing in B − A lies below e′.
    fn dominates(&self, a: &[usize], b: &[usize]) -> bool {
        let d: Vec<usize> = b.iter().copied().filter(|x| !a.contains(x)).collect();
        let guards: Vec<usize> = a.iter().copied().filter(|&g| !d.iter().any(|&x| self.prec_idx(x, g))).collect();
        d.iter().all(|&e| guards.iter().any(|&g| self.prec_idx(g, e)))
    }
}

impl<T: Ord + Clone + fmt::Display> Plausibility<T> for PreferenceMeasure<T> {
    fn carrier(&self) -> Vec<T> {
        self.carrier.clone()
    }

    fn compare(&self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> ComparisonResult {
        let (ia, ib) = (self.indices(a), self.indices(b));
        let order = from_ge(self.dominates(&ia, &ib), self.dominates(&ib, &ia));
        ComparisonResult { order, left_bottom: ia.is_empty(), right_bottom: ib.is_empty() }
    }

    fn is_bottom(&self, a: &BTreeSet<T>) -> bool {
        self.indices(a).is_empty()
    }

    fn mask_comparator<'a>(&'a self, items: &'a [T]) -> Box<dyn Fn(u64, u64) -> ComparisonResult + 'a> {
        let pos: Vec<Option<usize>> = items.iter().map(|x| self.index(x)).collect();
        let pred: Vec<u64> = pos
            .iter()
            .map(|pi| match pi {
                None => 0,
                Some(i) => pos
                    .iter()
                    .enumerate()
                    .filter(|(_, pj)| pj.is_some_and(|j| self.prec_idx(j, *i)))
                    .fold(0u64, |m, (k, _)| m | 1 << k),
            })
            .collect();
        let present: u64 = pos.iter().enumerate().filter(|(_, p)| p.is_some()).fold(0, |m, (k, _)| m | 1 << k);
        Box::new(move |a, b| {
            let (a, b) = (a & present, b & present);
            let order = from_ge(mask_dominates(&pred, a, b), mask_dominates(&pred, b, a));
            ComparisonResult { order, left_bottom: a == 0, right_bottom: b == 0 }
        })
    }

    fn minimal(&self, a: &BTreeSet<T>) -> BTreeSet<T> {
        let ia = self.indices(a);
        ia.iter()
            .filter(|&&j| !ia.iter().any(|&i| self.prec_idx(i, j)))
            .map(|&j| self.carrier[j].clone())
            .collect()
    }
}

/// Dominance on bitmasks: `pred[e]` is the mask of elements strictly below e.
pub(crate) fn mask_dominates(pred: &[u64], a: u64, b: u64) -> bool {
    let d = b & !a;
    if d == 0 {
        return true;
    }
    let mut guards = 0u64;
    let mut m = a;
    while m != 0 {
        let g = m.trailing_zeros() as usize;
        if pred[g] & d == 0 {
            guards |= 1 << g;
        }
        m &= m - 1;
    }
    let mut m = d;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        if pred[e] & guards == 0 {
            return false;
        }
        m &= m - 1;
    }
    true
}

/// Either kind of measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure<T: Ord> {
    Ranked(RankedMeasure<T>),
    Preference(PreferenceMeasure<T>),
}

impl<T: Ord + Clone + fmt::Display> Plausibility<T> for Measure<T> {
    fn carrier(&self) -> Vec<T> {
        match self {
            Measure::Ranked(m) => m.carrier(),
            Measure::Preference(m) => m.carrier(),
        }
    }

    fn compare(&self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> ComparisonResult {
        match self {
            Measure::Ranked(m) => m.compare(a, b),
            Measure::Preference(m) => m.compare(a, b),
        }
    }

    fn is_bottom(&self, a: &BTreeSet<T>) -> bool {
        match self {
            Measure::Ranked(m) => m.is_bottom(a),
            Measure::Preference(m) => m.is_bottom(a),
        }
    }

    fn is_ranked(&self) -> bool {
        matches!(self, Measure::Ranked(_))
    }

    fn mask_comparator<'a>(&'a self, items: &'a [T]) -> Box<dyn Fn(u64, u64) -> ComparisonResult + 'a> {
        match self {
            Measure::Ranked(m) => m.mask_comparator(items),
            Measure::Preference(m) => m.mask_comparator(items),
        }
    }

    fn minimal(&self, a: &BTreeSet<T>) -> BTreeSet<T> {
        match self {
            Measure::Ranked(m) => m.minimal(a),
            Measure::Preference(m) => m.minimal(a),
        }
    }
}

/// φ → ψ: Pl(φ) = ⊥ or Pl(φ ∧ ψ) > Pl(φ ∧ ¬ψ).
pub fn conditional_holds<T: Ord + Clone, M: Plausibility<T> + ?Sized>(
    m: &M,
    phi: &BTreeSet<T>,
    psi: &BTreeSet<T>,
) -> bool {
    if m.is_bottom(phi) {
        return true;
    }
    let yes: BTreeSet<T> = phi.intersection(psi).cloned().collect();
    let no: BTreeSet<T> = phi.difference(psi).cloned().collect();
    m.compare(&yes, &no).gt()
}

/// Bφ ≡ true → φ, relative to `universe`.
pub fn believes<T: Ord + Clone, M: Plausibility<T> + ?Sized>(m: &M, universe: &BTreeSet<T>, phi: &BTreeSet<T>) -> bool {
    conditional_holds(m, universe, phi)
}

/// `{w : not B(universe − {w})}`, computed literally from the conditional.
pub fn belief_worlds<T: Ord + Clone, M: Plausibility<T> + ?Sized>(m: &M, universe: &BTreeSet<T>) -> BTreeSet<T> {
    universe
        .iter()
        .filter(|w| {
            let rest: BTreeSet<T> = universe.iter().filter(|x| x != w).cloned().collect();
            !believes(m, universe, &rest)
        })
        .cloned()
        .collect()
}

/// The Lewis/Boutilier clause: for every w₁ ∈ φ there is w₂ with (a) w₂ ⪯ w₁,
/// (b) w₂ ∈ φ ∧ ψ, and (c) every w₃ ≺ w₂ satisfies φ ⇒ ψ.
pub fn preferential_satisfies<T: Ord + Clone + fmt::Display>(
    order: &PreferenceMeasure<T>,
    phi: &BTreeSet<T>,
    psi: &BTreeSet<T>,
) -> bool {
    let carrier = order.elements();
    phi.iter().all(|w1| {
        carrier.iter().any(|w2| {
            let a = w2 == w1 || order.precedes(w2, w1);
            let b = phi.contains(w2) && psi.contains(w2);
            let c = carrier.iter().filter(|w3| order.precedes(w3, w2)).all(|w3| !phi.contains(w3) || psi.contains(w3));
            a && b && c
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn ranked() -> RankedMeasure<String> {
        RankedMeasure::from_finite([("11".into(), 0), ("10".into(), 1), ("01".into(), 1), ("00".into(), 2)]).unwrap()
    }

    fn fork() -> PreferenceMeasure<String> {
        PreferenceMeasure::new(set(&["a", "b", "c"]), &[("a".into(), "b".into()), ("a".into(), "c".into())]).unwrap()
    }

    fn diamond() -> PreferenceMeasure<String> {
        let e = |x: &str, y: &str| (x.to_string(), y.to_string());
        PreferenceMeasure::new(set(&["a", "b", "c", "d"]), &[e("a", "b"), e("a", "c"), e("b", "d"), e("c", "d")]).unwrap()
    }

    #[test]
    fn ranked_comparisons() {
        let m = ranked();
        assert_eq!(m.compare(&set(&["11"]), &set(&["10"])).order, Order::Gt);
        assert_eq!(m.compare(&set(&["10"]), &set(&["01"])).order, Order::Eq);
        let c = m.compare(&set(&[]), &set(&["00"]));
        assert_eq!(c.order, Order::Lt);
        assert!(c.left_bottom && !c.right_bottom);
    }

    #[test]
    fn preference_comparisons() {
        let m = fork();
        assert_eq!(m.compare(&set(&["b"]), &set(&["c"])).order, Order::Incomparable);
        assert_eq!(m.compare(&set(&["a"]), &set(&["b", "c"])).order, Order::Gt);
        assert_eq!(m.compare(&set(&["a", "b"]), &set(&["a", "b"])).order, Order::Eq);
        assert!(PreferenceMeasure::new(set(&["a", "b"]), &[("a".into(), "b".into()), ("b".into(), "a".into())]).is_err());
    }

    #[test]
    fn conditionals_and_belief() {
        let m = ranked();
        let all = set(&["00", "01", "10", "11"]);
        // p → q: Pl({11}) > Pl({10}).
        assert!(conditional_holds(&m, &set(&["10", "11"]), &set(&["01", "11"])));
        assert!(conditional_holds(&m, &set(&[]), &set(&["00"])));
        assert!(believes(&m, &all, &set(&["11"])));
        assert_eq!(belief_worlds(&m, &all), set(&["11"]));
        let flat = RankedMeasure::from_finite(all.iter().map(|w| (w.clone(), 0))).unwrap();
        assert_eq!(belief_worlds(&flat, &all), all);
        assert_eq!(belief_worlds(&fork(), &set(&["a", "b", "c"])), set(&["a"]));
    }

    #[test]
    fn lewis_clause_examples() {
        let chain = PreferenceMeasure::new(set(&["a", "b"]), &[("a".into(), "b".into())]).unwrap();
        assert!(preferential_satisfies(&chain, &set(&["a", "b"]), &set(&["a"])));
        assert!(preferential_satisfies(&chain, &set(&[]), &set(&[])));
        let d = diamond();
        assert!(!preferential_satisfies(&d, &set(&["b", "c", "d"]), &set(&["b"])));
        assert!(!conditional_holds(&d, &set(&["b", "c", "d"]), &set(&["b"])));
    }

    #[test]
    fn minimal_matches_belief_worlds() {
        let d = diamond();
        let all = set(&["a", "b", "c", "d"]);
        assert_eq!(d.minimal(&set(&["b", "c", "d"])), set(&["b", "c"]));
        assert_eq!(belief_worlds(&d, &set(&["b", "c", "d"])), set(&["b", "c"]));
        assert_eq!(ranked().minimal(&set(&["10", "01", "00"])), set(&["10", "01"]));
        assert_eq!(d.minimal(&all), set(&["a"]));
    }

    #[test]
    fn mask_comparator_agrees_with_set_comparison() {
        let d = diamond();
        let items = d.carrier();
        let cmp = d.mask_comparator(&items);
        for a in 0..16u64 {
            for b in 0..16u64 {
                let sa = crate::kernel::mask_to_set_cloned(&items, a);
                let sb = crate::kernel::mask_to_set_cloned(&items, b);
                assert_eq!(cmp(a, b), d.compare(&sa, &sb));
            }
        }
    }
}

//! Priors over runs: ranked, lexicographic from an update structure, or an
//! explicit strict partial order.

use std::collections::BTreeSet;

use super::SystemError;
use crate::kernel::World;
use crate::plausibility::{compare_ranks, mask_dominates, ComparisonResult, Order, Plausibility, PreferenceMeasure, Rank};
use crate::update::UpdateStructure;

#[derive(Debug, Clone)]
pub enum RunPrior {
    /// One rank per run.
    Ranked(Vec<Rank>),
    Lex(LexPrior),
    /// Strict partial order over run indices.
    Preference(PreferenceMeasure<usize>),
}

/// The strict order on runs induced by a distance function: r ≺ r′ when the
/// environments agree up to some time j, differ at j+1, and the step taken by
/// r is strictly shorter, d(e_j, r_{j+1}) < d(e_j, r′_{j+1}). Runs that differ
/// at time 0 are incomparable; runs with the same environment are equivalent.
#[derive(Debug, Clone)]
pub struct LexPrior {
    structure: UpdateStructure,
    /// Distinct environment sequences as structure world indices.
    seqs: Vec<Vec<u16>>,
    /// Per run, the index of its environment sequence.
    class: Vec<u32>,
}

impl LexPrior {
    /// `envs[r]` is the world sequence of run r.
    pub fn new(structure: UpdateStructure, envs: &[Vec<World>]) -> Result<Self, SystemError> {
        let mut index = std::collections::HashMap::new();
        let mut seqs = Vec::new();
        let mut class = Vec::with_capacity(envs.len());
        for env in envs {
            let seq = env
                .iter()
                .map(|w| {
                    structure
                        .index_of(*w)
                        .map(|i| i as u16)
                        .ok_or_else(|| SystemError::BadPrior(format!("world {w} is not in the update structure")))
                })
                .collect::<Result<Vec<u16>, _>>()?;
            let next = seqs.len() as u32;
            let c = *index.entry(seq.clone()).or_insert_with(|| {
                seqs.push(seq);
                next
            });
            class.push(c);
        }
        Ok(LexPrior { structure, seqs, class })
    }

    pub fn structure(&self) -> &UpdateStructure {
        &self.structure
    }

    pub fn runs(&self) -> usize {
        self.class.len()
    }

    /// Strict order between environment classes.
    fn class_lt(&self, a: u32, b: u32) -> bool {
        self.prefix_lt(&self.seqs[a as usize], &self.seqs[b as usize])
    }

    pub fn precedes(&self, r1: usize, r2: usize) -> bool {
        self.class_lt(self.class[r1], self.class[r2])
    }

    fn classes(&self, runs: &[usize]) -> Vec<u32> {
        let set: BTreeSet<u32> = runs.iter().map(|&r| self.class[r]).collect();
        set.into_iter().collect()
    }

    /// Some member of `trie` strictly precedes class `e`.
    fn has_predecessor(&self, trie: &Trie, e: u32) -> bool {
        self.seq_has_predecessor(trie, &self.seqs[e as usize])
    }

    /// Some sequence stored in `trie` agrees with `seq` up to a time j and
    /// takes a strictly shorter step at j+1. Sequences may be prefixes.
    fn seq_has_predecessor(&self, trie: &Trie, seq: &[u16]) -> bool {
        let Some(mut node) = seq.first().and_then(|&x| trie.child(0, x)) else {
            return false;
        };
        for j in 0..seq.len() - 1 {
            let here = seq[j] as usize;
            let step = (here, seq[j + 1] as usize);
            if trie.children[node].iter().any(|&(c, _)| c != seq[j + 1] && self.structure.pair_lt((here, c as usize), step)) {
                return true;
            }
            match trie.child(node, seq[j + 1]) {
                Some(n) => node = n,
                None => return false,
            }
        }
        false
    }

    fn trie(&self, classes: &[u32]) -> Trie {
        Trie::build(classes.iter().map(|&c| self.seqs[c as usize].as_slice()))
    }

    /// Strict order on equal-length prefixes of world-index sequences.
    pub(crate) fn prefix_lt(&self, a: &[u16], b: &[u16]) -> bool {
        match a.iter().zip(b.iter()).position(|(x, y)| x != y) {
            None | Some(0) => false,
            Some(j) => {
                let e = a[j - 1] as usize;
                self.structure.pair_lt((e, a[j] as usize), (e, b[j] as usize))
            }
        }
    }

    /// Every sequence in `lower` has a strict predecessor in `upper`.
    pub(crate) fn prefixes_covered(&self, upper: &[Vec<u16>], lower: &[Vec<u16>]) -> bool {
        let trie = Trie::build(upper.iter().map(|s| s.as_slice()));
        lower.iter().all(|s| self.seq_has_predecessor(&trie, s))
    }

    /// The world-index sequence of run r.
    pub(crate) fn seq_of(&self, r: usize) -> &[u16] {
        &self.seqs[self.class[r] as usize]
    }

    /// Pl(A) ≥ Pl(B) by dominance, on sorted run lists.
    fn dominates(&self, a: &[usize], b: &[usize]) -> bool {
        let d: Vec<usize> = b.iter().copied().filter(|r| a.binary_search(r).is_err()).collect();
        if d.is_empty() {
            return true;
        }
        let d_classes = self.classes(&d);
        let d_trie = self.trie(&d_classes);
        let guards: Vec<u32> = self.classes(a).into_iter().filter(|&g| !self.has_predecessor(&d_trie, g)).collect();
        let g_trie = self.trie(&guards);
        d_classes.iter().all(|&e| self.has_predecessor(&g_trie, e))
    }

    fn minimal(&self, runs: &[usize]) -> Vec<usize> {
        let trie = self.trie(&self.classes(runs));
        let mut keep = std::collections::HashMap::new();
        runs.iter()
            .copied()
            .filter(|&r| *keep.entry(self.class[r]).or_insert_with(|| !self.has_predecessor(&trie, self.class[r])))
            .collect()
    }
}

struct Trie {
    /// Per node, (world index, child node). Node 0 is the root.
    children: Vec<Vec<(u16, usize)>>,
}

impl Trie {
    fn build<'a>(seqs: impl Iterator<Item = &'a [u16]>) -> Trie {
        let mut t = Trie { children: vec![Vec::new()] };
        for seq in seqs {
            let mut node = 0;
            for &x in seq {
                node = match t.child(node, x) {
                    Some(n) => n,
                    None => {
                        t.children.push(Vec::new());
                        let n = t.children.len() - 1;
                        t.children[node].push((x, n));
                        n
                    }
                };
            }
        }
        t
    }

    fn child(&self, node: usize, x: u16) -> Option<usize> {
        self.children[node].iter().find(|(c, _)| *c == x).map(|&(_, n)| n)
    }
}

fn from_ge(ab: bool, ba: bool) -> Order {
    match (ab, ba) {
        (true, true) => Order::Eq,
        (true, false) => Order::Gt,
        (false, true) => Order::Lt,
        (false, false) => Order::Incomparable,
    }
}

impl RunPrior {
    pub fn kind(&self) -> &'static str {
        match self {
            RunPrior::Ranked(_) => "ranked",
            RunPrior::Lex(_) => "lexicographic",
            RunPrior::Preference(_) => "preference",
        }
    }

    pub fn is_ranked(&self) -> bool {
        matches!(self, RunPrior::Ranked(_))
    }

    fn rank_of(ranks: &[Rank], runs: &[usize]) -> Rank {
        runs.iter().map(|&r| ranks[r]).min().unwrap_or(Rank::Infinite)
    }

    /// Compares two sorted, duplicate-free run lists.
    pub fn compare(&self, a: &[usize], b: &[usize]) -> ComparisonResult {
        match self {
            RunPrior::Ranked(ranks) => compare_ranks(Self::rank_of(ranks, a), Self::rank_of(ranks, b)),
            RunPrior::Lex(l) => ComparisonResult {
                order: from_ge(l.dominates(a, b), l.dominates(b, a)),
                left_bottom: a.is_empty(),
                right_bottom: b.is_empty(),
            },
            RunPrior::Preference(p) => {
                let set = |x: &[usize]| x.iter().copied().collect::<BTreeSet<usize>>();
                p.compare(&set(a), &set(b))
            }
        }
    }

    pub fn is_bottom(&self, runs: &[usize]) -> bool {
        match self {
            RunPrior::Ranked(ranks) => Self::rank_of(ranks, runs) == Rank::Infinite,
            _ => runs.is_empty(),
        }
    }

    /// The most plausible runs of `runs`; empty when `runs` is ⊥.
    pub fn minimal(&self, runs: &[usize]) -> Vec<usize> {
        match self {
            RunPrior::Ranked(ranks) => {
                let best = Self::rank_of(ranks, runs);
                if best == Rank::Infinite {
                    return Vec::new();
                }
                runs.iter().copied().filter(|&r| ranks[r] == best).collect()
            }
            RunPrior::Lex(l) => l.minimal(runs),
            RunPrior::Preference(p) => p.minimal(&runs.iter().copied().collect()).into_iter().collect(),
        }
    }

    /// Strict preference between single runs.
    pub fn precedes(&self, r1: usize, r2: usize) -> bool {
        match self {
            RunPrior::Ranked(ranks) => ranks[r1] < ranks[r2],
            RunPrior::Lex(l) => l.precedes(r1, r2),
            RunPrior::Preference(p) => p.precedes(&r1, &r2),
        }
    }

    /// Set comparison restricted to `items` (at most 64 runs), by bitmask.
    pub(crate) fn mask_comparator<'a>(&'a self, items: &'a [usize]) -> Box<dyn Fn(u64, u64) -> ComparisonResult + 'a> {
        match self {
            RunPrior::Ranked(ranks) => {
                let rs: Vec<Rank> = items.iter().map(|&r| ranks[r]).collect();
                if rs.len() <= 16 {
                    // table[m] = least rank in m
                    let mut table = vec![Rank::Infinite; 1 << rs.len()];
                    for m in 1..table.len() {
                        table[m] = table[m & (m - 1)].min(rs[m.trailing_zeros() as usize]);
                    }
                    return Box::new(move |a, b| compare_ranks(table[a as usize], table[b as usize]));
                }
                Box::new(move |a, b| {
                    let rank = |m: u64| (0..rs.len()).filter(|i| m >> i & 1 == 1).map(|i| rs[i]).min().unwrap_or(Rank::Infinite);
                    compare_ranks(rank(a), rank(b))
                })
            }
            RunPrior::Preference(p) => p.mask_comparator(items),
            RunPrior::Lex(l) => {
                let pred: Vec<u64> = items
                    .iter()
                    .map(|&y| items.iter().enumerate().filter(|(_, &x)| l.precedes(x, y)).fold(0u64, |m, (k, _)| m | 1 << k))
                    .collect();
                Box::new(move |a, b| ComparisonResult {
                    order: from_ge(mask_dominates(&pred, a, b), mask_dominates(&pred, b, a)),
                    left_bottom: a == 0,
                    right_bottom: b == 0,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Universe;

    fn lex() -> (LexPrior, Vec<Vec<World>>) {
        let u = Universe::over(&["p"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let w = |b: &str| u.world(b).unwrap();
        let envs: Vec<Vec<World>> = [["0", "0", "0"], ["0", "1", "1"], ["0", "0", "1"], ["1", "1", "1"], ["0", "0", "0"]]
            .iter()
            .map(|e| e.iter().map(|b| w(b)).collect())
            .collect();
        (LexPrior::new(s, &envs).unwrap(), envs)
    }

    /// Brute-force dominance over runs, with ≺ from pairwise checks.
    fn brute_ge(l: &LexPrior, a: &[usize], b: &[usize]) -> bool {
        let d: Vec<usize> = b.iter().copied().filter(|x| !a.contains(x)).collect();
        let guards: Vec<usize> = a.iter().copied().filter(|&g| !d.iter().any(|&x| l.precedes(x, g))).collect();
        d.iter().all(|&e| guards.iter().any(|&g| l.precedes(g, e)))
    }

    #[test]
    fn lex_order_follows_first_divergence() {
        let (l, _) = lex();
        // 000 vs 011 diverge at time 1: staying (0) beats moving (1).
        assert!(l.precedes(0, 1));
        assert!(l.precedes(0, 2));
        // 001 vs 011: at time 1, 0 beats 1.
        assert!(l.precedes(2, 1));
        // Differ at time 0: incomparable.
        assert!(!l.precedes(3, 0) && !l.precedes(0, 3));
        // Same environment: equivalent.
        assert!(!l.precedes(0, 4) && !l.precedes(4, 0));
    }

    #[test]
    fn trie_dominance_matches_brute_force() {
        let (l, _) = lex();
        let prior = RunPrior::Lex(l.clone());
        for a in 0u32..32 {
            for b in 0u32..32 {
                let sa: Vec<usize> = (0..5).filter(|i| a >> i & 1 == 1).collect();
                let sb: Vec<usize> = (0..5).filter(|i| b >> i & 1 == 1).collect();
                let c = prior.compare(&sa, &sb);
                assert_eq!(c.ge(), brute_ge(&l, &sa, &sb), "{sa:?} vs {sb:?}");
                let items: Vec<usize> = (0..5).collect();
                assert_eq!(prior.mask_comparator(&items)(a as u64, b as u64).order, c.order);
            }
        }
        assert_eq!(prior.minimal(&[0, 1, 2, 3, 4]), vec![0, 3, 4]);
    }

    #[test]
    fn ranked_prior() {
        let p = RunPrior::Ranked(vec![Rank::Finite(2), Rank::Finite(0), Rank::Infinite]);
        assert_eq!(p.compare(&[1], &[0]).order, Order::Gt);
        assert!(p.is_bottom(&[2]));
        assert_eq!(p.minimal(&[0, 2]), vec![0]);
        assert!(p.minimal(&[2]).is_empty());
    }
}

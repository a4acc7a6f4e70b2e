//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use belief_change::diagnosis::{Circuit, Gate, GateKind};
use belief_change::kernel::{char_formula, BeliefSet, Formula, Universe, World};
use belief_change::plausibility::PreferenceMeasure;
use belief_change::revision::{grove_revise, RevisionRanking};
use belief_change::update::{DistanceFunction, PosetDistance, UpdateStructure};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 4] = ["p", "q", "r", "s"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn universe(atoms: usize) -> Arc<Universe> {
    Universe::over(&NAMES[..atoms]).unwrap()
}

pub fn full_mask(u: &Universe) -> u64 {
    (1u64 << u.len()) - 1
}

/// The formula whose models are the worlds selected by `mask`, with the
/// constants for the empty and full sets.
pub fn set_formula(u: &Universe, mask: u64) -> Formula {
    if mask == 0 {
        Formula::False
    } else if mask == full_mask(u) {
        Formula::True
    } else {
        char_formula(&u.subset(mask))
    }
}

pub fn random_ranking(rng: &mut ChaCha8Rng, atoms: usize) -> RevisionRanking {
    let u = universe(atoms);
    let ranks: BTreeMap<World, u32> = u.worlds().iter().map(|w| (*w, rng.gen_range(0..4))).collect();
    RevisionRanking::new(&u, ranks).unwrap()
}

/// Half numeric, half poset-valued, chosen by `poset`. Self-distance is the
/// least value; every other distance is strictly above it.
pub fn random_structure(rng: &mut ChaCha8Rng, atoms: usize, poset: bool) -> UpdateStructure {
    let u = universe(atoms);
    let ws = u.worlds().to_vec();
    if !poset {
        let mut m = BTreeMap::new();
        for &a in &ws {
            for &b in &ws {
                let v = if a == b { 0 } else { rng.gen_range(1..5) };
                m.insert((a, b), Ratio::from_integer(v));
            }
        }
        return UpdateStructure::new(&u, DistanceFunction::Numeric(m)).unwrap();
    }
    let extra = rng.gen_range(1..5);
    let labels: Vec<String> = std::iter::once("0".to_string()).chain((0..extra).map(|i| format!("d{i}"))).collect();
    let mut order: Vec<(String, String)> = (1..labels.len()).map(|i| ("0".to_string(), labels[i].clone())).collect();
    for i in 1..labels.len() {
        for j in i + 1..labels.len() {
            if rng.gen_bool(0.4) {
                order.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    let mut values = BTreeMap::new();
    for &a in &ws {
        for &b in &ws {
            let l = if a == b { "0".to_string() } else { labels[rng.gen_range(1..labels.len())].clone() };
            values.insert((a, b), l);
        }
    }
    let d = PosetDistance::new(labels, "0", &order, values).unwrap();
    UpdateStructure::new(&u, DistanceFunction::Poset(d)).unwrap()
}

/// A strict partial order on `0..n`: edges only go forward along a random
/// permutation, so the relation is acyclic.
pub fn random_order(rng: &mut ChaCha8Rng, n: usize) -> PreferenceMeasure<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let density = rng.gen_range(0.1..0.7);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((perm[i], perm[j]));
            }
        }
    }
    PreferenceMeasure::new(0..n, &edges).unwrap()
}

/// `true` plus up to `max - 1` further consistent world-set formulas with
/// distinct extensions.
pub fn random_alphabet(rng: &mut ChaCha8Rng, u: &Universe, max: usize) -> Vec<Formula> {
    let full = full_mask(u);
    let mut seen = BTreeSet::from([full]);
    let mut out = vec![Formula::True];
    let k = rng.gen_range(1..=max);
    for _ in 0..4 * k {
        if out.len() == k {
            break;
        }
        let m = rng.gen_range(1..=full);
        if seen.insert(m) {
            out.push(set_formula(u, m));
        }
    }
    out
}

/// Up to `max_gates` gates; gate i reads two (or one, for NOT) lines defined
/// earlier and drives `o{i}`, so the circuit is acyclic.
pub fn random_circuit(rng: &mut ChaCha8Rng, max_gates: usize) -> Circuit {
    let kinds = [GateKind::And, GateKind::Or, GateKind::Not, GateKind::Xor, GateKind::Nand, GateKind::Nor];
    let mut lines = vec!["a".to_string(), "b".to_string()];
    let mut gates = Vec::new();
    for i in 1..=rng.gen_range(1..=max_gates) {
        let kind = *kinds.choose(rng).unwrap();
        let arity = if kind == GateKind::Not { 1 } else { 2 };
        let ins: Vec<String> = lines.choose_multiple(rng, arity).cloned().collect();
        let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
        let out = format!("o{i}");
        gates.push(Gate::new(&format!("c{i}"), kind, &refs, &out));
        lines.push(out);
    }
    Circuit::new(gates).unwrap()
}

/// Up to `max` observations, each a conjunction of literals over the lines.
pub fn random_observations(rng: &mut ChaCha8Rng, c: &Circuit, max: usize) -> Vec<Formula> {
    let lines = c.lines().to_vec();
    (0..rng.gen_range(1..=max))
        .map(|_| {
            let k = rng.gen_range(1..=lines.len());
            let lits = lines.choose_multiple(rng, k).map(|l| {
                let a = Formula::atom(c.line_atom(l).unwrap());
                if rng.gen_bool(0.5) {
                    a
                } else {
                    Formula::not(a)
                }
            });
            Formula::conjunction(lits.collect::<Vec<_>>())
        })
        .collect()
}

/// Revision used as if it were update: revise μ by φ under the ranking of
/// Hamming distance to μ.
pub fn revision_as_update(mu: &BeliefSet, phi: &Formula) -> BeliefSet {
    let u = mu.universe();
    if !mu.is_consistent() {
        return BeliefSet::inconsistent(u);
    }
    let ranks = u
        .worlds()
        .iter()
        .map(|w| (*w, mu.worlds().iter().map(|v| v.hamming(*w)).min().unwrap()))
        .collect();
    grove_revise(&RevisionRanking::new(u, ranks).unwrap(), phi)
}

pub fn scenario_path(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read_scenario(name: &str) -> String {
    std::fs::read_to_string(scenario_path(name)).unwrap()
}

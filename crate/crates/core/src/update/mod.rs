//! Katsuno–Mendelzon update: distance-based update structures, pointwise
//! minimization, the update operator and the U-postulate checker.

mod checks;
mod distance;
mod matrix;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{BeliefSet, Formula, KernelError, Universe, World, WorldSet};
use crate::plausibility::ComparisonResult;

pub use checks::{check_km, validate_update_structure, KM_MAX_WORLDS};
pub use distance::{DistanceFunction, DistanceValue, PosetDistance, MAX_LABELS};
pub use matrix::{parse_matrix, write_matrix};

/// Largest world set an update structure may hold.
pub const MAX_UPDATE_WORLDS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error("unknown distance value `{0}`")]
    UnknownDistanceValue(String),
    #[error("no distance given from {from} to {to}")]
    MissingDistance { from: String, to: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{found} atom weights given for {expected} atoms")]
    WeightCount { expected: usize, found: usize },
    #[error("poset distances support at most 64 labels, got {0}")]
    TooManyLabels(usize),
    #[error("universe has {size} worlds; at most {max} are supported here")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("world {0} is not a model of the background theory")]
    ForeignWorld(String),
    #[error("distance matrix line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone)]
enum ValueOrder {
    /// Ids are ranks of numeric values.
    Total,
    /// Ids are poset label indices.
    Partial(PosetDistance),
}

/// (W, d, π) with π implicit in the world bits.
#[derive(Debug, Clone)]
pub struct UpdateStructure {
    universe: Arc<Universe>,
    worlds: Vec<World>,
    d: DistanceFunction,
    /// `ids[i * n + j]` identifies d(worlds[i], worlds[j]).
    ids: Vec<u32>,
    order: ValueOrder,
}

impl UpdateStructure {
    /// Structure over every world of the universe.
    pub fn new(universe: &Arc<Universe>, d: DistanceFunction) -> Result<Self, UpdateError> {
        UpdateStructure::with_worlds(universe, universe.worlds().to_vec(), d)
    }

    /// Structure over an explicit subset of the universe's worlds, which need
    /// not cover it; `validate_update_structure` reports gaps.
    pub fn with_worlds(universe: &Arc<Universe>, worlds: Vec<World>, d: DistanceFunction) -> Result<Self, UpdateError> {
        let n = worlds.len();
        if n > MAX_UPDATE_WORLDS {
            return Err(UpdateError::UniverseTooLarge { size: n, max: MAX_UPDATE_WORLDS });
        }
        if let Some(w) = worlds.iter().find(|w| !universe.contains(**w)) {
            return Err(UpdateError::ForeignWorld(w.to_string()));
        }
        if let DistanceFunction::WeightedHamming(ws) = &d {
            if ws.len() != universe.vocab().len() {
                return Err(UpdateError::WeightCount { expected: universe.vocab().len(), found: ws.len() });
            }
        }
        let mut worlds = worlds;
        worlds.sort();
        worlds.dedup();
        let n = worlds.len();
        let mut values = Vec::with_capacity(n * n);
        for &a in &worlds {
            for &b in &worlds {
                values.push(d.value(a, b)?);
            }
        }
        let (ids, order) = match &d {
            DistanceFunction::Poset(p) => {
                let ids = values
                    .iter()
                    .map(|v| match v {
                        DistanceValue::Label(l) => p.label_index(l).map(|i| i as u32).expect("labels were validated"),
                        DistanceValue::Num(_) => unreachable!("poset distances produce labels"),
                    })
                    .collect();
                (ids, ValueOrder::Partial(p.clone()))
            }
            _ => {
                let distinct: Vec<&DistanceValue> = values.iter().collect::<BTreeSet<_>>().into_iter().collect();
                let ids = values.iter().map(|v| distinct.binary_search(&v).unwrap() as u32).collect();
                (ids, ValueOrder::Total)
            }
        };
        Ok(UpdateStructure { universe: universe.clone(), worlds, d, ids, order })
    }

    pub fn hamming(universe: &Arc<Universe>) -> Result<Self, UpdateError> {
        UpdateStructure::new(universe, DistanceFunction::Hamming)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn distance(&self) -> &DistanceFunction {
        &self.d
    }

    pub fn index_of(&self, w: World) -> Option<usize> {
        self.worlds.binary_search(&w).ok()
    }

    pub fn value(&self, from: World, to: World) -> Result<DistanceValue, UpdateError> {
        self.d.value(from, to)
    }

    /// Identifier of d(worlds[i], worlds[j]); ids compare with `id_lt`.
    pub(crate) fn id(&self, i: usize, j: usize) -> u32 {
        self.ids[i * self.worlds.len() + j]
    }

    pub(crate) fn id_lt(&self, a: u32, b: u32) -> bool {
        match &self.order {
            ValueOrder::Total => a < b,
            ValueOrder::Partial(p) => p.lt(a as usize, b as usize),
        }
    }

    /// d(worlds[i], worlds[j]) is strictly below d(worlds[k], worlds[l]).
    pub(crate) fn pair_lt(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> bool {
        self.id_lt(self.id(i, j), self.id(k, l))
    }

    fn indices(&self, set: &WorldSet) -> Vec<usize> {
        set.iter().filter_map(|w| self.index_of(*w)).collect()
    }

    /// min_U on index lists.
    pub(crate) fn min_indices(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut keep = vec![false; b.len()];
        for &w0 in a {
            for (x, &w) in b.iter().enumerate() {
                if !keep[x] {
                    let dw = self.id(w0, w);
                    keep[x] = !b.iter().any(|&w1| self.id_lt(self.id(w0, w1), dw));
                }
            }
        }
        b.iter().zip(keep).filter(|(_, k)| *k).map(|(w, _)| *w).collect()
    }
}

/// Compares two distance values of the structure.
pub fn compare_distance(u: &UpdateStructure, v1: &DistanceValue, v2: &DistanceValue) -> Result<ComparisonResult, UpdateError> {
    u.d.compare(v1, v2)
}

/// {w ∈ B : ∃w₀ ∈ A ∀w′ ∈ B, d(w₀, w′) ⊀ d(w₀, w)}. Worlds outside the
/// structure are ignored.
pub fn min_u(u: &UpdateStructure, a: &WorldSet, b: &WorldSet) -> WorldSet {
    let (ia, ib) = (u.indices(a), u.indices(b));
    u.min_indices(&ia, &ib).into_iter().map(|i| u.worlds[i]).collect()
}

/// μ ⋄ φ = min_U(⟦μ⟧, ⟦φ⟧).
pub fn km_update(u: &UpdateStructure, mu: &BeliefSet, phi: &Formula) -> BeliefSet {
    let models = u.universe.models(phi);
    let ws = min_u(u, mu.worlds(), &models);
    BeliefSet::new(&u.universe, ws).expect("structure worlds are in the universe")
}

/// μ ⋄ ψ₁ ⋄ … ⋄ ψₖ.
pub fn km_update_seq(u: &UpdateStructure, mu: &BeliefSet, obs: &[Formula]) -> BeliefSet {
    obs.iter().fold(mu.clone(), |acc, f| km_update(u, &acc, f))
}

/// No φ-world is strictly closer to `w` than `w2` is. Requires w2 ⊨ φ.
pub fn sufficient_information(u: &UpdateStructure, w: World, w2: World, phi: &Formula) -> Result<bool, UpdateError> {
    if !phi.eval(w2) {
        return Err(UpdateError::PreconditionViolated(format!(
            "{w2} does not satisfy {}",
            u.universe.text(phi)
        )));
    }
    let idx = |x: World| u.index_of(x).ok_or_else(|| UpdateError::PreconditionViolated(format!("{x} is not a world of the structure")));
    let (i, j) = (idx(w)?, idx(w2)?);
    let target = u.id(i, j);
    Ok(!u.worlds.iter().enumerate().any(|(k, x)| phi.eval(*x) && u.id_lt(u.id(i, k), target)))
}

/// Revision by the ranking "distance to the nearest μ-world": the φ-worlds
/// whose (source, target) pair is globally minimal. Not pointwise, so it
/// breaks U8.
pub fn global_min_update(u: &UpdateStructure, mu: &BeliefSet, phi: &Formula) -> BeliefSet {
    let a = u.indices(mu.worlds());
    let b = u.indices(&u.universe.models(phi));
    let pairs: Vec<(usize, usize)> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
    let ws: WorldSet = pairs
        .iter()
        .filter(|&&p| !pairs.iter().any(|&q| u.pair_lt(q, p)))
        .map(|&(_, y)| u.worlds[y])
        .collect();
    BeliefSet::new(&u.universe, ws).expect("structure worlds are in the universe")
}

/// Black-box update operator μ ⋄ φ.
pub trait UpdateOracle {
    fn update(&self, mu: &BeliefSet, phi: &Formula) -> Result<BeliefSet, UpdateError>;
}

impl<F: Fn(&BeliefSet, &Formula) -> BeliefSet> UpdateOracle for F {
    fn update(&self, mu: &BeliefSet, phi: &Formula) -> Result<BeliefSet, UpdateError> {
        Ok(self(mu, phi))
    }
}

/// `km_update` as an oracle.
#[derive(Debug, Clone)]
pub struct KmOracle(pub UpdateStructure);

impl UpdateOracle for KmOracle {
    fn update(&self, mu: &BeliefSet, phi: &Formula) -> Result<BeliefSet, UpdateError> {
        Ok(km_update(&self.0, mu, phi))
    }
}

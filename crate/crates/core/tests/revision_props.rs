mod common;

use belief_change::kernel::{Formula, World, WorldSet};
use belief_change::revision::oracles::Grove;
use belief_change::revision::{conditioning_bs, epistemic_bs, extract_ranking, grove_revise};
use common::{full_mask, random_ranking, rng, set_formula};
use proptest::prelude::*;

fn formulas(u: &belief_change::kernel::Universe, masks: &[u64]) -> Vec<Formula> {
    masks.iter().map(|m| set_formula(u, m & full_mask(u))).collect()
}

proptest! {
    #[test]
    fn extraction_round_trip(seed in any::<u64>(), atoms in 1usize..=2) {
        let rk = random_ranking(&mut rng(seed), atoms);
        let u = rk.universe();
        let back = extract_ranking(&Grove(rk.clone()), &rk.initial_belief(), u).unwrap();
        for m in 0..=full_mask(u) {
            let phi = set_formula(u, m);
            prop_assert_eq!(grove_revise(&back, &phi), grove_revise(&rk, &phi));
        }
    }

    /// With a jointly consistent history, beliefs are the least-rank worlds
    /// satisfying every observation.
    #[test]
    fn consistent_histories_condition(seed in any::<u64>(), atoms in 1usize..=3, masks in proptest::collection::vec(any::<u64>(), 1..5)) {
        let rk = random_ranking(&mut rng(seed), atoms);
        let u = rk.universe();
        let e = formulas(u, &masks);
        let joint: Vec<World> = u.worlds().iter().copied().filter(|w| e.iter().all(|f| f.eval(*w))).collect();
        prop_assume!(!joint.is_empty());
        let low = joint.iter().map(|w| rk.rank(*w)).min().unwrap();
        let expected: WorldSet = joint.iter().copied().filter(|w| rk.rank(*w) == low).collect();
        let got = epistemic_bs(&rk, &e);
        prop_assert_eq!(got.worlds(), &expected);
    }

    #[test]
    fn raw_conditioning_cannot_recover(seed in any::<u64>(), atoms in 1usize..=3, masks in proptest::collection::vec(any::<u64>(), 1..5), next in any::<u64>()) {
        let rk = random_ranking(&mut rng(seed), atoms);
        let u = rk.universe();
        let e = formulas(u, &masks);
        if !conditioning_bs(&rk, &e).is_consistent() {
            let mut longer = e.clone();
            longer.push(set_formula(u, next & full_mask(u)));
            prop_assert!(!conditioning_bs(&rk, &longer).is_consistent());
        }
    }

    #[test]
    fn r9_primed(seed in any::<u64>(), atoms in 1usize..=3, masks in proptest::collection::vec(any::<u64>(), 0..4), a in any::<u64>(), b in any::<u64>()) {
        let rk = random_ranking(&mut rng(seed), atoms);
        let u = rk.universe();
        let e = formulas(u, &masks);
        let (phi, psi) = (set_formula(u, a & full_mask(u)), set_formula(u, b & full_mask(u)));
        prop_assume!(u.is_consistent(&Formula::and(phi.clone(), psi.clone())));
        let mut two = e.clone();
        two.extend([phi.clone(), psi.clone()]);
        let mut one = e;
        one.push(Formula::and(phi, psi));
        prop_assert_eq!(epistemic_bs(&rk, &two), epistemic_bs(&rk, &one));
    }
}

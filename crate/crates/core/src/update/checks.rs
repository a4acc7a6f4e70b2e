use std::sync::Arc;

use rand::Rng;

use super::{UpdateError, UpdateOracle, UpdateStructure};
use crate::kernel::{char_formula, show_worlds, BeliefSet, Formula, Universe};
use crate::report::{Check, Report, Sampling};

/// Largest universe (in worlds) for `check_km`.
pub const KM_MAX_WORLDS: usize = 8;
/// U5/U6 are exhaustive up to this many worlds and sampled above.
const PAIRS_EXHAUSTIVE: usize = 4;

fn subset_formula(u: &Universe, mask: u64) -> Formula {
    let full = (1u64 << u.len()) - 1;
    match mask {
        0 => Formula::False,
        m if m == full => Formula::True,
        m => char_formula(&u.subset(m)),
    }
}

/// Evaluates U1–U8 for the operator over all world-set formulas. U7 ranges
/// over complete (singleton) μ.
pub fn check_km<O: UpdateOracle + ?Sized>(
    oracle: &O,
    universe: &Arc<Universe>,
    sampling: Sampling,
) -> Result<Report, UpdateError> {
    let u = universe;
    let n = u.len();
    if n > KM_MAX_WORLDS {
        return Err(UpdateError::UniverseTooLarge { size: n, max: KM_MAX_WORLDS });
    }
    let size = 1usize << n;
    let full = (size - 1) as u64;
    let show = |m: u64| show_worlds(&u.subset(m));
    let text = |m: u64| u.text(&subset_formula(u, m));
    let mut c: Vec<Check> = (1..=8).map(|i| Check::new(&format!("U{i}"))).collect();

    // res[μ * size + φ]
    let mut res = vec![0u64; size * size];
    for mu in 0..=full {
        let mu_bs = BeliefSet::new(u, u.subset(mu)).expect("subset of the universe");
        for phi in 0..=full {
            let out = oracle.update(&mu_bs, &subset_formula(u, phi))?;
            let m = u.mask_of(out.worlds());
            res[mu as usize * size + phi as usize] = m;
            let wit = |rel: &str, rhs: u64| format!("μ={} φ={}: μ⋄φ={} {rel} {}", show(mu), text(phi), show(m), show(rhs));
            c[0].case(m & !phi == 0, || wit("⊄ ⟦φ⟧ =", phi));
            if mu & !phi == 0 {
                c[1].case(m == mu, || wit("≠ μ =", mu));
            } else {
                c[1].cases += 1;
            }
            c[2].case((m == 0) == (mu == 0 || phi == 0), || {
                format!("μ={} φ={}: μ⋄φ={} but emptiness should match μ or φ", show(mu), text(phi), show(m))
            });
            let alt = Formula::not(char_formula(&u.subset(full & !phi)));
            let alt_m = u.mask_of(oracle.update(&mu_bs, &alt)?.worlds());
            c[3].case(alt_m == m, || {
                format!("μ={} φ={} φ′={}: μ⋄φ={} but μ⋄φ′={}", show(mu), text(phi), u.text(&alt), show(m), show(alt_m))
            });
        }
    }
    let r = |mu: u64, phi: u64| res[mu as usize * size + phi as usize];

    let mut u56 = |mu: u64, p1: u64, p2: u64| {
        let (a, b) = (r(mu, p1), r(mu, p1 & p2));
        c[4].case(a & p2 & !b == 0, || {
            format!(
                "μ={} φ={} ψ={}: (μ⋄φ)∧ψ={} ⊄ μ⋄(φ∧ψ)={}",
                show(mu),
                text(p1),
                text(p2),
                show(a & p2),
                show(b)
            )
        });
        let (x, y) = (r(mu, p1), r(mu, p2));
        if x & !p2 == 0 && y & !p1 == 0 {
            c[5].case(x == y, || {
                format!("μ={} φ1={} φ2={}: each result implies the other formula but μ⋄φ1={} μ⋄φ2={}", show(mu), text(p1), text(p2), show(x), show(y))
            });
        } else {
            c[5].cases += 1;
        }
    };
    if n <= PAIRS_EXHAUSTIVE {
        for mu in 0..=full {
            for p1 in 0..=full {
                for p2 in 0..=full {
                    u56(mu, p1, p2);
                }
            }
        }
    } else {
        let mut rng = sampling.rng();
        for _ in 0..sampling.samples {
            u56(rng.gen_range(0..=full), rng.gen_range(0..=full), rng.gen_range(0..=full));
        }
        let note = format!("{} sampled triples, seed {}", sampling.samples, sampling.seed);
        c[4].detail = Some(note.clone());
        c[5].detail = Some(note);
    }

    for i in 0..n {
        let mu = 1u64 << i;
        for p1 in 0..=full {
            for p2 in 0..=full {
                let (a, b, j) = (r(mu, p1), r(mu, p2), r(mu, p1 | p2));
                c[6].case(a & b & !j == 0, || {
                    format!(
                        "μ={} φ1={} φ2={}: (μ⋄φ1)∧(μ⋄φ2)={} ⊄ μ⋄(φ1∨φ2)={}",
                        show(mu),
                        text(p1),
                        text(p2),
                        show(a & b),
                        show(j)
                    )
                });
            }
        }
    }

    for m1 in 0..=full {
        for m2 in m1..=full {
            for phi in 0..=full {
                let (lhs, rhs) = (r(m1 | m2, phi), r(m1, phi) | r(m2, phi));
                c[7].case(lhs == rhs, || {
                    format!(
                        "μ1={} μ2={} φ={}: (μ1∨μ2)⋄φ={} but (μ1⋄φ)∨(μ2⋄φ)={}",
                        show(m1),
                        show(m2),
                        text(phi),
                        show(lhs),
                        show(rhs)
                    )
                });
            }
        }
    }

    let mut report = Report::new(format!("KM postulates over {n} worlds"));
    for chk in c {
        report.push(chk);
    }
    Ok(report)
}

/// Structural findings: zero-self-distance, positivity, zero-minimality,
/// poset-order, distinct-worlds and coverage. Never errors.
pub fn validate_update_structure(s: &UpdateStructure) -> Report {
    use super::DistanceFunction as D;
    let mut report = Report::new(format!("update structure ({} distance, {} worlds)", s.d.kind(), s.worlds.len()));
    let n = s.worlds.len();
    let is_zero = |i: usize, j: usize| match s.d.value(s.worlds[i], s.worlds[j]) {
        Ok(v) => s.d.is_zero(&v),
        Err(_) => false,
    };
    let mut zero = Check::new("zero-self-distance");
    let mut positive = Check::new("positivity");
    for i in 0..n {
        zero.case(is_zero(i, i), || {
            let v = s.d.value(s.worlds[i], s.worlds[i]).map(|v| v.to_string()).unwrap_or_default();
            format!("d({w}, {w}) = {v}", w = s.worlds[i])
        });
        for j in 0..n {
            if i != j {
                positive.case(!is_zero(i, j), || format!("d({}, {}) = 0", s.worlds[i], s.worlds[j]));
            }
        }
    }
    if let D::WeightedHamming(ws) = &s.d {
        for (k, w) in ws.iter().enumerate() {
            positive.case(*w > num_rational::Ratio::from_integer(0), || {
                format!("weight of {} is {w}", s.universe.vocab().atom(k))
            });
        }
    }
    report.push(zero);
    report.push(positive);

    let mut minimal = Check::new("zero-minimality");
    let mut order = Check::new("poset-order");
    if let D::Poset(p) = &s.d {
        let z = p.zero_index();
        for ((a, b), label) in p.values() {
            let l = p.label_index(label).expect("validated label");
            if l != z {
                minimal.case(p.lt(z, l), || format!("d({a}, {b}) = {label} is not above {}", p.zero()));
            }
        }
        match p.cyclic_label() {
            Some(l) => order.fail(format!("label {l} lies strictly below itself")),
            None => order.cases = p.declared_order().len() as u64,
        }
    } else {
        minimal = minimal.with_detail("numeric distances are nonnegative");
        order = Check::skipped("poset-order", "numeric distances are totally ordered");
    }
    report.push(minimal);
    report.push(order);

    let mut distinct = Check::new("distinct-worlds");
    for w in s.worlds.windows(2) {
        distinct.case(w[0] != w[1], || format!("{} listed twice", w[0]));
    }
    report.push(distinct);

    let mut coverage = Check::new("coverage");
    for w in s.universe.worlds() {
        coverage.case(s.index_of(*w).is_some(), || format!("theory model {w} is missing from the structure"));
    }
    report.push(coverage);
    report
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_rational::Ratio;

    use super::super::{global_min_update, km_update, DistanceFunction, KmOracle, PosetDistance};
    use super::*;

    #[test]
    fn km_passes_on_hamming() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let r = check_km(&KmOracle(s), &u, Sampling::default()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn global_minimization_breaks_u8() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let oracle = |mu: &BeliefSet, phi: &Formula| global_min_update(&s, mu, phi);
        let r = check_km(&oracle, &u, Sampling::default()).unwrap();
        assert!(r.check_failed("U8"), "{r}");
        assert!(r.check_passed("U1") && r.check_passed("U2"));
    }

    #[test]
    fn ignoring_mu_breaks_u2() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let oracle = |mu: &BeliefSet, phi: &Formula| BeliefSet::of_formula(mu.universe(), phi);
        let r = check_km(&oracle, &u, Sampling::default()).unwrap();
        assert!(r.check_failed("U2"), "{r}");
    }

    #[test]
    fn validation_findings() {
        let u = Universe::over(&["p", "q"]).unwrap();
        assert!(validate_update_structure(&UpdateStructure::hamming(&u).unwrap()).passed());

        let mut m = BTreeMap::new();
        for a in u.worlds() {
            for b in u.worlds() {
                m.insert((*a, *b), Ratio::from_integer(a.hamming(*b) as u64 + 1));
            }
        }
        let s = UpdateStructure::new(&u, DistanceFunction::Numeric(m)).unwrap();
        let r = validate_update_structure(&s);
        assert!(r.check_failed("zero-self-distance"), "{r}");

        let partial = UpdateStructure::with_worlds(&u, u.worlds()[1..].to_vec(), DistanceFunction::Hamming).unwrap();
        let r = validate_update_structure(&partial);
        assert!(r.check_failed("coverage"));
        assert!(r.get("coverage").unwrap().witness.as_deref().unwrap().contains("00"));
    }

    #[test]
    fn poset_structure_passes_km_and_validation() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let labels: Vec<String> = ["0", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let order = [("0", "a"), ("0", "b"), ("a", "c"), ("0", "c")].map(|(x, y)| (x.to_string(), y.to_string()));
        let mut values = BTreeMap::new();
        for a in u.worlds() {
            for b in u.worlds() {
                let l = match a.hamming(*b) {
                    0 => "0",
                    1 if a.get(0) != b.get(0) => "a",
                    1 => "b",
                    _ => "c",
                };
                values.insert((*a, *b), l.to_string());
            }
        }
        let d = DistanceFunction::Poset(PosetDistance::new(labels, "0", &order, values).unwrap());
        let s = UpdateStructure::new(&u, d).unwrap();
        assert!(validate_update_structure(&s).passed());
        let r = check_km(&KmOracle(s.clone()), &u, Sampling::default()).unwrap();
        assert!(r.passed(), "{r}");
        // From 00, 10 (distance a) and 01 (distance b) are incomparable, so both survive.
        let mu = BeliefSet::new(&u, [u.world("00").unwrap()].into()).unwrap();
        assert_eq!(km_update(&s, &mu, &u.parse("p | q").unwrap()).to_string(), "{01, 10}");
    }
}

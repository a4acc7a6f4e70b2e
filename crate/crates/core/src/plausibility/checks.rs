use std::fmt::Display;

use super::{ComparisonResult, Order, Plausibility, PlausibilityError};
use crate::report::{Check, Report};

/// Largest carrier for the A1–A3 checker (4^8 disjoint triples).
pub const QUALITATIVE_MAX: usize = 8;
/// Largest carrier for the KLM checker (32^3 set triples).
pub const KLM_MAX: usize = 5;

fn show<T: Display>(items: &[T], mask: u64) -> String {
    let parts: Vec<String> = (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i].to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_cmp(c: ComparisonResult) -> &'static str {
    match c.order {
        Order::Lt => "<",
        Order::Eq => "=",
        Order::Gt => ">",
        Order::Incomparable => "incomparable to",
    }
}

/// Exhaustively tests A1 over nested pairs and A2/A3 over all assignments of
/// elements to (A, B, C, none).
pub fn check_qualitative<T: Ord + Clone + Display, M: Plausibility<T> + ?Sized>(
    m: &M,
    universe: &[T],
) -> Result<Report, PlausibilityError> {
    let n = universe.len();
    if n > QUALITATIVE_MAX {
        return Err(PlausibilityError::CarrierTooLarge { size: n, max: QUALITATIVE_MAX });
    }
    let cmp = m.mask_comparator(universe);
    let full = (1u64 << n) - 1;
    let mut report = Report::new(format!("qualitative plausibility over {n} elements"));

    let mut a1 = Check::new("A1");
    for b in 0..=full {
        // Every submask a of b.
        let mut a = b;
        loop {
            let c = cmp(a, b);
            a1.case(matches!(c.order, Order::Lt | Order::Eq), || {
                format!("A={} ⊆ B={} but Pl(A) {} Pl(B)", show(universe, a), show(universe, b), show_cmp(c))
            });
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
    }
    report.push(a1);

    let mut a2 = Check::new("A2");
    let mut a3 = Check::new("A3");
    let triples = 4u64.pow(n as u32);
    for code in 0..triples {
        let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
        let mut x = code;
        for i in 0..n {
            match x & 3 {
                1 => a |= 1 << i,
                2 => b |= 1 << i,
                3 => c |= 1 << i,
                _ => {}
            }
            x >>= 2;
        }
        if cmp(a | b, c).gt() && cmp(a | c, b).gt() {
            a2.case(cmp(a, b | c).gt(), || {
                format!(
                    "A={} B={} C={}: Pl(A∪B) > Pl(C) and Pl(A∪C) > Pl(B) but not Pl(A) > Pl(B∪C)",
                    show(universe, a),
                    show(universe, b),
                    show(universe, c)
                )
            });
        } else {
            a2.cases += 1;
        }
        // A3 over the (possibly overlapping) pair A∪C, B∪C.
        let (p, q) = (a | c, b | c);
        let bottom = |s: u64| cmp(s, 0).order == Order::Eq;
        if bottom(p) && bottom(q) {
            a3.case(bottom(p | q), || {
                format!("Pl({}) = Pl({}) = ⊥ but their union is not ⊥", show(universe, p), show(universe, q))
            });
        } else {
            a3.cases += 1;
        }
    }
    report.push(a2);
    report.push(a3);
    Ok(report)
}

/// Checks the KLM properties of the conditional induced by `m` over all
/// world-set instantiations. Rational monotonicity is required for ranked
/// measures and reported as informational otherwise.
pub fn check_klm<T: Ord + Clone + Display, M: Plausibility<T> + ?Sized>(
    m: &M,
    universe: &[T],
) -> Result<Report, PlausibilityError> {
    let ranked = m.is_ranked();
    let n = universe.len();
    if n > KLM_MAX {
        return Err(PlausibilityError::CarrierTooLarge { size: n, max: KLM_MAX });
    }
    let cmp = m.mask_comparator(universe);
    let size = 1usize << n;
    let full = (size - 1) as u64;
    // cond[x][y]: x → y.
    let mut cond = vec![vec![false; size]; size];
    for (x, row) in cond.iter_mut().enumerate() {
        let x = x as u64;
        let bottom = cmp(x, 0).order == Order::Eq;
        for (y, cell) in row.iter_mut().enumerate() {
            let y = y as u64;
            *cell = bottom || cmp(x & y, x & !y).gt();
        }
    }
    let c = |x: u64, y: u64| cond[x as usize][y as usize];
    let s = |x: u64| show(universe, x);

    let mut report = Report::new(format!("KLM properties over {n} elements"));
    let mut refl = Check::new("REF");
    let mut lle = Check::new("LLE").with_detail("equivalent antecedents denote the same world set");
    lle.cases = (size * size) as u64;
    let mut rw = Check::new("RW");
    let mut and = Check::new("AND");
    let mut or = Check::new("OR");
    let mut cm = Check::new("CM");
    let mut rm = Check::new("RM");
    if !ranked {
        rm = rm.informational().with_detail("not required for partial orders");
    }

    for x in 0..=full {
        refl.case(c(x, x), || format!("{} → {} fails", s(x), s(x)));
        for y in 0..=full {
            for z in 0..=full {
                if c(x, y) && y & !z == 0 {
                    rw.case(c(x, z), || format!("{} → {} and {} ⊆ {} but not {} → {}", s(x), s(y), s(y), s(z), s(x), s(z)));
                } else {
                    rw.cases += 1;
                }
                if c(x, y) && c(x, z) {
                    and.case(c(x, y & z), || {
                        format!("{} → {} and {} → {} but not {} → {}", s(x), s(y), s(x), s(z), s(x), s(y & z))
                    });
                    cm.case(c(x & y, z), || {
                        format!("{} → {} and {} → {} but not {} → {}", s(x), s(y), s(x), s(z), s(x & y), s(z))
                    });
                } else {
                    and.cases += 1;
                    cm.cases += 1;
                }
                // OR with antecedents x, z and consequent y.
                if c(x, y) && c(z, y) {
                    or.case(c(x | z, y), || {
                        format!("{} → {} and {} → {} but not {} → {}", s(x), s(y), s(z), s(y), s(x | z), s(y))
                    });
                } else {
                    or.cases += 1;
                }
                if c(x, y) && !c(x, full & !z) {
                    rm.case(c(x & z, y), || {
                        format!(
                            "{} → {} and not {} → {} but not {} → {}",
                            s(x),
                            s(y),
                            s(x),
                            s(full & !z),
                            s(x & z),
                            s(y)
                        )
                    });
                } else {
                    rm.cases += 1;
                }
            }
        }
    }
    for chk in [refl, lle, rw, and, or, cm, rm] {
        report.push(chk);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::plausibility::{PreferenceMeasure, RankedMeasure};

    /// Pl(A) = |A|: additive, so it breaks the A2 "max" rule.
    struct Counting(Vec<u32>);

    impl Plausibility<u32> for Counting {
        fn carrier(&self) -> Vec<u32> {
            self.0.clone()
        }

        fn compare(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> ComparisonResult {
            let order = match a.len().cmp(&b.len()) {
                std::cmp::Ordering::Less => Order::Lt,
                std::cmp::Ordering::Equal => Order::Eq,
                std::cmp::Ordering::Greater => Order::Gt,
            };
            ComparisonResult { order, left_bottom: a.is_empty(), right_bottom: b.is_empty() }
        }

        fn is_bottom(&self, a: &BTreeSet<u32>) -> bool {
            a.is_empty()
        }
    }

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ranked_measure_is_qualitative_and_klm() {
        let m = RankedMeasure::from_finite([("11".to_string(), 0), ("10".into(), 1), ("01".into(), 1), ("00".into(), 2)])
            .unwrap();
        let u = labels(&["00", "01", "10", "11"]);
        assert!(check_qualitative(&m, &u).unwrap().passed());
        let klm = check_klm(&m, &u).unwrap();
        assert!(klm.passed(), "{klm}");
        assert!(klm.check_passed("RM"));
    }

    #[test]
    fn counting_measure_breaks_a2() {
        let r = check_qualitative(&Counting(vec![1, 2, 3]), &[1, 2, 3]).unwrap();
        assert!(r.check_passed("A1"));
        assert!(r.check_failed("A2"), "{r}");
    }

    #[test]
    fn rational_monotonicity_on_partial_orders() {
        let e = |x: &str, y: &str| (x.to_string(), y.to_string());
        let u = labels(&["a", "b", "c", "d"]);
        let diamond = PreferenceMeasure::new(u.clone(), &[e("a", "b"), e("a", "c"), e("b", "d"), e("c", "d")]).unwrap();
        let r = check_klm(&diamond, &u).unwrap();
        // The full diamond is layered (a | b c | d), hence behaves like a ranking.
        assert!(r.passed() && r.check_passed("RM"), "{r}");
        let broken = PreferenceMeasure::new(u.clone(), &[e("a", "b"), e("a", "c"), e("b", "d")]).unwrap();
        let r = check_klm(&broken, &u).unwrap();
        assert!(r.passed());
        assert!(r.check_failed("RM"), "{r}");
        assert!(check_qualitative(&broken, &u).unwrap().passed());
    }

    #[test]
    fn bounds() {
        let u: Vec<u32> = (0..9).collect();
        assert!(matches!(check_qualitative(&Counting(u.clone()), &u), Err(PlausibilityError::CarrierTooLarge { .. })));
        assert!(check_klm(&Counting(u.clone()), &u[..6]).is_err());
    }
}

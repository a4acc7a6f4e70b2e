use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use super::{EpistemicOracle, RevisionError, RevisionOracle};
use crate::kernel::{char_formula, show_worlds, BeliefSet, Formula, Universe};
use crate::report::{Check, Report, Sampling};

/// Largest universe (in worlds) for `check_agm`.
pub const AGM_MAX_WORLDS: usize = 8;
/// R7/R8 pairs are exhaustive up to this many worlds and sampled above.
const PAIRS_EXHAUSTIVE: usize = 4;
pub const PRIMED_MAX_WORLDS: usize = 4;
pub const PRIMED_MAX_DEPTH: usize = 3;

/// Canonical formula for a world subset: `true`, `false` or the DNF.
pub(crate) fn subset_formula(u: &Universe, mask: u64) -> Formula {
    let full = full_mask(u);
    if mask == full {
        Formula::True
    } else if mask == 0 {
        Formula::False
    } else {
        char_formula(&u.subset(mask))
    }
}

/// A second spelling of the same subset: ¬char(U∖S).
fn alt_formula(u: &Universe, mask: u64) -> Formula {
    Formula::not(char_formula(&u.subset(full_mask(u) & !mask)))
}

fn full_mask(u: &Universe) -> u64 {
    (1u64 << u.len()) - 1
}

fn show(u: &Universe, mask: u64) -> String {
    show_worlds(&u.subset(mask))
}

/// Converts an oracle answer to a mask, or explains why it is not a belief set over `u`.
fn as_mask(u: &Arc<Universe>, b: &BeliefSet) -> Result<u64, String> {
    if b.universe().vocab() != u.vocab() {
        return Err(format!("result {b} is over a different vocabulary"));
    }
    if let Some(w) = b.worlds().iter().find(|w| !u.contains(**w)) {
        return Err(format!("result contains {w}, which violates the theory"));
    }
    Ok(u.mask_of(b.worlds()))
}

fn pairs(n: usize, full: u64, sampling: Sampling) -> (Vec<(u64, u64)>, bool) {
    if n <= PAIRS_EXHAUSTIVE {
        let all = (0..=full).flat_map(|s| (0..=full).map(move |t| (s, t))).collect();
        (all, true)
    } else {
        let mut rng = sampling.rng();
        let all = (0..sampling.samples).map(|_| (rng.gen_range(0..=full), rng.gen_range(0..=full))).collect();
        (all, false)
    }
}

/// Evaluates R1–R8 for the operator at K over every world-set formula.
pub fn check_agm<O: RevisionOracle + ?Sized>(
    oracle: &O,
    universe: &Arc<Universe>,
    k: &BeliefSet,
    sampling: Sampling,
) -> Result<Report, RevisionError> {
    let u = universe;
    let n = u.len();
    if n > AGM_MAX_WORLDS {
        return Err(RevisionError::UniverseTooLarge { size: n, max: AGM_MAX_WORLDS });
    }
    let full = full_mask(u);
    let km = u.mask_of(k.worlds());
    let mut report = Report::new(format!("AGM postulates at K={}", show(u, km)));
    let mut r = [(); 8].map(|_| Check::new(""));
    for (i, c) in r.iter_mut().enumerate() {
        c.name = format!("R{}", i + 1);
    }
    let phi_text = |s: u64| u.text(&subset_formula(u, s));

    // Descending so that the first witness uses the weakest formula.
    let mut res = vec![0u64; (full + 1) as usize];
    for s in (0..=full).rev() {
        let phi = subset_formula(u, s);
        let out = oracle.revise(k, &phi)?;
        let m = match as_mask(u, &out) {
            Ok(m) => {
                r[0].cases += 1;
                m
            }
            Err(why) => {
                r[0].fail(format!("K={} φ={}: {why}", show(u, km), phi_text(s)));
                u.mask_of(&out.worlds().iter().copied().filter(|w| u.contains(*w)).collect())
            }
        };
        res[s as usize] = m;
        let wit = |rel: &str, rhs: u64| {
            format!("K={} φ={}: K∘φ={} {rel} {}", show(u, km), phi_text(s), show(u, m), show(u, rhs))
        };
        r[1].case(m & !s == 0, || wit("⊄ ⟦φ⟧ =", s));
        r[2].case(km & s & !m == 0, || wit("⊉ K∩⟦φ⟧ =", km & s));
        if km & s != 0 {
            r[3].case(m & !(km & s) == 0, || wit("⊄ K∩⟦φ⟧ =", km & s));
        } else {
            r[3].cases += 1;
        }
        r[4].case((m == 0) == (s == 0), || wit("is empty exactly when ⟦φ⟧ is not; ⟦φ⟧ =", s));
        let alt = alt_formula(u, s);
        let alt_out = oracle.revise(k, &alt)?;
        let alt_m = u.mask_of(alt_out.worlds());
        r[5].case(alt_m == m, || {
            format!(
                "K={} φ={} ψ={}: K∘φ={} but K∘ψ={}",
                show(u, km),
                phi_text(s),
                u.text(&alt),
                show(u, m),
                show(u, alt_m)
            )
        });
    }

    let (pairs, exhaustive) = pairs(n, full, sampling);
    for (s, t) in pairs {
        let (rs, rst) = (res[s as usize], res[(s & t) as usize]);
        let wit = |rel: &str| {
            format!(
                "K={} φ={} ψ={}: K∘(φ∧ψ)={} {rel} (K∘φ)∩⟦ψ⟧={}",
                show(u, km),
                phi_text(s),
                phi_text(t),
                show(u, rst),
                show(u, rs & t)
            )
        };
        r[6].case(rs & t & !rst == 0, || wit("⊉"));
        if rs & t != 0 {
            r[7].case(rst & !(rs & t) == 0, || wit("⊄"));
        } else {
            r[7].cases += 1;
        }
    }
    if !exhaustive {
        let note = format!("{} sampled formula pairs, seed {}", sampling.samples, sampling.seed);
        r[6].detail = Some(note.clone());
        r[7].detail = Some(note);
    }
    for c in r {
        report.push(c);
    }
    Ok(report)
}

/// Evaluates R1′–R9′ over every sequence of world-set formulas whose
/// extensions stay within `depth` observations.
pub fn check_agm_primed<O: EpistemicOracle + ?Sized>(
    oracle: &O,
    universe: &Arc<Universe>,
    depth: usize,
) -> Result<Report, RevisionError> {
    let u = universe;
    let n = u.len();
    if n > PRIMED_MAX_WORLDS {
        return Err(RevisionError::UniverseTooLarge { size: n, max: PRIMED_MAX_WORLDS });
    }
    if depth > PRIMED_MAX_DEPTH {
        return Err(RevisionError::DepthTooLarge(depth));
    }
    let full = full_mask(u);
    let formulas: Vec<Formula> = (0..=full).map(|s| subset_formula(u, s)).collect();

    // Sequences of subset indices, shortest first.
    let mut seqs: Vec<Vec<u64>> = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..depth {
        level = level.iter().flat_map(|e: &Vec<u64>| (0..=full).map(move |s| [e.clone(), vec![s]].concat())).collect();
        seqs.extend(level.iter().cloned());
    }
    let mut bs: HashMap<Vec<u64>, u64> = HashMap::with_capacity(seqs.len());
    let mut r1 = Check::new("R1'");
    let show_seq = |e: &[u64]| {
        let parts: Vec<String> = e.iter().map(|s| u.text(&formulas[*s as usize])).collect();
        format!("⟨{}⟩", parts.join(", "))
    };
    for e in &seqs {
        let fs: Vec<Formula> = e.iter().map(|s| formulas[*s as usize].clone()).collect();
        let out = oracle.belief_set(&fs)?;
        let m = match as_mask(u, &out) {
            Ok(m) => {
                r1.cases += 1;
                m
            }
            Err(why) => {
                r1.fail(format!("E={}: {why}", show_seq(e)));
                u.mask_of(&out.worlds().iter().copied().filter(|w| u.contains(*w)).collect())
            }
        };
        bs.insert(e.clone(), m);
    }
    let get = |e: &[u64]| bs[e];
    let ext = |e: &[u64], s: u64| [e, &[s]].concat();

    let names = ["R2'", "R3'", "R4'", "R5'", "R6'", "R7'", "R8'", "R9'"];
    let mut c: Vec<Check> = names.iter().map(|n| Check::new(n)).collect();
    for e in seqs.iter().filter(|e| e.len() < depth) {
        let k = get(e);
        for s in 0..=full {
            let m = get(&ext(e, s));
            let wit = |rel: &str, rhs: u64| {
                format!(
                    "E={} φ={}: BS(E)={} BS(E∘φ)={} {rel} {}",
                    show_seq(e),
                    u.text(&formulas[s as usize]),
                    show(u, k),
                    show(u, m),
                    show(u, rhs)
                )
            };
            c[0].case(m & !s == 0, || wit("⊄ ⟦φ⟧ =", s));
            c[1].case(k & s & !m == 0, || wit("⊉ BS(E)∩⟦φ⟧ =", k & s));
            if k & s != 0 {
                c[2].case(m & !(k & s) == 0, || wit("⊄ BS(E)∩⟦φ⟧ =", k & s));
            } else {
                c[2].cases += 1;
            }
            c[3].case((m == 0) == (s == 0), || wit("is empty exactly when ⟦φ⟧ is not; ⟦φ⟧ =", s));
            let alt = alt_formula(u, s);
            let mut fs: Vec<Formula> = e.iter().map(|x| formulas[*x as usize].clone()).collect();
            fs.push(alt.clone());
            let alt_m = u.mask_of(oracle.belief_set(&fs)?.worlds());
            c[4].case(alt_m == m, || {
                format!(
                    "E={} φ={} ψ={}: BS(E∘φ)={} but BS(E∘ψ)={}",
                    show_seq(e),
                    u.text(&formulas[s as usize]),
                    u.text(&alt),
                    show(u, m),
                    show(u, alt_m)
                )
            });
            for t in 0..=full {
                let rst = get(&ext(e, s & t));
                let wit = |rel: &str| {
                    format!(
                        "E={} φ={} ψ={}: BS(E∘φ∧ψ)={} {rel} BS(E∘φ)∩⟦ψ⟧={}",
                        show_seq(e),
                        u.text(&formulas[s as usize]),
                        u.text(&formulas[t as usize]),
                        show(u, rst),
                        show(u, m & t)
                    )
                };
                c[5].case(m & t & !rst == 0, || wit("⊉"));
                if m & t != 0 {
                    c[6].case(rst & !(m & t) == 0, || wit("⊄"));
                } else {
                    c[6].cases += 1;
                }
                if e.len() + 2 <= depth && s & t != 0 {
                    let seq = get(&[e.as_slice(), &[s, t]].concat());
                    c[7].case(seq == rst, || {
                        format!(
                            "E={} φ={} ψ={}: BS(E∘φ∘ψ)={} but BS(E∘φ∧ψ)={}",
                            show_seq(e),
                            u.text(&formulas[s as usize]),
                            u.text(&formulas[t as usize]),
                            show(u, seq),
                            show(u, rst)
                        )
                    });
                }
            }
        }
    }
    let mut report = Report::new(format!("primed AGM postulates, sequences up to length {depth}"));
    report.push(r1);
    for chk in c {
        report.push(chk);
    }
    Ok(report)
}

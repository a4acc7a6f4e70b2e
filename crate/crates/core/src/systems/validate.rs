//! Validators for the belief-change-system conditions, the revision and
//! update conditions, and the conditioning rule across time.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::Rng;

use super::{CellMeasure, ObsId, RunPrior, SystemModel};
use crate::kernel::{char_formula, Formula, Universe, World, WorldSet};
use crate::plausibility::{compare_ranks, ComparisonResult, Order, Rank};
use crate::report::{Check, Report, Sampling};

/// Subset pairs of a cell are enumerated exhaustively up to this size.
const CELL_EXHAUSTIVE: usize = 12;
/// World-set formulas are enumerated exhaustively up to this many worlds.
const FORMULAS_EXHAUSTIVE: usize = 8;
/// Upper bound on exhaustive formula-pair work for REV4.
const REV4_BUDGET: usize = 4_000_000;

pub(crate) fn set_text(u: &Universe, ws: &WorldSet) -> String {
    if ws.len() == u.len() && !ws.is_empty() {
        "true".into()
    } else if ws.is_empty() {
        "false".into()
    } else {
        u.text(&char_formula(ws))
    }
}

pub(crate) fn seq_text(u: &Universe, obs: &[Formula]) -> String {
    let parts: Vec<String> = obs.iter().map(|f| u.text(f)).collect();
    format!("⟨{}⟩", parts.join(", "))
}

fn runs_text(rs: &[usize]) -> String {
    let parts: Vec<String> = rs.iter().map(|r| format!("r{r}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn order_text(o: Order) -> &'static str {
    match o {
        Order::Lt => "<",
        Order::Eq => "=",
        Order::Gt => ">",
        Order::Incomparable => "incomparable",
    }
}

fn random_subset(rng: &mut impl Rng, items: &[usize]) -> Vec<usize> {
    items.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Compares two measures on subset pairs of `items`. Returns the first
/// disagreement as (A, B, order under `left`, order under `right`).
fn disagreement(
    items: &[usize],
    left: &CellMeasure<'_>,
    right: &CellMeasure<'_>,
    budget: usize,
    rng: &mut impl Rng,
) -> (u64, Option<(Vec<usize>, Vec<usize>, Order, Order)>) {
    if items.len() <= CELL_EXHAUSTIVE {
        let (cl, cr) = (left.mask_comparator(items), right.mask_comparator(items));
        let full = (1u64 << items.len()) - 1;
        let mut cases = 0;
        for a in 0..=full {
            for b in 0..=full {
                cases += 1;
                let (x, y) = (cl(a, b).order, cr(a, b).order);
                if x != y {
                    let pick = |m: u64| items.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, r)| *r).collect();
                    return (cases, Some((pick(a), pick(b), x, y)));
                }
            }
        }
        return (cases, None);
    }
    for k in 0..budget {
        let (a, b) = (random_subset(rng, items), random_subset(rng, items));
        let (x, y) = (left.compare(&a, &b).order, right.compare(&a, &b).order);
        if x != y {
            return (k as u64 + 1, Some((a, b, x, y)));
        }
    }
    (budget as u64, None)
}

/// Conditioning across time: for every local state at m+1 and subsets A, B of
/// its points, the comparison there matches the comparison of prev(A) and
/// prev(B) at m. Exhaustive for cells of at most 12 points, sampled above.
pub fn check_prev_rule(sys: &SystemModel, sampling: Sampling) -> Report {
    let u = sys.universe();
    let mut check = Check::new("prev-rule");
    let mut rng = sampling.rng();
    let cell_count: usize = (1..=sys.horizon()).map(|m| sys.cells_at(m).len()).sum();
    let budget = (sampling.samples / cell_count.max(1)).max(20);
    let mut sampled = false;
    for m in 0..sys.horizon() {
        let mut keys: Vec<&Vec<ObsId>> = sys.cells_at(m + 1).keys().collect();
        keys.sort();
        for key in keys {
            let runs = sys.cell(key);
            sampled |= runs.len() > CELL_EXHAUSTIVE;
            let (child, parent) = (sys.cell_measure(key), sys.cell_measure(&key[..m]));
            let (cases, bad) = disagreement(runs, &child, &parent, budget, &mut rng);
            check.cases += cases;
            if let Some((a, b, x, y)) = bad {
                let state: Vec<Formula> = key.iter().map(|&i| sys.obs_formula(i).clone()).collect();
                check.fail(format!(
                    "point (r{}, {}) with local state {}: A={} B={} compare {} at time {} but prev(A), prev(B) compare {} at time {m}",
                    runs[0],
                    m + 1,
                    seq_text(u, &state),
                    runs_text(&a),
                    runs_text(&b),
                    order_text(x),
                    m + 1,
                    order_text(y)
                ));
                check.cases -= 1;
            }
        }
    }
    if sampled {
        check.detail = Some(format!("cells above {CELL_EXHAUSTIVE} points sampled, seed {}", sampling.seed));
    }
    let mut report = Report::new(format!("conditioning rule over {} points", sys.point_count()));
    report.push(check);
    report
}

/// BCS1–BCS5. BCS2 and BCS3 hold by construction of the model and are
/// reported with their case counts.
pub fn validate_bcs(sys: &SystemModel) -> Report {
    let u = sys.universe();
    let t = sys.horizon();
    let mut bcs1 = Check::new("BCS1");
    let mut bcs2 = Check::new("BCS2").with_detail("local state at (r, m) is the observation prefix o1..om");
    let mut bcs3 = Check::new("BCS3").with_detail("learn(φ) holds exactly where the observation is φ");
    let mut bcs4 = Check::new("BCS4");
    for (i, r) in sys.runs().iter().enumerate() {
        for (m, s) in r.env.iter().enumerate() {
            bcs1.case(u.contains(s.world), || format!("(r{i}, {m}): world {} violates the background theory", s.world));
        }
        bcs2.case(r.obs.len() == t, || format!("r{i} has {} observations", r.obs.len()));
        for m in 1..=t {
            bcs3.case(sys.obs_formula(sys.obs_id(i, m)) == &r.obs[m - 1], || format!("(r{i}, {m}): interned observation mismatch"));
            bcs4.case(r.obs[m - 1].eval(r.world(m)), || {
                format!("(r{i}, {m}): observation {} is false at {}", u.text(&r.obs[m - 1]), r.world(m))
            });
        }
    }
    let mut bcs5 = Check::new("BCS5");
    let sampling = Sampling::default();
    let mut rng = sampling.rng();
    let prior = CellMeasure::Prior(sys.prior());
    for (key, measure) in &sys.overrides {
        let runs = sys.cell(key);
        let (cases, bad) = disagreement(runs, &CellMeasure::Override(measure), &prior, 200, &mut rng);
        bcs5.cases += cases;
        if let Some((a, b, x, y)) = bad {
            let state: Vec<Formula> = key.iter().map(|&i| sys.obs_formula(i).clone()).collect();
            bcs5.fail(format!(
                "local state {}: A={} B={} compare {} but the prior compares them {}",
                seq_text(u, &state),
                runs_text(&a),
                runs_text(&b),
                order_text(x),
                order_text(y)
            ));
        }
    }
    if sys.overrides.is_empty() {
        bcs5 = bcs5.with_detail("every cell uses the prior conditioned on it");
    }
    let mut report = Report::new(format!("belief change system conditions ({} runs, horizon {t})", sys.runs().len()));
    for c in [bcs1, bcs2, bcs3, bcs4, bcs5] {
        report.push(c);
    }
    report
}

/// Evaluates the prior on unions of per-world run groups indexed by bitmask.
enum GroupEval<'a> {
    Ranked(Vec<Rank>),
    Generic(&'a RunPrior, Vec<Vec<usize>>),
}

impl GroupEval<'_> {
    fn new(prior: &RunPrior, groups: Vec<Vec<usize>>) -> GroupEval<'_> {
        match prior {
            RunPrior::Ranked(ranks) => {
                GroupEval::Ranked(groups.iter().map(|g| g.iter().map(|&r| ranks[r]).min().unwrap_or(Rank::Infinite)).collect())
            }
            _ => GroupEval::Generic(prior, groups),
        }
    }

    fn union(groups: &[Vec<usize>], mask: u64) -> Vec<usize> {
        let mut out: Vec<usize> = (0..groups.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| groups[i].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn compare(&self, a: u64, b: u64) -> ComparisonResult {
        match self {
            GroupEval::Ranked(ranks) => {
                let rank = |m: u64| (0..ranks.len()).filter(|i| m >> i & 1 == 1).map(|i| ranks[i]).min().unwrap_or(Rank::Infinite);
                compare_ranks(rank(a), rank(b))
            }
            GroupEval::Generic(p, groups) => p.compare(&Self::union(groups, a), &Self::union(groups, b)),
        }
    }

    fn is_bottom(&self, a: u64) -> bool {
        self.compare(a, 0).order == Order::Eq
    }
}

/// A candidate observation sequence for REV4: its formulas and, when
/// attainable, its interned key.
struct ObsSeq {
    formulas: Vec<Formula>,
    key: Option<Vec<ObsId>>,
}

fn rev4_sequences(sys: &SystemModel, rng: &mut impl Rng, limit: usize) -> Vec<ObsSeq> {
    let u = sys.universe();
    let mut out = Vec::new();
    let mut keys: Vec<Vec<ObsId>> = (0..=sys.horizon()).flat_map(|m| sys.cells_at(m).keys().cloned()).collect();
    keys.sort();
    if keys.len() > limit {
        let mut picked: Vec<Vec<ObsId>> = (0..limit).map(|_| keys[rng.gen_range(0..keys.len())].clone()).collect();
        picked.sort();
        picked.dedup();
        keys = picked;
    }
    for k in keys {
        out.push(ObsSeq { formulas: k.iter().map(|&i| sys.obs_formula(i).clone()).collect(), key: Some(k) });
    }
    if sys.horizon() == 0 {
        return out;
    }
    // Observations of a class the alphabet misses: literals first, then every
    // world set of a small universe.
    let classes: BTreeSet<WorldSet> = sys.alphabet().iter().map(|f| u.models(f)).collect();
    let mut extra: Vec<Formula> = Vec::new();
    for i in 0..u.vocab().len() {
        for lit in [Formula::atom(i), Formula::not(Formula::atom(i))] {
            let ms = u.models(&lit);
            if !ms.is_empty() && !classes.contains(&ms) {
                extra.push(lit);
            }
        }
    }
    if u.len() <= FORMULAS_EXHAUSTIVE {
        for mask in (1..(1u64 << u.len())).rev() {
            let ms = u.subset(mask);
            if !classes.contains(&ms) {
                extra.push(char_formula(&ms));
            }
        }
    }
    let mut seen = HashSet::new();
    for f in extra {
        if seen.insert(u.models(&f)) {
            let key = sys.key_of(std::slice::from_ref(&f)).filter(|k| !sys.cell(k).is_empty());
            out.push(ObsSeq { formulas: vec![f], key });
        }
    }
    out
}

/// REV1, REV2 (totality), REV3 and REV4/REV4′ with φ, ψ ranging over sets of
/// initial worlds (exhaustively up to 8 such worlds, sampled above) and the
/// observation sequences of the system plus one unattainable representative
/// of each consistent observation class the alphabet misses.
pub fn validate_rev(sys: &SystemModel, sampling: Sampling) -> Report {
    let u = sys.universe();
    let n = sys.runs().len();
    let mut report = Report::new(format!("revision conditions ({n} runs, horizon {})", sys.horizon()));

    let mut rev1 = Check::new("REV1");
    for (i, r) in sys.runs().iter().enumerate() {
        rev1.case(r.env.iter().all(|s| s.world == r.world(0)), || {
            let ws: Vec<String> = r.env.iter().map(|s| s.world.to_string()).collect();
            format!("r{i} changes its world: {}", ws.join(","))
        });
    }
    report.push(rev1);

    let mut rev2 = Check::new("REV2");
    let prior = sys.prior();
    let mut rng = sampling.rng();
    if prior.is_ranked() {
        rev2.cases = n as u64;
        rev2 = rev2.with_detail("ranked prior");
    } else {
        // A strict partial order is a ranking iff incomparability is transitive.
        let incomparable = |a: usize, b: usize| !prior.precedes(a, b) && !prior.precedes(b, a);
        let mut triple = |a: usize, b: usize, c: usize| {
            rev2.case(!(incomparable(a, b) && incomparable(b, c)) || incomparable(a, c), || {
                format!("r{a} ~ r{b} and r{b} ~ r{c} but r{a}, r{c} are strictly ordered: the {} prior is not total", prior.kind())
            });
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        triple(a, b, c);
                    }
                }
            }
        } else if n > 0 {
            for _ in 0..sampling.samples {
                triple(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            }
        }
    }
    report.push(rev2);

    let mut by_world: BTreeMap<World, Vec<usize>> = BTreeMap::new();
    for (i, r) in sys.runs().iter().enumerate() {
        by_world.entry(r.world(0)).or_default().push(i);
    }
    let mut rev3 = Check::new("REV3").with_detail("complete formulas; the rest follow by monotonicity");
    for &w in u.worlds() {
        let runs = by_world.get(&w).map(|v| v.as_slice()).unwrap_or(&[]);
        rev3.case(!prior.is_bottom(runs), || format!("Pl(R[{}]) = ⊥", set_text(u, &[w].into())));
    }
    report.push(rev3);

    let w0: Vec<World> = by_world.keys().copied().collect();
    if w0.len() > 64 {
        report.push(Check::skipped("REV4", "more than 64 initial worlds"));
        report.push(Check::skipped("REV4'", "more than 64 initial worlds"));
        return report;
    }
    let mut rev4 = Check::new("REV4");
    let mut rev4p = Check::new("REV4'");
    let seqs = rev4_sequences(sys, &mut rng, 256);
    let full = if w0.len() == 64 { u64::MAX } else { (1u64 << w0.len()) - 1 };
    let exhaustive = w0.len() <= FORMULAS_EXHAUSTIVE && seqs.len() * (1usize << (2 * w0.len())) <= REV4_BUDGET;
    let per_seq = (sampling.samples / seqs.len().max(1)).max(50);
    let show = |m: u64| -> String {
        let ws: WorldSet = w0.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, w)| *w).collect();
        set_text(u, &ws)
    };
    for seq in &seqs {
        let conj = Formula::conjunction(seq.formulas.iter().cloned());
        let observed: Vec<Vec<usize>> = w0
            .iter()
            .map(|w| match &seq.key {
                Some(k) => sys.cell(k).iter().copied().filter(|&r| sys.run(r).world(0) == *w).collect(),
                None => Vec::new(),
            })
            .collect();
        let joined: Vec<Vec<usize>> =
            w0.iter().map(|w| if conj.eval(*w) { by_world[w].clone() } else { Vec::new() }).collect();
        let (lhs, rhs) = (GroupEval::new(prior, observed), GroupEval::new(prior, joined));
        let mut pair = |phi: u64, psi: u64| {
            let l = lhs.compare(phi, psi).ge();
            let r = rhs.compare(phi, psi).ge();
            let wit = || {
                format!(
                    "ō={} φ={} ψ={}: Pl(R[φ; ō]) ≥ Pl(R[ψ; ō]) is {l} but Pl(R[φ ∧ ō]) ≥ Pl(R[ψ ∧ ō]) is {r}",
                    seq_text(u, &seq.formulas),
                    show(phi),
                    show(psi)
                )
            };
            rev4.case(l == r, wit);
            if !lhs.is_bottom(phi) {
                rev4p.case(l == r, wit);
            }
        };
        if exhaustive {
            for phi in 0..=full {
                for psi in (0..=full).rev() {
                    pair(phi, psi);
                }
            }
        } else {
            pair(0, full);
            for _ in 0..per_seq {
                pair(rng.gen::<u64>() & full, rng.gen::<u64>() & full);
            }
        }
    }
    if !exhaustive {
        let note = format!("formula pairs sampled, seed {}", sampling.seed);
        rev4.detail = Some(note.clone());
        rev4p.detail = Some(note);
    }
    report.push(rev4);
    report.push(rev4p);
    report
}

/// Random subset of the universe's worlds with a random density.
fn random_worlds(rng: &mut impl Rng, u: &Universe) -> WorldSet {
    let p: f64 = rng.gen_range(0.2..0.9);
    u.worlds().iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

/// UPD1, UPD2 (consistency with the distance and prefix-definedness, on
/// sampled prefix cells), UPD3 and sampled UPD4/UPD4′.
pub fn validate_upd(sys: &SystemModel, sampling: Sampling) -> Report {
    let u = sys.universe();
    let n = sys.runs().len();
    let t = sys.horizon();
    let mut report = Report::new(format!("update conditions ({n} runs, horizon {t})"));
    let mut rng = sampling.rng();

    let mut upd1 = Check::new("UPD1");
    let mut tags: HashMap<World, u32> = HashMap::new();
    for (i, r) in sys.runs().iter().enumerate() {
        for (m, s) in r.env.iter().enumerate() {
            let first = *tags.entry(s.world).or_insert(s.tag);
            upd1.case(first == s.tag, || format!("(r{i}, {m}): two environment states share world {}", s.world));
        }
    }
    report.push(upd1);

    // Work per comparison grows with the number of runs.
    let budget = sampling.samples.min(20_000_000 / n.max(1)).max(50);
    let prior = sys.prior();
    match prior {
        RunPrior::Lex(lex) if n > 0 => {
            let mut upd2 = Check::new("UPD2");
            let mut cells: Vec<HashMap<Vec<u16>, Vec<usize>>> = vec![HashMap::new(); t + 1];
            for r in 0..n {
                let seq = lex.seq_of(r);
                for (len, map) in cells.iter_mut().enumerate() {
                    map.entry(seq[..=len].to_vec()).or_default().push(r);
                }
            }
            let s_worlds = lex.structure().worlds();
            let show = |s: &[u16]| s.iter().map(|&i| s_worlds[i as usize].to_string()).collect::<Vec<_>>().join(",");
            for _ in 0..budget {
                let len = rng.gen_range(0..=t);
                let (a, b) = (lex.seq_of(rng.gen_range(0..n)), lex.seq_of(rng.gen_range(0..n)));
                let (a, b) = (&a[..=len], &b[..=len]);
                let expected = if a == b {
                    Order::Eq
                } else if lex.prefix_lt(a, b) {
                    Order::Gt
                } else if lex.prefix_lt(b, a) {
                    Order::Lt
                } else {
                    Order::Incomparable
                };
                let got = prior.compare(&cells[len][a], &cells[len][b]).order;
                upd2.case(got == expected, || {
                    format!(
                        "prefix cells [{}] vs [{}]: the prior compares them {} but the first-divergence rule gives {}",
                        show(a),
                        show(b),
                        order_text(got),
                        order_text(expected)
                    )
                });
            }
            // Prefix-definedness on sampled formula sequences.
            for _ in 0..budget / 4 {
                let len = rng.gen_range(0..=t);
                let phis: Vec<WorldSet> = (0..=len).map(|_| random_worlds(&mut rng, u)).collect();
                let psis: Vec<WorldSet> = (0..=len).map(|_| random_worlds(&mut rng, u)).collect();
                let member = |fs: &[WorldSet], s: &[u16]| s.iter().zip(fs).all(|(&i, f)| f.contains(&s_worlds[i as usize]));
                let pa: Vec<Vec<u16>> = cells[len].keys().filter(|s| member(&phis, s)).cloned().collect();
                let pb: Vec<Vec<u16>> = cells[len].keys().filter(|s| member(&psis, s) && !member(&phis, s)).cloned().collect();
                let runs = |ps: &[Vec<u16>]| {
                    let mut v: Vec<usize> = ps.iter().flat_map(|s| cells[len][s].iter().copied()).collect();
                    v.sort_unstable();
                    v
                };
                let mut rb: Vec<usize> = cells[len].keys().filter(|s| member(&psis, s)).flat_map(|s| cells[len][s].iter().copied()).collect();
                rb.sort_unstable();
                let lhs = prior.compare(&runs(&pa), &rb).ge();
                let rhs = lex.prefixes_covered(&pa, &pb);
                upd2.case(lhs == rhs, || {
                    let text = |fs: &[WorldSet]| fs.iter().map(|f| set_text(u, f)).collect::<Vec<_>>().join(", ");
                    format!(
                        "R[{}] ≥ R[{}] is {lhs} but the prefix cells give {rhs}",
                        text(&phis),
                        text(&psis)
                    )
                });
            }
            upd2.detail = Some(format!(
                "sampled, seed {}; prefix cells compare by the appendix direction: the sequence with the shorter step at the first divergence is more plausible",
                sampling.seed
            ));
            report.push(upd2);
        }
        _ => {
            let mut upd2 = Check::new("UPD2");
            upd2.fail(format!("the {} prior is not derived from a distance function", prior.kind()));
            report.push(upd2);
        }
    }

    let mut upd3 = Check::new("UPD3").with_detail("complete formula sequences; the rest follow by monotonicity");
    let mut live: HashSet<Vec<World>> = HashSet::new();
    for (i, r) in sys.runs().iter().enumerate() {
        if !prior.is_bottom(&[i]) {
            live.insert(r.env.iter().map(|s| s.world).collect());
        }
    }
    let ws = u.worlds();
    let total = (ws.len() as u128).saturating_pow(t as u32 + 1);
    let show_seq = |s: &[World]| s.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
    if total <= 100_000 {
        let mut idx = vec![0usize; t + 1];
        loop {
            let seq: Vec<World> = idx.iter().map(|&i| ws[i]).collect();
            upd3.case(live.contains(&seq), || format!("Pl(R[{}]) = ⊥", show_seq(&seq)));
            let mut k = 0;
            while k <= t {
                idx[k] += 1;
                if idx[k] < ws.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k > t {
                break;
            }
        }
    } else {
        for _ in 0..sampling.samples {
            let seq: Vec<World> = (0..=t).map(|_| ws[rng.gen_range(0..ws.len())]).collect();
            upd3.case(live.contains(&seq), || format!("Pl(R[{}]) = ⊥", show_seq(&seq)));
        }
    }
    report.push(upd3);

    let mut upd4 = Check::new("UPD4");
    let mut upd4p = Check::new("UPD4'");
    if t == 0 || n == 0 {
        upd4 = upd4.with_detail("horizon 0: no observations");
        upd4p = upd4p.with_detail("horizon 0: no observations");
    } else {
        for _ in 0..budget / 4 {
            let k = rng.gen_range(0..t);
            let base = rng.gen_range(0..n);
            let key = &sys.key_at(super::Point::new(base, k)).to_vec();
            let obs: Vec<Formula> = key.iter().map(|&i| sys.obs_formula(i).clone()).collect();
            let phis: Vec<WorldSet> = (0..=k + 1).map(|_| random_worlds(&mut rng, u)).collect();
            let psis: Vec<WorldSet> = (0..=k + 1).map(|_| random_worlds(&mut rng, u)).collect();
            let fits = |r: usize, fs: &[WorldSet]| fs.iter().enumerate().all(|(i, f)| f.contains(&sys.run(r).world(i)));
            let with_obs = |fs: &[WorldSet]| -> Vec<usize> { sys.cell(key).iter().copied().filter(|&r| fits(r, fs)).collect() };
            let joined = |fs: &[WorldSet]| -> Vec<usize> {
                (0..n).filter(|&r| fits(r, fs) && (1..=k).all(|i| obs[i - 1].eval(sys.run(r).world(i)))).collect()
            };
            let (a, b) = (with_obs(&phis), with_obs(&psis));
            let l = prior.compare(&a, &b).ge();
            let r = prior.compare(&joined(&phis), &joined(&psis)).ge();
            let wit = || {
                let text = |fs: &[WorldSet]| fs.iter().map(|f| set_text(u, f)).collect::<Vec<_>>().join(", ");
                format!(
                    "ō={} φ=[{}] ψ=[{}]: with observations {l}, conjoined {r}",
                    seq_text(u, &obs),
                    text(&phis),
                    text(&psis)
                )
            };
            upd4.case(l == r, wit);
            if !prior.is_bottom(&a) {
                upd4p.case(l == r, wit);
            }
        }
        let note = format!("sampled, seed {}", sampling.seed);
        upd4.detail = Some(note.clone());
        upd4p.detail = Some(note);
    }
    report.push(upd4);
    report.push(upd4p);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Universe;
    use crate::plausibility::{Measure, PreferenceMeasure};
    use crate::revision::RevisionRanking;
    use crate::systems::{build_revision_system, build_update_system, Run};
    use crate::update::UpdateStructure;

    fn parse_all(u: &Universe, xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|x| u.parse(x).unwrap()).collect()
    }

    #[test]
    fn revision_system_conditions() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let rk = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)]).unwrap();
        let sys = build_revision_system(&rk, &parse_all(&u, &["true", "p", "q"]), 2).unwrap();
        assert!(validate_bcs(&sys).passed());
        let r = validate_rev(&sys, Sampling::default());
        for name in ["REV1", "REV2", "REV3", "REV4'"] {
            assert!(r.check_passed(name), "{r}");
        }
        assert!(r.check_failed("REV4"), "{r}");
        assert!(r.get("REV4").unwrap().witness.as_deref().unwrap().starts_with("ō=⟨!p⟩ φ=false ψ=true"), "{r}");
        assert!(check_prev_rule(&sys, Sampling::default()).passed());

        // Every consistent class present: REV4 passes.
        let mut all = vec![Formula::True];
        for mask in 1..15u64 {
            all.push(char_formula(&u.subset(mask)));
        }
        let sys = build_revision_system(&rk, &all, 1).unwrap();
        let r = validate_rev(&sys, Sampling::default());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn update_system_conditions() {
        let u = Universe::over(&["parked", "full"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let sys = build_update_system(&s, &parse_all(&u, &["true", "parked", "!full"]), 2).unwrap();
        assert!(validate_bcs(&sys).passed());
        let r = validate_upd(&sys, Sampling::default());
        assert!(r.passed(), "{r}");
        assert!(check_prev_rule(&sys, Sampling::default()).passed());
        let rev = validate_rev(&sys, Sampling::default());
        assert!(rev.check_failed("REV1") && rev.check_failed("REV2"));
    }

    #[test]
    fn false_observation_is_a_bcs4_finding() {
        let u = Universe::over(&["p"]).unwrap();
        let w = u.world("0").unwrap();
        let runs = vec![Run::new(&[w, w], vec![u.parse("p").unwrap()])];
        let sys = SystemModel::new(&u, 1, runs, RunPrior::Ranked(vec![Rank::Finite(0)]), vec![Formula::True]).unwrap();
        let r = validate_bcs(&sys);
        assert!(r.check_failed("BCS4"));
        assert!(r.get("BCS4").unwrap().witness.as_deref().unwrap().contains("(r0, 1)"));
    }

    #[test]
    fn hand_built_prior_breaks_prev_rule() {
        let u = Universe::over(&["p"]).unwrap();
        let (w0, w1) = (u.world("0").unwrap(), u.world("1").unwrap());
        let runs = vec![Run::new(&[w0, w0], vec![Formula::True]), Run::new(&[w1, w1], vec![Formula::True])];
        let prior = RunPrior::Ranked(vec![Rank::Finite(0), Rank::Finite(1)]);
        let sys = SystemModel::new(&u, 1, runs, prior, vec![Formula::True]).unwrap();
        // At ⟨true⟩ the override reverses the prior.
        let flipped = Measure::Preference(PreferenceMeasure::new([0usize, 1], &[(1, 0)]).unwrap());
        let sys = sys.with_cell_measure(&[Formula::True], flipped).unwrap();
        let r = check_prev_rule(&sys, Sampling::default());
        assert!(!r.passed());
        let w = r.get("prev-rule").unwrap().witness.clone().unwrap();
        assert!(w.contains("point (r0, 1)") && w.contains("A="), "{w}");
        assert!(validate_bcs(&sys).check_failed("BCS5"));
    }
}

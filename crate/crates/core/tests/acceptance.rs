//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use belief_change::cli::{run_scenario, Scenario};
use belief_change::diagnosis::{check_prop_2_4, Circuit};
use belief_change::kernel::{BeliefSet, Formula};
use belief_change::plausibility::{check_klm, check_qualitative, conditional_holds, parse_measure, preferential_satisfies, Measure, Plausibility, PreferenceMeasure, RankedMeasure};
use belief_change::report::{Report, Sampling, Status};
use belief_change::revision::oracles::{reordered, Grove};
use belief_change::revision::{check_agm, check_agm_primed, epistemic_bs, extract_ranking, grove_revise, RevisionRanking};
use belief_change::systems::{
    build_revision_system, build_update_system, check_correctness_propagation, check_prev_rule, check_prop_7_1, cross_check_update, SystemModel,
    DEFAULT_STATE_CAP,
};
use belief_change::update::{check_km, KmOracle, UpdateStructure};
use belief_change::kernel::World;
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn need(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failure(r: &Report) -> String {
    match r.first_failure() {
        Some(c) => format!("{}: {} {}", r.subject, c.name, c.witness.clone().unwrap_or_default()),
        None => format!("{}: failed", r.subject),
    }
}

fn require(r: &Report, names: &[&str]) -> Result<(), String> {
    need(r.passed(), || failure(r))?;
    for n in names {
        let c = r.get(n).ok_or_else(|| format!("{}: no check named {n}", r.subject))?;
        need(c.status == Status::Pass, || format!("{}: {n} is {:?}", r.subject, c.status))?;
    }
    Ok(())
}

/// Rankings used by the AGM criteria and again by the measure criterion.
fn agm_rankings() -> &'static Vec<RevisionRanking> {
    static CELL: OnceLock<Vec<RevisionRanking>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut g = rng(1);
        (0..50).map(|i| random_ranking(&mut g, if i < 25 { 2 } else { 3 })).collect()
    })
}

fn extraction_rankings() -> &'static Vec<RevisionRanking> {
    static CELL: OnceLock<Vec<RevisionRanking>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut g = rng(2);
        (0..50).map(|_| { let n = g.gen_range(1..=3); random_ranking(&mut g, n) }).collect()
    })
}

fn primed_rankings() -> &'static Vec<RevisionRanking> {
    static CELL: OnceLock<Vec<RevisionRanking>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut g = rng(3);
        (0..20).map(|_| random_ranking(&mut g, 2)).collect()
    })
}

fn orders() -> &'static Vec<PreferenceMeasure<usize>> {
    static CELL: OnceLock<Vec<PreferenceMeasure<usize>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut g = rng(7);
        (0..100).map(|_| { let n = g.gen_range(1..=6); random_order(&mut g, n) }).collect()
    })
}

/// Update systems shared by the bridge criteria: at most 4 alphabet
/// members; horizon up to 3 over 2 atoms and up to 2 over 3 atoms.
fn bridge_systems() -> &'static Vec<(UpdateStructure, SystemModel)> {
    static CELL: OnceLock<Vec<(UpdateStructure, SystemModel)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut g = rng(5);
        (0..20)
            .map(|i| {
                let atoms = g.gen_range(2..=3);
                let s = random_structure(&mut g, atoms, i % 2 == 1);
                let alphabet = random_alphabet(&mut g, s.universe(), 4);
                let horizon = g.gen_range(1..=if atoms == 2 { 3 } else { 2 });
                let sys = build_update_system(&s, &alphabet, horizon).unwrap();
                (s, sys)
            })
            .collect()
    })
}

fn c1_agm_soundness() -> Outcome {
    let mut sampled = 0;
    for (i, rk) in agm_rankings().iter().enumerate() {
        let u = rk.universe();
        let k = rk.initial_belief();
        let r = check_agm(&Grove(rk.clone()), u, &k, Sampling { seed: i as u64, samples: 10_000 }).map_err(|e| e.to_string())?;
        require(&r, &["R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"])?;
        let r7 = r.get("R7").unwrap();
        if u.len() == 4 {
            need(r7.detail.is_none() && r7.cases == 256, || format!("R7 at 2 atoms covered {} pairs", r7.cases))?;
        } else {
            need(r7.cases == 10_000, || format!("R7 at 3 atoms covered {} pairs", r7.cases))?;
            sampled += 1;
        }
    }
    Ok(format!("50 rankings, R1-R8 hold; {sampled} at 3 atoms with 10^4 sampled pairs"))
}

fn c2_extraction() -> Outcome {
    let mut formulas = 0;
    for rk in extraction_rankings() {
        let u = rk.universe();
        let k = rk.initial_belief();
        let back = extract_ranking(&Grove(rk.clone()), &k, u).map_err(|e| e.to_string())?;
        for m in 0..=full_mask(u) {
            let phi = set_formula(u, m);
            let (a, b) = (grove_revise(&back, &phi), grove_revise(rk, &phi));
            need(a == b, || format!("φ={}: extracted {a} vs original {b}", u.text(&phi)))?;
            formulas += 1;
        }
    }
    Ok(format!("50 rankings, {formulas} revisions reproduced"))
}

fn c3_primed() -> Outcome {
    for rk in primed_rankings() {
        let oracle = |e: &[Formula]| epistemic_bs(rk, e);
        let r = check_agm_primed(&oracle, rk.universe(), 3).map_err(|e| e.to_string())?;
        require(&r, &["R1'", "R2'", "R3'", "R4'", "R5'", "R6'", "R7'", "R8'", "R9'"])?;
    }
    let bad = reordered();
    let r = check_agm_primed(&bad, bad.universe(), 3).map_err(|e| e.to_string())?;
    let c = r.first_failure().ok_or("reordered oracle passed every primed postulate")?;
    let w = c.witness.clone().ok_or("failure without a witness")?;
    Ok(format!("20 rankings pass R1'-R9' at depth 3; reordered oracle fails {}: {w}", c.name))
}

fn c4_km() -> Outcome {
    let mut g = rng(4);
    for i in 0..50 {
        let atoms = 1 + i % 3;
        let s = random_structure(&mut g, atoms, i % 2 == 1);
        let u = s.universe().clone();
        let r = check_km(&KmOracle(s), &u, Sampling { seed: i as u64, samples: 10_000 }).map_err(|e| e.to_string())?;
        require(&r, &["U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8"])?;
        if atoms <= 2 {
            need(r.get("U5").unwrap().detail.is_none(), || "U5 sampled at 2 atoms".into())?;
        }
    }
    let u = universe(2);
    let r = check_km(&revision_as_update, &u, Sampling::default()).map_err(|e| e.to_string())?;
    let u8 = r.get("U8").unwrap();
    need(u8.failed() && u8.witness.is_some(), || "revision passed U8".into())?;
    Ok(format!("25 numeric and 25 poset structures pass U1-U8; revision fails U8: {}", u8.witness.clone().unwrap()))
}

fn c5_cross_check() -> Outcome {
    let mut points = 0;
    for (s, sys) in bridge_systems() {
        let r = cross_check_update(sys, s);
        require(&r, &["states-follow-update"])?;
        points += sys.point_count();
    }
    Ok(format!("20 update systems ({points} points) follow min_U"))
}

fn c6_prev_rule() -> Outcome {
    let mut g = rng(6);
    let (mut rev, mut upd, mut largest) = (0, 0, 0);
    while rev < 10 || upd < 10 {
        let sys = if rev < 10 {
            let rk = random_ranking(&mut g, 2);
            let a = random_alphabet(&mut g, rk.universe(), 3);
            build_revision_system(&rk, &a, g.gen_range(1..=2)).unwrap()
        } else {
            let atoms = g.gen_range(1..=2);
            let poset = g.gen_bool(0.5);
            let s = random_structure(&mut g, atoms, poset);
            let a = random_alphabet(&mut g, s.universe(), 3);
            build_update_system(&s, &a, g.gen_range(1..=2)).unwrap()
        };
        if sys.point_count() > 200 {
            continue;
        }
        largest = largest.max(sys.point_count());
        let r = check_prev_rule(&sys, Sampling::default());
        require(&r, &["prev-rule"])?;
        if rev < 10 {
            rev += 1;
        } else {
            upd += 1;
        }
    }
    Ok(format!("10 revision and 10 update systems, at most {largest} points"))
}

fn c7_preferential() -> Outcome {
    let mut pairs = 0u64;
    for o in orders() {
        let n = o.elements().len();
        let set = |m: u64| -> BTreeSet<usize> { (0..n).filter(|i| m >> i & 1 == 1).collect() };
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                let (phi, psi) = (set(a), set(b));
                need(preferential_satisfies(o, &phi, &psi) == conditional_holds(o, &phi, &psi), || {
                    format!("order {:?}: φ={phi:?} ψ={psi:?} disagree", o.edges())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("100 partial orders, {pairs} world-set pairs agree"))
}

/// Qualitative checks on the whole carrier; KLM on the whole carrier when it
/// has at most 5 elements, else on three random 5-element sub-carriers.
fn measure_checks<T, M>(m: &M, carrier: &[T], g: &mut ChaCha8Rng) -> Result<(), String>
where
    T: Ord + Clone + std::fmt::Display,
    M: Plausibility<T>,
{
    let q = check_qualitative(m, carrier).map_err(|e| e.to_string())?;
    require(&q, &["A1", "A2", "A3"])?;
    let subs: Vec<Vec<T>> = if carrier.len() <= 5 {
        vec![carrier.to_vec()]
    } else {
        (0..3).map(|_| carrier.choose_multiple(g, 5).cloned().collect()).collect()
    };
    for sub in subs {
        let k = check_klm(m, &sub).map_err(|e| e.to_string())?;
        need(k.passed(), || failure(&k))?;
        if m.is_ranked() {
            need(k.check_passed("RM"), || "RM fails on a ranked measure".into())?;
        }
    }
    Ok(())
}

fn c8_measures() -> Outcome {
    let mut g = rng(8);
    let mut count = 0;
    for rk in agm_rankings().iter().chain(extraction_rankings()).chain(primed_rankings()) {
        let carrier: Vec<World> = rk.universe().worlds().to_vec();
        let m: RankedMeasure<World> = rk.measure();
        measure_checks(&m, &carrier, &mut g)?;
        count += 1;
    }
    for o in orders() {
        measure_checks(o, o.elements(), &mut g)?;
        count += 1;
    }
    let diamond = |name: &str| -> Result<(Measure<String>, Vec<String>), String> {
        let m = parse_measure(&read_scenario(name)).map_err(|e| e.to_string())?;
        let carrier = match &m {
            Measure::Preference(p) => p.elements().to_vec(),
            Measure::Ranked(r) => r.ranks().keys().cloned().collect(),
        };
        Ok((m, carrier))
    };
    let (full, carrier) = diamond("diamond.txt")?;
    measure_checks(&full, &carrier, &mut g)?;
    let (broken, carrier) = diamond("broken_diamond.txt")?;
    let k = check_klm(&broken, &carrier).map_err(|e| e.to_string())?;
    let rm = k.get("RM").unwrap();
    need(rm.failed() && rm.witness.is_some(), || "RM holds on the broken diamond".into())?;
    need(k.passed(), || "RM failure on a preference measure should be informational".into())?;
    Ok(format!("{count} measures pass A1-A3 and KLM; RM fails on the diamond without c<d: {}", rm.witness.clone().unwrap()))
}

fn c9_borrowed_car() -> Outcome {
    let s = Scenario::parse(&read_scenario("borrowed_car.toml"), None).map_err(|e| e.to_string())?;
    let steps = run_scenario(&s, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
    need(steps.len() == 4, || format!("{} steps", steps.len()))?;
    need(steps[1].worlds == steps[0].worlds, || "μ2 differs from μ1".into())?;
    need(steps[2].worlds == steps[0].worlds, || "μ3 differs from μ1".into())?;
    let expected = BeliefSet::of_formula(&s.universe, &s.universe.parse("parked & !full").unwrap());
    need(steps[3].worlds == expected.bitstrings(), || format!("final belief {}", steps[3].formula))?;
    let flags: Vec<bool> = steps.iter().map(|r| r.surprising).collect();
    need(flags == [false, false, false, true], || format!("surprising flags {flags:?}"))?;
    Ok(format!("beliefs {{{}}} ×3 then {}, surprising only at step 3", steps[0].worlds.join(","), steps[3].formula))
}

fn c10_diagnosis() -> Outcome {
    let and1 = Circuit::parse(&read_scenario("and1.cir")).map_err(|e| e.to_string())?;
    let obs = and1.observations(&read_scenario("and1.obs")).map_err(|e| e.to_string())?;
    let r = check_prop_2_4(&and1, &obs).map_err(|e| e.to_string())?;
    require(&r, &["system-matches-search", "filter"])?;
    let mut g = rng(10);
    for _ in 0..100 {
        let c = random_circuit(&mut g, 3);
        let obs = random_observations(&mut g, &c, 3);
        let r = check_prop_2_4(&c, &obs).map_err(|e| e.to_string())?;
        need(r.passed(), || format!("{}\n{}", c.to_text(), failure(&r)))?;
        for name in ["system-matches-search", "filter", "surprise-minimal", "surprise-disjoint", "surprise-cardinality-grows"] {
            need(r.get(name).is_some(), || format!("missing check {name}"))?;
        }
    }
    Ok("single AND gate and 100 random circuits".into())
}

fn c11_statify() -> Outcome {
    let mut g = rng(11);
    let mut rev3_required = 0;
    for i in 0..10 {
        let s = random_structure(&mut g, 2, i % 2 == 1);
        let a = random_alphabet(&mut g, s.universe(), 3);
        let sys = build_update_system(&s, &a, g.gen_range(1..=2)).unwrap();
        let r = check_prop_7_1(&sys, Sampling { seed: i, samples: 2_000 }).map_err(|e| e.to_string())?;
        require(&r, &["BCS1", "BCS2", "BCS3", "BCS4", "BCS5", "REV1", "REV4'", "REV4-fails", "belief-transfer"])?;
        need(r.get("REV4-fails").unwrap().witness.is_some(), || "REV4 failure without a witness".into())?;
        if r.check_passed("source UPD3") {
            require(&r, &["REV3"])?;
            rev3_required += 1;
        }
    }
    Ok(format!("10 statified systems; REV3 required and held in {rev3_required}"))
}

fn c12_propagation() -> Outcome {
    let mut precondition = 0;
    for (s, sys) in bridge_systems() {
        let r = check_correctness_propagation(sys, s);
        require(&r, &["correctness-propagates"])?;
        precondition += r.get("precondition-failures").unwrap().cases;
    }
    let s = Scenario::parse(&read_scenario("borrowed_car_variant.toml"), None).map_err(|e| e.to_string())?;
    let sys = s.system(DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
    let r = check_correctness_propagation(&sys, s.structure().unwrap());
    require(&r, &["correctness-propagates"])?;
    let pre = r.get("precondition-failures").unwrap();
    need(pre.cases > 0, || "variant shows no precondition failure".into())?;
    Ok(format!(
        "20 systems propagate ({precondition} points lack sufficient information); variant: {} precondition failures, no violation",
        pre.cases
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("AGM soundness of Grove revision", c1_agm_soundness),
        ("ranking extraction round trip", c2_extraction),
        ("primed postulates for epistemic states", c3_primed),
        ("KM soundness of distance update", c4_km),
        ("update systems follow min_U", c5_cross_check),
        ("prev rule on constructed systems", c6_prev_rule),
        ("preferential semantics equals the conditional", c7_preferential),
        ("qualitative and KLM properties of measures", c8_measures),
        ("borrowed car scenario", c9_borrowed_car),
        ("circuit diagnosis", c10_diagnosis),
        ("statified update systems", c11_statify),
        ("propagation of correct beliefs", c12_propagation),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  criterion {:>2}  {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {:>2}  {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

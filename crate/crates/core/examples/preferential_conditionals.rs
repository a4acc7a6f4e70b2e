//! Conditionals under ranked and preferential plausibility measures.

use std::collections::BTreeSet;

use belief_change::plausibility::{belief_worlds, check_klm, check_qualitative, conditional_holds, parse_measure, preferential_satisfies, Measure, PreferenceMeasure};

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let carrier = ["a", "b", "c", "d"].map(String::from);
    let edges = [("a", "b"), ("a", "c"), ("b", "d")].map(|(x, y)| (x.to_string(), y.to_string()));
    let order = PreferenceMeasure::new(carrier.clone(), &edges)?;

    let (phi, psi) = (set(&["b", "c", "d"]), set(&["b", "c"]));
    println!("{{b,c,d}} → {{b,c}}: dominance {}, preferential clause {}", conditional_holds(&order, &phi, &psi), preferential_satisfies(&order, &phi, &psi));
    println!("believed worlds: {:?}", belief_worlds(&order, &carrier.iter().cloned().collect()));

    let qual = check_qualitative(&order, &carrier)?;
    println!("A1-A3: {}", if qual.passed() { "hold" } else { "fail" });
    let klm = check_klm(&order, &carrier)?;
    println!("{klm}");

    let ranked = parse_measure("x 0\ny 1\nz 1\nw 2\n")?;
    if let Measure::Ranked(m) = &ranked {
        let xs: Vec<String> = m.ranks().keys().cloned().collect();
        println!("ranked measure: RM {}", if check_klm(m, &xs)?.check_passed("RM") { "holds" } else { "fails" });
    }
    Ok(())
}

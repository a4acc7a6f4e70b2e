//! Katsuno-Mendelzon update under numeric and partially ordered distances,
//! and why revision is not update.

use std::collections::BTreeMap;

use belief_change::kernel::{BeliefSet, Universe};
use belief_change::report::Sampling;
use belief_change::update::{check_km, km_update, DistanceFunction, KmOracle, PosetDistance, UpdateStructure};
use num_rational::Ratio;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::over(&["a", "b"])?;
    let weighted = UpdateStructure::new(&u, DistanceFunction::WeightedHamming(vec![Ratio::from_integer(1), Ratio::from_integer(3)]))?;
    let mu = BeliefSet::of_formula(&u, &u.parse("a & b")?);
    let phi = u.parse("!a | !b")?;
    println!("weighted Hamming: (a & b) ⋄ (!a | !b) = {}", km_update(&weighted, &mu, &phi).char_text());

    // Distances as labels: "near" and "far" are both above zero and incomparable.
    let labels: Vec<String> = ["0", "near", "far"].iter().map(|s| s.to_string()).collect();
    let order = vec![("0".to_string(), "near".to_string()), ("0".to_string(), "far".to_string())];
    let mut values = BTreeMap::new();
    for &x in u.worlds() {
        for &y in u.worlds() {
            let l = if x == y { "0" } else if x.hamming(y) == 1 { "near" } else { "far" };
            values.insert((x, y), l.to_string());
        }
    }
    let poset = UpdateStructure::new(&u, DistanceFunction::Poset(PosetDistance::new(labels, "0", &order, values)?))?;
    println!("poset distance:   (a & b) ⋄ (!a | !b) = {}", km_update(&poset, &mu, &phi).char_text());

    for (name, s) in [("weighted", weighted), ("poset", poset)] {
        let r = check_km(&KmOracle(s), &u, Sampling::default())?;
        println!("{name}: U1-U8 {}", if r.passed() { "hold" } else { "fail" });
    }
    Ok(())
}

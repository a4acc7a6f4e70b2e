//! Revision of epistemic states: beliefs depend on the whole observation
//! sequence, and an inconsistent history is recovered from by its
//! longest consistent suffix.

use belief_change::kernel::Universe;
use belief_change::revision::oracles::reordered;
use belief_change::revision::{check_agm_primed, conditioning_bs, epistemic_bs, f_suffix, RevisionRanking};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::over(&["p", "q"])?;
    let rk = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)])?;
    let e = vec![u.parse("p")?, u.parse("!p")?, u.parse("q")?];
    for m in 0..=e.len() {
        let prefix = &e[..m];
        let suffix: Vec<String> = f_suffix(&u, prefix).iter().map(|f| u.text(f)).collect();
        println!(
            "after {m} observations: suffix ⟨{}⟩  belief={}  raw conditioning={}",
            suffix.join(", "),
            epistemic_bs(&rk, prefix).char_text(),
            conditioning_bs(&rk, prefix).char_text()
        );
    }

    let oracle = |e: &[belief_change::kernel::Formula]| epistemic_bs(&rk, e);
    let report = check_agm_primed(&oracle, &u, 3)?;
    println!("\nprimed postulates for the ranking: {}", if report.passed() { "all hold" } else { "violated" });

    let bad = reordered();
    let report = check_agm_primed(&bad, bad.universe(), 3)?;
    if let Some(c) = report.first_failure() {
        println!("observation-dependent ordering fails {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    Ok(())
}

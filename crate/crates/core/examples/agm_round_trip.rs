//! Grove revision from a ranking, the AGM checker, and recovery of the
//! ranking from the operator alone.

use belief_change::report::Sampling;
use belief_change::revision::oracles::{drastic, Grove};
use belief_change::revision::{check_agm, extract_ranking, grove_revise, RevisionRanking};
use belief_change::kernel::Universe;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::over(&["p", "q"])?;
    let rk = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)])?;
    let k = rk.initial_belief();
    println!("K = {}", k.char_text());
    for text in ["!p", "!p | !q", "!p & !q"] {
        println!("K * {text:<8} = {}", grove_revise(&rk, &u.parse(text)?).char_text());
    }

    let report = check_agm(&Grove(rk.clone()), &u, &k, Sampling::default())?;
    println!("\n{report}");

    let back = extract_ranking(&Grove(rk.clone()), &k, &u)?;
    println!("extracted ranks: {:?}", back.ranks().iter().map(|(w, r)| format!("{w}:{r}")).collect::<Vec<_>>());
    println!("same ranking: {}", back == rk);

    let bad = check_agm(&drastic, &u, &k, Sampling::default())?;
    if let Some(c) = bad.first_failure() {
        println!("\ndrastic revision fails {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    Ok(())
}

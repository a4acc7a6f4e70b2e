//! Model checking knowledge, belief and conditionals in a revision system.

use belief_change::kernel::Universe;
use belief_change::revision::RevisionRanking;
use belief_change::systems::{build_revision_system, model_check, parse_kpt, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::over(&["p", "q"])?;
    let rk = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)])?;
    let alphabet = [u.parse("true")?, u.parse("!p")?];
    let sys = build_revision_system(&rk, &alphabet, 1)?;
    println!("{} runs, {} points", sys.runs().len(), sys.point_count());

    let r = (0..sys.runs().len()).find(|&r| sys.run(r).world(0).to_string() == "01" && sys.run(r).obs[0] == alphabet[1]).unwrap();
    for text in ["B(p)", "K(p)", "!K(!p)", "!p -> q", "X(B(!p & q))", "X(K(!p))"] {
        let f = parse_kpt(text, u.vocab())?;
        println!("(r{r}, 0) ⊨ {text:<13} {}", model_check(&sys, Point::new(r, 0), &f)?);
    }
    println!("belief after !p: {}", sys.bel(&[alphabet[1].clone()]).char_text());
    Ok(())
}

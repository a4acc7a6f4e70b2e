//! Turning an update system into a static one by time-stamping atoms.

use belief_change::kernel::Universe;
use belief_change::report::Sampling;
use belief_change::systems::{build_update_system, check_prop_7_1, statify, write_dump};
use belief_change::update::UpdateStructure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::over(&["p"])?;
    let s = UpdateStructure::hamming(&u)?;
    let alphabet = [u.parse("true")?, u.parse("p")?, u.parse("!p")?];
    let sys = build_update_system(&s, &alphabet, 1)?;
    let star = statify(&sys)?;
    println!("{}", write_dump(&star));
    let report = check_prop_7_1(&sys, Sampling::default())?;
    println!("{report}");
    Ok(())
}

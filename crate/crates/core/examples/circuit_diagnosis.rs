//! Model-based diagnosis of a half adder as belief change.

use belief_change::diagnosis::{check_prop_2_4, diagnosis_trace, projected_system, Circuit, ShowFaults};
use belief_change::kernel::Formula;
use belief_change::report::Sampling;
use belief_change::systems::validate_rev;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = Circuit::parse(
        "gate c1 XOR a b -> s\n\
         gate c2 AND a b -> k\n\
         gate c3 NOT k -> nk\n",
    )?;
    let obs = c.observations("a & b & !s & k & !nk\na & !b & s & !k & nk\na & b & s & k & nk\n")?;
    for step in diagnosis_trace(&c, &obs) {
        let seen = step.observation.as_ref().map(|f| c.universe().text(f)).unwrap_or_else(|| "-".into());
        let flag = if step.surprising { "  [surprising]" } else { "" };
        println!("step {}  obs={seen}  diagnoses={}{flag}", step.step, ShowFaults(&c, &step.diagnoses));
    }
    let report = check_prop_2_4(&c, &obs)?;
    println!("\n{report}");

    let mut alphabet = vec![Formula::True];
    alphabet.extend(obs.iter().cloned());
    let projected = projected_system(&c, &alphabet, 2)?;
    let rev = validate_rev(&projected, Sampling::default());
    for name in ["REV1", "REV2", "REV3", "REV4", "REV4'"] {
        println!("fault-only system {name}: {:?}", rev.get(name).map(|c| c.status));
    }
    Ok(())
}

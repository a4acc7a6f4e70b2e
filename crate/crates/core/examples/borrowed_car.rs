//! The borrowed car: the agent parks with a full tank, later sees the car
//! still parked, then learns the tank is empty.

use belief_change::kernel::{BeliefSet, Universe};
use belief_change::systems::{build_update_system, trace_run};
use belief_change::update::{km_update_seq, UpdateStructure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = Universe::over(&["parked", "full"])?;
    let hamming = UpdateStructure::hamming(&u)?;
    let mu = BeliefSet::of_formula(&u, &u.parse("parked & full")?);
    let obs = [u.parse("true")?, u.parse("parked")?, u.parse("!full")?];

    println!("KM update with Hamming distance:");
    for m in 0..=obs.len() {
        let b = km_update_seq(&hamming, &mu, &obs[..m]);
        let seen = if m == 0 { "-".to_string() } else { u.text(&obs[m - 1]) };
        println!("  step {m}  obs={seen:<7} belief={}", b.char_text());
    }

    // The same story inside an interpreted system with a lexicographic prior.
    let sys = build_update_system(&hamming, &obs, obs.len())?;
    let run = (0..sys.runs().len())
        .find(|&r| {
            let run = sys.run(r);
            run.obs == obs && (0..=3).map(|m| run.world(m).to_string()).collect::<Vec<_>>() == ["11", "11", "11", "10"]
        })
        .expect("the intended run is in the system");
    println!("\nrun r{run} of {} in the update system:", sys.runs().len());
    for step in trace_run(&sys, &hamming, run)? {
        println!("  {}", step.describe(&sys));
    }
    Ok(())
}

mod common;

use std::io::Cursor;

use belief_change::cli::{run, run_scenario, Repl, ReplEvent, Scenario};
use belief_change::systems::DEFAULT_STATE_CAP;
use common::{full_mask, random_ranking, rng, set_formula};
use proptest::prelude::*;
use rand::Rng;

/// A revision or update scenario over up to 3 atoms with random observations.
fn scenario_text(seed: u64, update: bool, with_obs: bool) -> (String, Vec<String>) {
    let mut g = rng(seed);
    let atoms = g.gen_range(1..=3);
    let rk = random_ranking(&mut g, atoms);
    let u = rk.universe().clone();
    let vocab: Vec<String> = u.vocab().atoms().iter().map(|a| format!("\"{}\"", a.name)).collect();
    let obs: Vec<String> = (0..g.gen_range(1..=4)).map(|_| u.text(&set_formula(&u, g.gen_range(0..=full_mask(&u))))).collect();
    let mut text = format!("mode = \"{}\"\nvocabulary = [{}]\n", if update { "update" } else { "revision" }, vocab.join(", "));
    if update {
        text.push_str(&format!("initial = \"{}\"\n", u.text(&set_formula(&u, g.gen_range(1..=full_mask(&u))))));
    }
    if with_obs {
        let quoted: Vec<String> = obs.iter().map(|o| format!("\"{o}\"")).collect();
        text.push_str(&format!("observations = [{}]\n", quoted.join(", ")));
    }
    if update {
        text.push_str("\n[prior]\nkind = \"distance\"\ndistance = \"hamming\"\n");
    } else {
        let ranks: Vec<String> = rk.ranks().iter().map(|(w, r)| format!("\"{w}\" = {r}")).collect();
        text.push_str(&format!("\n[prior]\nkind = \"ranked\"\nranks = {{ {} }}\n", ranks.join(", ")));
    }
    (text, obs)
}

fn invoke(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args.iter().copied(), &mut Cursor::new(Vec::new()), &mut out, &mut err);
    (code, out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identical_scenarios_give_identical_bytes(seed in any::<u64>(), update: bool) {
        let (text, _) = scenario_text(seed, update, true);
        let dir = std::env::temp_dir().join(format!("belief-cli-{}-{seed}-{update}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.toml");
        std::fs::write(&path, &text).unwrap();
        let cmd = if update { "update" } else { "revise" };
        let mut outputs = Vec::new();
        for i in 0..2 {
            let json = dir.join(format!("out{i}.json"));
            let (code, stdout) = invoke(&["belief", "--scenario", path.to_str().unwrap(), "--out", json.to_str().unwrap(), cmd]);
            prop_assert_eq!(code, 0, "{}", String::from_utf8_lossy(&stdout));
            outputs.push((stdout, std::fs::read(&json).unwrap()));
        }
        std::fs::remove_dir_all(&dir).unwrap();
        prop_assert_eq!(&outputs[0], &outputs[1]);
    }

    #[test]
    fn repl_transcripts_match_batch_runs(seed in any::<u64>(), update: bool) {
        let (empty, obs) = scenario_text(seed, update, false);
        let (full, _) = scenario_text(seed, update, true);
        let mut repl = Repl::new(Scenario::parse(&empty, None).unwrap(), DEFAULT_STATE_CAP).unwrap();
        for o in &obs {
            let event = repl.feed_line(o).unwrap();
            prop_assert!(matches!(event, ReplEvent::Output(_)));
        }
        let batch = run_scenario(&Scenario::parse(&full, None).unwrap(), DEFAULT_STATE_CAP).unwrap();
        prop_assert_eq!(repl.reports(), batch);
    }
}

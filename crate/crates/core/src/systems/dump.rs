use std::fmt::Write;

use super::{RunPrior, SystemModel};
use crate::plausibility::Rank;

/// One line per run, `env=<bits,...> obs=<formula;...> rank=<n|inf>`. Priors
/// that are not ranked omit `rank=` and are followed by an `order:` block of
/// run-id pairs `i j`, meaning run i is strictly preferred to run j.
pub fn write_dump(sys: &SystemModel) -> String {
    let u = sys.universe();
    let mut out = String::new();
    for (i, r) in sys.runs().iter().enumerate() {
        let env: Vec<String> = r.env.iter().map(|s| s.world.to_string()).collect();
        let obs: Vec<String> = r.obs.iter().map(|f| u.text(f)).collect();
        write!(out, "env={} obs={}", env.join(","), obs.join(";")).unwrap();
        if let RunPrior::Ranked(ranks) = sys.prior() {
            match ranks[i] {
                Rank::Finite(k) => write!(out, " rank={k}").unwrap(),
                Rank::Infinite => out.push_str(" rank=inf"),
            }
        }
        out.push('\n');
    }
    if !sys.prior().is_ranked() {
        out.push_str("order:\n");
        let n = sys.runs().len();
        for a in 0..n {
            for b in 0..n {
                if sys.prior().precedes(a, b) {
                    writeln!(out, "{a} {b}").unwrap();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Formula, Universe};
    use crate::revision::RevisionRanking;
    use crate::systems::{build_revision_system, build_update_system};
    use crate::update::UpdateStructure;

    #[test]
    fn ranked_dump() {
        let u = Universe::over(&["p"]).unwrap();
        let rk = RevisionRanking::from_bits(&u, &[("1", 0), ("0", 1)]).unwrap();
        let sys = build_revision_system(&rk, &[Formula::True, u.parse("p").unwrap()], 1).unwrap();
        assert_eq!(write_dump(&sys), "env=0,0 obs=true rank=1\nenv=1,1 obs=true rank=0\nenv=1,1 obs=p rank=0\n");
    }

    #[test]
    fn lex_dump() {
        let u = Universe::over(&["p"]).unwrap();
        let s = UpdateStructure::hamming(&u).unwrap();
        let sys = build_update_system(&s, &[Formula::True], 1).unwrap();
        let text = write_dump(&sys);
        assert!(text.starts_with("env=0,0 obs=true\nenv=0,1 obs=true\n"));
        assert!(text.ends_with("order:\n0 1\n3 2\n"), "{text}");
    }
}

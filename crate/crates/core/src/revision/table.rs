//! Table-driven oracles: one `K=<DNF> ; phi=<formula> ; result=<DNF>` line per
//! query. Lookups are extensional, by the world sets of K and φ.

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use super::checks::subset_formula;
use super::{RevisionError, RevisionOracle};
use crate::kernel::{show_worlds, BeliefSet, Formula, Universe, WorldSet};

#[derive(Debug, Clone)]
pub struct TableOracle {
    universe: Arc<Universe>,
    entries: HashMap<(WorldSet, WorldSet), WorldSet>,
}

impl TableOracle {
    pub fn parse(text: &str, universe: &Arc<Universe>) -> Result<Self, RevisionError> {
        let mut entries = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| RevisionError::TableSyntax { line: i + 1, message };
            let fields: Vec<&str> = line.split(';').map(str::trim).collect();
            let mut parts = [None, None, None];
            for field in fields {
                let (key, value) = field.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{field}`")))?;
                let slot = match key.trim() {
                    "K" => 0,
                    "phi" => 1,
                    "result" => 2,
                    other => return Err(err(format!("unknown key `{other}`"))),
                };
                let f = universe.parse(value.trim()).map_err(|e| err(e.to_string()))?;
                parts[slot] = Some(universe.models(&f));
            }
            let [Some(k), Some(phi), Some(result)] = parts else {
                return Err(err("each line needs K, phi and result".into()));
            };
            entries.insert((k, phi), result);
        }
        Ok(TableOracle { universe: universe.clone(), entries })
    }

    /// Tabulates `oracle` at K for every world-set formula.
    pub fn record<O: RevisionOracle + ?Sized>(oracle: &O, universe: &Arc<Universe>, k: &BeliefSet) -> Result<Self, RevisionError> {
        let mut entries = HashMap::new();
        for mask in 0..1u64 << universe.len() {
            let phi = subset_formula(universe, mask);
            let out = oracle.revise(k, &phi)?;
            entries.insert((k.worlds().clone(), universe.subset(mask)), out.into_worlds());
        }
        Ok(TableOracle { universe: universe.clone(), entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_text(&self) -> String {
        let u = &self.universe;
        let mut rows: Vec<_> = self.entries.iter().collect();
        rows.sort();
        let mut out = String::new();
        for ((k, phi), result) in rows {
            let text = |s: &WorldSet| u.text(&subset_formula(u, u.mask_of(s)));
            writeln!(out, "K={} ; phi={} ; result={}", text(k), text(phi), text(result)).unwrap();
        }
        out
    }
}

impl RevisionOracle for TableOracle {
    fn revise(&self, k: &BeliefSet, phi: &Formula) -> Result<BeliefSet, RevisionError> {
        let models = self.universe.models(phi);
        match self.entries.get(&(k.worlds().clone(), models)) {
            Some(ws) => Ok(BeliefSet::new(&self.universe, ws.clone())?),
            None => Err(RevisionError::MissingTableEntry {
                k: show_worlds(k.worlds()),
                phi: self.universe.text(phi),
            }),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Sampling;
    use crate::revision::{check_agm, oracles, RevisionRanking};

    #[test]
    fn lookup_is_extensional() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let t = TableOracle::parse("K=p & q ; phi=!p ; result=!p & q\n# comment\n", &u).unwrap();
        let k = BeliefSet::of_formula(&u, &u.parse("q & p").unwrap());
        let got = t.revise(&k, &u.parse("!(p | p)").unwrap()).unwrap();
        assert_eq!(got.to_string(), "{01}");
        assert!(matches!(t.revise(&k, &u.parse("p").unwrap()), Err(RevisionError::MissingTableEntry { .. })));
    }

    #[test]
    fn recorded_table_round_trips_and_checks() {
        let u = Universe::over(&["p", "q"]).unwrap();
        let rk = RevisionRanking::from_bits(&u, &[("11", 0), ("10", 1), ("01", 1), ("00", 2)]).unwrap();
        let k = rk.initial_belief();
        let t = TableOracle::record(&oracles::Grove(rk), &u, &k).unwrap();
        assert_eq!(t.len(), 16);
        let back = TableOracle::parse(&t.to_text(), &u).unwrap();
        let r = check_agm(&back, &u, &k, Sampling::default()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let u = Universe::over(&["p"]).unwrap();
        assert!(matches!(TableOracle::parse("\nK=p ; phi=p", &u), Err(RevisionError::TableSyntax { line: 2, .. })));
        assert!(matches!(TableOracle::parse("K=p ; phi=x ; result=p", &u), Err(RevisionError::TableSyntax { line: 1, .. })));
    }
}

//! Distance matrix files. The first row lists target worlds; every following
//! row starts with a source world and gives one entry per target. Entries are
//! nonnegative rationals (`3`, `1/2`) or poset labels; `order: a < b` lines
//! declare the label order, whose zero is the label `0`. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_rational::Ratio;

use super::{DistanceFunction, PosetDistance, UpdateError, UpdateStructure};
use crate::kernel::{Universe, World};

pub fn parse_matrix(text: &str, universe: &Universe) -> Result<DistanceFunction, UpdateError> {
    let mut header: Option<Vec<World>> = None;
    let mut entries: BTreeMap<(World, World), String> = BTreeMap::new();
    let mut order = Vec::new();
    let n_atoms = universe.vocab().len();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| UpdateError::Syntax { line: line_no, message };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("order:") {
            let (a, b) = rest.split_once('<').ok_or_else(|| err(format!("expected `order: a < b`, got `{line}`")))?;
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() || a.contains(char::is_whitespace) || b.contains(char::is_whitespace) {
                return Err(err(format!("expected `order: a < b`, got `{line}`")));
            }
            order.push((a.to_string(), b.to_string()));
            continue;
        }
        let world = |tok: &str| -> Result<World, UpdateError> {
            let w = World::parse_bits(tok).map_err(|e| err(e.to_string()))?;
            if w.len() != n_atoms {
                return Err(err(format!("world {tok} has {} bits, expected {n_atoms}", w.len())));
            }
            Ok(w)
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        match &header {
            None => header = Some(toks.iter().map(|t| world(t)).collect::<Result<_, _>>()?),
            Some(targets) => {
                let from = world(toks[0])?;
                if toks.len() != targets.len() + 1 {
                    return Err(err(format!("expected {} entries after {from}, got {}", targets.len(), toks.len() - 1)));
                }
                for (to, v) in targets.iter().zip(&toks[1..]) {
                    if entries.insert((from, *to), v.to_string()).is_some() {
                        return Err(err(format!("duplicate entry for ({from}, {to})")));
                    }
                }
            }
        }
    }
    if header.is_none() {
        return Err(UpdateError::Syntax { line: 0, message: "missing header row".into() });
    }
    let numeric: Option<BTreeMap<(World, World), Ratio<u64>>> = if order.is_empty() {
        entries.iter().map(|(k, v)| v.parse::<Ratio<u64>>().ok().map(|r| (*k, r))).collect()
    } else {
        None
    };
    if let Some(m) = numeric {
        return Ok(DistanceFunction::Numeric(m));
    }
    let mut labels: BTreeSet<String> = entries.values().cloned().collect();
    labels.extend(order.iter().flat_map(|(a, b)| [a.clone(), b.clone()]));
    labels.insert("0".into());
    let mut labels: Vec<String> = labels.into_iter().collect();
    labels.sort_by_key(|l| (l != "0", l.clone()));
    Ok(DistanceFunction::Poset(PosetDistance::new(labels, "0", &order, entries)?))
}

pub fn write_matrix(s: &UpdateStructure) -> String {
    let mut out = String::new();
    let ws = s.worlds();
    let width = ws.first().map_or(1, |w| w.len()).max(1);
    write!(out, "{:width$}", "").unwrap();
    for w in ws {
        write!(out, " {w}").unwrap();
    }
    out.push('\n');
    for a in ws {
        write!(out, "{a}").unwrap();
        for b in ws {
            let v = s.value(*a, *b).map(|v| v.to_string()).unwrap_or_else(|_| "?".into());
            write!(out, " {v:>width$}").unwrap();
        }
        out.push('\n');
    }
    if let DistanceFunction::Poset(p) = s.distance() {
        for (a, b) in p.declared_order() {
            writeln!(out, "order: {a} < {b}").unwrap();
        }
    }
    out
}

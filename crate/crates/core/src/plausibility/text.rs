//! Text tables: `<element> <rank>` lines for ranked measures, `<a> < <b>`
//! lines for preference orders. A preference line holding a single element
//! declares an element with no edges. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::{Display, Write};

use super::{Measure, PlausibilityError, PreferenceMeasure, Rank, RankedMeasure};

pub fn parse_measure(text: &str) -> Result<Measure<String>, PlausibilityError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let preference = lines.iter().any(|(_, l)| l.contains('<'));
    if preference {
        let mut carrier = Vec::new();
        let mut edges = Vec::new();
        for (n, l) in lines {
            let parts: Vec<&str> = l.split('<').map(str::trim).collect();
            match parts.as_slice() {
                [a, b] if !a.is_empty() && !b.is_empty() && !a.contains(' ') && !b.contains(' ') => {
                    carrier.push(a.to_string());
                    carrier.push(b.to_string());
                    edges.push((a.to_string(), b.to_string()));
                }
                [a] if !a.contains(' ') => carrier.push(a.to_string()),
                _ => return Err(PlausibilityError::Syntax { line: n, message: format!("expected `<a> < <b>`, got `{l}`") }),
            }
        }
        return Ok(Measure::Preference(PreferenceMeasure::new(carrier, &edges)?));
    }
    let mut ranks = BTreeMap::new();
    for (n, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [elem, rank] = parts.as_slice() else {
            return Err(PlausibilityError::Syntax { line: n, message: format!("expected `<element> <rank>`, got `{l}`") });
        };
        let rank = match *rank {
            "inf" => Rank::Infinite,
            r => Rank::Finite(
                r.parse().map_err(|_| PlausibilityError::Syntax { line: n, message: format!("bad rank `{r}`") })?,
            ),
        };
        if ranks.insert(elem.to_string(), rank).is_some() {
            return Err(PlausibilityError::Syntax { line: n, message: format!("`{elem}` ranked twice") });
        }
    }
    Ok(Measure::Ranked(RankedMeasure::new(ranks)?))
}

pub fn write_measure<T: Ord + Clone + Display>(m: &Measure<T>) -> String {
    let mut out = String::new();
    match m {
        Measure::Ranked(r) => {
            for (x, rank) in r.ranks() {
                writeln!(out, "{x} {rank}").unwrap();
            }
        }
        Measure::Preference(p) => {
            let edges = p.edges();
            for x in p.elements() {
                if !edges.iter().any(|(a, b)| a == x || b == x) {
                    writeln!(out, "{x}").unwrap();
                }
            }
            for (a, b) in edges {
                writeln!(out, "{a} < {b}").unwrap();
            }
        }
    }
    out
}

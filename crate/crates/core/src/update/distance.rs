use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use super::UpdateError;
use crate::kernel::World;
use crate::plausibility::{ComparisonResult, Order};

/// Most labels an explicit poset distance may declare.
pub const MAX_LABELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistanceValue {
    Num(Ratio<u64>),
    Label(String),
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Num(r) => write!(f, "{r}"),
            DistanceValue::Label(l) => f.write_str(l),
        }
    }
}

/// Explicit distances drawn from a finite partially ordered set of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetDistance {
    labels: Vec<String>,
    zero: usize,
    /// `below[i]`: labels strictly below label i, transitively closed.
    below: Vec<u64>,
    declared: Vec<(usize, usize)>,
    values: BTreeMap<(World, World), usize>,
}

impl PosetDistance {
    /// `order` lists pairs `(a, b)` meaning a < b. Every label used by
    /// `values` or `order` must be declared in `labels`.
    pub fn new(
        labels: Vec<String>,
        zero: &str,
        order: &[(String, String)],
        values: BTreeMap<(World, World), String>,
    ) -> Result<Self, UpdateError> {
        if labels.len() > MAX_LABELS {
            return Err(UpdateError::TooManyLabels(labels.len()));
        }
        let idx = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| UpdateError::UnknownDistanceValue(l.to_string()));
        let zero = idx(zero)?;
        let mut declared = Vec::new();
        for (a, b) in order {
            declared.push((idx(a)?, idx(b)?));
        }
        let n = labels.len();
        let mut below = vec![0u64; n];
        for &(a, b) in &declared {
            below[b] |= 1 << a;
        }
        for k in 0..n {
            for i in 0..n {
                if below[i] >> k & 1 == 1 {
                    below[i] |= below[k];
                }
            }
        }
        let values = values.into_iter().map(|(k, v)| Ok((k, idx(&v)?))).collect::<Result<_, UpdateError>>()?;
        Ok(PosetDistance { labels, zero, below, declared, values })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero(&self) -> &str {
        &self.labels[self.zero]
    }

    pub fn declared_order(&self) -> Vec<(&str, &str)> {
        self.declared.iter().map(|&(a, b)| (self.labels[a].as_str(), self.labels[b].as_str())).collect()
    }

    pub fn values(&self) -> impl Iterator<Item = ((World, World), &str)> + '_ {
        self.values.iter().map(|(k, v)| (*k, self.labels[*v].as_str()))
    }

    pub(crate) fn label_index(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    pub(crate) fn zero_index(&self) -> usize {
        self.zero
    }

    /// a < b under the closed order.
    pub(crate) fn lt(&self, a: usize, b: usize) -> bool {
        self.below[b] >> a & 1 == 1
    }

    /// Some label lies strictly below itself.
    pub(crate) fn cyclic_label(&self) -> Option<&str> {
        (0..self.labels.len()).find(|&i| self.lt(i, i)).map(|i| self.labels[i].as_str())
    }
}

/// d(w, w′) over world pairs. Symmetry is not required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceFunction {
    Hamming,
    /// One positive weight per atom; d is the weight sum of differing atoms.
    WeightedHamming(Vec<Ratio<u64>>),
    Numeric(BTreeMap<(World, World), Ratio<u64>>),
    Poset(PosetDistance),
}

impl DistanceFunction {
    pub fn kind(&self) -> &'static str {
        match self {
            DistanceFunction::Hamming => "hamming",
            DistanceFunction::WeightedHamming(_) => "weighted-hamming",
            DistanceFunction::Numeric(_) => "explicit-numeric",
            DistanceFunction::Poset(_) => "explicit-poset",
        }
    }

    pub fn value(&self, from: World, to: World) -> Result<DistanceValue, UpdateError> {
        let missing = || UpdateError::MissingDistance { from: from.to_string(), to: to.to_string() };
        Ok(match self {
            DistanceFunction::Hamming => DistanceValue::Num(Ratio::from_integer(from.hamming(to) as u64)),
            DistanceFunction::WeightedHamming(ws) => {
                let mut sum = Ratio::from_integer(0);
                for (i, w) in ws.iter().enumerate().take(from.len()) {
                    if from.get(i) != to.get(i) {
                        sum += w;
                    }
                }
                DistanceValue::Num(sum)
            }
            DistanceFunction::Numeric(m) => DistanceValue::Num(*m.get(&(from, to)).ok_or_else(missing)?),
            DistanceFunction::Poset(p) => {
                DistanceValue::Label(p.labels[*p.values.get(&(from, to)).ok_or_else(missing)?].clone())
            }
        })
    }

    pub fn is_zero(&self, v: &DistanceValue) -> bool {
        match (self, v) {
            (DistanceFunction::Poset(p), DistanceValue::Label(l)) => p.label_index(l) == Some(p.zero),
            (DistanceFunction::Poset(_), _) => false,
            (_, DistanceValue::Num(r)) => *r == Ratio::from_integer(0),
            _ => false,
        }
    }

    /// Numeric kinds compare numerically; poset labels by the declared order,
    /// which is the only source of `Incomparable`.
    pub fn compare(&self, v1: &DistanceValue, v2: &DistanceValue) -> Result<ComparisonResult, UpdateError> {
        let order = match (self, v1, v2) {
            (DistanceFunction::Poset(p), DistanceValue::Label(a), DistanceValue::Label(b)) => {
                let idx = |l: &str| p.label_index(l).ok_or_else(|| UpdateError::UnknownDistanceValue(l.to_string()));
                let (a, b) = (idx(a)?, idx(b)?);
                match (a == b, p.lt(a, b), p.lt(b, a)) {
                    (true, _, _) => Order::Eq,
                    (_, true, _) => Order::Lt,
                    (_, _, true) => Order::Gt,
                    _ => Order::Incomparable,
                }
            }
            (DistanceFunction::Poset(_), DistanceValue::Num(r), _) | (DistanceFunction::Poset(_), _, DistanceValue::Num(r)) => {
                return Err(UpdateError::UnknownDistanceValue(r.to_string()));
            }
            (_, DistanceValue::Num(a), DistanceValue::Num(b)) => match a.cmp(b) {
                std::cmp::Ordering::Less => Order::Lt,
                std::cmp::Ordering::Equal => Order::Eq,
                std::cmp::Ordering::Greater => Order::Gt,
            },
            (_, DistanceValue::Label(l), _) | (_, _, DistanceValue::Label(l)) => {
                return Err(UpdateError::UnknownDistanceValue(l.clone()));
            }
        };
        Ok(ComparisonResult { order, left_bottom: self.is_zero(v1), right_bottom: self.is_zero(v2) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset() -> DistanceFunction {
        let l = |s: &str| s.to_string();
        DistanceFunction::Poset(
            PosetDistance::new(vec![l("0"), l("a"), l("b")], "0", &[(l("0"), l("a")), (l("0"), l("b"))], BTreeMap::new())
                .unwrap(),
        )
    }

    #[test]
    fn comparisons() {
        let n = |x: u64| DistanceValue::Num(Ratio::from_integer(x));
        let l = |s: &str| DistanceValue::Label(s.to_string());
        let h = DistanceFunction::Hamming;
        assert_eq!(h.compare(&n(1), &n(2)).unwrap().order, Order::Lt);
        let c = h.compare(&n(0), &n(3)).unwrap();
        assert!(c.order == Order::Lt && c.left_bottom && !c.right_bottom);
        let p = poset();
        assert_eq!(p.compare(&l("a"), &l("b")).unwrap().order, Order::Incomparable);
        assert_eq!(p.compare(&l("0"), &l("b")).unwrap().order, Order::Lt);
        assert_eq!(p.compare(&l("b"), &l("0")).unwrap().order, Order::Gt);
        assert!(matches!(p.compare(&l("c"), &l("a")), Err(UpdateError::UnknownDistanceValue(_))));
        assert!(p.compare(&n(0), &l("a")).is_err());
        assert!(h.compare(&l("a"), &n(1)).is_err());
    }

    #[test]
    fn weighted_values() {
        let d = DistanceFunction::WeightedHamming(vec![Ratio::new(1, 2), Ratio::from_integer(3)]);
        let v = d.value(World::parse_bits("00").unwrap(), World::parse_bits("11").unwrap()).unwrap();
        assert_eq!(v, DistanceValue::Num(Ratio::new(7, 2)));
    }
}

use std::collections::BTreeSet;
use std::fmt;

use super::world::{Vocabulary, World};

/// Propositional formula. Atoms are indices into a [`Vocabulary`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(i: usize) -> Formula {
        Formula::Atom(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `true` for an empty list.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` for an empty list.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn eval(&self, w: World) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(i) => w.get(*i),
            Formula::Not(f) => !f.eval(w),
            Formula::And(a, b) => a.eval(w) && b.eval(w),
            Formula::Or(a, b) => a.eval(w) || b.eval(w),
            Formula::Implies(a, b) => !a.eval(w) || b.eval(w),
            Formula::Iff(a, b) => a.eval(w) == b.eval(w),
        }
    }

    /// Atom indices occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<usize>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(i) => {
                out.insert(*i);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Rewrites atom indices through `f`.
    pub fn map_atoms(&self, f: &impl Fn(usize) -> usize) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(i) => Formula::Atom(f(*i)),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    /// Canonical text, reparseable by [`super::parse`].
    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, vocab }
    }

    pub fn to_text(&self, vocab: &Vocabulary) -> String {
        self.display(vocab).to_string()
    }

    fn binary(&self) -> Option<(BinOp, &Formula, &Formula)> {
        match self {
            Formula::And(a, b) => Some((BinOp::And, a, b)),
            Formula::Or(a, b) => Some((BinOp::Or, a, b)),
            Formula::Implies(a, b) => Some((BinOp::Implies, a, b)),
            Formula::Iff(a, b) => Some((BinOp::Iff, a, b)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinOp {
    And,
    Or,
    Implies,
    Iff,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Implies => "=>",
            BinOp::Iff => "<=>",
        }
    }

    fn right_assoc(self) -> bool {
        self == BinOp::Implies
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    vocab: &'a Vocabulary,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self.formula, self.vocab, f)
    }
}

// Binary children with a different operator are always parenthesized; chains of
// one operator print flat in their associativity direction. This keeps the
// output unambiguous and makes parse(print(f)) == f structurally.
fn write_formula(node: &Formula, vocab: &Vocabulary, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Formula::True => f.write_str("true"),
        Formula::False => f.write_str("false"),
        Formula::Atom(i) => write!(f, "{}", vocab.atom(*i)),
        Formula::Not(x) => {
            f.write_str("!")?;
            if x.binary().is_some() {
                f.write_str("(")?;
                write_formula(x, vocab, f)?;
                f.write_str(")")
            } else {
                write_formula(x, vocab, f)
            }
        }
        _ => {
            let (op, a, b) = node.binary().unwrap();
            let flat_left = matches!(a.binary(), Some((o, _, _)) if o == op && !op.right_assoc());
            let flat_right = matches!(b.binary(), Some((o, _, _)) if o == op && op.right_assoc());
            write_child(a, vocab, flat_left, f)?;
            write!(f, " {} ", op.symbol())?;
            write_child(b, vocab, flat_right, f)
        }
    }
}

fn write_child(child: &Formula, vocab: &Vocabulary, flat: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if child.binary().is_some() && !flat {
        f.write_str("(")?;
        write_formula(child, vocab, f)?;
        f.write_str(")")
    } else {
        write_formula(child, vocab, f)
    }
}

/// The minterm satisfied by exactly `w`: literals in vocabulary order.
pub fn minterm(w: World) -> Formula {
    Formula::conjunction((0..w.len()).map(|i| {
        if w.get(i) {
            Formula::Atom(i)
        } else {
            Formula::not(Formula::Atom(i))
        }
    }))
}

/// Canonical DNF of a world set: minterms in ascending world order, `false` when empty.
pub fn char_formula<'a, I: IntoIterator<Item = &'a World>>(worlds: I) -> Formula {
    let mut ws: Vec<World> = worlds.into_iter().copied().collect();
    ws.sort();
    ws.dedup();
    Formula::disjunction(ws.into_iter().map(minterm))
}

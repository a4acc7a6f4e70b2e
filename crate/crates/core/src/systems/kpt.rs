//! The language with knowledge, belief, next and conditionals, its parser and
//! its model checker.

use super::{Point, SystemError, SystemModel};
use crate::kernel::{parse_iff, Cursor, Formula, ParseError, Tok, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kpt {
    True,
    False,
    Atom(usize),
    /// learn(φ): the observation made at this point is syntactically φ.
    Learn(Formula),
    Not(Box<Kpt>),
    And(Box<Kpt>, Box<Kpt>),
    Or(Box<Kpt>, Box<Kpt>),
    Implies(Box<Kpt>, Box<Kpt>),
    Iff(Box<Kpt>, Box<Kpt>),
    K(Box<Kpt>),
    B(Box<Kpt>),
    /// Next time.
    X(Box<Kpt>),
    /// φ → ψ.
    Cond(Box<Kpt>, Box<Kpt>),
}

impl From<&Formula> for Kpt {
    fn from(f: &Formula) -> Kpt {
        let b = |g: &Formula| Box::new(Kpt::from(g));
        match f {
            Formula::True => Kpt::True,
            Formula::False => Kpt::False,
            Formula::Atom(i) => Kpt::Atom(*i),
            Formula::Not(g) => Kpt::Not(b(g)),
            Formula::And(x, y) => Kpt::And(b(x), b(y)),
            Formula::Or(x, y) => Kpt::Or(b(x), b(y)),
            Formula::Implies(x, y) => Kpt::Implies(b(x), b(y)),
            Formula::Iff(x, y) => Kpt::Iff(b(x), b(y)),
        }
    }
}

impl Kpt {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Kpt) -> Kpt {
        Kpt::Not(Box::new(f))
    }

    pub fn and(a: Kpt, b: Kpt) -> Kpt {
        Kpt::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Kpt, b: Kpt) -> Kpt {
        Kpt::Implies(Box::new(a), Box::new(b))
    }

    pub fn k(f: Kpt) -> Kpt {
        Kpt::K(Box::new(f))
    }

    pub fn b(f: Kpt) -> Kpt {
        Kpt::B(Box::new(f))
    }

    pub fn x(f: Kpt) -> Kpt {
        Kpt::X(Box::new(f))
    }

    pub fn cond(a: Kpt, b: Kpt) -> Kpt {
        Kpt::Cond(Box::new(a), Box::new(b))
    }

    pub fn to_text(&self, vocab: &Vocabulary) -> String {
        let t = |f: &Kpt| f.to_text(vocab);
        match self {
            Kpt::True => "true".into(),
            Kpt::False => "false".into(),
            Kpt::Atom(i) => vocab.atom(*i).to_string(),
            Kpt::Learn(f) => format!("learn({})", f.to_text(vocab)),
            Kpt::Not(f) => format!("!{}", t(f)),
            Kpt::And(a, b) => format!("({} & {})", t(a), t(b)),
            Kpt::Or(a, b) => format!("({} | {})", t(a), t(b)),
            Kpt::Implies(a, b) => format!("({} => {})", t(a), t(b)),
            Kpt::Iff(a, b) => format!("({} <=> {})", t(a), t(b)),
            Kpt::K(f) => format!("K({})", t(f)),
            Kpt::B(f) => format!("B({})", t(f)),
            Kpt::X(f) => format!("X({})", t(f)),
            Kpt::Cond(a, b) => format!("COND({}, {})", t(a), t(b)),
        }
    }
}

/// Parses the extended language. `K(f)`, `B(f)`, `X(f)`, `COND(f, g)` and
/// `learn(φ)` are operators when followed by `(`; `f -> g` is the conditional
/// and binds loosest. The remaining grammar follows the propositional parser.
pub fn parse_kpt(text: &str, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_cond(&mut cur, vocab)?;
    if *cur.peek() != Tok::End {
        return Err(cur.error("an operator or end of input"));
    }
    Ok(f)
}

fn parse_cond(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    let left = parse_iff_k(cur, vocab)?;
    if *cur.peek() == Tok::Arrow {
        cur.bump();
        let right = parse_iff_k(cur, vocab)?;
        return Ok(Kpt::cond(left, right));
    }
    Ok(left)
}

fn parse_iff_k(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    let mut left = parse_implies_k(cur, vocab)?;
    while *cur.peek() == Tok::Iff {
        cur.bump();
        left = Kpt::Iff(Box::new(left), Box::new(parse_implies_k(cur, vocab)?));
    }
    Ok(left)
}

fn parse_implies_k(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    let left = parse_or_k(cur, vocab)?;
    if *cur.peek() == Tok::Implies {
        cur.bump();
        return Ok(Kpt::implies(left, parse_implies_k(cur, vocab)?));
    }
    Ok(left)
}

fn parse_or_k(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    let mut left = parse_and_k(cur, vocab)?;
    while *cur.peek() == Tok::Or {
        cur.bump();
        left = Kpt::Or(Box::new(left), Box::new(parse_and_k(cur, vocab)?));
    }
    Ok(left)
}

fn parse_and_k(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    let mut left = parse_unary_k(cur, vocab)?;
    while *cur.peek() == Tok::And {
        cur.bump();
        left = Kpt::and(left, parse_unary_k(cur, vocab)?);
    }
    Ok(left)
}

fn parse_unary_k(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Kpt, ParseError> {
    match cur.peek().clone() {
        Tok::Not => {
            cur.bump();
            Ok(Kpt::not(parse_unary_k(cur, vocab)?))
        }
        Tok::True => {
            cur.bump();
            Ok(Kpt::True)
        }
        Tok::False => {
            cur.bump();
            Ok(Kpt::False)
        }
        Tok::LParen => {
            cur.bump();
            let f = parse_cond(cur, vocab)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(f)
        }
        Tok::Ident(name, None) if *cur.peek2() == Tok::LParen && is_operator(&name) => {
            cur.bump();
            cur.bump();
            let f = match name.as_str() {
                "learn" => Kpt::Learn(parse_iff(cur, vocab)?),
                "COND" => {
                    let a = parse_cond(cur, vocab)?;
                    cur.expect(Tok::Comma, "`,`")?;
                    Kpt::cond(a, parse_cond(cur, vocab)?)
                }
                op => {
                    let a = Box::new(parse_cond(cur, vocab)?);
                    match op {
                        "K" => Kpt::K(a),
                        "B" => Kpt::B(a),
                        _ => Kpt::X(a),
                    }
                }
            };
            cur.expect(Tok::RParen, "`)`")?;
            Ok(f)
        }
        Tok::Ident(..) => {
            // Delegate atoms (including timestamped ones) to the propositional parser.
            match Kpt::from(&parse_atom(cur, vocab)?) {
                k @ Kpt::Atom(_) => Ok(k),
                _ => unreachable!("an identifier parses to an atom"),
            }
        }
        _ => Err(cur.error("an atom, `true`, `false`, `!`, `(` or an operator")),
    }
}

fn is_operator(name: &str) -> bool {
    matches!(name, "K" | "B" | "X" | "COND" | "learn")
}

fn parse_atom(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    match cur.bump() {
        Tok::Ident(name, stamp) => {
            let atom = crate::kernel::Atom { name, timestamp: stamp };
            vocab.index_of(&atom).map(Formula::Atom).ok_or_else(|| ParseError::UnknownAtom(atom.to_string()))
        }
        _ => unreachable!("called on an identifier"),
    }
}

/// (I, r, m) ⊨ f.
pub fn model_check(sys: &SystemModel, p: Point, f: &Kpt) -> Result<bool, SystemError> {
    sys.check_point(p)?;
    eval(sys, p, f)
}

fn eval(sys: &SystemModel, p: Point, f: &Kpt) -> Result<bool, SystemError> {
    Ok(match f {
        Kpt::True => true,
        Kpt::False => false,
        Kpt::Atom(i) => sys.world_at(p).get(*i),
        Kpt::Learn(g) => p.time > 0 && sys.obs_formula(sys.obs_id(p.run, p.time)) == g,
        Kpt::Not(g) => !eval(sys, p, g)?,
        Kpt::And(a, b) => eval(sys, p, a)? && eval(sys, p, b)?,
        Kpt::Or(a, b) => eval(sys, p, a)? || eval(sys, p, b)?,
        Kpt::Implies(a, b) => !eval(sys, p, a)? || eval(sys, p, b)?,
        Kpt::Iff(a, b) => eval(sys, p, a)? == eval(sys, p, b)?,
        Kpt::K(g) => {
            for &r in sys.cell(sys.key_at(p)) {
                if !eval(sys, Point::new(r, p.time), g)? {
                    return Ok(false);
                }
            }
            true
        }
        Kpt::B(g) => conditional(sys, p, &Kpt::True, g)?,
        Kpt::X(g) => {
            if p.time >= sys.horizon() {
                return Err(SystemError::HorizonExceeded { time: p.time + 1, horizon: sys.horizon() });
            }
            eval(sys, Point::new(p.run, p.time + 1), g)?
        }
        Kpt::Cond(a, b) => conditional(sys, p, a, b)?,
    })
}

/// Pl(⟦a⟧) = ⊥ or Pl(⟦a ∧ b⟧) > Pl(⟦a ∧ ¬b⟧), under the measure of p's cell.
fn conditional(sys: &SystemModel, p: Point, a: &Kpt, b: &Kpt) -> Result<bool, SystemError> {
    let key = sys.key_at(p);
    let (mut sat, mut yes, mut no) = (Vec::new(), Vec::new(), Vec::new());
    for &r in sys.cell(key) {
        let q = Point::new(r, p.time);
        if eval(sys, q, a)? {
            sat.push(r);
            if eval(sys, q, b)? {
                yes.push(r);
            } else {
                no.push(r);
            }
        }
    }
    let m = sys.cell_measure(key);
    Ok(m.is_bottom(&sat) || m.compare(&yes, &no).gt())
}

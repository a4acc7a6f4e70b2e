use thiserror::Error;

use super::formula::Formula;
use super::world::{Atom, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// `token` is 1-based; `offset` is the byte offset of that token.
    #[error("syntax error at token {token} (offset {offset}): expected {expected}, found {found}")]
    Syntax { token: usize, offset: usize, expected: String, found: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String, Option<u32>),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Arrow,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(n, Some(t)) => format!("`{n}@{t}`"),
            Tok::Ident(n, None) => format!("`{n}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'!' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Implies
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'<' if bytes[i..].starts_with(b"<=>") => {
                i += 3;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[start..i];
                let mut stamp = None;
                if i < bytes.len() && bytes[i] == b'@' {
                    let ds = i + 1;
                    let mut j = ds;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    let parsed = text[ds..j].parse::<u32>().ok();
                    if parsed.is_none() {
                        return Err(ParseError::Syntax {
                            token: out.len() + 1,
                            offset: start,
                            expected: "a time after `@`".into(),
                            found: format!("`{}`", &text[start..j.max(ds)]),
                        });
                    }
                    stamp = parsed;
                    i = j;
                }
                match (name, stamp) {
                    ("true", None) => Tok::True,
                    ("false", None) => Tok::False,
                    _ => Tok::Ident(name.to_string(), stamp),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    token: out.len() + 1,
                    offset: start,
                    expected: "a formula token".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Token cursor shared by the propositional and the KPT parsers.
pub(crate) struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor { toks: lex(text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &str) -> ParseError {
        let (tok, offset) = &self.toks[self.pos];
        ParseError::Syntax { token: self.pos + 1, offset: *offset, expected: expected.into(), found: tok.describe() }
    }

    pub(crate) fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }
}

/// Parses formula text over `vocab`.
///
/// Precedence from tightest: `!`, `&`, `|`, `=>` (right associative), `<=>`.
pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_iff(&mut cur, vocab)?;
    if *cur.peek() != Tok::End {
        return Err(cur.error("an operator or end of input"));
    }
    Ok(f)
}

pub(crate) fn parse_iff(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut left = parse_implies(cur, vocab)?;
    while *cur.peek() == Tok::Iff {
        cur.bump();
        let right = parse_implies(cur, vocab)?;
        left = Formula::iff(left, right);
    }
    Ok(left)
}

fn parse_implies(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let left = parse_or(cur, vocab)?;
    if *cur.peek() == Tok::Implies {
        cur.bump();
        let right = parse_implies(cur, vocab)?;
        return Ok(Formula::implies(left, right));
    }
    Ok(left)
}

fn parse_or(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut left = parse_and(cur, vocab)?;
    while *cur.peek() == Tok::Or {
        cur.bump();
        left = Formula::or(left, parse_and(cur, vocab)?);
    }
    Ok(left)
}

fn parse_and(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut left = parse_unary(cur, vocab)?;
    while *cur.peek() == Tok::And {
        cur.bump();
        left = Formula::and(left, parse_unary(cur, vocab)?);
    }
    Ok(left)
}

fn parse_unary(cur: &mut Cursor, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    match cur.peek().clone() {
        Tok::Not => {
            cur.bump();
            Ok(Formula::not(parse_unary(cur, vocab)?))
        }
        Tok::True => {
            cur.bump();
            Ok(Formula::True)
        }
        Tok::False => {
            cur.bump();
            Ok(Formula::False)
        }
        Tok::LParen => {
            cur.bump();
            let f = parse_iff(cur, vocab)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(f)
        }
        Tok::Ident(name, stamp) => {
            cur.bump();
            let atom = Atom { name: name.clone(), timestamp: stamp };
            vocab.index_of(&atom).map(Formula::Atom).ok_or_else(|| ParseError::UnknownAtom(atom.to_string()))
        }
        _ => Err(cur.error("an atom, `true`, `false`, `!` or `(`")),
    }
}

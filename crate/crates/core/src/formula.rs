//! Formulas in negation normal form: parsing, printing and dualization.
//!
//! Surface syntax: atoms are identifiers starting with an uppercase letter;
//! `~` negates, `&` and `|` are the binary connectives, `!` and `?` are the
//! branching recurrence and corecurrence prefixes, and `A -> B` abbreviates
//! `~A | B`. Negation is pushed to the atoms while parsing.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// An atom name such as `P` or `F1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Self, ParseError> {
        if is_atom_name(name) {
            Ok(Atom(Arc::from(name)))
        } else {
            Err(ParseError::new(0, format!("invalid atom name {name:?}")))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A formula in negation normal form. Negation can only sit on an atom.
///
/// Serializes as its printed text.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Formula {
    Pos(Atom),
    Neg(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// Branching recurrence, written `!`.
    Brec(Box<Formula>),
    /// Branching corecurrence, written `?`.
    Cobrec(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Pos(Atom::new(name).expect("valid atom name"))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn brec(a: Formula) -> Formula {
        Formula::Brec(Box::new(a))
    }

    pub fn cobrec(a: Formula) -> Formula {
        Formula::Cobrec(Box::new(a))
    }

    /// The NNF of the negation of `self`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Pos(a) => Formula::Neg(a.clone()),
            Formula::Neg(a) => Formula::Pos(a.clone()),
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
            Formula::Brec(a) => Formula::cobrec(a.negate()),
            Formula::Cobrec(a) => Formula::brec(a.negate()),
        }
    }

    /// `self -> other`, i.e. `~self | other`.
    pub fn implies(&self, other: &Formula) -> Formula {
        Formula::or(self.negate(), other.clone())
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Pos(_) | Formula::Neg(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Brec(a) | Formula::Cobrec(a) => 1 + a.size(),
        }
    }

    /// Atom names occurring in the formula, sorted and deduplicated.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Pos(a) | Formula::Neg(a) => out.push(a.clone()),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Brec(a) | Formula::Cobrec(a) => a.collect_atoms(out),
        }
    }

    /// Short name of the head connective, used by [`subformula_paths`].
    pub fn head(&self) -> &'static str {
        match self {
            Formula::Pos(_) => "Atom",
            Formula::Neg(_) => "NegAtom",
            Formula::And(..) => "And",
            Formula::Or(..) => "Or",
            Formula::Brec(_) => "Brec",
            Formula::Cobrec(_) => "Cobrec",
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }
}

/// One step down a formula tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    Left,
    Right,
    Body,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathStep::Left => "0",
            PathStep::Right => "1",
            PathStep::Body => "body",
        })
    }
}

/// Every node of `f` in preorder, paired with its path from the root.
pub fn subformula_paths(f: &Formula) -> Vec<(Vec<PathStep>, &Formula)> {
    fn walk<'a>(f: &'a Formula, path: &mut Vec<PathStep>, out: &mut Vec<(Vec<PathStep>, &'a Formula)>) {
        out.push((path.clone(), f));
        match f {
            Formula::And(a, b) | Formula::Or(a, b) => {
                path.push(PathStep::Left);
                walk(a, path, out);
                path.pop();
                path.push(PathStep::Right);
                walk(b, path, out);
                path.pop();
            }
            Formula::Brec(a) | Formula::Cobrec(a) => {
                path.push(PathStep::Body);
                walk(a, path, out);
                path.pop();
            }
            Formula::Pos(_) | Formula::Neg(_) => {}
        }
    }
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, x: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        match self {
            Formula::Pos(a) => write!(f, "{a}"),
            Formula::Neg(a) => write!(f, "~{a}"),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let p = self.precedence();
                let op = if matches!(self, Formula::And(..)) { "&" } else { "|" };
                child(f, a, a.precedence() < p)?;
                write!(f, " {op} ")?;
                child(f, b, b.precedence() <= p)
            }
            Formula::Brec(a) => {
                f.write_str("!")?;
                child(f, a, a.precedence() < 3)
            }
            Formula::Cobrec(a) => {
                f.write_str("?")?;
                child(f, a, a.precedence() < 3)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Bang,
    Quest,
    Arrow,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'!' => Tok::Bang,
            b'?' => Tok::Quest,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let name = &text[start..=i];
                if !is_atom_name(name) {
                    return Err(ParseError::new(start, format!("atom {name:?} must start with an uppercase letter")));
                }
                Tok::Ident(name.to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, format!("unknown token {ch:?}")));
            }
        };
        toks.push((start, tok));
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.disjunction()?;
        while self.eat(&Tok::Arrow) {
            let rhs = self.disjunction()?;
            lhs = lhs.implies(&rhs);
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::brec(self.unary()?))
            }
            Some(Tok::Quest) => {
                self.pos += 1;
                Ok(Formula::cobrec(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::new(self.offset(), "expected ')'"));
                }
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Pos(Atom(Arc::from(name.as_str()))))
            }
            Some(t) => Err(ParseError::new(offset, format!("unexpected {t:?}"))),
            None => Err(ParseError::new(offset, "unexpected end of input")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::new(p.offset(), "trailing input"));
    }
    Ok(f)
}

impl From<Formula> for String {
    fn from(f: Formula) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Formula {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_formula(&s)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn de_morgan_on_parse() {
        assert_eq!(
            p("~(P & Q)"),
            Formula::or(p("P").negate(), p("Q").negate())
        );
        assert_eq!(p("~~P"), p("P"));
        assert_eq!(p("~!P"), Formula::cobrec(p("~P")));
    }

    #[test]
    fn implication_sugar() {
        assert_eq!(
            p("!P -> P"),
            Formula::or(Formula::cobrec(p("~P")), p("P"))
        );
        assert_eq!(p("!P -> P").to_string(), "?~P | P");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("P | Q & R"), Formula::or(p("P"), Formula::and(p("Q"), p("R"))));
        assert_eq!(p("P & Q & R"), Formula::and(Formula::and(p("P"), p("Q")), p("R")));
        assert_eq!(p("!P & Q"), Formula::and(Formula::brec(p("P")), p("Q")));
        assert_eq!(p("A -> B -> C"), p("(A -> B) -> C"));
    }

    #[test]
    fn printing() {
        assert_eq!(p("P & Q").to_string(), "P & Q");
        assert_eq!(p("P & (Q & R)").to_string(), "P & (Q & R)");
        assert_eq!(p("(P | Q) & R").to_string(), "(P | Q) & R");
        assert_eq!(p("!(P | Q)").to_string(), "!(P | Q)");
        assert_eq!(p("!?~F").to_string(), "!?~F");
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_formula("P & $").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_formula("P &").is_err());
        assert!(parse_formula("(P").is_err());
        assert!(parse_formula("p").is_err());
        assert!(parse_formula("P Q").is_err());
    }

    #[test]
    fn paths() {
        let f = p("P & Q");
        let paths: Vec<String> = subformula_paths(&f)
            .iter()
            .map(|(path, g)| {
                let s: Vec<String> = path.iter().map(|s| s.to_string()).collect();
                format!("{}:{}", s.join("."), g.head())
            })
            .collect();
        assert_eq!(paths, vec![":And", "0:Atom", "1:Atom"]);
        let g = p("!P");
        assert_eq!(subformula_paths(&g)[1].0, vec![PathStep::Body]);
    }
}

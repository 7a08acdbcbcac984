//! ASCII notation for formulas.
//!
//! `bot`, `top`, `~F`, `F & G`, `F | G`, `F -> G` (right associative),
//! `F <-> G`, `forall X Y (F)`, `exists X (F)`, `s = t`, `s != t`.
//! Binding strength decreases in that order from `~` to `<->`.

use std::fmt;

use thiserror::Error;

use super::Formula;
use crate::ast::{Atom, Term};
use crate::parser::is_variable_name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {offset}: expected {expected}")]
pub struct FormulaParseError {
    pub offset: usize,
    pub expected: String,
}

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn iff_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(fs) if fs.len() == 2 => match (&fs[0], &fs[1]) {
            (Formula::Implies(a, b), Formula::Implies(c, d)) if a == d && b == c => Some((a, b)),
            _ => None,
        },
        _ => None,
    }
}

fn level(f: &Formula) -> u8 {
    if iff_parts(f).is_some() {
        return IFF;
    }
    match f {
        Formula::And(fs) if fs.len() >= 2 => AND,
        Formula::Or(fs) if fs.len() >= 2 => OR,
        Formula::Implies(a, b) if **b == Formula::Bottom || **a == Formula::Bottom && **b == Formula::Bottom => UNARY,
        Formula::Implies(..) => IMP,
        _ => UNARY,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        write!(out, "(")?;
        write_formula(f, out)?;
        write!(out, ")")
    } else {
        write_formula(f, out)
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some((a, b)) = iff_parts(f) {
        write_at(a, IMP, out)?;
        write!(out, " <-> ")?;
        return write_at(b, IMP, out);
    }
    match f {
        Formula::Bottom => write!(out, "bot"),
        Formula::Atom(Atom::Eq(l, r)) => write!(out, "{l} = {r}"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::And(fs) if fs.is_empty() => write!(out, "top"),
        Formula::Or(fs) if fs.is_empty() => write!(out, "bot"),
        Formula::And(fs) | Formula::Or(fs) if fs.len() == 1 => {
            // Singleton junctions have no notation of their own.
            write!(out, "(")?;
            write_formula(&fs[0], out)?;
            write!(out, ")")
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let (sep, lvl) = if matches!(f, Formula::And(_)) { (" & ", AND) } else { (" | ", OR) };
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(out, "{sep}")?;
                }
                write_at(g, lvl + 1, out)?;
            }
            Ok(())
        }
        Formula::Implies(a, b) if **a == Formula::Bottom && **b == Formula::Bottom => write!(out, "top"),
        Formula::Implies(a, b) if **b == Formula::Bottom => {
            write!(out, "~")?;
            match &**a {
                Formula::Atom(Atom::Eq(..)) => {
                    write!(out, "(")?;
                    write_formula(a, out)?;
                    write!(out, ")")
                }
                _ => write_at(a, UNARY, out),
            }
        }
        Formula::Implies(a, b) => {
            write_at(a, IMP + 1, out)?;
            write!(out, " -> ")?;
            write_at(b, IMP, out)
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let q = if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" };
            write!(out, "{q} {} (", vs.join(" "))?;
            write_formula(g, out)?;
            write!(out, ")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Eq,
    Neq,
    Eof,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, FormulaParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &src[i..];
        let tok = if c.is_ascii_alphanumeric() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        } else if rest.starts_with("<->") {
            i += 3;
            Tok::Iff
        } else if rest.starts_with("->") {
            i += 2;
            Tok::Imp
        } else if rest.starts_with("!=") {
            i += 2;
            Tok::Neq
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '~' => Tok::Not,
                '&' => Tok::And,
                '|' => Tok::Or,
                '=' => Tok::Eq,
                _ => return Err(FormulaParseError { offset: start, expected: "a formula token".into() }),
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct P {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    /// Capitalized names stand for atoms rather than variables.
    propositional: bool,
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> FormulaParseError {
        FormulaParseError { offset: self.toks[self.pos].0, expected: expected.into() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FormulaParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaParseError> {
        let mut f = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let g = self.imp()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<Formula, FormulaParseError> {
        let f = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let g = self.imp()?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, FormulaParseError> {
        let mut fs = vec![self.and()?];
        while *self.peek() == Tok::Or {
            self.bump();
            fs.push(self.and()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Formula::Or(fs) })
    }

    fn and(&mut self) -> Result<Formula, FormulaParseError> {
        let mut fs = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            fs.push(self.unary()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Formula::And(fs) })
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Ident(q) if q == "forall" || q == "exists" => {
                self.bump();
                let mut vars = Vec::new();
                while let Tok::Ident(v) = self.peek().clone() {
                    if !is_variable_name(&v) {
                        break;
                    }
                    self.bump();
                    vars.push(v);
                }
                if vars.is_empty() {
                    return Err(self.err("a quantified variable"));
                }
                let body = self.unary()?;
                Ok(if q == "forall" { Formula::Forall(vars, Box::new(body)) } else { Formula::Exists(vars, Box::new(body)) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "bot" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(s) if s == "top" => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Ident(_) => {
                let t = self.term()?;
                match self.peek() {
                    Tok::Eq => {
                        self.bump();
                        Ok(Formula::Atom(Atom::Eq(t, self.term()?)))
                    }
                    Tok::Neq => {
                        self.bump();
                        Ok(Formula::neg(Formula::Atom(Atom::Eq(t, self.term()?))))
                    }
                    _ => match t {
                        Term::Const(name) => Ok(Formula::Atom(Atom::Pred { name, args: Vec::new() })),
                        Term::App(name, args) => Ok(Formula::Atom(Atom::Pred { name, args })),
                        Term::Var(name) if self.propositional => Ok(Formula::Atom(Atom::Pred { name, args: Vec::new() })),
                        Term::Var(_) => Err(self.err("`=` after a variable")),
                    },
                }
            }
            _ => Err(self.err("a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, FormulaParseError> {
        match self.bump() {
            Tok::Ident(s) if is_variable_name(&s) => Ok(Term::Var(s)),
            Tok::Ident(s) => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = vec![self.term()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::App(s, args))
                } else {
                    Ok(Term::Const(s))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.err("a term"))
            }
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, FormulaParseError> {
    parse_with(src, false)
}

/// Like [`parse_formula`], but a bare capitalized name such as `F` is a
/// propositional atom.
pub fn parse_propositional(src: &str) -> Result<Formula, FormulaParseError> {
    parse_with(src, true)
}

fn parse_with(src: &str, propositional: bool) -> Result<Formula, FormulaParseError> {
    let mut p = P { toks: lex(src)?, pos: 0, propositional };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("end of formula"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let f = parse_formula("~p & q | r -> s -> t").unwrap();
        let expected = Formula::implies(
            Formula::Or(vec![
                Formula::And(vec![Formula::neg(parse_formula("p").unwrap()), parse_formula("q").unwrap()]),
                parse_formula("r").unwrap(),
            ]),
            Formula::implies(parse_formula("s").unwrap(), parse_formula("t").unwrap()),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn print_roundtrip() {
        for src in [
            "~(p & q) -> ~p | ~q",
            "forall X (p(X) -> q(X))",
            "~~a & c -> a",
            "(p -> q) -> r",
            "(a & b) & c",
            "p <-> q & r",
            "exists A__1 A__2 (o(A__1,I) & o(A__2,I) & ~(A__1 = A__2))",
            "top",
            "bot",
            "~(p -> q)",
            "(p | q) & r",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(f.to_string(), src, "{src}");
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn errors() {
        assert!(parse_formula("p &").is_err());
        assert!(parse_formula("X").is_err());
        assert!(parse_formula("p $ q").is_err());
    }
}

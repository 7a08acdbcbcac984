//! Parser and formatter for the `.lp` surface syntax.
//!
//! ```text
//! rule   ::= head? (":-" body?)? "."
//! head   ::= "{" atom "}" | atom ("|" atom)*
//! body   ::= elem ("," elem)*
//! elem   ::= "not"* (INT "<=" "#count" "{" VAR ("," VAR)* ":" lits "}" | lit)
//! lit    ::= atom | term "=" term | term "!=" term | "#true"
//! ```
//! Variables start with an uppercase letter, constants with a lowercase
//! letter or a digit. `%` starts a line comment.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ast::{Aggregate, Atom, BodyElem, Head, Literal, Polarity, Program, Rule, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    If,
    Bar,
    Colon,
    Eq,
    Neq,
    Leq,
    Count,
    True,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Leq => "`<=`".into(),
            Tok::Count => "`#count`".into(),
            Tok::True => "`#true`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut bump = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            bump(1, &mut i);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 6)].iter().collect();
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump(1, &mut i);
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, column: c0 });
            continue;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump(1, &mut i);
            }
            out.push(Spanned { tok: Tok::Int(chars[start..i].iter().collect()), line: l0, column: c0 });
            continue;
        } else if rest.starts_with(":-") {
            bump(2, &mut i);
            Tok::If
        } else if rest.starts_with("!=") {
            bump(2, &mut i);
            Tok::Neq
        } else if rest.starts_with("<=") {
            bump(2, &mut i);
            Tok::Leq
        } else if rest.starts_with("#count") {
            bump(6, &mut i);
            Tok::Count
        } else if rest.starts_with("#true") {
            bump(5, &mut i);
            Tok::True
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '|' => Tok::Bar,
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                _ => {
                    return Err(ParseError {
                        line: l0,
                        column: c0,
                        expected: "a token".into(),
                        found: format!("`{c}`"),
                    })
                }
            };
            bump(1, &mut i);
            t
        };
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

pub(crate) fn is_variable_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    arities: BTreeMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, expected: expected.into(), found: s.tok.describe() }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(Program::new(rules))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let head = match self.peek() {
            Tok::If => Head::Disjunction(Vec::new()),
            Tok::LBrace => {
                self.advance();
                let a = self.pred_atom()?;
                self.expect(Tok::RBrace, "`}`")?;
                Head::Choice(a)
            }
            _ => {
                let mut atoms = vec![self.pred_atom()?];
                while *self.peek() == Tok::Bar {
                    self.advance();
                    atoms.push(self.pred_atom()?);
                }
                Head::Disjunction(atoms)
            }
        };
        let mut body = Vec::new();
        if *self.peek() == Tok::If {
            self.advance();
            if *self.peek() != Tok::Dot {
                body.push(self.body_elem()?);
                while *self.peek() == Tok::Comma {
                    self.advance();
                    body.push(self.body_elem()?);
                }
            }
        }
        self.expect(Tok::Dot, "`.`")?;
        Ok(Rule::new(head, body))
    }

    fn nots(&mut self) -> usize {
        let mut n = 0;
        while matches!(self.peek(), Tok::Ident(s) if s == "not") {
            self.advance();
            n += 1;
        }
        n
    }

    fn body_elem(&mut self) -> Result<BodyElem, ParseError> {
        let start = self.pos;
        let n = self.nots();
        if matches!(self.peek(), Tok::Int(_)) && *self.peek_at(1) == Tok::Leq {
            if n > 1 {
                self.pos = start;
                return Err(self.error("at most one `not` before an aggregate"));
            }
            let agg = self.aggregate()?;
            return Ok(BodyElem::Agg { negated: n == 1, agg });
        }
        self.pos = start;
        Ok(BodyElem::Lit(self.literal()?))
    }

    fn aggregate(&mut self) -> Result<Aggregate, ParseError> {
        let bound = match self.advance() {
            Tok::Int(s) => s.parse::<usize>().map_err(|_| self.error("a small integer bound"))?,
            _ => unreachable!(),
        };
        self.expect(Tok::Leq, "`<=`")?;
        self.expect(Tok::Count, "`#count`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut vars = vec![self.variable()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            vars.push(self.variable()?);
        }
        self.expect(Tok::Colon, "`:`")?;
        let mut conditions = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            conditions.push(self.literal()?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Aggregate { bound, vars, conditions })
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if is_variable_name(&s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.error("a variable")),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let start = self.pos;
        let n = self.nots();
        if *self.peek() == Tok::True {
            self.advance();
            return polarity(n).map(|p| Literal { polarity: p, atom: Atom::Top }).ok_or_else(|| {
                self.pos = start;
                self.error("at most two `not`")
            });
        }
        let at = self.pos;
        let t = self.term()?;
        let (atom, extra) = match self.peek() {
            Tok::Eq => {
                self.advance();
                (Atom::Eq(t, self.term()?), 0)
            }
            Tok::Neq => {
                self.advance();
                (Atom::Eq(t, self.term()?), 1)
            }
            _ => {
                self.pos = at;
                (self.pred_atom()?, 0)
            }
        };
        match polarity(n + extra) {
            Some(p) => Ok(Literal { polarity: p, atom }),
            None => {
                self.pos = start;
                Err(self.error("at most two negations"))
            }
        }
    }

    fn pred_atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.pos;
        let name = match self.peek().clone() {
            Tok::Ident(s) if !is_variable_name(&s) && s != "not" => {
                self.advance();
                s
            }
            _ => return Err(self.error("a predicate atom")),
        };
        let args = if *self.peek() == Tok::LParen {
            self.advance();
            self.term_list()?
        } else {
            Vec::new()
        };
        match self.arities.get(&name) {
            Some(&k) if k != args.len() => {
                self.pos = at;
                return Err(self.error(&format!("`{name}` with arity {k}")));
            }
            _ => {
                self.arities.insert(name.clone(), args.len());
            }
        }
        Ok(Atom::Pred { name, args })
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.advance();
                Ok(Term::Const(s))
            }
            Tok::Ident(s) if is_variable_name(&s) => {
                self.advance();
                Ok(Term::Var(s))
            }
            Tok::Ident(s) if s != "not" => {
                self.advance();
                if *self.peek() == Tok::LParen {
                    self.advance();
                    Ok(Term::App(s, self.term_list()?))
                } else {
                    Ok(Term::Const(s))
                }
            }
            _ => Err(self.error("a term")),
        }
    }
}

fn polarity(n: usize) -> Option<Polarity> {
    match n {
        0 => Some(Polarity::Pos),
        1 => Some(Polarity::Neg),
        2 => Some(Polarity::NegNeg),
        _ => None,
    }
}

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, arities: BTreeMap::new() }.program()
}

/// Parses a comma-separated list of body elements, e.g. `q(X,Y), not r(X)`.
pub fn parse_body(src: &str) -> Result<Vec<BodyElem>, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, arities: BTreeMap::new() };
    let mut body = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(body);
    }
    body.push(p.body_elem()?);
    while *p.peek() == Tok::Comma {
        p.advance();
        body.push(p.body_elem()?);
    }
    if *p.peek() != Tok::Eof {
        return Err(p.error("`,` or end of input"));
    }
    Ok(body)
}

/// Parses a single predicate atom such as `u(X)`.
pub fn parse_atom(src: &str) -> Result<Atom, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, arities: BTreeMap::new() };
    let a = p.pred_atom()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(a)
}

/// Canonical text of a program: one rule per line.
pub fn format_program(program: &Program) -> String {
    program.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_rule_with_negated_equality() {
        let p = parse_program("{o(A,I)} :- action(A), step(I), not goal(I), I != n.").unwrap();
        let r = &p.rules[0];
        assert_eq!(r.head, Head::Choice(Atom::pred("o", vec![Term::var("A"), Term::var("I")])));
        assert_eq!(r.body.len(), 4);
        assert_eq!(
            r.body[3],
            BodyElem::Lit(Literal::neg(Atom::Eq(Term::var("I"), Term::constant("n"))))
        );
    }

    #[test]
    fn aggregate_bodies() {
        let p = parse_program(":- not 1 <= #count{A : o(A,I)}, step(I).").unwrap();
        match &p.rules[0].body[0] {
            BodyElem::Agg { negated, agg } => {
                assert!(*negated);
                assert_eq!(agg.bound, 1);
                assert_eq!(agg.vars, vec!["A".to_string()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arity_conflict() {
        let err = parse_program("p(a). p(a,b).").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
        assert!(err.expected.contains("arity 1"));
    }

    #[test]
    fn unterminated() {
        assert!(parse_program("p :- q").is_err());
        assert!(parse_program("p :- not not not q.").is_err());
        assert!(parse_program("X.").is_err());
    }

    #[test]
    fn roundtrip_samples() {
        for src in [
            "a | b | c | d | e(1).\na :- b.\nb :- a.\n",
            ":- 2 <= #count{A : o(A,I)}, step(I), not goal(I), I != 2.\n",
            "p :- not not q, #true, not #true.\n{q}.\n:-.\n",
            "s(X,Z) :- p(Z), q(X,Y), r(X,Y), t(X).\n",
            "p(f(a,g(X))) :- X = b, not X != c.\n",
        ] {
            let p = parse_program(src).unwrap();
            assert_eq!(format_program(&p), src);
            assert_eq!(parse_program(&format_program(&p)).unwrap(), p);
        }
    }

    #[test]
    fn comments() {
        let p = parse_program("% header\np. % trailing\n").unwrap();
        assert_eq!(p.rules.len(), 1);
    }
}

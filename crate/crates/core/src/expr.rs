//! Text format for algebra elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := coef factor* | factor+
//! factor := name ['*'] | '(' expr ')' ['*']
//! coef   := integer ['/' integer]
//! ```
//!
//! Juxtaposition is multiplication and a postfix `*` is the involution. A term
//! that is only a coefficient stands for that multiple of `1 = Σ v`, so `0`
//! parses as zero. Names are vertex or edge names of the graph.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{Algebra, Element, Monomial};
use crate::graph::Name;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownName(String),
    ZeroDenominator,
    Unexpected { found: String, expected: Vec<String> },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownName(n) => write!(f, "unknown name `{n}`"),
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {}, found {found}", expected.join(" or "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(BigInt),
    Plus,
    Minus,
    Slash,
    Star,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_operator(c: char) -> bool {
    "+-/*()".contains(c)
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut advance = |c: char| {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            advance(c);
            chars.next();
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                advance(d);
                chars.next();
            }
            Tok::Int(s.parse().expect("digits"))
        } else if is_operator(c) {
            advance(c);
            chars.next();
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '/' => Tok::Slash,
                '*' => Tok::Star,
                '(' => Tok::LParen,
                _ => Tok::RParen,
            }
        } else {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| !d.is_whitespace() && !is_operator(**d)) {
                s.push(d);
                advance(d);
                chars.next();
            }
            Tok::Name(s)
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    out
}

struct Parser<'a> {
    alg: &'a Algebra,
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error_here(ParseErrorKind::Unexpected {
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Name(_) | Tok::LParen)
    }

    fn expr(&mut self) -> PResult<Element> {
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Element> {
        let coef = match self.peek() {
            Tok::Int(_) => Some(self.coef()?),
            _ => None,
        };
        if coef.is_none() && !self.starts_factor() {
            return Err(self.unexpected(&["a name", "an integer", "`(`"]));
        }
        let mut acc: Option<Element> = None;
        while self.starts_factor() {
            let f = self.factor()?;
            acc = Some(match acc {
                None => f,
                Some(a) => &a * &f,
            });
        }
        let acc = acc.unwrap_or_else(|| self.alg.one());
        Ok(match coef {
            Some(c) => acc.scale(&c),
            None => acc,
        })
    }

    fn coef(&mut self) -> PResult<Scalar> {
        let num = match self.bump() {
            Tok::Int(n) => n,
            _ => unreachable!("caller checked for an integer"),
        };
        let den = if *self.peek() == Tok::Slash {
            self.bump();
            match self.peek().clone() {
                Tok::Int(d) => {
                    let at = self.error_here(ParseErrorKind::ZeroDenominator);
                    self.bump();
                    Some((d, at))
                }
                _ => return Err(self.unexpected(&["an integer"])),
            }
        } else {
            None
        };
        let field = self.alg.field();
        match den {
            None => Ok(field.from_bigint(&num)),
            Some((d, at)) => field.fraction(&num, &d).map_err(|_| at),
        }
    }

    fn factor(&mut self) -> PResult<Element> {
        let here = self.error_here(ParseErrorKind::ZeroDenominator);
        let base = match self.bump() {
            Tok::Name(n) => match self.alg.graph().resolve(&n) {
                Some(Name::Vertex(v)) => self.alg.vertex(v),
                Some(Name::Edge(e)) => self.alg.edge(e),
                None => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownName(n),
                        ..here
                    })
                }
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected(&["`)`", "`+`", "`-`", "a name", "`(`"]));
                }
                self.bump();
                inner
            }
            _ => unreachable!("caller checked for a factor"),
        };
        if *self.peek() == Tok::Star {
            self.bump();
            return Ok(base.star());
        }
        Ok(base)
    }
}

/// Parses an expression and returns its normal form.
pub fn parse(alg: &Algebra, text: &str) -> Result<Element, ParseError> {
    let mut p = Parser {
        alg,
        toks: tokenize(text),
        pos: 0,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["`+`", "`-`", "a name", "`(`", "end of input"]));
    }
    Ok(out)
}

/// `pq*` as text: the edges of `p`, then the edges of `q` in reverse order
/// each followed by `*`. A vertex prints as its name.
pub fn render_monomial(alg: &Algebra, m: &Monomial) -> String {
    let g = alg.graph();
    if m.is_vertex() {
        return g.vertex_name(m.range()).to_string();
    }
    let mut parts: Vec<String> = m.p().edges().iter().map(|&e| g.edge_name(e).to_string()).collect();
    parts.extend(m.q().edges().iter().rev().map(|&e| format!("{}*", g.edge_name(e))));
    parts.join(" ")
}

/// The canonical text of an element: terms in canonical order, coefficient
/// `1` omitted, `0` for zero.
pub fn render(a: &Element) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let alg = a.algebra();
    let mut out = String::new();
    for (i, (m, c)) in a.terms().enumerate() {
        let negative = c.is_negative();
        let magnitude = if negative { -c } else { c.clone() };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
            out.push(' ');
        }
        out.push_str(&render_monomial(alg, m));
    }
    out
}

//! Formulas over a phase structure.
//!
//! ```text
//! expr    := par ( ("-o" | "⊸") expr )?          right associative
//! par     := tensor ( ("par" | "⅋" | "+") tensor )*
//! tensor  := postfix ( ("x" | "*" | "⊗" | "×" | "&") postfix )*
//! postfix := atom ( "^" "⊥"? )*
//! atom    := identifier | "(" expr ")"
//! ```
//!
//! `x` is reserved for the tensor, so no element may be called `x` inside a
//! formula.

use std::fmt;

use thiserror::Error;

use super::{PhaseError, PhaseStructure, TensorMode};
use crate::lattice::Element;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Atom(String),
    Dual(Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Par(Box<Expr>, Box<Expr>),
    With(Box<Expr>, Box<Expr>),
    Plus(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => f.write_str(a),
            Expr::Dual(x) => write!(f, "{x}^"),
            Expr::Tensor(a, b) => write!(f, "({a} x {b})"),
            Expr::Par(a, b) => write!(f, "({a} par {b})"),
            Expr::With(a, b) => write!(f, "({a} & {b})"),
            Expr::Plus(a, b) => write!(f, "({a} + {b})"),
            Expr::Implies(a, b) => write!(f, "({a} -o {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tensor,
    With,
    Par,
    Plus,
    Implies,
    Caret,
    Perp,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '^' => Some(Tok::Caret),
            '⊥' => Some(Tok::Perp),
            '*' | '⊗' | '×' => Some(Tok::Tensor),
            '&' => Some(Tok::With),
            '+' => Some(Tok::Plus),
            '⅋' => Some(Tok::Par),
            '⊸' => Some(Tok::Implies),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col, t));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'o') {
            out.push((col, Tok::Implies));
            i += 2;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push((
                col,
                match word.as_str() {
                    "x" => Tok::Tensor,
                    "par" => Tok::Par,
                    _ => Tok::Ident(word),
                },
            ));
        } else {
            return Err(ParseError {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
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

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.par()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.expr()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.tensor()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> Expr = match self.peek() {
                Some(Tok::Par) => Expr::Par,
                Some(Tok::Plus) => Expr::Plus,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = ctor(Box::new(lhs), Box::new(self.tensor()?));
        }
    }

    fn tensor(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.postfix()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> Expr = match self.peek() {
                Some(Tok::Tensor) => Expr::Tensor,
                Some(Tok::With) => Expr::With,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = ctor(Box::new(lhs), Box::new(self.postfix()?));
        }
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            if self.peek() == Some(&Tok::Perp) {
                self.pos += 1;
            }
            e = Expr::Dual(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Atom(name))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => self.error(format!("unexpected {t:?}")),
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Evaluates `expr`. `X -o Y` is `(X × Y^⊥)^⊥`, the form goal priorities
/// are written in, with `×` taken in `mode`.
pub fn eval(ps: &PhaseStructure, expr: &Expr, mode: TensorMode) -> Result<Element, PhaseError> {
    let go = |e: &Expr| eval(ps, e, mode);
    match expr {
        Expr::Atom(name) => ps.element(name),
        Expr::Dual(x) => ps.dual(go(x)?),
        Expr::Tensor(a, b) => ps.tensor(go(a)?, go(b)?, mode),
        Expr::Par(a, b) => ps.par(go(a)?, go(b)?),
        Expr::With(a, b) => ps.additive_conj(go(a)?, go(b)?),
        Expr::Plus(a, b) => ps.additive_disj(go(a)?, go(b)?),
        Expr::Implies(a, b) => {
            let consequent = ps.dual(go(b)?)?;
            ps.dual(ps.tensor(go(a)?, consequent, mode)?)
        }
    }
}

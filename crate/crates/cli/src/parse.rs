//! Expressions in `x`: a small recursive-descent parser and its lowering to
//! exact rational functions.
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := int | 'x' | '(' expr ')'
//! ```

use std::fmt;

use modo_core::{Rational, RationalFunction};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    X,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset of the offending input.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: Option<char>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: expected {}", self.offset, self.expected.join(" or "))?;
        match self.found {
            Some(c) => write!(f, ", found '{c}'"),
            None => write!(f, ", found end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LowerError {
    #[error("division by an expression that is identically zero")]
    ZeroDenominator,
}

/// Parse or lowering failure for a whole expression string.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Lower(#[from] LowerError),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<char> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        trimmed.chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn error(&mut self, expected: Vec<&'static str>) -> ParseError {
        let found = self.peek();
        ParseError { offset: self.pos, expected, found }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let negate = self.peek() == Some('-');
        if negate {
            self.bump();
        }
        let mut lhs = self.term()?;
        if negate {
            lhs = Expr::Neg(Box::new(lhs));
        }
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.error(vec!["non-negative integer exponent"]));
        }
        let start = self.pos;
        let digits = self.digits();
        let exp = digits.parse::<u32>().map_err(|_| ParseError {
            offset: start,
            expected: vec!["exponent below 2^32"],
            found: digits.chars().next(),
        })?;
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('x') => {
                self.bump();
                Ok(Expr::X)
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error(vec!["')'", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Expr::Int(digits.parse().expect("ascii digits")))
            }
            _ => Err(self.error(vec!["integer", "'x'", "'('"])),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        self.pos += len;
        &self.src[start..start + len]
    }
}

/// Parses a complete expression string.
pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error(vec!["operator", "end of input"]));
    }
    Ok(e)
}

/// Evaluates an expression tree to a canonical rational function.
pub fn lower_expression(e: &Expr) -> Result<RationalFunction, LowerError> {
    Ok(match e {
        Expr::Int(n) => RationalFunction::constant(Rational::from_integer(n.clone())),
        Expr::X => RationalFunction::x(),
        Expr::Neg(inner) => -lower_expression(inner)?,
        Expr::Pow(base, k) => lower_expression(base)?.pow(*k),
        Expr::Binary(op, a, b) => {
            let (a, b) = (lower_expression(a)?, lower_expression(b)?);
            match op {
                BinOp::Add => &a + &b,
                BinOp::Sub => &a - &b,
                BinOp::Mul => &a * &b,
                BinOp::Div => a.checked_div(&b).map_err(|_| LowerError::ZeroDenominator)?,
            }
        }
    })
}

/// Parses and lowers in one step.
pub fn parse_rational_function(src: &str) -> Result<RationalFunction, ExprError> {
    Ok(lower_expression(&parse_expression(src)?)?)
}

//! Text syntax for noncommutative polynomials.
//!
//! ```text
//! expr    = product , { ( "+" | "-" ) , product } ;
//! product = unary , [ "*" , product ] ;
//! unary   = "-" , unary | power ;
//! power   = atom , [ "^" , integer ] ;
//! atom    = number | "i" | variable | "(" , expr , ")" | "adj" , "(" , expr , ")" ;
//! ```
//!
//! Variables are `x1` to `x99`. Numbers are integers, decimals (read as
//! exact rationals) or `p/q`. Multiplication is never implicit, and powers
//! do not chain without parentheses.

mod parser;

use std::fmt;

use num_traits::Signed;

use crate::error::Result;
use crate::ncpoly::{NcPoly, Word};
use crate::scalar::Scalar;

/// Largest admissible variable index.
pub const MAX_VAR_INDEX: usize = 99;

/// A syntax error at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: {reason}")]
pub struct ParseError {
    pub offset: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Scalar),
    /// 1-based generator index.
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Adj(Box<Expr>),
}

impl Expr {
    /// Largest variable index appearing, or 0 for a constant expression.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(k) => *k,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Adj(a) => a.max_var(),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parser::parse(text)
}

/// Expands an expression into a polynomial in `n` variables.
pub fn lower(ast: &Expr, n: usize) -> Result<NcPoly> {
    Ok(match ast {
        Expr::Const(c) => NcPoly::constant(n, c.clone()),
        Expr::Var(k) => NcPoly::var(n, *k)?,
        Expr::Add(a, b) => lower(a, n)?.add(&lower(b, n)?)?,
        Expr::Sub(a, b) => lower(a, n)?.sub(&lower(b, n)?)?,
        Expr::Neg(a) => lower(a, n)?.neg(),
        Expr::Mul(a, b) => lower(a, n)?.mul(&lower(b, n)?)?,
        Expr::Pow(a, k) => lower(a, n)?.pow(*k),
        Expr::Adj(a) => lower(a, n)?.adjoint(),
    })
}

/// Parses and lowers in one step. With `n = None` the variable count is the
/// largest index used (at least 1).
pub fn parse_poly(text: &str, n: Option<usize>) -> Result<NcPoly> {
    let ast = parse(text)?;
    lower(&ast, n.unwrap_or_else(|| ast.max_var().max(1)))
}

/// Canonical text of a polynomial; [`parse`] followed by [`lower`] inverts it.
pub fn format(p: &NcPoly) -> String {
    let mut out = String::new();
    for (k, (w, c)) in p.terms().enumerate() {
        let (negative, body) = term_text(w, c);
        match (k, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Sign and magnitude text of `c · w`.
fn term_text(w: &Word, c: &Scalar) -> (bool, String) {
    let (negative, coeff) = coefficient_text(c);
    let word = w.letters().iter().map(|l| format!("x{l}")).collect::<Vec<_>>().join("*");
    let body = match (coeff, word.is_empty()) {
        (None, true) => "1".to_owned(),
        (None, false) => word,
        (Some(c), true) => c,
        (Some(c), false) => format!("{c}*{word}"),
    };
    (negative, body)
}

/// `None` stands for a unit coefficient.
fn coefficient_text(c: &Scalar) -> (bool, Option<String>) {
    let (re, im) = (c.re(), c.im());
    if num_traits::Zero::is_zero(im) {
        let mag = re.abs();
        let text = if num_traits::One::is_one(&mag) { None } else { Some(mag.to_string()) };
        (re.is_negative(), text)
    } else if num_traits::Zero::is_zero(re) {
        let mag = im.abs();
        let text = if num_traits::One::is_one(&mag) { "i".to_owned() } else { format!("{mag}*i") };
        (im.is_negative(), Some(text))
    } else {
        let sign = if im.is_negative() { '-' } else { '+' };
        let mag = im.abs();
        let imag = if num_traits::One::is_one(&mag) { "i".to_owned() } else { format!("{mag}*i") };
        (false, Some(format!("({re} {sign} {imag})")))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_real() => write!(f, "{}", c.re()),
            Expr::Const(c) => write!(f, "({c})"),
            Expr::Var(k) => write!(f, "x{k}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, k) => write!(f, "{a}^{k}"),
            Expr::Adj(a) => write!(f, "adj({a})"),
        }
    }
}

//! Lexer and precedence-climbing parser.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Expr, ParseError, MAX_VAR_INDEX};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Imag,
    Var(usize),
    Adj,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(r) => format!("number {r}"),
            Tok::Imag => "`i`".into(),
            Tok::Var(k) => format!("`x{k}`"),
            Tok::Adj => "`adj`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }

    fn starts_operand(&self) -> bool {
        matches!(self, Tok::Num(_) | Tok::Imag | Tok::Var(_) | Tok::Adj | Tok::LParen)
    }
}

fn err(offset: usize, reason: impl Into<String>) -> ParseError {
    ParseError { offset, reason: reason.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let c = text[pos..].chars().next().expect("in bounds");
        let start = pos;
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            pos += c.len_utf8();
            out.push((start, t));
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let (value, end) = lex_number(text, pos)?;
            out.push((start, Tok::Num(value)));
            pos = end;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            let word = &text[pos..end];
            let tok = match word {
                "i" => Tok::Imag,
                "adj" => Tok::Adj,
                _ => lex_variable(word, start)?,
            };
            out.push((start, tok));
            pos = end;
            continue;
        }
        return Err(err(start, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

fn lex_variable(word: &str, start: usize) -> Result<Tok, ParseError> {
    let Some(digits) = word.strip_prefix('x') else {
        return Err(err(start, format!("unknown identifier `{word}`; variables are x1..x{MAX_VAR_INDEX}")));
    };
    if digits.is_empty() {
        return Err(err(start, "missing variable index after `x`"));
    }
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(start, format!("unknown identifier `{word}`; variables are x1..x{MAX_VAR_INDEX}")));
    }
    if digits.starts_with('0') {
        return Err(err(start, format!("invalid variable `{word}`; indices start at 1 without leading zeros")));
    }
    match digits.parse::<usize>() {
        Ok(k) if k <= MAX_VAR_INDEX => Ok(Tok::Var(k)),
        _ => Err(err(start, format!("variable index in `{word}` exceeds {MAX_VAR_INDEX}"))),
    }
}

/// `digits[.digits]` or `digits/digits`; decimals become exact rationals.
fn lex_number(text: &str, start: usize) -> Result<(BigRational, usize), ParseError> {
    let bytes = text.as_bytes();
    let digits_from = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    let int_end = digits_from(start);
    let int_part = &text[start..int_end];
    let mut end = int_end;
    let mut value = if int_part.is_empty() {
        BigRational::zero()
    } else {
        BigRational::from_integer(int_part.parse::<BigInt>().expect("digits"))
    };
    if end < bytes.len() && bytes[end] == b'.' {
        let frac_end = digits_from(end + 1);
        let frac = &text[end + 1..frac_end];
        if frac.is_empty() {
            return Err(err(start, "malformed decimal literal"));
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        value += BigRational::new(frac.parse::<BigInt>().expect("digits"), scale);
        end = frac_end;
    } else if int_part.is_empty() {
        return Err(err(start, "malformed decimal literal"));
    }
    if end < bytes.len() && bytes[end] == b'/' {
        if end != int_end {
            return Err(err(start, "a rational literal p/q needs an integer numerator"));
        }
        let den_end = digits_from(end + 1);
        let den = &text[end + 1..den_end];
        if den.is_empty() {
            return Err(err(end, "expected a denominator after `/`"));
        }
        let den = den.parse::<BigInt>().expect("digits");
        if den.is_zero() {
            return Err(err(end + 1, "zero denominator"));
        }
        value /= BigRational::from_integer(den);
        end = den_end;
    }
    if end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'.') {
        return Err(err(end, "missing `*` between factors"));
    }
    Ok((value, end))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_operand_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.starts_operand() => Err(err(self.offset(), "missing `*` between factors")),
            _ => Ok(()),
        }
    }

    /// sum := product (("+" | "-") product)*
    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// product := unary ("*" product)?
    fn product(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.unary()?;
        self.expect_operand_end()?;
        if self.peek() == Some(&Tok::Star) {
            self.bump();
            let rhs = self.product()?;
            return Ok(Expr::Mul(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    /// unary := "-" unary | power
    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    /// power := atom ("^" integer)?
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exp = match self.bump() {
            Some(Tok::Num(r)) if r.is_integer() => r
                .to_integer()
                .try_into()
                .map_err(|_| err(at, "exponent is too large"))?,
            Some(Tok::Num(_)) => return Err(err(at, "exponent must be a nonnegative integer")),
            Some(Tok::Minus) => return Err(err(at, "exponent must be a nonnegative integer")),
            Some(t) => return Err(err(at, format!("exponent must be an integer literal, found {}", t.describe()))),
            None => return Err(err(at, "expected an exponent after `^`")),
        };
        if self.peek() == Some(&Tok::Caret) {
            return Err(err(self.offset(), "`^` is non-associative; use parentheses"));
        }
        Ok(Expr::Pow(Box::new(base), exp))
    }

    /// atom := number | "i" | variable | "(" sum ")" | "adj" "(" sum ")"
    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Expr::Const(Scalar::from_real(r))),
            Some(Tok::Imag) => Ok(Expr::Const(Scalar::i())),
            Some(Tok::Var(k)) => Ok(Expr::Var(k)),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.close(at)?;
                Ok(inner)
            }
            Some(Tok::Adj) => {
                if self.peek() != Some(&Tok::LParen) {
                    return Err(err(self.offset(), "expected `(` after `adj`"));
                }
                let open = self.offset();
                self.bump();
                let inner = self.sum()?;
                self.close(open)?;
                Ok(Expr::Adj(Box::new(inner)))
            }
            Some(t) => Err(err(at, format!("expected an operand, found {}", t.describe()))),
            None => Err(err(at, "unexpected end of input")),
        }
    }

    fn close(&mut self, open: usize) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.bump();
                Ok(())
            }
            None => Err(err(open, "unbalanced `(`")),
            Some(t) if t.starts_operand() => Err(err(self.offset(), "missing `*` between factors")),
            Some(t) => Err(err(self.offset(), format!("expected `)`, found {}", t.describe()))),
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut p = Parser { toks, pos: 0, len: text.len() };
    let e = p.sum()?;
    match p.peek() {
        None => Ok(e),
        Some(Tok::RParen) => Err(err(p.offset(), "unbalanced `)`")),
        Some(t) if t.starts_operand() => Err(err(p.offset(), "missing `*` between factors")),
        Some(t) => Err(err(p.offset(), format!("unexpected {}", t.describe()))),
    }
}

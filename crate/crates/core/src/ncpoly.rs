//! Noncommutative polynomials over exact complex rationals.
//!
//! An [`NcPoly`] is a finitely supported map from words in `n` noncommuting
//! self-adjoint indeterminates `X_1..X_n` to [`Scalar`] coefficients. Terms are
//! kept in canonical order (degree, then lexicographic) and zero coefficients
//! are never stored, so two polynomials are equal iff their term maps are.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_ratio, ratio_to_string, Scalar};

/// A monomial `X_{l_1} ... X_{l_k}` given by its 1-based letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn letter(j: usize) -> Self {
        Self(vec![j])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: usize) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l > n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n }),
            None => Ok(()),
        }
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

/// Degree first, then lexicographic on letters.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

/// Polynomial degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcPoly {
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn check_n(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::VarCountMismatch { left, right })
    }
}

impl NcPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut p = Self::zero(n);
        accumulate(&mut p.terms, Word::empty(), c);
        p
    }

    /// The generator `X_j`.
    pub fn var(n: usize, j: usize) -> Result<Self> {
        Self::monomial(n, Word::letter(j), Scalar::one())
    }

    pub fn monomial(n: usize, word: Word, c: Scalar) -> Result<Self> {
        word.validate(n)?;
        let mut p = Self::zero(n);
        accumulate(&mut p.terms, word, c);
        Ok(p)
    }

    /// Builds a polynomial from (possibly repeated) terms, summing duplicates.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut p = Self::zero(n);
        for (w, c) in terms {
            w.validate(n)?;
            accumulate(&mut p.terms, w, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Word::is_empty)
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcPoly {
        self.map_coeffs(|_, c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> NcPoly {
        self.map_coeffs(|_, c| c * s)
    }

    /// Applies `f(word, coeff)` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Word, &Scalar) -> Scalar) -> NcPoly {
        let mut out = NcPoly::zero(self.n);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), f(w, c));
        }
        out
    }

    /// Word-concatenation product.
    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly> {
        check_n(self.n, other.n)?;
        let mut out = NcPoly::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                accumulate(&mut out.terms, a.concat(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> NcPoly {
        let mut out = NcPoly::one(self.n);
        for _ in 0..k {
            out = out.mul(self).expect("same variable count");
        }
        out
    }

    /// Reverses words and conjugates coefficients (each `X_j` is self-adjoint).
    pub fn adjoint(&self) -> NcPoly {
        let mut out = NcPoly::zero(self.n);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.reversed(), c.conj());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn degree(&self) -> Degree {
        // canonical order puts the longest words last
        self.terms.keys().next_back().map_or(Degree::NegInfinity, |w| Degree::Finite(w.len()))
    }

    /// Largest number of occurrences of letter `i` in a supported word.
    pub fn degree_in(&self, i: usize) -> Result<Degree> {
        self.check_index(i)?;
        Ok(self.terms.keys().map(|w| Degree::Finite(w.count(i))).max().unwrap_or(Degree::NegInfinity))
    }

    /// Sum of the terms of degree exactly `m`.
    pub fn homogeneous_part(&self, m: usize) -> NcPoly {
        NcPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(w, _)| w.len() == m).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// `sum |alpha_w| R^{|w|}`.
    pub fn norm_r(&self, radius: f64) -> Result<f64> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(self.terms.iter().map(|(w, c)| c.abs_f64() * radius.powi(w.len() as i32)).sum())
    }

    pub fn letters_used(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|w| w.letters().iter().copied()).collect()
    }

    pub fn contains_letter(&self, i: usize) -> bool {
        self.terms.keys().any(|w| w.letters().contains(&i))
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn from_map(n: usize, terms: BTreeMap<Word, Scalar>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Self { n, terms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("wire format serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: PolyWire = serde_json::from_str(s)?;
        Self::from_wire(&wire)
    }

    pub fn to_wire(&self) -> PolyWire {
        PolyWire {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermWire {
                    word: w.letters().to_vec(),
                    re: ratio_to_string(c.re()),
                    im: ratio_to_string(c.im()),
                })
                .collect(),
        }
    }

    pub fn from_wire(wire: &PolyWire) -> Result<Self> {
        let terms = wire
            .terms
            .iter()
            .map(|t| Ok((Word::new(t.word.clone()), Scalar::new(parse_ratio(&t.re)?, parse_ratio(&t.im)?))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(wire.n, terms)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format(self))
    }
}

/// JSON shape `{"n": int, "terms": [{"word": [...], "re": "p/q", "im": "p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyWire {
    pub n: usize,
    pub terms: Vec<TermWire>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermWire {
    pub word: Vec<usize>,
    pub re: String,
    pub im: String,
}

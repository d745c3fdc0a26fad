//! Difference-quotient calculus on noncommutative polynomials.
//!
//! `diff(P, j)` maps into the tensor square `A ⊗ A` ([`TensorPoly`]). The
//! tensor square acts on `A` by `(a ⊗ b) # Q = a Q b` and is an `A`-bimodule
//! via `(u ⊗ v) # (a ⊗ b) = ua ⊗ bv`. The grading operators, the phase
//! automorphism `phi_t` and the trace reduction `delta_reduce` are built on
//! top of those two actions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freetrace::TraceFunctional;
use crate::ncpoly::{accumulate, check_n, NcPoly, Word};
use crate::scalar::{parse_ratio, ratio_to_string, Scalar};

/// Absolute tolerance for rounding float coefficients back to exact ones.
pub const FOURIER_TOLERANCE: f64 = 1e-9;

/// Key of a simple tensor `left ⊗ right`; ordered by total degree, then
/// left letters, then right letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorKey {
    pub left: Word,
    pub right: Word,
}

impl Ord for TensorKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.left.len() + self.right.len())
            .cmp(&(other.left.len() + other.right.len()))
            .then_with(|| self.left.letters().cmp(other.left.letters()))
            .then_with(|| self.right.letters().cmp(other.right.letters()))
    }
}

impl PartialOrd for TensorKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `C<X_1..X_n> ⊗ C<X_1..X_n>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    n: usize,
    terms: BTreeMap<TensorKey, Scalar>,
}

impl TensorPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Word, Scalar)>,
    {
        let mut t = Self::zero(n);
        for (l, r, c) in terms {
            l.validate(n)?;
            r.validate(n)?;
            accumulate(&mut t.terms, TensorKey { left: l, right: r }, c);
        }
        Ok(t)
    }

    /// The simple tensor `a ⊗ b`, expanded bilinearly.
    pub fn tensor(a: &NcPoly, b: &NcPoly) -> Result<Self> {
        check_n(a.n(), b.n())?;
        let mut t = Self::zero(a.n());
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                accumulate(&mut t.terms, TensorKey { left: wa.clone(), right: wb.clone() }, ca * cb);
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|(k, c)| (&k.left, &k.right, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorPoly) -> Result<TensorPoly> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorPoly) -> Result<TensorPoly> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.n);
        for (k, c) in &self.terms {
            accumulate(&mut out.terms, k.clone(), c * s);
        }
        out
    }

    /// `(P ⊗ 1) · (a ⊗ b) = Pa ⊗ b`.
    pub fn left_mul(&self, p: &NcPoly) -> Result<TensorPoly> {
        self.bimodule(p, &NcPoly::one(self.n))
    }

    /// `(a ⊗ b) · (1 ⊗ Q) = a ⊗ bQ`.
    pub fn right_mul(&self, q: &NcPoly) -> Result<TensorPoly> {
        self.bimodule(&NcPoly::one(self.n), q)
    }

    /// `(u ⊗ v) # (a ⊗ b) = ua ⊗ bv`.
    pub fn bimodule(&self, u: &NcPoly, v: &NcPoly) -> Result<TensorPoly> {
        check_n(self.n, u.n())?;
        check_n(self.n, v.n())?;
        let mut out = TensorPoly::zero(self.n);
        for (k, c) in &self.terms {
            for (wu, cu) in u.terms() {
                for (wv, cv) in v.terms() {
                    let key = TensorKey { left: wu.concat(&k.left), right: k.right.concat(wv) };
                    accumulate(&mut out.terms, key, &(cu * c) * cv);
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("wire format serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: TensorWire = serde_json::from_str(s)?;
        Self::from_wire(&wire)
    }

    pub fn to_wire(&self) -> TensorWire {
        TensorWire {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TensorTermWire {
                    word_left: k.left.letters().to_vec(),
                    word_right: k.right.letters().to_vec(),
                    re: ratio_to_string(c.re()),
                    im: ratio_to_string(c.im()),
                })
                .collect(),
        }
    }

    pub fn from_wire(wire: &TensorWire) -> Result<Self> {
        let terms = wire
            .terms
            .iter()
            .map(|t| {
                let c = Scalar::new(parse_ratio(&t.re)?, parse_ratio(&t.im)?);
                Ok((Word::new(t.word_left.clone()), Word::new(t.word_right.clone()), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(wire.n, terms)
    }
}

impl std::fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})*")?;
            }
            write!(f, "{}⊗{}", k.left, k.right)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorWire {
    pub n: usize,
    pub terms: Vec<TensorTermWire>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorTermWire {
    pub word_left: Vec<usize>,
    pub word_right: Vec<usize>,
    pub re: String,
    pub im: String,
}

/// Difference quotient `∂_j`, determined by `∂_j X_i = δ_{ij} 1 ⊗ 1` and the
/// Leibniz rule: each occurrence of `j` in a word splits it into `prefix ⊗ suffix`.
pub fn diff(p: &NcPoly, j: usize) -> Result<TensorPoly> {
    p.check_index(j)?;
    let mut out = TensorPoly::zero(p.n());
    for (w, c) in p.terms() {
        let letters = w.letters();
        for (pos, &l) in letters.iter().enumerate() {
            if l == j {
                let key = TensorKey { left: w.slice(0, pos), right: w.slice(pos + 1, letters.len()) };
                accumulate(&mut out.terms, key, c.clone());
            }
        }
    }
    Ok(out)
}

/// `(a ⊗ b) # Q = a Q b`, extended bilinearly.
pub fn sharp(t: &TensorPoly, q: &NcPoly) -> Result<NcPoly> {
    check_n(t.n(), q.n())?;
    let mut terms = BTreeMap::new();
    for (k, c) in &t.terms {
        for (wq, cq) in q.terms() {
            accumulate(&mut terms, k.left.concat(wq).concat(&k.right), c * cq);
        }
    }
    Ok(NcPoly::from_map(t.n(), terms))
}

/// The flip `(a ⊗ b)^σ = b ⊗ a`.
pub fn flip(t: &TensorPoly) -> TensorPoly {
    let mut out = TensorPoly::zero(t.n());
    for (k, c) in &t.terms {
        accumulate(&mut out.terms, TensorKey { left: k.right.clone(), right: k.left.clone() }, c.clone());
    }
    out
}

/// Number operator: scales each monomial by its degree.
pub fn number_op(p: &NcPoly) -> NcPoly {
    p.map_coeffs(|w, c| c.scale_int(w.len() as i64))
}

/// Partial number operator: scales each monomial by its `X_i`-degree.
pub fn number_op_i(p: &NcPoly, i: usize) -> Result<NcPoly> {
    p.check_index(i)?;
    Ok(p.map_coeffs(|w, c| c.scale_int(w.count(i) as i64)))
}

/// The witness `(∂_i P)^σ # P*`. It vanishes exactly when `P` does not involve `X_i`.
pub fn zero_derivative_witness(p: &NcPoly, i: usize) -> Result<NcPoly> {
    sharp(&flip(&diff(p, i)?), &p.adjoint())
}

/// Defect of the Hochschild-cycle identity
/// `Σ_i ∂_i P · (X_i ⊗ 1 − 1 ⊗ X_i) = P ⊗ 1 − 1 ⊗ P`,
/// where `(a ⊗ b) · (X_i ⊗ 1 − 1 ⊗ X_i) = a X_i ⊗ b − a ⊗ X_i b`.
pub fn hochschild_defect(p: &NcPoly) -> TensorPoly {
    let n = p.n();
    let mut out = TensorPoly::zero(n);
    for i in 1..=n {
        let d = diff(p, i).expect("index in range");
        let xi = Word::letter(i);
        for (k, c) in &d.terms {
            accumulate(&mut out.terms, TensorKey { left: k.left.concat(&xi), right: k.right.clone() }, c.clone());
            accumulate(&mut out.terms, TensorKey { left: k.left.clone(), right: xi.concat(&k.right) }, -c);
        }
    }
    for (w, c) in p.terms() {
        accumulate(&mut out.terms, TensorKey { left: w.clone(), right: Word::empty() }, -c);
        accumulate(&mut out.terms, TensorKey { left: Word::empty(), right: w.clone() }, c.clone());
    }
    out
}

/// `(τ ⊗ 1)(∂_j P)`: for `∂_j P = Σ a ⊗ b` returns `Σ τ(a) b`.
pub fn delta_reduce(p: &NcPoly, j: usize, tr: &dyn TraceFunctional) -> Result<NcPoly> {
    let d = diff(p, j)?;
    let mut terms = BTreeMap::new();
    for (k, c) in &d.terms {
        let t = tr.trace_word(&k.left)?;
        accumulate(&mut terms, k.right.clone(), c * &t);
    }
    Ok(NcPoly::from_map(p.n(), terms))
}

/// A polynomial with float complex coefficients (image of `phi_t`).
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly {
    n: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl FloatPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &FloatPoly) -> Result<FloatPoly> {
        check_n(self.n, other.n)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            *out.terms.entry(w.clone()).or_default() += c;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> FloatPoly {
        FloatPoly { n: self.n, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &FloatPoly) -> Result<FloatPoly> {
        check_n(self.n, other.n)?;
        let mut out = FloatPoly::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *out.terms.entry(a.concat(b)).or_default() += ca * cb;
            }
        }
        Ok(out)
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &FloatPoly) -> f64 {
        let keys = self.terms.keys().chain(other.terms.keys());
        keys.map(|w| (self.coeff(w) - other.coeff(w)).norm()).fold(0.0, f64::max)
    }
}

impl From<&NcPoly> for FloatPoly {
    fn from(p: &NcPoly) -> Self {
        FloatPoly { n: p.n(), terms: p.terms().map(|(w, c)| (w.clone(), c.to_complex64())).collect() }
    }
}

/// Scales each monomial of degree `d` by `exp(2πi t d)`.
pub fn phi_t(p: &NcPoly, t: f64) -> FloatPoly {
    phi_t_float(&FloatPoly::from(p), t)
}

pub fn phi_t_float(p: &FloatPoly, t: f64) -> FloatPoly {
    let terms = p
        .terms
        .iter()
        .map(|(w, c)| (w.clone(), c * Complex64::from_polar(1.0, 2.0 * PI * t * w.len() as f64)))
        .collect();
    FloatPoly { n: p.n, terms }
}

/// Recovers the degree-`m` part of `P` by averaging `exp(-2πi m t) phi_t(P)`
/// over the `D + 1` equispaced points `t = k/(D+1)`, `D = deg P`, then
/// rounding each coefficient back to an integer multiple of the exact one.
pub fn fourier_extract(p: &NcPoly, m: usize) -> Result<NcPoly> {
    let d = match p.degree().finite() {
        Some(d) if m <= d => d,
        // no part of degree above deg P; the D + 1 nodes would alias it onto m mod (D + 1)
        _ => return Ok(NcPoly::zero(p.n())),
    };
    let nodes = d + 1;
    let mut acc = FloatPoly::zero(p.n());
    for k in 0..nodes {
        let t = k as f64 / nodes as f64;
        let weight = Complex64::from_polar(1.0 / nodes as f64, -2.0 * PI * m as f64 * t);
        acc = acc.add(&phi_t(p, t).scale(weight))?;
    }
    round_to_multiples(p, &acc)
}

fn round_to_multiples(p: &NcPoly, approx: &FloatPoly) -> Result<NcPoly> {
    let mut terms = BTreeMap::new();
    for (w, exact) in p.terms() {
        let e = exact.to_complex64();
        let got = approx.coeff(w);
        let k = (got / e).re.round();
        let residual = (got - e * k).norm();
        let tolerance = FOURIER_TOLERANCE * e.norm().max(1.0);
        if !(residual <= tolerance) {
            return Err(Error::RoundingResidual { word: w.clone(), residual, tolerance });
        }
        accumulate(&mut terms, w.clone(), exact.scale_int(k as i64));
    }
    Ok(NcPoly::from_map(p.n(), terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freetrace::Semicircular;

    fn w(l: &[usize]) -> Word {
        Word::from(l)
    }

    fn mono(n: usize, l: &[usize]) -> NcPoly {
        NcPoly::monomial(n, w(l), Scalar::one()).unwrap()
    }

    #[test]
    fn diff_examples() {
        let d = diff(&mono(2, &[1, 2, 1]), 1).unwrap();
        let expect =
            TensorPoly::from_terms(2, [(w(&[]), w(&[2, 1]), Scalar::one()), (w(&[1, 2]), w(&[]), Scalar::one())])
                .unwrap();
        assert_eq!(d, expect);
        assert!(diff(&mono(2, &[2]), 1).unwrap().is_zero());
        assert!(diff(&NcPoly::constant(2, Scalar::from_int(4)), 2).unwrap().is_zero());
        assert!(matches!(diff(&mono(2, &[1]), 3), Err(Error::IndexOutOfRange { index: 3, n: 2 })));
    }

    #[test]
    fn generator_derivative_is_kronecker() {
        for i in 1..=3 {
            for j in 1..=3 {
                let d = diff(&mono(3, &[i]), j).unwrap();
                if i == j {
                    assert_eq!(d, TensorPoly::tensor(&NcPoly::one(3), &NcPoly::one(3)).unwrap());
                } else {
                    assert!(d.is_zero());
                }
            }
        }
    }

    #[test]
    fn sharp_examples() {
        let t = TensorPoly::tensor(&mono(3, &[1]), &mono(3, &[2])).unwrap();
        assert_eq!(sharp(&t, &mono(3, &[3])).unwrap(), mono(3, &[1, 3, 2]));
        let unit = TensorPoly::tensor(&NcPoly::one(3), &NcPoly::one(3)).unwrap();
        let q = mono(3, &[2, 3]).add(&mono(3, &[1])).unwrap();
        assert_eq!(sharp(&unit, &q).unwrap(), q);
        let d = diff(&mono(1, &[1, 1]), 1).unwrap();
        assert_eq!(sharp(&d, &mono(1, &[1])).unwrap(), mono(1, &[1, 1]).scale(&Scalar::from_int(2)));
        assert!(sharp(&unit, &mono(2, &[1])).is_err());
    }

    #[test]
    fn flip_examples() {
        let t = TensorPoly::tensor(&mono(3, &[1]), &mono(3, &[2, 3])).unwrap();
        assert_eq!(flip(&t), TensorPoly::tensor(&mono(3, &[2, 3]), &mono(3, &[1])).unwrap());
        assert_eq!(flip(&flip(&t)), t);
        assert!(flip(&TensorPoly::zero(3)).is_zero());
    }

    #[test]
    fn number_operators() {
        let p = mono(2, &[1, 2, 1]);
        assert_eq!(number_op(&p), p.scale(&Scalar::from_int(3)));
        assert!(number_op(&NcPoly::constant(2, Scalar::from_int(7))).is_zero());
        let q = mono(2, &[1]).add(&mono(2, &[1, 2])).unwrap();
        assert_eq!(number_op(&q), mono(2, &[1]).add(&mono(2, &[1, 2]).scale(&Scalar::from_int(2))).unwrap());

        assert_eq!(number_op_i(&p, 1).unwrap(), p.scale(&Scalar::from_int(2)));
        assert!(number_op_i(&mono(3, &[2, 3]), 1).unwrap().is_zero());
        let h = mono(2, &[1, 2, 1, 2]);
        assert_eq!(number_op_i(&h, 1).unwrap(), h.scale(&Scalar::from_int(2)));
        assert!(number_op_i(&h, 0).is_err());
    }

    #[test]
    fn phi_examples() {
        let p = mono(2, &[1, 2]);
        let t = 0.1;
        let got = phi_t(&p, t).coeff(&w(&[1, 2]));
        let want = Complex64::from_polar(1.0, 4.0 * PI * t);
        assert!((got - want).norm() < 1e-15);
        let q = mono(2, &[1]).add(&mono(2, &[1, 2])).unwrap();
        assert!(phi_t(&q, 0.0).max_abs_diff(&FloatPoly::from(&q)) < 1e-15);
        let half = phi_t(&mono(1, &[1]), 0.5);
        assert!((half.coeff(&w(&[1])) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn fourier_examples() {
        let p = mono(2, &[1]).add(&mono(2, &[1, 2])).unwrap();
        assert_eq!(fourier_extract(&p, 2).unwrap(), mono(2, &[1, 2]));
        assert!(fourier_extract(&p, 3).unwrap().is_zero());
        assert!(fourier_extract(&p, 17).unwrap().is_zero());
        let q = NcPoly::constant(1, Scalar::from_int(3)).add(&mono(1, &[1])).unwrap();
        assert_eq!(fourier_extract(&q, 0).unwrap(), NcPoly::constant(1, Scalar::from_int(3)));
        assert!(fourier_extract(&NcPoly::zero(2), 0).unwrap().is_zero());
    }

    #[test]
    fn hochschild_examples() {
        assert!(hochschild_defect(&mono(2, &[1, 2])).is_zero());
        assert!(hochschild_defect(&NcPoly::constant(2, Scalar::from_int(5))).is_zero());
        // the first sum alone equals P ⊗ 1 − 1 ⊗ P
        let p = mono(2, &[1, 2]);
        let expected = TensorPoly::tensor(&p, &NcPoly::one(2))
            .unwrap()
            .sub(&TensorPoly::tensor(&NcPoly::one(2), &p).unwrap())
            .unwrap();
        assert_eq!(hochschild_defect(&p).add(&expected).unwrap(), expected);
    }

    #[test]
    fn delta_reduce_examples() {
        let tr = Semicircular::new();
        assert_eq!(delta_reduce(&mono(2, &[1, 2, 1]), 1, &tr).unwrap(), mono(2, &[2, 1]));
        assert_eq!(delta_reduce(&mono(2, &[1, 1]), 1, &tr).unwrap(), mono(2, &[1]));
        assert!(delta_reduce(&NcPoly::constant(2, Scalar::from_int(3)), 1, &tr).unwrap().is_zero());
    }

    #[test]
    fn zero_derivative_witness_cases() {
        let p = mono(3, &[2, 3]);
        assert!(zero_derivative_witness(&p, 1).unwrap().is_zero());
        assert!(!zero_derivative_witness(&p, 2).unwrap().is_zero());
    }

    #[test]
    fn tensor_json_round_trip() {
        let t = diff(&mono(2, &[1, 2, 1]), 1).unwrap().scale(&Scalar::from_ratio(-1, 3));
        let s = t.to_json();
        assert_eq!(
            s,
            r#"{"n":2,"terms":[{"word_left":[],"word_right":[2,1],"re":"-1/3","im":"0/1"},{"word_left":[1,2],"word_right":[],"re":"-1/3","im":"0/1"}]}"#
        );
        assert_eq!(TensorPoly::from_json(&s).unwrap(), t);
    }
}

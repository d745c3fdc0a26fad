#![allow(dead_code)]

use freereg::{NcPoly, Scalar, Word};
use proptest::prelude::*;

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=4, -3i64..=3, 1i64..=3)
        .prop_map(|(a, b, c, d)| &Scalar::from_ratio(a, b) + &(&Scalar::from_ratio(c, d) * &Scalar::i()))
}

pub fn real_scalar() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=4).prop_map(|(a, b)| Scalar::from_ratio(a, b))
}

pub fn word(n: usize, max_deg: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=n, 0..=max_deg).prop_map(Word::new)
}

pub fn poly_with(n: usize, max_deg: usize, max_terms: usize, coeff: BoxedStrategy<Scalar>) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word(n, max_deg), coeff), 0..=max_terms)
        .prop_map(move |terms| NcPoly::from_terms(n, terms).expect("letters in range"))
}

pub fn poly(n: usize, max_deg: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    poly_with(n, max_deg, max_terms, scalar().boxed())
}

/// A polynomial together with its variable count `1..=max_n`.
pub fn any_poly(max_n: usize, max_deg: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    (1..=max_n).prop_flat_map(move |n| poly(n, max_deg, max_terms))
}

pub fn mono(n: usize, letters: &[usize]) -> NcPoly {
    NcPoly::monomial(n, Word::from(letters), Scalar::one()).unwrap()
}

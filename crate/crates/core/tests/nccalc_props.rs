mod common;

use common::{any_poly, mono, poly};
use freereg::freetrace::Semicircular;
use freereg::nccalc::*;
use freereg::{NcPoly, Scalar};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// ∂_j(PQ) = ∂_jP · (1 ⊗ Q) + (P ⊗ 1) · ∂_jQ
    #[test]
    fn leibniz_rule((p, q, j) in (1usize..=4).prop_flat_map(|n| (poly(n, 3, 4), poly(n, 3, 4), 1..=n))) {
        let lhs = diff(&p.mul(&q).unwrap(), j).unwrap();
        let rhs = diff(&p, j).unwrap().right_mul(&q).unwrap().add(&diff(&q, j).unwrap().left_mul(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity(p in any_poly(4, 6, 6)) {
        let mut sum = NcPoly::zero(p.n());
        for j in 1..=p.n() {
            sum = sum.add(&sharp(&diff(&p, j).unwrap(), &NcPoly::var(p.n(), j).unwrap()).unwrap()).unwrap();
        }
        prop_assert_eq!(sum, number_op(&p));
        let mut partial = NcPoly::zero(p.n());
        for i in 1..=p.n() {
            partial = partial.add(&number_op_i(&p, i).unwrap()).unwrap();
        }
        prop_assert_eq!(partial, number_op(&p));
    }

    #[test]
    fn phi_t_is_multiplicative(
        (p, q) in (1usize..=3).prop_flat_map(|n| (poly(n, 3, 4), poly(n, 3, 4))),
        t in -1.0f64..1.0,
        s in -1.0f64..1.0,
    ) {
        let lhs = phi_t(&p.mul(&q).unwrap(), t);
        let rhs = phi_t(&p, t).mul(&phi_t(&q, t)).unwrap();
        let scale = 1.0 + FloatPoly::from(&p.mul(&q).unwrap()).terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale * 10.0);
        let composed = phi_t_float(&phi_t(&p, t), s);
        prop_assert!(composed.max_abs_diff(&phi_t(&p, s + t)) <= 1e-12 * 10.0);
    }

    #[test]
    fn hochschild_defect_vanishes(p in any_poly(4, 6, 6)) {
        prop_assert!(hochschild_defect(&p).is_zero());
    }

    #[test]
    fn fourier_extraction_is_homogeneous_part(p in any_poly(4, 6, 6)) {
        let top = p.degree().finite().unwrap_or(0);
        for m in 0..=top + 1 {
            prop_assert_eq!(fourier_extract(&p, m).unwrap(), p.homogeneous_part(m));
        }
    }

    #[test]
    fn zero_derivative_witness_forward_direction(p in poly(4, 5, 6), i in 1usize..=4) {
        // delete letter i from P by restricting to the words that avoid it
        let q = NcPoly::from_terms(4, p.terms().filter(|(w, _)| !w.letters().contains(&i)).map(|(w, c)| (w.clone(), c.clone()))).unwrap();
        prop_assert!(zero_derivative_witness(&q, i).unwrap().is_zero());
    }

    #[test]
    fn delta_reduce_drops_degree(p in any_poly(3, 5, 5), j in 1usize..=3) {
        prop_assume!(j <= p.n());
        let tr = Semicircular::new();
        let r = delta_reduce(&p, j, &tr).unwrap();
        if let Some(d) = p.degree().finite().filter(|&d| d > 0) {
            prop_assert!(r.degree().finite().map_or(true, |rd| rd < d));
        }
    }

    #[test]
    fn tensor_json_round_trip(p in any_poly(3, 4, 5)) {
        let d = diff(&p, 1).unwrap();
        prop_assert_eq!(TensorPoly::from_json(&d.to_json()).unwrap(), d);
    }
}

#[test]
fn leibniz_on_monomial_fixture() {
    let d = diff(&mono(2, &[1, 2, 1]), 1).unwrap();
    let text = d.to_string();
    assert!(text.contains("x2*x1") && text.contains("x1*x2"), "{text}");
}

#[test]
fn witness_detects_dependence() {
    // X_1 appears, so the witness (∂_1 P)^σ # P* is nonzero for P = X_1 X_2
    let p = mono(2, &[1, 2]);
    assert!(!zero_derivative_witness(&p, 1).unwrap().is_zero());
    assert!(zero_derivative_witness(&mono(3, &[2, 3]), 1).unwrap().is_zero());
}

#[test]
fn phi_quarter_turn() {
    let p = mono(1, &[1]).scale(&Scalar::from_int(2));
    let got = phi_t(&p, 0.25).coeff(&freereg::Word::letter(1));
    assert!((got - Complex64::new(0.0, 2.0)).norm() < 1e-15);
}

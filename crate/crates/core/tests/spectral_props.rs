use freereg::matrix_model::{empirical_measure, BernoulliControl, EmpiricalMeasure, Gue};
use freereg::spectral::quadrature::integrate;
use freereg::spectral::*;
use freereg::NcPoly;
use proptest::prelude::*;

fn points() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 8..120)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decay_is_shift_equivariant(pts in points(), t in -1.0f64..1.0, c in prop::sample::select(vec![-2.0f64, -0.5, 0.25, 1.0, 4.0])) {
        let mu = EmpiricalMeasure::from_points(pts.clone()).unwrap();
        let moved = mu.affine(1.0, c).unwrap();
        let grid = geometric_grid(0.5, 0.7, 5).unwrap();
        prop_assume!(grid[0] < mu.max() - mu.min());
        match (decay_exponent(&mu, t, &grid, false), decay_exponent(&moved, t + c, &grid, false)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a.masses, &b.masses);
                prop_assert!((a.alpha - b.alpha).abs() < 1e-12);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn log_energy_translation_and_scaling(pts in points(), c in -5.0f64..5.0, a in 0.1f64..10.0) {
        let mu = EmpiricalMeasure::from_points(pts).unwrap();
        let base = log_energy(&mu).unwrap();
        prop_assume!(base.log_energy.is_finite());
        let shifted = log_energy(&mu.affine(1.0, c).unwrap()).unwrap().log_energy;
        let scaled = log_energy(&mu.affine(a, 0.0).unwrap()).unwrap().log_energy;
        // translation moves the points by rounding only
        prop_assert!((shifted - base.log_energy).abs() < 1e-6);
        prop_assert!((scaled - base.log_energy - a.ln()).abs() < 1e-9);
        prop_assert_eq!(base.chi, base.log_energy + base.constant);
    }

    #[test]
    fn window_mass_is_monotone(pts in points(), e1 in 0.001f64..2.0, e2 in 0.001f64..2.0) {
        let mu = EmpiricalMeasure::from_points(pts).unwrap();
        let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let a = max_window_mass(&mu, small, AtomThreshold::default()).unwrap();
        let b = max_window_mass(&mu, large, AtomThreshold::default()).unwrap();
        prop_assert!(a.max_mass <= b.max_mass);
        prop_assert!((0.0..=1.0).contains(&b.max_mass));
    }

    #[test]
    fn histogram_conserves_mass(pts in points(), bins in 1usize..60) {
        let mu = EmpiricalMeasure::from_points(pts).unwrap();
        let h = histogram(&mu, bins, None).unwrap();
        prop_assert!((h.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!(h.edges.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn ks_pseudometric_spot_checks() {
    let a = EmpiricalMeasure::from_points(vec![-1.0, 0.0, 0.5, 2.0]).unwrap();
    let b = EmpiricalMeasure::from_points(vec![-0.5, 0.0, 1.0]).unwrap();
    let c = EmpiricalMeasure::from_points(vec![0.0, 0.0, 3.0, 3.5, 4.0]).unwrap();
    for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
        assert_eq!(ks_between(x, y), ks_between(y, x));
        assert_eq!(ks_between(x, x), 0.0);
    }
    assert!(ks_between(&a, &c) <= ks_between(&a, &b) + ks_between(&b, &c));
    assert!(ks_between(&a, &b) <= ks_between(&a, &c) + ks_between(&c, &b));
}

/// Log-energy of the semicircle by nested quadrature, split at the singularity.
fn semicircle_log_energy_oracle() -> f64 {
    let law = Semicircle::new(1.0).unwrap();
    let inner = |t: f64| {
        let f = |s: f64| if s == t { 0.0 } else { (s - t).abs().ln() * law.density(s) };
        integrate(f, -2.0, t, 1e-11).unwrap() + integrate(f, t, 2.0, 1e-11).unwrap()
    };
    integrate(|t| inner(t) * law.density(t), -2.0, 2.0, 1e-9).unwrap()
}

#[test]
fn semicircle_log_energy_oracle_is_minus_quarter() {
    assert!((semicircle_log_energy_oracle() + 0.25).abs() < 1e-6);
}

#[test]
fn semicircle_fixtures_at_moderate_size() {
    let x1 = NcPoly::var(1, 1).unwrap();
    let mu = empirical_measure(&x1, &Gue, 1000, 5, 7).unwrap();
    let ks = ks_distance(&mu, &Semicircle::new(1.0).unwrap());
    assert!(ks < 0.03, "{ks}");
    let h = histogram(&mu, 50, None).unwrap();
    assert!(h.masses.iter().all(|&m| m <= 0.08));
    let r = max_window_mass(&mu, 0.05, AtomThreshold::default()).unwrap();
    assert!(r.max_mass < 0.1 && !r.atom_suspected);
}

#[test]
fn bernoulli_control_has_atoms() {
    let x1 = NcPoly::var(1, 1).unwrap();
    let mu = empirical_measure(&x1, &BernoulliControl, 200, 2, 7).unwrap();
    let r = max_window_mass(&mu, 0.01, AtomThreshold::default()).unwrap();
    assert!((r.max_mass - 0.5).abs() < 0.05 && r.atom_suspected);
    assert!(r.location == 1.0 || r.location == -1.0);
    let d = decay_exponent(&mu, 1.0, &geometric_grid(0.4, 0.7, 8).unwrap(), false).unwrap();
    assert!(d.alpha.abs() < 1e-12);
    let e = log_energy(&mu).unwrap();
    assert!(e.atom_warning);
}

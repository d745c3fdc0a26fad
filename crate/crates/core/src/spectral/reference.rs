//! Closed-form reference laws used to judge empirical spectra.

use std::f64::consts::PI;

use super::quadrature::integrate;
use crate::error::{Error, Result};

/// Absolute accuracy of reference CDF values.
pub const CDF_TOLERANCE: f64 = 1e-9;

/// A probability law on the real line given by its density.
pub trait ReferenceCdf: Send + Sync {
    fn name(&self) -> &str;
    /// Closed interval carrying all the mass.
    fn support(&self) -> (f64, f64);
    fn density(&self, x: f64) -> f64;
    /// `μ((−∞, x])`, computed by adaptive quadrature.
    fn cdf(&self, x: f64) -> f64;
}

/// Semicircle law of variance `σ²`: density `√(4σ² − x²) / (2πσ²)` on `[−2σ, 2σ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Semicircle {
    sigma: f64,
}

impl Semicircle {
    pub fn new(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidArgument(format!("semicircle variance must be positive, got {variance}")));
        }
        Ok(Self { sigma: variance.sqrt() })
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }
}

impl ReferenceCdf for Semicircle {
    fn name(&self) -> &str {
        "semicircle"
    }

    fn support(&self) -> (f64, f64) {
        (-2.0 * self.sigma, 2.0 * self.sigma)
    }

    fn density(&self, x: f64) -> f64 {
        let r2 = 4.0 * self.sigma * self.sigma - x * x;
        if r2 <= 0.0 {
            0.0
        } else {
            r2.sqrt() / (2.0 * PI * self.sigma * self.sigma)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        let r = 2.0 * self.sigma;
        if x <= -r {
            return 0.0;
        }
        if x >= r {
            return 1.0;
        }
        // x = 2σ sin θ turns the density into (2/π) cos²θ dθ
        let theta = (x / r).asin();
        let v = integrate(|t| 2.0 / PI * t.cos().powi(2), -PI / 2.0, theta, CDF_TOLERANCE * 0.1)
            .expect("smooth integrand converges");
        v.clamp(0.0, 1.0)
    }
}

/// Free Poisson (Marchenko–Pastur) law of rate 1, the law of the square of a
/// standard semicircular: density `√((4 − x)/x) / (2π)` on `(0, 4]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FreePoisson;

impl ReferenceCdf for FreePoisson {
    fn name(&self) -> &str {
        "free-poisson"
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 4.0)
    }

    fn density(&self, x: f64) -> f64 {
        if x <= 0.0 || x > 4.0 {
            0.0
        } else {
            ((4.0 - x) / x).sqrt() / (2.0 * PI)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 4.0 {
            return 1.0;
        }
        // x = 4 sin²θ turns the density into (4/π) cos²θ dθ on [0, π/2]
        let theta = (x.sqrt() / 2.0).asin();
        let v = integrate(|t| 4.0 / PI * t.cos().powi(2), 0.0, theta, CDF_TOLERANCE * 0.1)
            .expect("smooth integrand converges");
        v.clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semicircle_closed(x: f64) -> f64 {
        0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
    }

    fn free_poisson_closed(x: f64) -> f64 {
        // antiderivative of √((4−x)/x)/(2π)
        let s = (x * (4.0 - x)).sqrt();
        0.5 + (s + 4.0 * ((x.sqrt() / 2.0).asin()) - 2.0 * PI / 2.0) / (2.0 * PI)
    }

    #[test]
    fn semicircle_matches_closed_form() {
        let s = Semicircle::new(1.0).unwrap();
        assert_eq!(s.cdf(-3.0), 0.0);
        assert_eq!(s.cdf(2.0), 1.0);
        assert!((s.cdf(0.0) - 0.5).abs() < 1e-12);
        for k in 0..=40 {
            let x = -2.0 + 0.1 * k as f64;
            assert!((s.cdf(x) - semicircle_closed(x)).abs() < 1e-9, "{x}");
        }
        assert!(Semicircle::new(0.0).is_err() && Semicircle::new(-1.0).is_err());
        let wide = Semicircle::new(4.0).unwrap();
        assert!((wide.cdf(2.0) - semicircle_closed(1.0)).abs() < 1e-9);
        assert_eq!(wide.support(), (-4.0, 4.0));
    }

    #[test]
    fn free_poisson_matches_closed_form() {
        let f = FreePoisson;
        assert_eq!(f.cdf(4.0), 1.0);
        assert_eq!(f.cdf(0.0), 0.0);
        for k in 1..40 {
            let x = 0.1 * k as f64;
            assert!((f.cdf(x) - free_poisson_closed(x)).abs() < 1e-9, "{x}");
        }
        // hard edge: F(ε) ~ (2/π) √ε
        let e = 1e-8;
        assert!((f.cdf(e) / e.sqrt() - 2.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn densities_integrate_to_one() {
        let s = Semicircle::new(1.0).unwrap();
        let v = integrate(|x| s.density(x), -2.0, 2.0, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        let v = integrate(|x| FreePoisson.density(x), 0.0, 4.0, 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-7, "{v}");
    }
}

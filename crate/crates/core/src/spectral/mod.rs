//! Analysis of empirical spectral measures: histograms, distances to
//! reference laws, atom detection, local decay exponents and log-energy.

pub mod quadrature;
pub mod reference;

use std::fmt::Write as _;

use serde::Serialize;

pub use reference::{FreePoisson, ReferenceCdf, Semicircle, CDF_TOLERANCE};

use crate::error::{Error, Result};
use crate::matrix_model::{EmpiricalMeasure, MeasureMeta};

/// Version tag of the JSON reports.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Entropy constant `C = 3/4 + ½ log 2π` added to the raw log-energy.
pub fn entropy_constant() -> f64 {
    0.75 + 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// Equal-width bins; masses are fractions of the whole measure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// CSV with header `bin_left,bin_right,mass`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_left,bin_right,mass\n");
        for (k, m) in self.masses.iter().enumerate() {
            writeln!(s, "{},{},{}", self.edges[k], self.edges[k + 1], m).expect("writing to a String");
        }
        s
    }
}

/// Bins `[e_k, e_{k+1})`, the last one closed. The default range is the
/// support hull `[min, max]` (widened by ½ on each side for a point mass).
pub fn histogram(mu: &EmpiricalMeasure, bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let (lo, hi) = match range {
        Some((lo, hi)) => {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidArgument(format!("invalid histogram range [{lo}, {hi}]")));
            }
            (lo, hi)
        }
        None if mu.min() < mu.max() => (mu.min(), mu.max()),
        None => (mu.min() - 0.5, mu.max() + 0.5),
    };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|k| lo + width * k as f64).collect();
    edges.push(hi);
    let mut counts = vec![0usize; bins];
    for &x in mu.points() {
        if x < lo || x > hi {
            continue;
        }
        let mut k = (((x - lo) / width) as usize).min(bins - 1);
        // floating rounding of the division can land one bin off the stored edges
        while k > 0 && x < edges[k] {
            k -= 1;
        }
        while k + 1 < bins && x >= edges[k + 1] {
            k += 1;
        }
        counts[k] += 1;
    }
    let w = mu.weight();
    Ok(Histogram { edges, masses: counts.into_iter().map(|c| c as f64 * w).collect() })
}

/// Kolmogorov–Smirnov distance `sup_x |F_μ(x) − F(x)|`, evaluated from both
/// sides of every atom of `μ`.
pub fn ks_distance(mu: &EmpiricalMeasure, law: &dyn ReferenceCdf) -> f64 {
    let m = mu.len() as f64;
    let pts = mu.points();
    let mut d = 0.0f64;
    let mut i = 0;
    while i < pts.len() {
        let mut j = i;
        while j < pts.len() && pts[j] == pts[i] {
            j += 1;
        }
        let f = law.cdf(pts[i]);
        d = d.max((f - i as f64 / m).abs()).max((j as f64 / m - f).abs());
        i = j;
    }
    d
}

/// KS distance between two empirical measures.
pub fn ks_between(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> f64 {
    let (a, b) = (mu.points(), nu.points());
    let (wa, wb) = (mu.weight(), nu.weight());
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 * wa - j as f64 * wb).abs());
    }
    d
}

/// Atom threshold `θ(ε) = coefficient · ε^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtomThreshold {
    pub coefficient: f64,
    pub exponent: f64,
}

impl Default for AtomThreshold {
    fn default() -> Self {
        Self { coefficient: 1.0, exponent: 0.4 }
    }
}

impl AtomThreshold {
    pub fn at(&self, eps: f64) -> f64 {
        self.coefficient * eps.powf(self.exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomReport {
    pub schema_version: u32,
    pub eps: f64,
    /// Left end of the heaviest window `[location, location + eps]`.
    pub location: f64,
    pub max_mass: f64,
    pub threshold: f64,
    pub threshold_rule: AtomThreshold,
    pub atom_suspected: bool,
    pub source: Option<MeasureMeta>,
}

/// Heaviest closed window of width `eps` starting at a sample point.
pub fn max_window_mass(mu: &EmpiricalMeasure, eps: f64, rule: AtomThreshold) -> Result<AtomReport> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("window width must be positive, got {eps}")));
    }
    let pts = mu.points();
    let (mut best, mut best_at, mut hi) = (0usize, pts[0], 0usize);
    for (lo, &x) in pts.iter().enumerate() {
        if lo > 0 && pts[lo - 1] == x {
            continue;
        }
        hi = hi.max(lo);
        while hi < pts.len() && pts[hi] <= x + eps {
            hi += 1;
        }
        if hi - lo > best {
            best = hi - lo;
            best_at = x;
        }
    }
    let max_mass = (best as f64 * mu.weight()).min(1.0);
    let threshold = rule.at(eps);
    Ok(AtomReport {
        schema_version: REPORT_SCHEMA_VERSION,
        eps,
        location: best_at,
        max_mass,
        threshold,
        threshold_rule: rule,
        atom_suspected: max_mass > threshold,
        source: mu.meta().cloned(),
    })
}

/// Geometric grid `start · ratio^k`, `k = 0..count`.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && start.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid start must be positive, got {start}")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("grid ratio must lie in (0, 1), got {ratio}")));
    }
    Ok((0..count).map(|k| start * ratio.powi(k as i32)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub schema_version: u32,
    pub t: f64,
    /// Windows `[t, t + ε]` instead of `[t − ε, t + ε]`.
    pub one_sided: bool,
    pub eps: Vec<f64>,
    pub masses: Vec<f64>,
    /// Grid points with nonzero mass, the ones entering the fit.
    pub fitted_points: usize,
    /// Least-squares slope of `log mass` against `log ε`.
    pub alpha: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    pub source: Option<MeasureMeta>,
}

/// Fits `μ[t − ε, t + ε] ≈ C ε^α` over a geometric grid of window radii.
/// Grid points whose window is empty are dropped, never imputed.
pub fn decay_exponent(mu: &EmpiricalMeasure, t: f64, eps_grid: &[f64], one_sided: bool) -> Result<DecayReport> {
    if eps_grid.len() < 4 {
        return Err(Error::InvalidArgument(format!("decay fit needs at least 4 grid points, got {}", eps_grid.len())));
    }
    if eps_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument("grid radii must be positive".into()));
    }
    let ratio = eps_grid[1] / eps_grid[0];
    let geometric = eps_grid.windows(2).all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-9);
    if !geometric || ratio == 1.0 {
        return Err(Error::InvalidArgument("grid must be geometric with ratio ≠ 1".into()));
    }
    let diameter = mu.max() - mu.min();
    if let Some(e) = eps_grid.iter().find(|&&e| e >= diameter) {
        return Err(Error::InvalidArgument(format!("grid radius {e} is not below the support diameter {diameter}")));
    }
    let masses: Vec<f64> = eps_grid
        .iter()
        .map(|&e| if one_sided { mu.mass_closed(t, t + e) } else { mu.mass_closed(t - e, t + e) })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = eps_grid
        .iter()
        .zip(&masses)
        .filter(|(_, &m)| m > 0.0)
        .map(|(e, m)| (e.ln(), m.ln()))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::SparseMass { t, found: xs.len() });
    }
    let (alpha, intercept, residual) = least_squares(&xs, &ys);
    Ok(DecayReport {
        schema_version: REPORT_SCHEMA_VERSION,
        t,
        one_sided,
        eps: eps_grid.to_vec(),
        masses,
        fitted_points: xs.len(),
        alpha,
        intercept,
        residual,
        source: mu.meta().cloned(),
    })
}

/// `(slope, intercept, rms residual)`.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Log-energy below which a measure is flagged as near-atomic.
pub const DEFAULT_ATOM_WARNING_LEVEL: f64 = -5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub schema_version: u32,
    /// `(1/(m(m−1))) Σ_{i≠j} log|λ_i − λ_j|`; `-inf` (serialized as `null`)
    /// when two sample points coincide.
    pub log_energy: f64,
    pub constant: f64,
    /// `log_energy + constant`.
    pub chi: f64,
    /// Ordered pairs `(i, j)`, `i ≠ j`, entering the average.
    pub pairs: u64,
    pub diagonal_excluded: bool,
    /// Unordered pairs of coincident points.
    pub coincident_pairs: u64,
    pub atom_warning_level: f64,
    pub atom_warning: bool,
    pub source: Option<MeasureMeta>,
}

/// Log-energy `∬ log|s − t| dμ dμ` of an empirical measure with the diagonal
/// excluded, plus the entropy `χ = log-energy + C`.
pub fn log_energy(mu: &EmpiricalMeasure) -> Result<EntropyEstimate> {
    log_energy_with(mu, DEFAULT_ATOM_WARNING_LEVEL)
}

pub fn log_energy_with(mu: &EmpiricalMeasure, warning_level: f64) -> Result<EntropyEstimate> {
    let pts = mu.points();
    let m = pts.len();
    if m < 2 {
        return Err(Error::InvalidArgument("log-energy needs at least 2 points".into()));
    }
    let mut total = 0.0f64;
    let mut coincident = 0u64;
    for i in 0..m {
        let x = pts[i];
        let mut row = 0.0f64;
        for &y in &pts[i + 1..] {
            let gap = y - x;
            if gap == 0.0 {
                coincident += 1;
            } else {
                row += gap.ln();
            }
        }
        total += row;
    }
    let pairs = (m as u64) * (m as u64 - 1);
    let value = if coincident > 0 { f64::NEG_INFINITY } else { 2.0 * total / pairs as f64 };
    let constant = entropy_constant();
    Ok(EntropyEstimate {
        schema_version: REPORT_SCHEMA_VERSION,
        log_energy: value,
        constant,
        chi: value + constant,
        pairs,
        diagonal_excluded: true,
        coincident_pairs: coincident,
        atom_warning_level: warning_level,
        atom_warning: coincident > 0 || value < warning_level,
        source: mu.meta().cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measure(points: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(points.to_vec()).unwrap()
    }

    #[test]
    fn histogram_basics() {
        let h = histogram(&measure(&[0.0]), 1, Some((-1.0, 1.0))).unwrap();
        assert_eq!(h.masses, vec![1.0]);
        let mu = measure(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        let h = histogram(&mu, 4, None).unwrap();
        assert_eq!(h.masses, vec![0.2, 0.2, 0.2, 0.4]);
        assert!((h.total_mass() - 1.0).abs() < 1e-12);
        assert!(h.to_csv().starts_with("bin_left,bin_right,mass\n0,0.25,0.2\n"));
        let h = histogram(&mu, 2, Some((0.3, 0.8))).unwrap();
        assert_eq!(h.masses, vec![0.2, 0.2]);
        assert!(histogram(&mu, 0, None).is_err());
        assert!(histogram(&mu, 3, Some((1.0, 1.0))).is_err());
    }

    #[test]
    fn ks_fixtures() {
        let s = Semicircle::new(1.0).unwrap();
        assert!(ks_distance(&measure(&[0.0]), &s) >= 0.5);
        // quantiles (k − ½)/m of the law itself
        let m = 200;
        let quantiles: Vec<f64> = (1..=m)
            .map(|k| {
                let target = (k as f64 - 0.5) / m as f64;
                let (mut lo, mut hi) = (-2.0, 2.0);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if s.cdf(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        assert!(ks_distance(&measure(&quantiles), &s) <= 1.0 / m as f64);
        let mu = measure(&[0.0, 1.0, 1.0, 3.0]);
        assert_eq!(ks_between(&mu, &mu), 0.0);
        assert_eq!(ks_between(&mu, &measure(&[1.0])), 0.25);
    }

    #[test]
    fn atom_windows() {
        let mu = measure(&[-1.0, -1.0, 1.0, 1.0, 1.0, 0.0]);
        let r = max_window_mass(&mu, 0.01, AtomThreshold::default()).unwrap();
        assert_eq!((r.max_mass, r.location), (0.5, 1.0));
        assert!(r.atom_suspected);
        let r = max_window_mass(&mu, 10.0, AtomThreshold::default()).unwrap();
        assert_eq!(r.max_mass, 1.0);
        let spread = measure(&(0..1000).map(|k| k as f64 / 1000.0).collect::<Vec<_>>());
        let r = max_window_mass(&spread, 0.05, AtomThreshold::default()).unwrap();
        assert!((r.max_mass - 0.051).abs() < 1e-9 && !r.atom_suspected, "{}", r.max_mass);
        assert!(max_window_mass(&mu, 0.0, AtomThreshold::default()).is_err());
    }

    #[test]
    fn decay_on_uniform_and_sqrt_fixtures() {
        let m = 100_000;
        let uniform = measure(&(0..m).map(|k| -1.0 + 2.0 * (k as f64 + 0.5) / m as f64).collect::<Vec<_>>());
        let grid = geometric_grid(0.4, 0.7, 8).unwrap();
        let r = decay_exponent(&uniform, 0.0, &grid, false).unwrap();
        assert!((r.alpha - 1.0).abs() < 1e-3, "{}", r.alpha);
        // points x = u² with u uniform on [0,1]: μ[0, ε] = √ε
        let sq = measure(&(0..m).map(|k| ((k as f64 + 0.5) / m as f64).powi(2)).collect::<Vec<_>>());
        let r = decay_exponent(&sq, 0.0, &geometric_grid(0.4, 0.7, 8).unwrap(), true).unwrap();
        assert!((r.alpha - 0.5).abs() < 1e-2, "{}", r.alpha);
        assert!(r.masses.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn decay_errors() {
        let mu = measure(&[0.0, 1.0, 2.0, 3.0]);
        let grid = geometric_grid(0.4, 0.7, 8).unwrap();
        assert!(matches!(decay_exponent(&mu, 0.5, &grid, false), Err(Error::SparseMass { found: 0, .. })));
        assert!(decay_exponent(&mu, 0.0, &grid[..3], false).is_err());
        assert!(decay_exponent(&mu, 0.0, &[0.4, 0.2, 0.1, 0.04], false).is_err());
        assert!(decay_exponent(&mu, 0.0, &geometric_grid(4.0, 0.5, 5).unwrap(), false).is_err());
        assert!(geometric_grid(0.4, 1.0, 3).is_err());
    }

    #[test]
    fn log_energy_fixtures() {
        let e = log_energy(&measure(&[0.0, 1.0])).unwrap();
        assert_eq!(e.log_energy, 0.0);
        assert_eq!(e.pairs, 2);
        assert_eq!(e.chi, e.constant);
        let e = log_energy(&measure(&[2.0, 2.0])).unwrap();
        assert_eq!(e.log_energy, f64::NEG_INFINITY);
        assert!(e.atom_warning && e.coincident_pairs == 1);
        let near: Vec<f64> = (0..50).map(|k| 1.0 + k as f64 * 1e-9).chain([-1.0, 3.0]).collect();
        let e = log_energy(&measure(&near)).unwrap();
        assert!(e.log_energy < DEFAULT_ATOM_WARNING_LEVEL && e.atom_warning);
        assert!(log_energy(&measure(&[1.0])).is_err());
    }
}

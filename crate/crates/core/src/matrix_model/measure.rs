//! Pooled empirical spectral measures of polynomials in random matrices.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{eigenvalues, eval_hermitian, eval_poly, trial_rng, Ensemble, Mat};
use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;

/// Version tag written into every metadata sidecar.
pub const MEASURE_SCHEMA_VERSION: u32 = 1;

/// Where a measure came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureMeta {
    pub schema_version: u32,
    pub polynomial: String,
    pub n_vars: usize,
    pub ensemble: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub points: usize,
}

/// Equally weighted atoms at sorted real points.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    points: Vec<f64>,
    meta: Option<MeasureMeta>,
}

impl EmpiricalMeasure {
    /// A measure with weight `1/m` on each of `m` points (sorted here).
    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("measure points must be finite".into()));
        }
        points.sort_by(f64::total_cmp);
        Ok(Self { points, meta: None })
    }

    pub fn with_meta(mut self, meta: MeasureMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The common weight `1/m`.
    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    pub fn meta(&self) -> Option<&MeasureMeta> {
        self.meta.as_ref()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Mass of the closed interval `[a, b]`.
    pub fn mass_closed(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return 0.0;
        }
        let lo = self.points.partition_point(|&x| x < a);
        let hi = self.points.partition_point(|&x| x <= b);
        (hi - lo) as f64 * self.weight()
    }

    /// `μ((−∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.points.partition_point(|&p| p <= x) as f64 * self.weight()
    }

    /// The image measure under `x ↦ a x + b` (metadata is dropped).
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::from_points(self.points.iter().map(|x| a * x + b).collect())
    }

    /// CSV with header `value,weight`; floats use the shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let w = self.weight();
        let mut s = String::with_capacity(self.points.len() * 48 + 16);
        s.push_str("value,weight\n");
        for x in &self.points {
            writeln!(s, "{x},{w}").expect("writing to a String");
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("value,weight") {
            return Err(Error::Format("measure CSV must start with 'value,weight'".into()));
        }
        let mut points = Vec::new();
        for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let value = line.split(',').next().unwrap_or_default().trim();
            let x = value.parse::<f64>().map_err(|e| Error::Format(format!("line {}: {e}", k + 2)))?;
            points.push(x);
        }
        Self::from_points(points)
    }

    /// The JSON metadata sidecar, if the measure carries metadata.
    pub fn meta_json(&self) -> Option<String> {
        self.meta.as_ref().map(|m| serde_json::to_string_pretty(m).expect("metadata serializes"))
    }
}

/// Pools the eigenvalues of `P(Y)` over `trials` independent draws of `Y`
/// from `ensemble`, trial `t` using the stream [`trial_rng`]`(seed, t)`.
pub fn empirical_measure(p: &NcPoly, ensemble: &dyn Ensemble, dim: usize, trials: usize, seed: u64) -> Result<EmpiricalMeasure> {
    if !p.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    check_run(dim, trials)?;
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ys = ensemble.sample(p.n(), dim, &mut trial_rng(seed, t as u64));
            eigenvalues(&eval_hermitian(p, &ys)?)
        })
        .collect::<Result<_>>()?;
    let points: Vec<f64> = per_trial.into_iter().flatten().collect();
    let meta = MeasureMeta {
        schema_version: MEASURE_SCHEMA_VERSION,
        polynomial: p.to_string(),
        n_vars: p.n(),
        ensemble: ensemble.name().to_owned(),
        dim,
        trials,
        seed,
        points: points.len(),
    };
    Ok(EmpiricalMeasure::from_points(points)?.with_meta(meta))
}

/// Monte Carlo moments: entry `j − 1` is the average over trials of
/// `tr_N(P(Y)^j)`, `j = 1..=k`.
///
/// Only the powers up to `⌈k/2⌉` are formed; higher traces come from
/// `tr(M^a M^b)` without the final product.
pub fn mc_moments(p: &NcPoly, ensemble: &dyn Ensemble, dim: usize, trials: usize, seed: u64, k: usize) -> Result<Vec<Complex64>> {
    check_run(dim, trials)?;
    if k == 0 {
        return Err(Error::InvalidArgument("moment order k must be at least 1".into()));
    }
    let per_trial: Vec<Vec<Complex64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ys = ensemble.sample(p.n(), dim, &mut trial_rng(seed, t as u64));
            let m = eval_poly(p, &ys)?;
            trace_powers(&m, k)
        })
        .collect::<Result<_>>()?;
    let mut avg = vec![Complex64::default(); k];
    for row in &per_trial {
        for (a, x) in avg.iter_mut().zip(row) {
            *a += x;
        }
    }
    Ok(avg.into_iter().map(|a| a / trials as f64).collect())
}

/// `tr_N(M^j)` for `j = 1..=k`.
fn trace_powers(m: &Mat<Complex64>, k: usize) -> Result<Vec<Complex64>> {
    let dim = m.rows() as f64;
    let half = k.div_ceil(2);
    let mut powers = vec![m.clone()];
    while powers.len() < half {
        let next = powers.last().expect("nonempty").matmul(m)?;
        powers.push(next);
    }
    Ok((1..=k)
        .map(|j| {
            let a = j.div_ceil(2);
            let b = j - a;
            let t = if b == 0 { powers[a - 1].trace() } else { powers[a - 1].trace_of_product(&powers[b - 1]) };
            t / dim
        })
        .collect())
}

fn check_run(dim: usize, trials: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("matrix dimension N must be at least 1".into()));
    }
    if trials == 0 {
        return Err(Error::EmptyMeasure);
    }
    Ok(())
}

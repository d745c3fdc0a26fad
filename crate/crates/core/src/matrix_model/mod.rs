//! Finite-dimensional models: Hermitian matrix tuples, random ensembles,
//! polynomial evaluation, eigenvalues and pooled empirical spectra.

pub mod bimodule;
pub mod dense;
pub mod eigen;
pub mod ensemble;
pub mod eval;
pub mod measure;

use num_complex::Complex64;

pub use bimodule::{
    bimodule_commutator_residual, bimodule_residual_exact, hochschild_commutator_exact, hochschild_commutator_norm,
    ExactResidual, Residual,
};
pub use dense::{Field, Mat};
pub use eigen::eigenvalues;
pub use ensemble::{random_rational_hermitian, sample_gue, trial_rng, BernoulliControl, Ensemble, Gue};
pub use eval::{eval_hermitian, eval_hermitian_in, eval_poly, eval_poly_in};
pub use measure::{empirical_measure, mc_moments, EmpiricalMeasure, MeasureMeta, MEASURE_SCHEMA_VERSION};

use crate::error::{Error, Result};

/// Entrywise tolerance for conjugate symmetry.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A square complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(Mat<Complex64>);

impl HermitianMatrix {
    /// Checks conjugate symmetry within [`HERMITIAN_TOLERANCE`] and then
    /// symmetrizes exactly.
    pub fn new(m: Mat<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        let dev = m.hermitian_deviation();
        if !(dev <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::symmetrized(m))
    }

    /// Keeps the lower triangle and mirrors it; diagonal imaginary parts are dropped.
    pub(crate) fn symmetrized(mut m: Mat<Complex64>) -> Self {
        let n = m.rows();
        for j in 0..n {
            let d = m.get(j, j).re;
            m.set(j, j, Complex64::new(d, 0.0));
            for i in j + 1..n {
                let v = m.get(i, j).conj();
                m.set(j, i, v);
            }
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.0
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.0
    }

    /// Normalized trace `tr_N = Tr / N`.
    pub fn normalized_trace(&self) -> f64 {
        self.0.trace().re / self.dim() as f64
    }
}

/// `n` Hermitian matrices of a common dimension.
#[derive(Clone, Debug)]
pub struct MatrixTuple {
    dim: usize,
    mats: Vec<HermitianMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<HermitianMatrix>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidArgument("empty matrix tuple".into()));
        };
        let dim = first.dim();
        if let Some(bad) = mats.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch(format!("matrices of dimension {dim} and {}", bad.dim())));
        }
        Ok(Self { dim, mats })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of matrices (variables).
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// 1-based access, matching generator indices.
    pub fn get(&self, j: usize) -> Option<&HermitianMatrix> {
        j.checked_sub(1).and_then(|k| self.mats.get(k))
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.mats
    }

    pub(crate) fn plain(&self) -> Vec<Mat<Complex64>> {
        self.mats.iter().map(|m| m.as_mat().clone()).collect()
    }

    /// Largest operator norm among the matrices.
    pub fn max_operator_norm(&self) -> Result<f64> {
        let mut r = 0.0f64;
        for m in &self.mats {
            let ev = eigenvalues(m)?;
            r = r.max(ev.first().map_or(0.0, |v| v.abs())).max(ev.last().map_or(0.0, |v| v.abs()));
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_validation() {
        let bad = Mat::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, 0.0));
        assert!(matches!(HermitianMatrix::new(bad), Err(Error::NotHermitian(_))));
        let rect = Mat::<Complex64>::zeros(2, 3);
        assert!(HermitianMatrix::new(rect).is_err());
        let almost = Mat::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(1.0, 1e-14)
            } else {
                Complex64::new(0.5, if i > j { 1.0 } else { -1.0 + 1e-13 })
            }
        });
        let h = HermitianMatrix::new(almost).unwrap();
        assert_eq!(h.as_mat().hermitian_deviation(), 0.0);
    }

    #[test]
    fn tuple_requires_common_dimension() {
        let a = HermitianMatrix::new(Mat::identity(2)).unwrap();
        let b = HermitianMatrix::new(Mat::identity(3)).unwrap();
        assert!(MatrixTuple::new(vec![a.clone(), b]).is_err());
        assert!(MatrixTuple::new(vec![]).is_err());
        let t = MatrixTuple::new(vec![a.clone(), a]).unwrap();
        assert_eq!((t.len(), t.dim()), (2, 2));
        assert!(t.get(0).is_none() && t.get(2).is_some() && t.get(3).is_none());
    }
}

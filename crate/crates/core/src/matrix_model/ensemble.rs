//! Random matrix ensembles and per-trial random streams.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{HermitianMatrix, Mat, MatrixTuple};
use crate::scalar::Scalar;

/// The random stream for trial `trial` under master seed `seed`.
///
/// ChaCha is counter based: every (seed, trial) pair gets its own stream, so
/// trial results do not depend on execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A source of tuples of Hermitian matrices.
pub trait Ensemble: Send + Sync {
    fn name(&self) -> &str;
    fn sample(&self, n_vars: usize, dim: usize, rng: &mut ChaCha20Rng) -> MatrixTuple;
}

/// Independent GUE matrices normalized so the spectrum fills `[-2, 2]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gue;

impl Ensemble for Gue {
    fn name(&self) -> &str {
        "gue"
    }

    fn sample(&self, n_vars: usize, dim: usize, rng: &mut ChaCha20Rng) -> MatrixTuple {
        let mats = (0..n_vars).map(|_| sample_gue(dim, rng)).collect();
        MatrixTuple::new(mats).expect("equal dimensions")
    }
}

/// Diagonal matrices with exactly `⌈N/2⌉` entries `+1` and the rest `−1`,
/// in random order. Their spectral measure has atoms at `±1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BernoulliControl;

impl Ensemble for BernoulliControl {
    fn name(&self) -> &str {
        "bernoulli"
    }

    fn sample(&self, n_vars: usize, dim: usize, rng: &mut ChaCha20Rng) -> MatrixTuple {
        let mats = (0..n_vars)
            .map(|_| {
                let mut signs: Vec<f64> = (0..dim).map(|k| if k < dim.div_ceil(2) { 1.0 } else { -1.0 }).collect();
                signs.shuffle(rng);
                let m = Mat::from_fn(dim, dim, |i, j| Complex64::new(if i == j { signs[i] } else { 0.0 }, 0.0));
                HermitianMatrix::symmetrized(m)
            })
            .collect();
        MatrixTuple::new(mats).expect("equal dimensions")
    }
}

/// One GUE matrix: real diagonal entries of variance `1/N`, off-diagonal
/// entries with independent real and imaginary parts of variance `1/(2N)`.
/// Entries are drawn column by column from the lower triangle.
pub fn sample_gue<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    assert!(dim >= 1, "GUE dimension must be positive");
    let diag_sd = (1.0 / dim as f64).sqrt();
    let off_sd = (0.5 / dim as f64).sqrt();
    let mut m = Mat::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let d: f64 = rng.sample(StandardNormal);
        m.set(j, j, Complex64::new(d * diag_sd, 0.0));
        for i in j + 1..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m.set(i, j, Complex64::new(re * off_sd, im * off_sd));
        }
    }
    HermitianMatrix::symmetrized(m)
}

/// A random Hermitian matrix with small complex-rational entries, used by
/// the exact identity checks.
pub fn random_rational_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<Scalar> {
    let pick = |r: &mut R| Scalar::from_ratio(r.gen_range(-4..=4), r.gen_range(1..=3));
    let mut m = Mat::<Scalar>::zeros(dim, dim);
    for j in 0..dim {
        m.set(j, j, pick(rng));
        for i in j + 1..dim {
            let z = pick(rng) + &pick(rng) * &Scalar::i();
            m.set(j, i, z.conj());
            m.set(i, j, z);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = sample_gue(5, &mut trial_rng(7, 0));
        let b = sample_gue(5, &mut trial_rng(7, 0));
        let c = sample_gue(5, &mut trial_rng(7, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn scalar_gue_is_standard_normal() {
        let mut rng = trial_rng(11, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| sample_gue(1, &mut rng).as_mat().get(0, 0).re).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.03 && (var - 1.0).abs() < 0.04, "{mean} {var}");
    }

    #[test]
    fn second_moment_normalization() {
        // E tr_N(Y²) = 1
        let y = sample_gue(2000, &mut trial_rng(3, 0));
        let m = y.as_mat();
        let tr_sq = m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / 2000.0;
        assert!((tr_sq - 1.0).abs() < 0.05, "{tr_sq}");
    }

    #[test]
    fn bernoulli_is_balanced() {
        let t = BernoulliControl.sample(2, 9, &mut trial_rng(1, 0));
        for m in t.matrices() {
            let plus = (0..9).filter(|&i| m.as_mat().get(i, i).re == 1.0).count();
            assert_eq!(plus, 5);
            assert_eq!(m.as_mat().trace().re, 1.0);
        }
    }

    #[test]
    fn rational_hermitian_is_exactly_hermitian() {
        let m = random_rational_hermitian(4, &mut trial_rng(5, 0));
        assert_eq!(m.adjoint(), m);
    }
}

//! Evaluation of noncommutative polynomials on matrix tuples.

use num_complex::Complex64;

use super::{Field, HermitianMatrix, Mat, MatrixTuple};
use crate::error::{Error, Result};
use crate::ncpoly::{NcPoly, Word};
use crate::scalar::Scalar;

/// `P(Y_1, ..., Y_n)` as a general complex matrix.
pub fn eval_poly(p: &NcPoly, ys: &MatrixTuple) -> Result<Mat<Complex64>> {
    eval_poly_in(p, &ys.plain())
}

/// `P(Y)` over any coefficient field; `ys[j-1]` is substituted for `X_j`.
pub fn eval_poly_in<T: Field>(p: &NcPoly, ys: &[Mat<T>]) -> Result<Mat<T>> {
    check_tuple(p, ys)?;
    let terms: Vec<(Word, T)> = p.terms().map(|(w, c)| (w.clone(), T::from_scalar(c))).collect();
    eval_terms(terms, ys)
}

/// `P(Y)` for self-adjoint `P`, returned as an exactly Hermitian matrix.
///
/// Terms pair up as `c_w w + conj(c_w) rev(w)`, so only one word of each
/// pair is multiplied out: `P(Y) = A + Aᴴ` where `A` collects the words
/// preceding their reversal plus half of every palindromic term.
pub fn eval_hermitian(p: &NcPoly, ys: &MatrixTuple) -> Result<HermitianMatrix> {
    if !p.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    let plain = ys.plain();
    let half = eval_terms(half_terms(p), &plain)?;
    HermitianMatrix::new(half.add(&half.adjoint())?)
}

/// Same splitting as [`eval_hermitian`] over an arbitrary field.
pub fn eval_hermitian_in<T: Field>(p: &NcPoly, ys: &[Mat<T>]) -> Result<Mat<T>> {
    if !p.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    check_tuple(p, ys)?;
    let half = eval_terms(half_terms(p), ys)?;
    half.add(&half.adjoint())
}

fn half_terms<T: Field>(p: &NcPoly) -> Vec<(Word, T)> {
    let one_half = Scalar::from_ratio(1, 2);
    p.terms()
        .filter_map(|(w, c)| {
            let rev = w.reversed();
            if rev == *w {
                Some((w.clone(), T::from_scalar(&(c * &one_half))))
            } else if w.letters() < rev.letters() {
                Some((w.clone(), T::from_scalar(c)))
            } else {
                None
            }
        })
        .collect()
}

fn check_tuple<T>(p: &NcPoly, ys: &[Mat<T>]) -> Result<()> {
    if ys.len() != p.n() {
        return Err(Error::VarCountMismatch { left: p.n(), right: ys.len() });
    }
    if ys.is_empty() {
        return Err(Error::InvalidArgument("no matrices to evaluate on".into()));
    }
    Ok(())
}

/// Sums `c_w · Y_w`, sharing prefix products between consecutive words in
/// lexicographic order; at most `deg P` partial products are alive at once.
fn eval_terms<T: Field>(mut terms: Vec<(Word, T)>, ys: &[Mat<T>]) -> Result<Mat<T>> {
    let dim = ys[0].rows();
    if let Some(bad) = ys.iter().find(|m| m.rows() != dim || m.cols() != dim) {
        return Err(Error::DimensionMismatch(format!("expected {dim}x{dim}, got {}x{}", bad.rows(), bad.cols())));
    }
    terms.sort_by(|a, b| a.0.letters().cmp(b.0.letters()));
    let mut out = Mat::zeros(dim, dim);
    let mut stack: Vec<(usize, Mat<T>)> = Vec::new();
    for (w, c) in &terms {
        let letters = w.letters();
        let common = stack.iter().zip(letters).take_while(|((l, _), m)| l == *m).count();
        stack.truncate(common);
        for &l in &letters[common..] {
            let y = &ys[l - 1];
            let next = match stack.last() {
                Some((_, prefix)) => prefix.matmul(y)?,
                None => y.clone(),
            };
            stack.push((l, next));
        }
        match stack.last() {
            Some((_, m)) => out.axpy(c, m)?,
            None => out.axpy(c, &Mat::identity(dim))?,
        }
    }
    Ok(out)
}

//! Matrix realization of the tensor-square bimodule identities.
//!
//! A simple tensor `a ⊗ b` evaluated at a matrix tuple becomes the operator
//! `x ↦ a x b` on the `N²`-dimensional space of `N × N` matrices, whose
//! matrix in the column-stacking basis is `bᵀ ⊗ a`. Right multiplication by
//! `y_i` composes on the inside, so the commutator of `u (a ⊗ b) v` with it
//! is the operator `x ↦ u a y_i x b v − u a x y_i b v` (up to sign).
//!
//! The identity checked is
//! `Σ_i (u ⊗ v) # ∂_i P # (y_i ⊗ 1 − 1 ⊗ y_i) = (u ⊗ v) # (P ⊗ 1 − 1 ⊗ P)`.
//! Its left side alone is the commutator sum `Σ_i [u T_i v, R_{y_i}]`,
//! which therefore vanishes whenever `u P(Y) = 0 = P(Y) v`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use super::eval::eval_poly_in;
use super::{Field, Mat, MatrixTuple};
use crate::error::{Error, Result};
use crate::nccalc::diff;
use crate::ncpoly::{NcPoly, Word};
use crate::scalar::Scalar;

/// Float residual of an operator identity, in Frobenius norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub absolute: f64,
    /// `Σ |c| ‖L‖_F ‖R‖_F` over the elementary operators `x ↦ c L x R`.
    pub scale: f64,
    /// `absolute / scale`, or 0 when the scale is 0.
    pub relative: f64,
}

/// Exact residual: the number of nonzero entries of the `N² × N²` operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactResidual {
    pub nonzero_entries: usize,
}

impl ExactResidual {
    pub fn is_zero(&self) -> bool {
        self.nonzero_entries == 0
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Form {
    /// Both sides of the identity.
    Identity,
    /// Only the commutator sum.
    Commutator,
}

/// Residual of the full identity (both sides) on a float matrix tuple.
pub fn bimodule_commutator_residual(p: &NcPoly, ys: &MatrixTuple, u: &Mat<Complex64>, v: &Mat<Complex64>) -> Result<Residual> {
    float_residual(p, &ys.plain(), u, v, Form::Identity)
}

/// Norm of the commutator sum `Σ_i [u T_i v, R_{y_i}]` alone.
pub fn hochschild_commutator_norm(p: &NcPoly, ys: &MatrixTuple, u: &Mat<Complex64>, v: &Mat<Complex64>) -> Result<Residual> {
    float_residual(p, &ys.plain(), u, v, Form::Commutator)
}

/// Exact-arithmetic version of [`bimodule_commutator_residual`].
pub fn bimodule_residual_exact(p: &NcPoly, ys: &[Mat<Scalar>], u: &Mat<Scalar>, v: &Mat<Scalar>) -> Result<ExactResidual> {
    exact_residual(p, ys, u, v, Form::Identity)
}

/// Exact-arithmetic version of [`hochschild_commutator_norm`].
pub fn hochschild_commutator_exact(p: &NcPoly, ys: &[Mat<Scalar>], u: &Mat<Scalar>, v: &Mat<Scalar>) -> Result<ExactResidual> {
    exact_residual(p, ys, u, v, Form::Commutator)
}

fn float_residual(p: &NcPoly, ys: &[Mat<Complex64>], u: &Mat<Complex64>, v: &Mat<Complex64>, form: Form) -> Result<Residual> {
    let ops = elementary_ops(p, ys, u, v, form)?;
    let scale = ops.iter().map(|(c, l, r)| c.norm() * l.frobenius_norm() * r.frobenius_norm()).sum::<f64>();
    let k = assemble(&ops, ys[0].rows());
    let absolute = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let relative = if scale > 0.0 { absolute / scale } else { 0.0 };
    Ok(Residual { absolute, scale, relative })
}

fn exact_residual(p: &NcPoly, ys: &[Mat<Scalar>], u: &Mat<Scalar>, v: &Mat<Scalar>, form: Form) -> Result<ExactResidual> {
    let ops = elementary_ops(p, ys, u, v, form)?;
    let k = assemble(&ops, ys[0].rows());
    Ok(ExactResidual { nonzero_entries: k.iter().filter(|z| !z.is_zero()).count() })
}

/// The operator as a list of `(c, L, R)` meaning `x ↦ c L x R`.
fn elementary_ops<T: Field>(p: &NcPoly, ys: &[Mat<T>], u: &Mat<T>, v: &Mat<T>, form: Form) -> Result<Vec<(T, Mat<T>, Mat<T>)>> {
    if ys.len() != p.n() {
        return Err(Error::VarCountMismatch { left: p.n(), right: ys.len() });
    }
    let dim = ys[0].rows();
    for (what, m) in [("u", u), ("v", v)] {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch(format!("{what} is {}x{}, tuple is {dim}x{dim}", m.rows(), m.cols())));
        }
    }
    let mut words: HashMap<Word, Mat<T>> = HashMap::new();
    let mut word_mat = |w: &Word| -> Result<Mat<T>> {
        if let Some(m) = words.get(w) {
            return Ok(m.clone());
        }
        let m = eval_poly_in(&NcPoly::monomial(p.n(), w.clone(), Scalar::one())?, ys)?;
        words.insert(w.clone(), m.clone());
        Ok(m)
    };

    let minus = T::zero().sub(&T::one());
    let mut ops = Vec::new();
    for i in 1..=p.n() {
        let y = &ys[i - 1];
        for (a, b, c) in diff(p, i)?.terms() {
            let c = T::from_scalar(c);
            let ua = u.matmul(&word_mat(a)?)?;
            let bv = word_mat(b)?.matmul(v)?;
            ops.push((c.clone(), ua.matmul(y)?, bv.clone()));
            ops.push((minus.mul(&c), ua, y.matmul(&bv)?));
        }
    }
    if form == Form::Identity {
        let pm = eval_poly_in(p, ys)?;
        ops.push((minus.clone(), u.matmul(&pm)?, v.clone()));
        ops.push((T::one(), u.clone(), pm.matmul(v)?));
    }
    Ok(ops)
}

/// Dense `N² × N²` matrix `Σ c Rᵀ ⊗ L`, column-major: entry
/// `((i + N l), (j + N m))` is `Σ c L_ij R_ml`.
fn assemble<T: Field>(ops: &[(T, Mat<T>, Mat<T>)], dim: usize) -> Vec<T> {
    let n2 = dim * dim;
    let mut k = vec![T::zero(); n2 * n2];
    for (c, l, r) in ops {
        let ls = l.as_slice();
        for m in 0..dim {
            for j in 0..dim {
                let col = &mut k[(j + dim * m) * n2..(j + dim * m + 1) * n2];
                let lcol = &ls[j * dim..(j + 1) * dim];
                for lidx in 0..dim {
                    let crm = c.mul(r.get(m, lidx));
                    if crm.is_zero() {
                        continue;
                    }
                    let dst = &mut col[lidx * dim..(lidx + 1) * dim];
                    for (d, lij) in dst.iter_mut().zip(lcol) {
                        *d = d.add(&crm.mul(lij));
                    }
                }
            }
        }
    }
    k
}

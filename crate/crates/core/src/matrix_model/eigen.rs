//! Eigenvalues of Hermitian matrices: Householder reduction to a real
//! symmetric tridiagonal matrix followed by implicit-shift QL.

use num_complex::Complex64;

use super::HermitianMatrix;
use crate::error::{Error, Result};

/// QL sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 60;

/// All eigenvalues in ascending order.
pub fn eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let mut work = a.as_mat().as_slice().to_vec();
    let (d, e) = tridiagonalize(&mut work, n);
    let mut vals = tridiagonal_eigenvalues(d, e)?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Reduces the Hermitian matrix held in the lower triangle of the
/// column-major buffer `a` to real tridiagonal form `(diag, subdiag)`.
/// The buffer is overwritten.
///
/// Each step builds a reflector `H = I − τ v vᴴ` (`v_0 = 1`) sending the
/// column below the diagonal to `β e_1` with `β` real, then applies it to the
/// trailing block as the rank-2 update `A ← A − v wᴴ − w vᴴ`, where
/// `w = τ A v − ½ τ (wᴴ v) v`. The product `A v` for the next step is
/// accumulated column by column during the update, so the trailing block is
/// streamed through memory once per step.
pub fn tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    if n == 0 {
        return (d, e);
    }
    if n == 1 {
        d[0] = a[0].re;
        return (d, e);
    }
    let zero = Complex64::default();
    let (mut v, mut w) = (vec![zero; n], vec![zero; n]);
    let (mut v_next, mut w_next) = (vec![zero; n], vec![zero; n]);

    let (mut beta, mut tau) = reflector(&a[1..n], &mut v[..n - 1]);
    hemv(a, n, 1, &v[..n - 1], &mut w[..n - 1]);

    for k in 0..n - 1 {
        d[k] = a[k + k * n].re;
        e[k] = beta;
        let m = n - k - 1;
        let base = k + 1;

        let mut dot = zero;
        for i in 0..m {
            w[i] *= tau;
            dot += w[i].conj() * v[i];
        }
        let shift = -0.5 * tau * dot;
        for i in 0..m {
            w[i] += shift * v[i];
        }

        // first column of the trailing block, which defines the next reflector
        let c0 = base * n + base;
        let (w0, v0) = (w[0].conj(), v[0].conj());
        for i in 0..m {
            a[c0 + i] -= v[i] * w0 + w[i] * v0;
        }
        if m == 1 {
            break;
        }
        (beta, tau) = reflector(&a[c0 + 1..c0 + m], &mut v_next[..m - 1]);
        w_next[..m - 1].iter_mut().for_each(|x| *x = zero);

        // remaining columns: rank-2 update fused with the next A v
        for j in 1..m {
            let cj = (base + j) * n + base;
            let (wj, vj) = (w[j].conj(), v[j].conj());
            let vn = v_next[j - 1];
            let col = &mut a[cj + j..cj + m];
            col[0] -= v[j] * wj + w[j] * vj;
            let mut acc = col[0].re * vn;
            let lower = col[1..]
                .iter_mut()
                .zip(&v[j + 1..m])
                .zip(&w[j + 1..m])
                .zip(&mut w_next[j..m - 1])
                .zip(&v_next[j..m - 1]);
            for ((((aij, vi), wi), wn), vni) in lower {
                *aij -= vi * wj + wi * vj;
                *wn += *aij * vn;
                acc += aij.conj() * vni;
            }
            w_next[j - 1] += acc;
        }
        std::mem::swap(&mut v, &mut v_next);
        std::mem::swap(&mut w, &mut w_next);
    }
    d[n - 1] = a[(n - 1) * n + n - 1].re;
    (d, e)
}

/// Householder vector for `x = (alpha, rest)`: fills `v` (with `v_0 = 1`) and
/// returns `(β, τ)` such that `(I − τ v vᴴ)ᴴ x = β e_1`. A column that is
/// already real and reduced gives `τ = 0`.
fn reflector(x: &[Complex64], v: &mut [Complex64]) -> (f64, Complex64) {
    let alpha = x[0];
    let xnorm = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v[0] = Complex64::new(1.0, 0.0);
    if xnorm == 0.0 && alpha.im == 0.0 {
        v[1..].iter_mut().for_each(|z| *z = Complex64::default());
        return (alpha.re, Complex64::default());
    }
    let beta = -(alpha.norm_sqr() + xnorm * xnorm).sqrt().copysign(alpha.re);
    let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
    let s = (alpha - beta).inv();
    for (vi, xi) in v[1..].iter_mut().zip(&x[1..]) {
        *vi = xi * s;
    }
    (beta, tau)
}

/// `w = A v` for the Hermitian block `A[base.., base..]` stored in the lower triangle.
fn hemv(a: &[Complex64], n: usize, base: usize, v: &[Complex64], w: &mut [Complex64]) {
    let m = n - base;
    w.iter_mut().for_each(|x| *x = Complex64::default());
    for j in 0..m {
        let cj = (base + j) * n + base;
        let vj = v[j];
        let mut acc = a[cj + j].re * vj;
        for (t, aij) in a[cj + j + 1..cj + m].iter().enumerate() {
            let i = j + 1 + t;
            w[i] += aij * vj;
            acc += aij.conj() * v[i];
        }
        w[j] += acc;
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// subdiagonal `e` by the implicit QL method with Wilkinson-type shifts.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, sub: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    assert_eq!(sub.len(), n - 1);
    // e[i] couples d[i] and d[i+1]; e[n-1] is a zero sentinel
    let mut e = sub;
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence(MAX_SWEEPS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

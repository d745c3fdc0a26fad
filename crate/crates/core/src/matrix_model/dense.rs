//! Dense column-major matrices over a coefficient field.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficient field for matrix evaluation: float complex for simulation,
/// exact complex rationals for small identity checks.
pub trait Field: Clone + PartialEq + Send + Sync + std::fmt::Debug + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn is_zero(&self) -> bool;

    fn gemm(a: &Mat<Self>, b: &Mat<Self>) -> Mat<Self> {
        let mut c = Mat::<Self>::zeros(a.rows, b.cols);
        for j in 0..b.cols {
            for k in 0..a.cols {
                let bkj = b.get(k, j);
                if bkj.is_zero() {
                    continue;
                }
                for i in 0..a.rows {
                    let idx = i + j * c.rows;
                    c.data[idx] = c.data[idx].add(&a.get(i, k).mul(bkj));
                }
            }
        }
        c
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.to_complex64()
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn gemm(a: &Mat<Self>, b: &Mat<Self>) -> Mat<Self> {
        let (m, k, n) = (a.rows, a.cols, b.cols);
        let mut c = Mat::zeros(m, n);
        if m == 0 || n == 0 || k == 0 {
            return c;
        }
        // SAFETY: Complex64 is repr(C) {re, im}, layout-compatible with [f64; 2];
        // the buffers hold exactly m*k, k*n and m*n elements with the
        // column-major strides passed below.
        unsafe {
            matrixmultiply::zgemm(
                matrixmultiply::CGemmOption::Standard,
                matrixmultiply::CGemmOption::Standard,
                m,
                k,
                n,
                [1.0, 0.0],
                a.data.as_ptr() as *const [f64; 2],
                1,
                m as isize,
                b.data.as_ptr() as *const [f64; 2],
                1,
                k as isize,
                [0.0, 0.0],
                c.data.as_mut_ptr() as *mut [f64; 2],
                1,
                m as isize,
            );
        }
        c
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i + i * n] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Column-major buffer.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i + j * self.rows]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i + j * self.rows] = v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn matmul(&self, other: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(T::gemm(self, other))
    }

    fn zip(&self, other: &Mat<T>, f: impl Fn(&T, &T) -> T) -> Result<Mat<T>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.zip(other, T::add)
    }

    pub fn sub(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.zip(other, T::sub)
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul(s)).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    /// `self += c * x`.
    pub fn axpy(&mut self, c: &T, x: &Mat<T>) -> Result<()> {
        if (self.rows, self.cols) != (x.rows, x.cols) {
            return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, x.rows, x.cols)));
        }
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a = a.add(&c.mul(b));
        }
        Ok(())
    }
}

impl Mat<Complex64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for j in 0..n {
            for i in j..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// `tr(A B) = Σ_{i,l} A_il B_li` without forming the product.
    pub fn trace_of_product(&self, other: &Mat<Complex64>) -> Complex64 {
        let n = self.rows;
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..self.cols {
            for i in 0..n {
                acc += self.data[i + l * n] * other.data[l + i * other.rows];
            }
        }
        acc
    }
}

impl From<&Mat<Scalar>> for Mat<Complex64> {
    fn from(m: &Mat<Scalar>) -> Self {
        Mat { rows: m.rows, cols: m.cols, data: m.data.iter().map(Scalar::to_complex64).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fast_and_naive_products_agree() {
        let a = Mat::from_fn(5, 3, |i, j| c(i as f64 - 1.5 * j as f64, (i * j) as f64 * 0.25));
        let b = Mat::from_fn(3, 4, |i, j| c((i + 2 * j) as f64, -(i as f64)));
        let fast = a.matmul(&b).unwrap();
        let mut naive = Mat::zeros(5, 4);
        for i in 0..5 {
            for j in 0..4 {
                let s = (0..3).map(|k| a.get(i, k) * b.get(k, j)).sum();
                naive.set(i, j, s);
            }
        }
        assert!(fast.sub(&naive).unwrap().max_abs() < 1e-12);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn exact_products() {
        let a = Mat::from_fn(2, 2, |i, j| Scalar::from_int((i * 2 + j) as i64));
        let sq = a.matmul(&a).unwrap();
        // [[0,1],[2,3]]^2 = [[2,3],[6,11]]
        assert_eq!(*sq.get(0, 0), Scalar::from_int(2));
        assert_eq!(*sq.get(1, 1), Scalar::from_int(11));
        assert_eq!(a.trace(), Scalar::from_int(3));
        assert_eq!(Mat::<Scalar>::identity(2).matmul(&a).unwrap(), a);
    }

    #[test]
    fn adjoint_and_trace_of_product() {
        let a = Mat::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        assert_eq!(a.adjoint().adjoint(), a);
        let b = Mat::from_fn(3, 3, |i, j| c(1.0 + j as f64, (i as f64) - 0.5));
        let direct = a.matmul(&b).unwrap().trace();
        assert!((direct - a.trace_of_product(&b)).norm() < 1e-12);
        assert!(a.hermitian_deviation() > 0.5);
        let h = a.add(&a.adjoint()).unwrap();
        assert_eq!(h.hermitian_deviation(), 0.0);
    }
}

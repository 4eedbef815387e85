//! Minimal dense matrix type used throughout the crate.
//!
//! All model math runs on row-major f64 matrices with explicit loops.
//! Accumulations run in declared index order so that repeated runs are
//! bit-identical; nothing here may introduce nondeterministic reduction
//! orders.

use serde::{Deserialize, Serialize};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match rows*cols");
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// self += other, elementwise.
    pub fn add_assign(&mut self, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    /// Elementwise a + t * (b - a), computed as (1-t)*a + t*b so that
    /// t = 1 reproduces `b` exactly and t = 0 reproduces `a` exactly.
    pub fn lerp(a: &Mat, b: &Mat, t: f64) -> Mat {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| (1.0 - t) * x + t * y)
            .collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// y = W x for row-major W (rows x cols), x of length cols.
pub fn matvec(w: &[f64], rows: usize, cols: usize, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(w.len(), rows * cols);
    debug_assert_eq!(x.len(), cols);
    debug_assert_eq!(y.len(), rows);
    for r in 0..rows {
        let row = &w[r * cols..(r + 1) * cols];
        let mut acc = 0.0;
        for c in 0..cols {
            acc += row[c] * x[c];
        }
        y[r] = acc;
    }
}

/// y = W^T x for row-major W (rows x cols), x of length rows.
pub fn matvec_t(w: &[f64], rows: usize, cols: usize, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(w.len(), rows * cols);
    debug_assert_eq!(x.len(), rows);
    debug_assert_eq!(y.len(), cols);
    y.fill(0.0);
    for r in 0..rows {
        let row = &w[r * cols..(r + 1) * cols];
        let xr = x[r];
        for c in 0..cols {
            y[c] += xr * row[c];
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// Numerically stable softmax over the first `n` entries of `x`, in place.
pub fn softmax_prefix(x: &mut [f64], n: usize) {
    let max = x[..n].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in x[..n].iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in x[..n].iter_mut() {
        *v /= sum;
    }
}

/// Softmax over a full slice, returning a new vector.
pub fn softmax(x: &[f64]) -> Vec<f64> {
    let mut out = x.to_vec();
    softmax_prefix(&mut out, x.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_against_hand_computation() {
        // W = [[1,2],[3,4],[5,6]], x = [1,-1]
        let w = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x = [1.0, -1.0];
        let mut y = [0.0; 3];
        matvec(&w, 3, 2, &x, &mut y);
        assert_eq!(y, [-1.0, -1.0, -1.0]);

        let xt = [1.0, 0.0, -1.0];
        let mut yt = [0.0; 2];
        matvec_t(&w, 3, 2, &xt, &mut yt);
        assert_eq!(yt, [-4.0, -4.0]);
    }

    #[test]
    fn lerp_endpoints_exact() {
        let a = Mat::from_vec(1, 3, vec![0.1, 0.2, 0.3]);
        let b = Mat::from_vec(1, 3, vec![-1.0, 7.0, 0.25]);
        assert_eq!(Mat::lerp(&a, &b, 0.0), a);
        assert_eq!(Mat::lerp(&a, &b, 1.0), b);
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[1.0, 2.0, 3.0, -5.0]);
        let sum: f64 = p.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(p[2] > p[1] && p[1] > p[0] && p[0] > p[3]);
    }
}

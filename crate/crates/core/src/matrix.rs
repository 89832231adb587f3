//! Small dense 2×2 real matrices.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Row-major 2×2 matrix: `m[i][j]` is row `i`, column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Matrix2([[m11, m12], [m21, m22]])
    }

    pub const fn identity() -> Self {
        Matrix2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Matrix2::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn filled(v: f64) -> Self {
        Matrix2::new(v, v, v, v)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let m = &self.0;
        Matrix2::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Matrix2::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// `self^k` by repeated left multiplication, `self^0 = I`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Matrix2::identity();
        for _ in 0..k {
            acc = *self * acc;
        }
        acc
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_dot(&self, other: &Matrix2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    /// Both eigenvalues from `tr/2 ± sqrt(tr²/4 − det)`, larger real part first.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let half_tr = self.trace() / 2.0;
        let disc = Complex64::new(half_tr * half_tr - self.det(), 0.0).sqrt();
        let centre = Complex64::new(half_tr, 0.0);
        [centre + disc, centre - disc]
    }

    /// Spectral radius, the largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        let [l1, l2] = self.eigenvalues();
        l1.norm().max(l2.norm())
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let a = &self.0;
        let b = &rhs.0;
        Matrix2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;

    fn add(self, rhs: Matrix2) -> Matrix2 {
        let a = &self.0;
        let b = &rhs.0;
        Matrix2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;

    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + rhs.scale(-1.0)
    }
}

//! Dense complex matrices, singular spectra and Schatten quasinorms.
//!
//! Everything is 0-based: `chi_matrix(n)` has a one at `(j, k)` iff `j <= k`,
//! `delta_matrix(n)` has a one iff `j + k < n`.

mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub use svd::{singular_values, singular_values_with, SvdMethod, JACOBI_MAX_SWEEPS};

/// Exponent of a Schatten class or Lebesgue space, `0 < p < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1/p - 1`, the exponent of the multiplier growth.
    pub fn dual_gap(self) -> f64 {
        1.0 / self.0 - 1.0
    }

    /// Fails for `p > 1`; several Hankel estimates only hold for `p <= 1`.
    pub fn require_at_most_one(self) -> Result<Self> {
        if self.0 <= 1.0 {
            Ok(self)
        } else {
            Err(Error::ExponentAboveOne(self.0))
        }
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Singular values sorted nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Sorts and validates; values must be finite and nonnegative.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid singular value {bad}"
            )));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `Σ s_j^p`.
    pub fn power_sum(&self, p: PExponent) -> f64 {
        let p = p.get();
        self.values
            .iter()
            .filter(|&&s| s > 0.0)
            .map(|s| s.powf(p))
            .sum()
    }

    /// `(Σ s_j^p)^{1/p}`, evaluated with the largest value factored out.
    pub fn schatten(&self, p: PExponent) -> f64 {
        let top = self.largest();
        if top == 0.0 {
            return 0.0;
        }
        let pv = p.get();
        let scaled: f64 = self.values.iter().map(|s| (s / top).powf(pv)).sum();
        top * scaled.powf(1.0 / pv)
    }

    /// `max_j (1 + j) s_j`, the weak-type (1,1) profile of the spectrum.
    pub fn weak_l1_profile(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, s)| (j + 1) as f64 * s)
            .fold(0.0, f64::max)
    }
}

/// Dense rectangular complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |j, k| if j == k { 1.0.into() } else { 0.0.into() })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        check_shape(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for k in 0..cols {
                data.push(f(j, k));
            }
        }
        Self::from_row_major(rows, cols, data)
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        Self::from_row_major(r, c, data)
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        Self::from_fn(n, n, |j, k| {
            if j == k {
                values[j]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `u v*`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        Self::from_fn(u.len(), v.len(), |j, k| u[j] * v[k].conj())
    }

    /// Entries with independent standard normal real and imaginary parts.
    pub fn gaussian(rows: usize, cols: usize, rng: &mut SeededRng) -> Result<Self> {
        check_shape(rows, cols)?;
        Self::from_row_major(rows, cols, rng.complex_normals(rows * cols))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn row_major(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        let top = self.max_abs();
        if top == 0.0 {
            return 0.0;
        }
        let s: f64 = self.data.iter().map(|z| (z / top).norm_sqr()).sum();
        top * s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::from_row_major(
            self.rows,
            self.cols,
            self.data.iter().map(|&z| f(z)).collect(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        self.map(|z| z * factor)
    }

    pub fn conj_transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for k in 0..self.cols {
            for j in 0..self.rows {
                data.push(self.get(j, k).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Reorders rows: row `j` of the result is row `perm[j]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.rows)?;
        Self::from_fn(self.rows, self.cols, |j, k| self.get(perm[j], k))
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.cols)?;
        Self::from_fn(self.rows, self.cols, |j, k| self.get(j, perm[k]))
    }

    /// Zero-pads to `rows x cols`, keeping `self` in the top-left corner.
    pub fn embed(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows || cols < self.cols {
            return Err(Error::DimensionMismatch {
                left: self.shape(),
                right: (rows, cols),
            });
        }
        Self::from_fn(rows, cols, |j, k| {
            if j < self.rows && k < self.cols {
                self.get(j, k)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for j in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(j, l);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..other.cols {
                    out.data[j * other.cols + k] += a * other.get(l, k);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_row_major(self.rows, self.cols, data)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.cols + col]
    }
}

/// Unchecked: writing a non-finite value through this breaks the matrix invariant.
impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut Complex64 {
        &mut self.data[row * self.cols + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; see [`ComplexMatrix::try_add`].
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix addition shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs)
            .expect("matrix subtraction shape mismatch")
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidMatrix(format!("empty shape {rows}x{cols}")));
    }
    Ok(())
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation of length {} for size {n}",
            perm.len()
        )));
    }
    for &i in perm {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation"
            )));
        }
    }
    Ok(())
}

fn real(x: bool) -> Complex64 {
    Complex64::new(if x { 1.0 } else { 0.0 }, 0.0)
}

/// Entrywise (Schur–Hadamard) product.
pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.zip_with(b, |x, y| x * y)
}

/// `(Σ s_j(a)^p)^{1/p}`.
pub fn schatten_quasinorm(a: &ComplexMatrix, p: PExponent) -> Result<f64> {
    if a.is_zero() {
        return Ok(0.0);
    }
    Ok(singular_values(a)?.schatten(p))
}

/// Upper-triangular all-ones, diagonal included.
pub fn chi_matrix(n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, n, |j, k| real(j <= k))
}

/// Hankel 0/1 matrix with a one iff `j + k < n`.
pub fn delta_matrix(n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, n, |j, k| real(j + k < n))
}

pub fn ones_matrix(n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, n, |_, _| real(true))
}

/// Keeps the entries on and above the diagonal.
pub fn triangular_projection(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    schur_product(&chi_matrix(a.rows)?, a)
}

/// `[[a, b], [c, d]]`.
pub fn block2x2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let mismatch = |x: &ComplexMatrix, y: &ComplexMatrix| Error::DimensionMismatch {
        left: x.shape(),
        right: y.shape(),
    };
    if a.rows != b.rows {
        return Err(mismatch(a, b));
    }
    if c.rows != d.rows {
        return Err(mismatch(c, d));
    }
    if a.cols != c.cols {
        return Err(mismatch(a, c));
    }
    if b.cols != d.cols {
        return Err(mismatch(b, d));
    }
    let (top, left) = (a.rows, a.cols);
    ComplexMatrix::from_fn(top + c.rows, left + b.cols, |j, k| {
        match (j < top, k < left) {
            (true, true) => a.get(j, k),
            (true, false) => b.get(j, k - left),
            (false, true) => c.get(j - top, k),
            (false, false) => d.get(j - top, k - left),
        }
    })
}

/// `diag(m, m)`.
pub fn block_diag2(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let z = ComplexMatrix::zeros(m.rows, m.cols)?;
    block2x2(m, &z, &z, m)
}

//! Singular values without singular vectors.
//!
//! Two backward-stable routes share one entry point:
//!
//! * one-sided (Hestenes) Jacobi, which orthogonalizes columns by plane
//!   rotations and has high relative accuracy on small singular values;
//! * Householder bidiagonalization followed by implicit QL on the
//!   Golub–Kahan tridiagonal `[[0, B^T], [B, 0]]`, whose eigenvalues are
//!   `±s_j`. This costs a few `n^3` flops and is used for large inputs.
//!
//! Both run on a real `f64` kernel when every entry has zero imaginary part.

use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_complex::Complex64;

use super::{ComplexMatrix, SingularSpectrum};
use crate::error::{Error, Result};

/// Sweep cap for the Jacobi route.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// A column pair is orthogonal once `|<a_i, a_j>| <= sqrt(m) EPS ‖a_i‖ ‖a_j‖`.
/// Pairs whose Gram entry is below `EPS² ‖A‖_F²` are treated as exactly
/// orthogonal so that null columns cannot keep the sweep alive.
const JACOBI_UNDERFLOW: f64 = f64::EPSILON * f64::EPSILON;

/// `Auto` uses Jacobi up to this many singular values.
const AUTO_JACOBI_LIMIT: usize = 64;

const QL_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SvdMethod {
    #[default]
    Auto,
    Jacobi,
    Bidiagonal,
}

pub fn singular_values(a: &ComplexMatrix) -> Result<SingularSpectrum> {
    singular_values_with(a, SvdMethod::Auto)
}

/// Values at or below `max(rows, cols) * EPS * s_max` are rounding noise of
/// exact zeros and are returned as `0`; for `p < 1` they would otherwise
/// contribute `O(EPS^p)` each to a Schatten sum.
pub fn singular_values_with(a: &ComplexMatrix, method: SvdMethod) -> Result<SingularSpectrum> {
    let (rows, cols) = a.shape();
    let method = match method {
        SvdMethod::Auto if rows.min(cols) <= AUTO_JACOBI_LIMIT => SvdMethod::Jacobi,
        SvdMethod::Auto => SvdMethod::Bidiagonal,
        other => other,
    };
    let values = if a.is_real() {
        run(column_major(a, |z| z.re), method)?
    } else {
        run(column_major(a, |z| z), method)?
    };
    let top = values.iter().copied().fold(0.0, f64::max);
    let cutoff = rows.max(cols) as f64 * f64::EPSILON * top;
    SingularSpectrum::from_values(
        values
            .into_iter()
            .map(|s| if s <= cutoff { 0.0 } else { s })
            .collect(),
    )
}

fn run<T: Scalar>((buf, m, n): (Vec<T>, usize, usize), method: SvdMethod) -> Result<Vec<f64>> {
    match method {
        SvdMethod::Jacobi => jacobi(buf, m, n),
        _ => bidiagonal(buf, m, n),
    }
}

/// Column-major copy with at least as many rows as columns. Singular values
/// are transpose-invariant, so a wide matrix is stored as its transpose.
fn column_major<T: Scalar>(
    a: &ComplexMatrix,
    f: impl Fn(Complex64) -> T,
) -> (Vec<T>, usize, usize) {
    let (rows, cols) = a.shape();
    let src = a.row_major();
    if cols >= rows {
        // row-major A is column-major A^T: cols x rows
        (src.iter().map(|&z| f(z)).collect(), cols, rows)
    } else {
        let mut out = Vec::with_capacity(rows * cols);
        for k in 0..cols {
            for j in 0..rows {
                out.push(f(src[j * cols + k]));
            }
        }
        (out, rows, cols)
    }
}

trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + AddAssign + SubAssign
{
    fn zero() -> Self;
    fn conj(self) -> Self;
    fn abs2(self) -> f64;
    fn scale(self, k: f64) -> Self;

    fn abs(self) -> f64 {
        self.abs2().sqrt()
    }

    /// `self / |self|`, or one for zero.
    fn phase(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn conj(self) -> Self {
        self
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn phase(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn phase(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
}

/// `Σ conj(x_i) y_i` with four independent accumulators.
#[inline]
fn dotc<T: Scalar>(x: &[T], y: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let xc = x.chunks_exact(4);
    let yc = y.chunks_exact(4);
    let (xr, yr) = (xc.remainder(), yc.remainder());
    for (a, b) in xc.zip(yc) {
        for l in 0..4 {
            acc[l] += a[l].conj() * b[l];
        }
    }
    let mut tail = T::zero();
    for (&a, &b) in xr.iter().zip(yr) {
        tail += a.conj() * b;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
fn norm2<T: Scalar>(x: &[T]) -> f64 {
    let mut acc = [0.0f64; 4];
    let xc = x.chunks_exact(4);
    let xr = xc.remainder();
    for a in xc {
        for l in 0..4 {
            acc[l] += a[l].abs2();
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + xr.iter().map(|a| a.abs2()).sum::<f64>()
}

/// `y -= alpha * x`.
#[inline]
fn axpy_sub<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

fn jacobi<T: Scalar>(mut a: Vec<T>, m: usize, n: usize) -> Result<Vec<f64>> {
    let fro2 = norm2(&a);
    if fro2 == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let abs_floor = JACOBI_UNDERFLOW * fro2;
    let rel_tol = (m as f64).sqrt() * f64::EPSILON;
    let mut norms = vec![0.0; n];

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        for (k, nk) in norms.iter_mut().enumerate() {
            *nk = norm2(&a[k * m..(k + 1) * m]);
        }
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            let (head, tail) = a.split_at_mut((i + 1) * m);
            let ci = &mut head[i * m..];
            for j in (i + 1)..n {
                let cj = &mut tail[(j - i - 1) * m..(j - i) * m];
                let (alpha, beta) = (norms[i], norms[j]);
                let g = dotc(ci, cj);
                let ag = g.abs();
                if ag <= abs_floor || ag <= rel_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * ag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = g.phase();
                let phc = ph.conj();
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let xv = *x;
                    let yv = phc * *y;
                    *x = xv.scale(c) - yv.scale(s);
                    *y = ph * (xv.scale(s) + yv.scale(c));
                }
                norms[i] = alpha - t * ag;
                norms[j] = beta + t * ag;
            }
        }
        if !rotated {
            return Ok((0..n)
                .map(|k| norm2(&a[k * m..(k + 1) * m]).sqrt())
                .collect());
        }
    }
    Err(Error::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// Overwrites `x` with a Householder vector `v` such that
/// `(I - 2 v v^H / v^H v) x = -phase(x_0) ‖x‖ e_1`. Returns `(‖x‖, v^H v)`,
/// or `None` when `x` is zero.
fn householder<T: Scalar>(x: &mut [T]) -> Option<(f64, f64)> {
    let alpha2 = norm2(x);
    if alpha2 == 0.0 {
        return None;
    }
    let alpha = alpha2.sqrt();
    let x0 = x[0].abs();
    x[0] += x[0].phase().scale(alpha);
    Some((alpha, 2.0 * alpha * (alpha + x0)))
}

fn bidiagonal<T: Scalar>(mut a: Vec<T>, m: usize, n: usize) -> Result<Vec<f64>> {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut row = Vec::with_capacity(n);
    let mut w = vec![T::zero(); m];

    for k in 0..n {
        let (left, right) = a.split_at_mut((k + 1) * m);
        let v = &mut left[k * m + k..];
        if let Some((beta, vnorm2)) = householder(v) {
            d[k] = beta;
            let v = &*v;
            for cj in right.chunks_exact_mut(m) {
                let tau = dotc(v, &cj[k..]).scale(2.0 / vnorm2);
                axpy_sub(tau, v, &mut cj[k..]);
            }
        }
        if k + 1 >= n {
            break;
        }
        // right reflector acting on row k, columns k+1..n
        row.clear();
        row.extend(right.chunks_exact(m).map(|cj| cj[k].conj()));
        if let Some((beta, vnorm2)) = householder(&mut row) {
            e[k] = beta;
            let w = &mut w[..m - k - 1];
            w.fill(T::zero());
            for (cj, &vj) in right.chunks_exact(m).zip(&row) {
                for (wi, &aij) in w.iter_mut().zip(&cj[k + 1..]) {
                    *wi += aij * vj;
                }
            }
            let f = 2.0 / vnorm2;
            for (cj, &vj) in right.chunks_exact_mut(m).zip(&row) {
                axpy_sub(vj.conj().scale(f), w, &mut cj[k + 1..]);
            }
        }
    }
    bidiagonal_singular_values(&d, &e)
}

/// Singular values of the upper bidiagonal matrix with diagonal `d` and
/// superdiagonal `e`.
pub(crate) fn bidiagonal_singular_values(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![d[0].abs()]),
        _ => {}
    }
    let size = 2 * n;
    let mut diag = vec![0.0; size];
    let mut off = vec![0.0; size];
    for k in 0..n {
        off[2 * k] = d[k];
        if k + 1 < n {
            off[2 * k + 1] = e[k];
        }
    }
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(|a, b| b.total_cmp(a));
    let mut s: Vec<f64> = diag[..n].iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix;
/// `off[i]` couples `i` and `i + 1`, `off[len - 1]` is ignored. Eigenvalues
/// are left in `diag`.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let size = diag.len();
    if size < 2 {
        return Ok(());
    }
    off[size - 1] = 0.0;
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    let floor = f64::EPSILON * scale;

    for l in 0..size {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < size {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd || off[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    sweeps: QL_MAX_ITERATIONS,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{chi_matrix, delta_matrix};
    use crate::rng::SeededRng;

    fn assert_close(a: &SingularSpectrum, b: &SingularSpectrum, tol: f64) {
        assert_eq!(a.len(), b.len());
        let scale = a.largest().max(1.0);
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= tol * scale, "{x} vs {y}");
        }
    }

    #[test]
    fn routes_agree_on_random_complex() {
        for (seed, (r, c)) in [(1u64, (9, 9)), (2, (12, 5)), (3, (4, 11)), (4, (80, 70))] {
            let a = ComplexMatrix::gaussian(r, c, &mut SeededRng::new(seed)).unwrap();
            let j = singular_values_with(&a, SvdMethod::Jacobi).unwrap();
            let b = singular_values_with(&a, SvdMethod::Bidiagonal).unwrap();
            assert_eq!(j.len(), r.min(c));
            assert_close(&j, &b, 1e-12);
        }
    }

    #[test]
    fn routes_agree_on_real_structured() {
        for n in [1, 2, 3, 17, 65] {
            let a = delta_matrix(n).unwrap();
            let j = singular_values_with(&a, SvdMethod::Jacobi).unwrap();
            let b = singular_values_with(&a, SvdMethod::Bidiagonal).unwrap();
            assert_close(&j, &b, 1e-12);
        }
    }

    #[test]
    fn chi_spectrum_closed_form() {
        // s_k(χ_n) = 1 / (2 sin((2k-1)π / (4n+2))), k = 1..n
        for n in [5usize, 40, 130] {
            let s = singular_values(&chi_matrix(n).unwrap()).unwrap();
            for (k, v) in s.values().iter().enumerate() {
                let arg = (2 * k + 1) as f64 * std::f64::consts::PI / (4 * n + 2) as f64;
                let want = 1.0 / (2.0 * arg.sin());
                assert!(
                    (v - want).abs() < 1e-10 * s.largest(),
                    "n={n} k={k}: {v} vs {want}"
                );
            }
        }
    }

    #[test]
    fn rank_deficient_inputs() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        for method in [SvdMethod::Jacobi, SvdMethod::Bidiagonal] {
            let s = singular_values_with(&a, method).unwrap();
            assert!((s.values()[0] - 14f64.sqrt() * 5f64.sqrt()).abs() < 1e-12);
            assert!(s.values()[1].abs() < 1e-12);
        }
        let z = ComplexMatrix::zeros(3, 3).unwrap();
        for method in [SvdMethod::Jacobi, SvdMethod::Bidiagonal] {
            assert_eq!(
                singular_values_with(&z, method).unwrap().values(),
                &[0.0; 3]
            );
        }
    }

    #[test]
    fn bidiagonal_kernel_direct() {
        // [[3, 4], [0, 0]] has singular values 5, 0
        let s = bidiagonal_singular_values(&[3.0, 0.0], &[4.0]).unwrap();
        assert!((s[0] - 5.0).abs() < 1e-14 && s[1].abs() < 1e-14);
        assert_eq!(bidiagonal_singular_values(&[2.0], &[]).unwrap(), vec![2.0]);
    }
}

//! Trigonometric polynomials on the unit circle.
//!
//! A [`TrigPoly`] stores the coefficients of `z^lo, ..., z^hi` exactly as
//! given; nothing is trimmed and comparison pads with zeros. `L^p`
//! quasinorms use the normalized measure `dθ/2π` on a midpoint-shifted
//! uniform grid evaluated by FFT.

mod quadrature;
mod window;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::matrix::PExponent;

pub use quadrature::{dirichlet_bound, inverse_one_minus_z_hp};
pub use window::{BumpFunction, SmoothWindow};

/// Oversampling factor of the default quadrature grid. `|f|^p` has a
/// `|θ - θ_0|^p` cusp at every zero of `f` on the circle, and the midpoint rule
/// then converges like `(N / width)^{-1-p}`; Dirichlet kernels at `p = 1/2`
/// need about 250x for a relative error below `1e-4`.
pub const OVERSAMPLING: usize = 256;
/// Smallest admissible quadrature grid.
pub const MIN_SAMPLES: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct TrigPoly {
    lo: i64,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    /// Coefficient of `z^(lo + i)` is `coeffs[i]`.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("empty coefficient vector".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!(
                "non-finite coefficient at {}",
                lo + i as i64
            )));
        }
        Ok(Self { lo, coeffs })
    }

    pub fn from_real(lo: i64, coeffs: &[f64]) -> Result<Self> {
        Self::new(lo, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            lo: 0,
            coeffs: vec![ZERO],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            lo: 0,
            coeffs: vec![c],
        }
    }

    pub fn monomial(k: i64, c: Complex64) -> Self {
        Self {
            lo: k,
            coeffs: vec![c],
        }
    }

    /// Coefficients `f(j)` for `j in lo..=hi`.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> Complex64) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidPolynomial(format!("empty range {lo}..={hi}")));
        }
        Self::new(lo, (lo..=hi).map(f).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Number of stored coefficients, `hi - lo + 1`.
    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_analytic(&self) -> bool {
        self.lo >= 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Largest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .rposition(|c| *c != ZERO)
            .map(|i| self.lo + i as i64)
    }

    /// Smallest index with a nonzero coefficient.
    pub fn lowest(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| *c != ZERO)
            .map(|i| self.lo + i as i64)
    }

    /// `f̂(j)`, zero outside the stored range.
    pub fn coefficient(&self, j: i64) -> Complex64 {
        if j < self.lo || j > self.hi() {
            ZERO
        } else {
            self.coeffs[(j - self.lo) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    /// Coefficients `f̂(j) * g(j)`, restricted to `lo..=hi`.
    pub fn map_range(&self, lo: i64, hi: i64, g: impl Fn(i64, Complex64) -> Complex64) -> TrigPoly {
        if hi < lo {
            return TrigPoly::zero();
        }
        TrigPoly {
            lo,
            coeffs: (lo..=hi).map(|j| g(j, self.coefficient(j))).collect(),
        }
    }

    /// `z^k f`.
    pub fn shift(&self, k: i64) -> TrigPoly {
        TrigPoly {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> TrigPoly {
        TrigPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// `f(z)` by Horner's rule on the nonnegative part of `z^{-lo} f`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let inner = self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
        inner * z.powi(self.lo as i32)
    }

    /// `f(e^{iθ})` by direct summation, with exact unit-modulus powers.
    pub fn evaluate_at_angle(&self, theta: f64) -> Complex64 {
        self.iter()
            .map(|(j, c)| c * Complex64::from_polar(1.0, j as f64 * theta))
            .sum()
    }

    fn combine(&self, other: &TrigPoly, f: impl Fn(Complex64, Complex64) -> Complex64) -> TrigPoly {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        TrigPoly {
            lo,
            coeffs: (lo..=hi)
                .map(|j| f(self.coefficient(j), other.coefficient(j)))
                .collect(),
        }
    }
}

impl PartialEq for TrigPoly {
    fn eq(&self, other: &Self) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|j| self.coefficient(j) == other.coefficient(j))
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.iter().filter(|(_, c)| *c != ZERO) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{j}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Polynomial product (coefficient convolution).
impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        let mut coeffs = vec![ZERO; self.width() + rhs.width() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TrigPoly {
            lo: self.lo + rhs.lo,
            coeffs,
        }
    }
}

/// Values of `f` at `θ_k = 2π(k + offset)/n`, `k = 0..n`, via one FFT.
fn grid_values(f: &TrigPoly, n: usize, offset: f64) -> Vec<Complex64> {
    let mut buf = vec![ZERO; n];
    let step = std::f64::consts::TAU * offset / n as f64;
    for (j, c) in f.iter() {
        let twist = if offset == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, j as f64 * step)
        };
        buf[j.rem_euclid(n as i64) as usize] += c * twist;
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// `f(e^{iθ_k})` at `θ_k = 2πk/n_samples`.
pub fn evaluate_on_grid(f: &TrigPoly, n_samples: usize) -> Result<Vec<Complex64>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument(
            "grid needs at least one sample".into(),
        ));
    }
    Ok(grid_values(f, n_samples, 0.0))
}

/// Direct-summation reference for [`evaluate_on_grid`].
pub fn evaluate_on_grid_direct(f: &TrigPoly, n_samples: usize) -> Vec<Complex64> {
    (0..n_samples)
        .map(|k| f.evaluate_at_angle(std::f64::consts::TAU * k as f64 / n_samples as f64))
        .collect()
}

/// Minimum quadrature grid for `f`: `max(4096, 256 (hi - lo + 1))`.
pub fn quadrature_floor(f: &TrigPoly) -> usize {
    MIN_SAMPLES.max(OVERSAMPLING * f.width())
}

/// Default grid: the floor rounded up to a power of two.
pub fn default_samples(f: &TrigPoly) -> usize {
    oversampled_samples(f, OVERSAMPLING)
}

/// `max(4096, factor (hi - lo + 1))` rounded up to a power of two; `factor`
/// below [`OVERSAMPLING`] is raised to it.
pub fn oversampled_samples(f: &TrigPoly, factor: usize) -> usize {
    MIN_SAMPLES
        .max(factor.max(OVERSAMPLING) * f.width())
        .next_power_of_two()
}

/// `((1/N) Σ_k |f(e^{iθ_k})|^p)^{1/p}` on the midpoint grid `θ_k = 2π(k+½)/N`.
pub fn lp_quasinorm(f: &TrigPoly, p: PExponent, n_samples: usize) -> Result<f64> {
    let required = quadrature_floor(f);
    if n_samples < required {
        return Err(Error::GridTooCoarse {
            given: n_samples,
            required,
        });
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    if f.coeffs.iter().filter(|c| **c != ZERO).count() == 1 {
        // monomial: |f| is constant on the circle
        return Ok(f.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    let values = grid_values(f, n_samples, 0.5);
    let top = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pv = p.get();
    let mean = values
        .iter()
        .map(|z| (z.norm() / top).powf(pv))
        .sum::<f64>()
        / n_samples as f64;
    Ok(top * mean.powf(1.0 / pv))
}

/// [`lp_quasinorm`] on [`default_samples`].
pub fn lp_norm(f: &TrigPoly, p: PExponent) -> f64 {
    lp_norm_with(f, p, OVERSAMPLING)
}

/// [`lp_quasinorm`] on [`oversampled_samples`].
pub fn lp_norm_with(f: &TrigPoly, p: PExponent, oversampling: usize) -> f64 {
    lp_quasinorm(f, p, oversampled_samples(f, oversampling)).expect("grid meets the floor")
}

/// Nonnegative frequencies.
pub fn riesz_plus(f: &TrigPoly) -> TrigPoly {
    if f.hi() < 0 {
        return TrigPoly::zero();
    }
    f.map_range(f.lo.max(0), f.hi(), |_, c| c)
}

/// Negative frequencies.
pub fn riesz_minus(f: &TrigPoly) -> TrigPoly {
    if f.lo >= 0 {
        return TrigPoly::zero();
    }
    f.map_range(f.lo, f.hi().min(-1), |_, c| c)
}

pub fn coefficient(f: &TrigPoly, j: i64) -> Complex64 {
    f.coefficient(j)
}

/// `D_n^+ = 1 + z + ... + z^{n-1}`.
pub fn dirichlet_plus(n: usize) -> Result<TrigPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Dirichlet kernel needs n >= 1".into(),
        ));
    }
    TrigPoly::new(0, vec![Complex64::new(1.0, 0.0); n])
}

/// Fejér kernel `K_m` with coefficients `1 - |j|/(m+1)`, `|j| <= m`.
pub fn fejer(m: usize) -> Result<TrigPoly> {
    if m == 0 {
        return Err(Error::InvalidArgument("Fejér kernel needs m >= 1".into()));
    }
    let m = m as i64;
    TrigPoly::from_fn(-m, m, |j| {
        Complex64::new(1.0 - j.abs() as f64 / (m + 1) as f64, 0.0)
    })
}

/// `Q_m = Σ_{|k| < m} q(k/m) z^k`.
pub fn bump_poly(m: usize, q: BumpFunction) -> Result<TrigPoly> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "bump polynomial needs m >= 1".into(),
        ));
    }
    let mi = m as i64;
    TrigPoly::from_fn(-(mi - 1), mi - 1, |k| {
        Complex64::new(q.eval(k as f64 / m as f64), 0.0)
    })
}

/// Natural support `(2^{n-1}, 2^{n+1})` of the `n`-th window, as an index range.
pub fn level_support(n: u32) -> (i64, i64) {
    let low = if n == 0 { 1 } else { (1i64 << (n - 1)) + 1 };
    (low, (1i64 << (n + 1)) - 1)
}

/// `v(j / 2^n)`.
fn window_weight(v: SmoothWindow, n: u32, j: i64) -> f64 {
    v.eval(j as f64 / (1u64 << n) as f64)
}

/// `V_n(z) = Σ_{j>0} v(2^{-n} j) z^j`, stored on its natural support.
pub fn lp_piece(n: u32, v: SmoothWindow, max_degree: u64) -> Result<TrigPoly> {
    let need = 1u64 << (n + 1);
    if max_degree < need {
        return Err(Error::InvalidArgument(format!(
            "max_degree {max_degree} truncates V_{n}; need at least {need}"
        )));
    }
    let (lo, hi) = level_support(n);
    TrigPoly::from_fn(lo, hi, |j| Complex64::new(window_weight(v, n, j), 0.0))
}

/// `f * V_n`: coefficients `f̂(j) v(j/2^n)` for `j > 0`, all others zero.
pub fn apply_window(f: &TrigPoly, n: u32, v: SmoothWindow) -> TrigPoly {
    let (lo, hi) = level_support(n);
    let lo = lo.max(f.lo);
    let hi = hi.min(f.hi());
    if hi < lo {
        return TrigPoly::zero();
    }
    f.map_range(lo, hi, |j, c| c * window_weight(v, n, j))
}

//! Hankel matrices of analytic polynomials and `B_p^{1/p}` quasinorms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{schatten_quasinorm, ComplexMatrix, PExponent};
use crate::trig::{
    apply_window, level_support, lp_norm_with, SmoothWindow, TrigPoly, OVERSAMPLING,
};

/// `Γ_φ = {φ̂(j+k)}`, truncated to the `(d+1) x (d+1)` block that carries
/// every nonzero entry (`d = hi(φ)`).
pub fn hankel_matrix(phi: &TrigPoly) -> Result<ComplexMatrix> {
    if !phi.is_analytic() {
        return Err(Error::NotAnalytic { lo: phi.lo() });
    }
    let size = phi.hi() as usize + 1;
    ComplexMatrix::from_fn(size, size, |j, k| phi.coefficient((j + k) as i64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesovLevel {
    pub level: u32,
    /// `2^n ‖φ * V_n‖_{L^p}^p`.
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesovReport {
    pub p: PExponent,
    pub levels: Vec<BesovLevel>,
    /// `|φ̂(0)|^p`, added so the quasinorm vanishes only at zero.
    pub zero_term: f64,
    pub total: f64,
}

impl BesovReport {
    pub fn term(&self, level: u32) -> f64 {
        self.levels
            .iter()
            .find(|l| l.level == level)
            .map_or(0.0, |l| l.term)
    }
}

/// Highest level whose window can meet the support of a degree-`d` polynomial.
fn last_level(degree: i64) -> u32 {
    let mut n = 0;
    while (1i64 << n) <= degree {
        n += 1;
    }
    // 2^{n-1} <= degree < 2^n
    n
}

/// `(|φ̂(0)|^p + Σ_n 2^n ‖φ * V_n‖_{L^p}^p)^{1/p}`.
pub fn besov_quasinorm(phi: &TrigPoly, p: PExponent, v: SmoothWindow) -> Result<BesovReport> {
    besov_quasinorm_with(phi, p, v, OVERSAMPLING)
}

pub fn besov_quasinorm_with(
    phi: &TrigPoly,
    p: PExponent,
    v: SmoothWindow,
    oversampling: usize,
) -> Result<BesovReport> {
    if !phi.is_analytic() {
        return Err(Error::NotAnalytic { lo: phi.lo() });
    }
    let pv = p.get();
    let zero_term = phi.coefficient(0).norm().powf(pv);
    let levels: Vec<BesovLevel> = match phi.degree() {
        Some(d) if d > 0 => (0..=last_level(d))
            .map(|n| {
                let piece = apply_window(phi, n, v);
                let norm = if piece.is_zero() {
                    0.0
                } else {
                    lp_norm_with(&piece, p, oversampling)
                };
                BesovLevel {
                    level: n,
                    term: (1u64 << n) as f64 * norm.powf(pv),
                }
            })
            .collect(),
        _ => Vec::new(),
    };
    let sum: f64 = zero_term + levels.iter().map(|l| l.term).sum::<f64>();
    Ok(BesovReport {
        p,
        levels,
        zero_term,
        total: sum.powf(1.0 / pv),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandCheck {
    pub schatten: f64,
    pub lp: f64,
    /// `‖Γ_φ‖_{S_p} / (2^{(n+1)/p} ‖φ‖_{L^p})`.
    pub ratio: f64,
    pub upper_ok: bool,
}

/// Multiplicative slack for inequalities between exactly computed quantities.
pub const HARD_SLACK: f64 = 1e-9;
/// Slack for inequalities that involve an `L^p` quadrature.
pub const QUADRATURE_SLACK: f64 = 1e-4;

/// Band estimate for `φ` supported on `2^{n-1}+1 ..= 2^{n+1}-1`.
pub fn band_hankel_check(phi: &TrigPoly, level: u32, p: PExponent) -> Result<BandCheck> {
    band_hankel_check_with(phi, level, p, OVERSAMPLING)
}

pub fn band_hankel_check_with(
    phi: &TrigPoly,
    level: u32,
    p: PExponent,
    oversampling: usize,
) -> Result<BandCheck> {
    if level == 0 {
        return Err(Error::InvalidArgument(
            "band level must be at least 1".into(),
        ));
    }
    let (low, high) = level_support(level);
    for (j, c) in phi.iter() {
        if c != Complex64::new(0.0, 0.0) && (j < low || j > high) {
            return Err(Error::SupportViolation {
                index: j,
                low: low - 1,
                high: high + 1,
            });
        }
    }
    if phi.is_zero() {
        return Err(Error::InvalidArgument("band polynomial is zero".into()));
    }
    let schatten = schatten_quasinorm(&hankel_matrix(phi)?, p)?;
    let lp = lp_norm_with(phi, p, oversampling);
    let ratio = schatten / (2f64.powf((level + 1) as f64 / p.get()) * lp);
    Ok(BandCheck {
        schatten,
        lp,
        ratio,
        upper_ok: ratio <= 1.0 + HARD_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelBound {
    /// `‖Γ_φ‖_{S_p}`.
    pub lhs: f64,
    /// `2^{1/p-1} m^{1/p} ‖φ‖_{L^p}`, `m = deg φ + 1`.
    pub rhs: f64,
}

impl HankelBound {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + slack)
    }
}

/// Both sides of `‖Γ_φ‖_{S_p} <= 2^{1/p-1} m^{1/p} ‖φ‖_{L^p}` for `p <= 1`.
pub fn polynomial_hankel_sp_bound(phi: &TrigPoly, p: PExponent) -> Result<HankelBound> {
    p.require_at_most_one()?;
    let gamma = hankel_matrix(phi)?;
    let m = (phi.hi() + 1) as f64;
    let pv = p.get();
    let lhs = schatten_quasinorm(&gamma, p)?;
    let rhs = 2f64.powf(p.dual_gap()) * m.powf(1.0 / pv) * lp_norm_with(phi, p, OVERSAMPLING);
    Ok(HankelBound { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{delta_matrix, singular_values};
    use crate::rng::SeededRng;
    use crate::trig::dirichlet_plus;

    fn p(x: f64) -> PExponent {
        PExponent::new(x).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn hankel_of_one_plus_z() {
        let phi = TrigPoly::from_real(0, &[1.0, 1.0]).unwrap();
        assert_eq!(
            hankel_matrix(&phi).unwrap(),
            ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap()
        );
        assert!(matches!(
            hankel_matrix(&TrigPoly::monomial(-1, c(1.0))),
            Err(Error::NotAnalytic { lo: -1 })
        ));
    }

    #[test]
    fn hankel_of_dirichlet_is_delta() {
        for n in [1usize, 6, 7] {
            assert_eq!(
                hankel_matrix(&dirichlet_plus(n).unwrap()).unwrap(),
                delta_matrix(n).unwrap()
            );
        }
    }

    #[test]
    fn monomial_hankel_norm() {
        // antidiagonal of m+1 ones: all singular values equal one
        let phi = TrigPoly::monomial(4, c(1.0));
        let s = singular_values(&hankel_matrix(&phi).unwrap()).unwrap();
        assert!(s.values().iter().all(|v| (v - 1.0).abs() < 1e-13));
        let norm = schatten_quasinorm(&hankel_matrix(&phi).unwrap(), p(0.5)).unwrap();
        assert!((norm - 25.0).abs() < 1e-10);
    }

    #[test]
    fn besov_small_cases() {
        let v = SmoothWindow::standard();
        let z = besov_quasinorm(&TrigPoly::monomial(1, c(1.0)), p(0.5), v).unwrap();
        assert!((z.total - 1.0).abs() < 1e-14);
        assert_eq!(z.term(0), 1.0);
        assert_eq!(z.term(1), 0.0);

        let k = besov_quasinorm(&TrigPoly::constant(Complex64::new(-3.0, 4.0)), p(0.7), v).unwrap();
        assert!((k.total - 5.0).abs() < 1e-12);
        assert!(k.levels.is_empty());

        let zero = besov_quasinorm(&TrigPoly::zero(), p(0.5), v).unwrap();
        assert_eq!(zero.total, 0.0);
        assert!(besov_quasinorm(&TrigPoly::monomial(-2, c(1.0)), p(0.5), v).is_err());
    }

    #[test]
    fn besov_dyadic_dirichlet_level_bound() {
        let v = SmoothWindow::standard();
        let k = 6;
        let report = besov_quasinorm(&dirichlet_plus((1 << k) + 1).unwrap(), p(0.5), v).unwrap();
        let scale = (1u64 << k) as f64;
        assert!(report.term(k) >= scale * (1.0 - 1e-6));
        assert!(report.total.powf(0.5) >= scale);
        // levels beyond the degree are exactly zero
        assert_eq!(report.term(k + 1), 0.0);
        assert_eq!(report.levels.last().unwrap().level, k + 1);
    }

    #[test]
    fn three_window_identity() {
        let v = SmoothWindow::standard();
        let mut rng = SeededRng::new(12);
        for n in 2u32..7 {
            let (lo, hi) = level_support(n);
            let phi = TrigPoly::new(lo, rng.complex_normals((hi - lo + 1) as usize)).unwrap();
            let sum =
                (n - 1..=n + 1).fold(TrigPoly::zero(), |acc, l| &acc + &apply_window(&phi, l, v));
            for j in lo..=hi {
                assert!(
                    (sum.coefficient(j) - phi.coefficient(j)).norm()
                        < 1e-12 * phi.coefficient(j).norm().max(1.0)
                );
            }
        }
    }

    #[test]
    fn band_monomial_ratio() {
        let n = 3;
        let phi = TrigPoly::monomial((1 << (n - 1)) + 1, c(1.0));
        let check = band_hankel_check(&phi, n, p(0.5)).unwrap();
        // Γ is a 6x6 permutation block: ‖Γ‖_{S_1/2} = 6^2
        let want = 36.0 / 2f64.powf(8.0);
        assert!((check.ratio - want).abs() < 1e-12);
        assert!(check.upper_ok);
    }

    #[test]
    fn band_support_violation() {
        let phi = TrigPoly::from_real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            band_hankel_check(&phi, 2, p(0.5)),
            Err(Error::SupportViolation { index: 8, .. })
        ));
        // stored zeros outside the band are fine
        let padded = TrigPoly::from_real(0, &[0.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(band_hankel_check(&padded, 2, p(0.5)).is_ok());
    }

    #[test]
    fn polynomial_bound_cases() {
        let one = polynomial_hankel_sp_bound(&TrigPoly::constant(c(1.0)), p(0.5)).unwrap();
        assert!((one.lhs - 1.0).abs() < 1e-14 && (one.rhs - 2.0).abs() < 1e-12);
        let d = polynomial_hankel_sp_bound(&dirichlet_plus(16).unwrap(), p(0.5)).unwrap();
        assert!(d.holds(QUADRATURE_SLACK), "{d:?}");
        assert!(polynomial_hankel_sp_bound(&dirichlet_plus(4).unwrap(), p(1.5)).is_err());
    }
}

//! Lower bounds for Schur multiplier quasinorms `‖A‖_{M_p}` by witnesses,
//! and the analytic upper bound for Hankel multipliers.
//!
//! `‖A‖_{M_p}` is a supremum over the `S_p` unit ball, so any nonzero `B`
//! certifies `‖A ⋆ B‖_{S_p} / ‖B‖_{S_p} <= ‖A‖_{M_p}`. Nothing here claims an
//! exact multiplier norm.

use crate::error::{Error, Result};
use crate::hankel::hankel_matrix;
use crate::matrix::{
    block2x2, block_diag2, chi_matrix, delta_matrix, ones_matrix, schatten_quasinorm,
    schur_product, ComplexMatrix, PExponent,
};
use crate::rng::SeededRng;
use crate::trig::{
    bump_poly, dirichlet_plus, fejer, lp_norm_with, riesz_plus, BumpFunction, TrigPoly,
    OVERSAMPLING,
};

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub p: PExponent,
    pub multiplier: ComplexMatrix,
    pub witness: ComplexMatrix,
    /// `‖A ⋆ B‖_{S_p}`.
    pub numerator: f64,
    /// `‖B‖_{S_p}`, always positive.
    pub denominator: f64,
    pub ratio: f64,
}

pub fn witness_ratio(a: &ComplexMatrix, b: &ComplexMatrix, p: PExponent) -> Result<WitnessReport> {
    let product = schur_product(a, b)?;
    if b.is_zero() {
        return Err(Error::ZeroWitness);
    }
    let denominator = schatten_quasinorm(b, p)?;
    let numerator = schatten_quasinorm(&product, p)?;
    Ok(WitnessReport {
        p,
        multiplier: a.clone(),
        witness: b.clone(),
        numerator,
        denominator,
        ratio: numerator / denominator,
    })
}

/// Witness pair `(P_k, R_k)`: `P_k = z^{2^k} Q_{2^{k-1}}` and `R_k` its part of
/// degree at most `2^k`, so that `Γ_{R_k} = Γ_{P_k} ⋆ Δ_{2^k+1}`.
pub fn constructive_witness(k: u32, q: BumpFunction) -> Result<(TrigPoly, TrigPoly)> {
    if k == 0 || k > 30 {
        return Err(Error::InvalidArgument(format!(
            "witness level k = {k} outside 1..=30"
        )));
    }
    let bump = bump_poly(1usize << (k - 1), q)?;
    let pk = bump.shift(1i64 << k);
    let cut = 1i64 << k;
    let rk = pk.map_range(pk.lo(), cut.min(pk.hi()), |_, c| c);
    Ok((pk, rk))
}

/// Square size holding both `Γ_{P_k}` and `Δ_{2^k+1}`: `2^{k-1} + 2^k + 1`.
pub fn witness_embedding_size(k: u32) -> usize {
    (1usize << (k - 1)) + (1usize << k) + 1
}

/// `‖Δ_{2^k+1} ⋆ Γ_{P_k}‖_{S_p} / ‖Γ_{P_k}‖_{S_p}`, both zero-padded to a common size.
pub fn delta_lower_bound(k: u32, p: PExponent, q: BumpFunction) -> Result<WitnessReport> {
    let (pk, _) = constructive_witness(k, q)?;
    let size = witness_embedding_size(k);
    let delta = delta_matrix((1usize << k) + 1)?.embed(size, size)?;
    let gamma = hankel_matrix(&pk)?;
    let gamma = gamma.embed(size, size)?;
    witness_ratio(&delta, &gamma, p)
}

/// `(2m)^{1/p-1} ‖φ‖_{L^p}` with `m = deg φ + 1`, an upper bound for `‖Γ_φ‖_{M_p}`, `p <= 1`.
pub fn hankel_multiplier_upper(phi: &TrigPoly, p: PExponent) -> Result<f64> {
    hankel_multiplier_upper_with(phi, p, OVERSAMPLING)
}

pub fn hankel_multiplier_upper_with(
    phi: &TrigPoly,
    p: PExponent,
    oversampling: usize,
) -> Result<f64> {
    p.require_at_most_one()?;
    if !phi.is_analytic() {
        return Err(Error::NotAnalytic { lo: phi.lo() });
    }
    let m = (phi.hi() + 1) as f64;
    Ok((2.0 * m).powf(p.dual_gap()) * lp_norm_with(phi, p, oversampling))
}

/// `(A, B)` and `(diag(A, A), [[B, B], [B, B]])`; the second ratio is exactly
/// `2^{1/p-1}` times the first.
pub fn double_witness(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: PExponent,
) -> Result<(WitnessReport, WitnessReport)> {
    let base = witness_ratio(a, b, p)?;
    let doubled = witness_ratio(&block_diag2(a)?, &block2x2(b, b, b, b)?, p)?;
    Ok((base, doubled))
}

/// Corner block `[[0, 1I_n], [0, 0]]` of the `χ_{2n}` splitting.
pub fn chi_corner(n: usize) -> Result<ComplexMatrix> {
    let z = ComplexMatrix::zeros(n, n)?;
    block2x2(&z, &ones_matrix(n)?, &z, &z)
}

/// Checks `χ_{2n} = [[χ_n, 1I_n], [0, χ_n]] = diag(χ_n, χ_n) + corner` entrywise.
pub fn chi_doubling_decomposition(n: usize) -> Result<bool> {
    let chi = chi_matrix(n)?;
    let big = chi_matrix(2 * n)?;
    let zero = ComplexMatrix::zeros(n, n)?;
    let blocks = block2x2(&chi, &ones_matrix(n)?, &zero, &chi)?;
    let split = block_diag2(&chi)?.try_add(&chi_corner(n)?)?;
    Ok(big == blocks && big == split)
}

/// `Some(k)` when `a` is exactly `Δ_{2^k+1}`.
fn delta_level(a: &ComplexMatrix) -> Option<u32> {
    let n = a.rows();
    if !a.is_square() || n < 3 || !(n - 1).is_power_of_two() {
        return None;
    }
    let k = (n - 1).trailing_zeros();
    (delta_matrix(n).ok()? == *a).then_some(k)
}

/// Rejected perturbations before the step size decays.
const DECAY_WINDOW: usize = 100;
const DECAY_FACTOR: f64 = 0.95;
const INITIAL_STEP: f64 = 0.1;

/// Best witness ratio over a seeded pool and a perturbation ascent.
///
/// The pool holds the all-ones witness, the identity (square multipliers),
/// the constructive Hankel witness when `a` is `Δ_{2^k+1}`, and `budget / 2`
/// rank-one Gaussian witnesses. The rest of the budget perturbs one entry of
/// the incumbent at a time by `step` times a complex normal, keeping strict
/// improvements; `step` starts at `0.1 max|B|` and shrinks by 0.95 after every
/// 100 consecutive rejections. Ties keep the earlier candidate.
pub fn random_witness_search(
    a: &ComplexMatrix,
    p: PExponent,
    budget: usize,
    seed: u64,
) -> Result<WitnessReport> {
    if budget == 0 {
        return Err(Error::InvalidArgument(
            "search budget must be positive".into(),
        ));
    }
    let mut rng = SeededRng::new(seed);

    let (mult, constructive) = match delta_level(a) {
        Some(k) => {
            let size = witness_embedding_size(k).max(a.rows());
            let (pk, _) = constructive_witness(k, BumpFunction::standard())?;
            let gamma = hankel_matrix(&pk)?.embed(size, size)?;
            (a.embed(size, size)?, Some(gamma))
        }
        None => (a.clone(), None),
    };
    let (rows, cols) = mult.shape();

    let mut best = witness_ratio(
        &mult,
        &ComplexMatrix::from_fn(rows, cols, |_, _| 1.0.into())?,
        p,
    )?;
    let consider = |candidate: ComplexMatrix, best: &mut WitnessReport| -> Result<()> {
        if candidate.is_zero() {
            return Ok(());
        }
        let report = witness_ratio(&mult, &candidate, p)?;
        if report.ratio > best.ratio {
            *best = report;
        }
        Ok(())
    };
    if mult.is_square() {
        consider(ComplexMatrix::identity(rows)?, &mut best)?;
    }
    if let Some(gamma) = constructive {
        consider(gamma, &mut best)?;
    }

    let draws = budget / 2;
    for _ in 0..draws {
        let u = rng.complex_normals(rows);
        let v = rng.complex_normals(cols);
        consider(ComplexMatrix::outer(&u, &v)?, &mut best)?;
    }

    let mut step = INITIAL_STEP * best.witness.max_abs();
    let mut rejected = 0;
    for _ in draws..budget {
        let mut candidate = best.witness.clone();
        let (j, k) = (rng.next_index(rows), rng.next_index(cols));
        candidate[(j, k)] += rng.complex_normal() * step;
        let before = best.ratio;
        consider(candidate, &mut best)?;
        if best.ratio > before {
            rejected = 0;
        } else {
            rejected += 1;
            if rejected == DECAY_WINDOW {
                step *= DECAY_FACTOR;
                rejected = 0;
            }
        }
    }
    Ok(best)
}

/// `‖P_+ K_m‖_{L^1} / ‖K_m‖_{L^1}` for the Fejér kernel.
pub fn fejer_riesz_ratio(m: usize) -> Result<f64> {
    fejer_riesz_ratio_with(m, OVERSAMPLING)
}

pub fn fejer_riesz_ratio_with(m: usize, oversampling: usize) -> Result<f64> {
    let k = fejer(m)?;
    let one = PExponent::new(1.0)?;
    Ok(lp_norm_with(&riesz_plus(&k), one, oversampling) / lp_norm_with(&k, one, oversampling))
}

/// `‖P_+ Q_m‖_{L^p} / ‖Q_m‖_{L^p}` for the bump polynomial.
pub fn riesz_jump_ratio(m: usize, p: PExponent, q: BumpFunction) -> Result<f64> {
    riesz_jump_ratio_with(m, p, q, OVERSAMPLING)
}

pub fn riesz_jump_ratio_with(
    m: usize,
    p: PExponent,
    q: BumpFunction,
    oversampling: usize,
) -> Result<f64> {
    let qm = bump_poly(m, q)?;
    Ok(lp_norm_with(&riesz_plus(&qm), p, oversampling) / lp_norm_with(&qm, p, oversampling))
}

/// Upper bound `(2m)^{1/p-1} ‖D_m^+‖_{L^p}` for `‖Δ_m‖_{M_p}`.
pub fn delta_multiplier_upper(m: usize, p: PExponent) -> Result<f64> {
    hankel_multiplier_upper(&dirichlet_plus(m)?, p)
}

//! `‖(1 - z)^{-1}‖_{H^p}` for `0 < p < 1` by graded midpoint quadrature.

use crate::error::{Error, Result};
use crate::matrix::PExponent;

const INNER_EXPONENT: i32 = 40;
const START_CELLS_PER_DECADE: usize = 200;
const REL_TOL: f64 = 1e-8;
const MAX_REFINEMENTS: usize = 12;

/// `(1/π) ∫_a^π (2 sin(θ/2))^{-p} dθ` on a geometric mesh, midpoint rule per cell.
fn graded_sum(p: f64, a: f64, cells_per_decade: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let decades = (pi / a).log10();
    let cells = (decades * cells_per_decade as f64).ceil() as usize;
    let ratio = (pi / a).powf(1.0 / cells as f64);
    let mut left = a;
    let mut total = 0.0;
    for i in 0..cells {
        let right = if i + 1 == cells { pi } else { left * ratio };
        let mid = 0.5 * (left + right);
        total += (2.0 * (mid / 2.0).sin()).powf(-p) * (right - left);
        left = right;
    }
    total / pi
}

/// `‖(1 - z)^{-1}‖_{H^p}` with the normalized circle measure. The mesh runs
/// over `[2^{-40} π, π]` with the innermost piece integrated as `θ^{-p}`;
/// cells per decade double from 200 until successive values agree to `1e-8`.
pub fn inverse_one_minus_z_hp(p: PExponent) -> Result<f64> {
    let pv = p.get();
    if pv >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "(1 - z)^-1 is not in H^p for p = {pv} >= 1"
        )));
    }
    let a = std::f64::consts::PI * 2f64.powi(-INNER_EXPONENT);
    let tail = a.powf(1.0 - pv) / (1.0 - pv) / std::f64::consts::PI;
    let mut cells = START_CELLS_PER_DECADE;
    let mut prev = graded_sum(pv, a, cells) + tail;
    for _ in 0..MAX_REFINEMENTS {
        cells *= 2;
        let next = graded_sum(pv, a, cells) + tail;
        if (next - prev).abs() <= REL_TOL * next.abs() {
            return Ok(next.powf(1.0 / pv));
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        sweeps: MAX_REFINEMENTS,
    })
}

/// `K̂ = 2^{1/p} ‖(1 - z)^{-1}‖_{H^p}`, an upper bound for every `‖D_n^+‖_{L^p}`.
pub fn dirichlet_bound(p: PExponent) -> Result<f64> {
    Ok(2f64.powf(1.0 / p.get()) * inverse_one_minus_z_hp(p)?)
}

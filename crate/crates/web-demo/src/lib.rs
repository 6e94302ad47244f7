//! Browser bindings for three interactive views: the singular spectrum of
//! `Δ_n`, the dyadic window partition, and the Riesz projection jump ratio.
//!
//! The `compute` functions are plain Rust so they can be tested natively;
//! the exported wrappers only convert errors into JS exceptions.

use wasm_bindgen::prelude::*;

pub mod compute {
    use schur_lab::matrix::{delta_matrix, schatten_quasinorm, singular_values};
    use schur_lab::multiplier::riesz_jump_ratio;
    use schur_lab::trig::{BumpFunction, SmoothWindow};
    use schur_lab::PExponent;

    /// Interactive sizes stay small enough for a dense SVD in the browser.
    pub const MAX_N: usize = 512;
    pub const MAX_LEVEL: u32 = 9;

    fn exponent(p: f64) -> Result<PExponent, String> {
        PExponent::new(p).map_err(|e| e.to_string())
    }

    fn check_n(n: usize) -> Result<(), String> {
        if (1..=MAX_N).contains(&n) {
            Ok(())
        } else {
            Err(format!("n must be in 1..={MAX_N}, got {n}"))
        }
    }

    fn check_level(k: u32) -> Result<(), String> {
        if (1..=MAX_LEVEL).contains(&k) {
            Ok(())
        } else {
            Err(format!("level must be in 1..={MAX_LEVEL}, got {k}"))
        }
    }

    /// Singular values of `Δ_n`, nonincreasing.
    pub fn delta_spectrum(n: usize) -> Result<Vec<f64>, String> {
        check_n(n)?;
        let a = delta_matrix(n).map_err(|e| e.to_string())?;
        Ok(singular_values(&a)
            .map_err(|e| e.to_string())?
            .values()
            .to_vec())
    }

    /// `‖Δ_{2^k}‖_{S_p}` for `k = 1..=kmax`.
    pub fn delta_schatten_curve(kmax: u32, p: f64) -> Result<Vec<f64>, String> {
        check_level(kmax)?;
        let p = exponent(p)?;
        (1..=kmax)
            .map(|k| {
                let a = delta_matrix(1 << k).map_err(|e| e.to_string())?;
                schatten_quasinorm(&a, p).map_err(|e| e.to_string())
            })
            .collect()
    }

    /// Interleaved `(x, v(x), Σ_j v(2^{-j} x))` on `samples` log-spaced points of `[1/4, 16]`.
    pub fn window_profile(samples: usize) -> Result<Vec<f64>, String> {
        if samples < 2 {
            return Err("need at least 2 samples".into());
        }
        let v = SmoothWindow::standard();
        let mut out = Vec::with_capacity(3 * samples);
        for i in 0..samples {
            let x = 2f64.powf(-2.0 + 6.0 * i as f64 / (samples - 1) as f64);
            out.extend([x, v.eval(x), v.partition_sum(x)]);
        }
        Ok(out)
    }

    /// `‖P_+ Q_m‖_p / ‖Q_m‖_p` for `m = 2^k`, `k = 1..=kmax`.
    pub fn riesz_jump_curve(kmax: u32, p: f64) -> Result<Vec<f64>, String> {
        check_level(kmax)?;
        let p = exponent(p)?;
        (1..=kmax)
            .map(|k| {
                riesz_jump_ratio(1 << k, p, BumpFunction::standard()).map_err(|e| e.to_string())
            })
            .collect()
    }
}

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = deltaSpectrum)]
pub fn delta_spectrum(n: usize) -> Result<Vec<f64>, JsError> {
    js(compute::delta_spectrum(n))
}

#[wasm_bindgen(js_name = deltaSchattenCurve)]
pub fn delta_schatten_curve(kmax: u32, p: f64) -> Result<Vec<f64>, JsError> {
    js(compute::delta_schatten_curve(kmax, p))
}

#[wasm_bindgen(js_name = windowProfile)]
pub fn window_profile(samples: usize) -> Result<Vec<f64>, JsError> {
    js(compute::window_profile(samples))
}

#[wasm_bindgen(js_name = rieszJumpCurve)]
pub fn riesz_jump_curve(kmax: u32, p: f64) -> Result<Vec<f64>, JsError> {
    js(compute::riesz_jump_curve(kmax, p))
}

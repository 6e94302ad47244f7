//! Smooth cutoffs: the dyadic window `v` and the bump `q`.

/// `exp(-1/s)` for `s > 0`, zero otherwise.
fn sigma(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth monotone step: 0 for `s <= 0`, 1 for `s >= 1`.
pub fn smooth_step(s: f64) -> f64 {
    let a = sigma(s);
    let b = sigma(1.0 - s);
    a / (a + b)
}

/// Nonnegative window supported on `[1/2, 2]` whose dilates
/// `v(2^{-j} x)`, `j >= 0`, sum to one for every `x >= 1`.
#[derive(Clone, Copy)]
pub struct SmoothWindow {
    f: fn(f64) -> f64,
}

fn standard_window(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.log2();
    smooth_step(s + 1.0) - smooth_step(s)
}

impl SmoothWindow {
    /// `v(x) = h(log2 x + 1) - h(log2 x)` with `h` = [`smooth_step`]; the
    /// dyadic sum telescopes to one.
    pub fn standard() -> Self {
        Self { f: standard_window }
    }

    /// Wraps a caller-supplied window; the invariants are not checked.
    pub fn from_fn(f: fn(f64) -> f64) -> Self {
        Self { f }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// `Σ_{j>=0} v(2^{-j} x)` over all terms that can be nonzero.
    pub fn partition_sum(&self, x: f64) -> f64 {
        let mut total = 0.0;
        let mut y = x;
        while y >= 0.5 {
            total += self.eval(y);
            y *= 0.5;
        }
        total
    }
}

impl std::fmt::Debug for SmoothWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SmoothWindow")
    }
}

/// Bump with support `[-1, 1]`, positive inside, `q(0) = 1`.
#[derive(Clone, Copy)]
pub struct BumpFunction {
    f: fn(f64) -> f64,
}

fn standard_bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

impl BumpFunction {
    /// `q(t) = exp(1 - 1/(1 - t^2))` on `(-1, 1)`.
    pub fn standard() -> Self {
        Self { f: standard_bump }
    }

    pub fn from_fn(f: fn(f64) -> f64) -> Self {
        Self { f }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

impl std::fmt::Debug for BumpFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BumpFunction")
    }
}

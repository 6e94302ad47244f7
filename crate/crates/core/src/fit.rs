//! Least-squares power-law fits in log-log coordinates.

use serde::Serialize;

use crate::error::{Error, Result};

/// How the fitted slope is compared with the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeCheck {
    /// `|slope - target| <= tol`.
    Within,
    /// `slope <= target + tol`.
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub target: f64,
    pub tolerance: f64,
    pub check: SlopeCheck,
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log-log space.
    pub max_residual: f64,
    pub pass: bool,
}

/// Fits `log y = slope log x + intercept` over at least three positive points.
pub fn fit_powerlaw(points: &[(f64, f64)], target: f64, tol: f64) -> Result<ScalingFit> {
    fit_with(points, target, tol, SlopeCheck::Within)
}

pub fn fit_with(
    points: &[(f64, f64)],
    target: f64,
    tol: f64,
    check: SlopeCheck,
) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(Error::NonPositivePoint(x, y));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / n;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|l| (l.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit abscissae are all equal".into()));
    }
    let sxy: f64 = logs.iter().map(|l| (l.0 - mx) * (l.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    let pass = match check {
        SlopeCheck::Within => (slope - target).abs() <= tol,
        SlopeCheck::AtMost => slope <= target + tol,
    };
    Ok(ScalingFit {
        target,
        tolerance: tol,
        check,
        slope,
        intercept,
        max_residual,
        pass,
    })
}

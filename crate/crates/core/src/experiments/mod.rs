//! Scaling experiments E1–E9 with CSV and JSON output.
//!
//! Every experiment sweeps a dyadic size parameter `k`, records one row per
//! measured scalar and fits a power law to a designated series. Random
//! instances are drawn from [`SeededRng`] streams seeded by
//! `(seed, experiment, k, sample, family)`, so each point is reproducible on
//! its own.

mod config;
mod output;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{fit_with, ScalingFit, SlopeCheck};
use crate::hankel::{band_hankel_check_with, besov_quasinorm_with, HARD_SLACK, QUADRATURE_SLACK};
use crate::matrix::{
    delta_matrix, schatten_quasinorm, singular_values, triangular_projection, ComplexMatrix,
    PExponent,
};
use crate::multiplier::{
    delta_lower_bound, fejer_riesz_ratio_with, hankel_multiplier_upper_with, riesz_jump_ratio_with,
};
use crate::rng::{derive_seed, SeededRng};
use crate::trig::{dirichlet_plus, level_support, BumpFunction, SmoothWindow, TrigPoly};

pub use config::{ExperimentConfig, ExperimentId, Plan};
pub use output::{csv_string, fits_path, write_csv, write_fits_json, CSV_HEADER};

/// One measured scalar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRecord {
    pub experiment: ExperimentId,
    pub p: f64,
    pub k: u32,
    /// Matrix size or polynomial parameter at this `k`.
    pub n: u64,
    /// Sample index; `-1` marks a per-size aggregate.
    pub sample: i64,
    pub quantity: &'static str,
    pub value: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub experiment: ExperimentId,
    /// Fitted series.
    pub quantity: &'static str,
    pub p: f64,
    #[serde(flatten)]
    pub fit: ScalingFit,
}

/// A pass/fail assertion other than a slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub experiment: ExperimentId,
    pub name: &'static str,
    pub pass: bool,
    /// Number of instances the assertion covered.
    pub count: usize,
    /// First failing instance, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub plan: Plan,
    pub records: Vec<SeriesRecord>,
    pub fits: Vec<FitRecord>,
    pub checks: Vec<CheckRecord>,
}

impl ExperimentOutcome {
    pub fn verdict(&self) -> bool {
        self.fits.iter().all(|f| f.fit.pass) && self.checks.iter().all(|c| c.pass)
    }

    /// Values of `quantity` in row order.
    pub fn series(&self, quantity: &str) -> Vec<&SeriesRecord> {
        self.records
            .iter()
            .filter(|r| r.quantity == quantity)
            .collect()
    }

    pub fn fit(&self, quantity: &str) -> Option<&ScalingFit> {
        self.fits
            .iter()
            .find(|f| f.quantity == quantity)
            .map(|f| &f.fit)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Slope {
    quantity: &'static str,
    target: f64,
    tolerance: f64,
    check: SlopeCheck,
}

fn within(quantity: &'static str, target: f64, tolerance: f64) -> Slope {
    Slope {
        quantity,
        target,
        tolerance,
        check: SlopeCheck::Within,
    }
}

fn at_most(quantity: &'static str, target: f64, tolerance: f64) -> Slope {
    Slope {
        quantity,
        target,
        tolerance,
        check: SlopeCheck::AtMost,
    }
}

struct Check {
    name: &'static str,
    count: usize,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            count: 0,
            failure: None,
        }
    }

    fn assert(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }
}

/// Records for one experiment, with the abscissa used by its fits.
struct Collector {
    plan: Plan,
    records: Vec<SeriesRecord>,
    checks: Vec<Check>,
}

impl Collector {
    fn push(
        &mut self,
        k: u32,
        n: u64,
        sample: i64,
        quantity: &'static str,
        value: f64,
        wall_ms: f64,
    ) {
        self.records.push(SeriesRecord {
            experiment: self.plan.id,
            p: self.plan.p.get(),
            k,
            n,
            sample,
            quantity,
            value,
            wall_ms,
        });
    }

    fn rng(&self, k: u32, sample: usize, family: u64) -> SeededRng {
        SeededRng::new(derive_seed(&[
            self.plan.seed,
            self.plan.id.index(),
            k as u64,
            sample as u64,
            family,
        ]))
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs one experiment. The output path, if any, is checked before any computation.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let plan = cfg.resolve()?;
    if let Some(path) = &plan.output {
        output::probe_writable(path)?;
        output::probe_writable(&fits_path(path))?;
    }
    let outcome = compute(plan)?;
    if let Some(path) = &outcome.plan.output {
        write_csv(path, &outcome.records)?;
        write_fits_json(&fits_path(path), &outcome.fits)?;
    }
    Ok(outcome)
}

/// Runs one experiment without writing anything.
pub fn compute(plan: Plan) -> Result<ExperimentOutcome> {
    let mut c = Collector {
        plan,
        records: Vec::new(),
        checks: Vec::new(),
    };
    let p = c.plan.p;
    let (slopes, abscissa): (Vec<Slope>, fn(u32) -> f64) = match c.plan.id {
        ExperimentId::E1 | ExperimentId::E9 => {
            delta_schatten(&mut c)?;
            let tol = if c.plan.id == ExperimentId::E1 {
                0.10
            } else {
                0.05
            };
            let target = if c.plan.id == ExperimentId::E1 {
                1.0 / p.get()
            } else {
                1.0
            };
            (vec![within("schatten", target, tol)], pow2)
        }
        ExperimentId::E2 => {
            delta_multiplier(&mut c)?;
            (vec![within("ratio", p.dual_gap(), 0.20)], pow2)
        }
        ExperimentId::E3 => {
            band_hankel(&mut c)?;
            (vec![within("min_ratio", 0.0, 0.15)], pow2)
        }
        ExperimentId::E4 => {
            weak_type(&mut c)?;
            (vec![at_most("max_weak_ratio", 0.0, 0.10)], pow2)
        }
        ExperimentId::E5 => {
            fejer_log(&mut c)?;
            (vec![within("normalized", 0.0, 0.10)], pow2)
        }
        ExperimentId::E6 => {
            riesz_jump(&mut c)?;
            (vec![within("ratio", p.dual_gap(), 0.15)], pow2)
        }
        ExperimentId::E7 => {
            dirichlet_besov(&mut c)?;
            (vec![within("besov", 1.0 / p.get(), 0.10)], pow2_plus_one)
        }
        ExperimentId::E8 => {
            projection_bound(&mut c)?;
            (
                vec![
                    at_most("rank_one_max", 0.0, 0.05),
                    at_most("gaussian_max", 0.0, 0.05),
                ],
                pow2,
            )
        }
    };

    c.records
        .sort_by(|a, b| (a.k, a.sample, a.quantity).cmp(&(b.k, b.sample, b.quantity)));
    let mut fits = Vec::new();
    for s in slopes {
        let points: Vec<(f64, f64)> = c
            .records
            .iter()
            .filter(|r| r.quantity == s.quantity)
            .map(|r| (abscissa(r.k), r.value))
            .collect();
        let fit = fit_with(&points, s.target, s.tolerance, s.check)?;
        fits.push(FitRecord {
            experiment: c.plan.id,
            quantity: s.quantity,
            p: p.get(),
            fit,
        });
    }
    let checks = c
        .checks
        .into_iter()
        .map(|ch| CheckRecord {
            experiment: c.plan.id,
            name: ch.name,
            pass: ch.failure.is_none(),
            count: ch.count,
            failure: ch.failure,
        })
        .collect();
    Ok(ExperimentOutcome {
        plan: c.plan,
        records: c.records,
        fits,
        checks,
    })
}

fn pow2(k: u32) -> f64 {
    (1u64 << k) as f64
}

fn pow2_plus_one(k: u32) -> f64 {
    pow2(k) + 1.0
}

fn delta_schatten(c: &mut Collector) -> Result<()> {
    for k in c.plan.ks.clone() {
        let start = Instant::now();
        let n = 1usize << k;
        let value = schatten_quasinorm(&delta_matrix(n)?, c.plan.p)?;
        c.push(k, n as u64, 0, "schatten", value, elapsed_ms(start));
    }
    Ok(())
}

fn delta_multiplier(c: &mut Collector) -> Result<()> {
    let mut bound = Check::new("ratio_below_hankel_upper");
    for k in c.plan.ks.clone() {
        let start = Instant::now();
        let m = (1usize << k) + 1;
        let report = delta_lower_bound(k, c.plan.p, BumpFunction::standard())?;
        let upper =
            hankel_multiplier_upper_with(&dirichlet_plus(m)?, c.plan.p, c.plan.oversampling)?;
        bound.assert(report.ratio <= upper * (1.0 + QUADRATURE_SLACK), || {
            format!("k={k}: ratio {} > upper {upper}", report.ratio)
        });
        let ms = elapsed_ms(start);
        c.push(k, m as u64, 0, "ratio", report.ratio, ms);
        c.push(k, m as u64, 0, "upper", upper, ms);
    }
    c.checks.push(bound);
    Ok(())
}

fn band_hankel(c: &mut Collector) -> Result<()> {
    let mut upper = Check::new("upper_ratio_at_most_one");
    for n in c.plan.ks.clone() {
        let level_start = Instant::now();
        let (lo, hi) = level_support(n);
        let mut min_ratio = f64::INFINITY;
        for s in 0..c.plan.samples {
            let start = Instant::now();
            let coeffs = c.rng(n, s, 0).complex_normals((hi - lo + 1) as usize);
            let phi = TrigPoly::new(lo, coeffs)?;
            let check = band_hankel_check_with(&phi, n, c.plan.p, c.plan.oversampling)?;
            upper.assert(check.ratio <= 1.0 + HARD_SLACK, || {
                format!("level {n} sample {s}: ratio {}", check.ratio)
            });
            min_ratio = min_ratio.min(check.ratio);
            c.push(
                n,
                hi as u64,
                s as i64,
                "ratio",
                check.ratio,
                elapsed_ms(start),
            );
        }
        c.push(
            n,
            hi as u64,
            -1,
            "min_ratio",
            min_ratio,
            elapsed_ms(level_start),
        );
    }
    c.checks.push(upper);
    Ok(())
}

fn weak_type(c: &mut Collector) -> Result<()> {
    let one = PExponent::new(1.0)?;
    for k in c.plan.ks.clone() {
        let level_start = Instant::now();
        let n = 1usize << k;
        let mut worst: f64 = 0.0;
        for s in 0..c.plan.samples {
            let start = Instant::now();
            let t = ComplexMatrix::gaussian(n, n, &mut c.rng(k, s, 0))?;
            let value = weak_type_ratio(&t, one)?;
            worst = worst.max(value);
            c.push(
                k,
                n as u64,
                s as i64,
                "weak_ratio",
                value,
                elapsed_ms(start),
            );
        }
        c.push(
            k,
            n as u64,
            -1,
            "max_weak_ratio",
            worst,
            elapsed_ms(level_start),
        );
    }
    Ok(())
}

/// `max_j (1+j) s_j(𝒫T) / ‖T‖_{S_1}`.
pub fn weak_type_ratio(t: &ComplexMatrix, one: PExponent) -> Result<f64> {
    let s = singular_values(&triangular_projection(t)?)?;
    let norm = singular_values(t)?.schatten(one);
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "weak-type ratio of the zero matrix".into(),
        ));
    }
    Ok(s.weak_l1_profile() / norm)
}

/// `‖𝒫T‖_{S_p} / (n^{1/p-1} ‖T‖_{S_p})`.
pub fn projection_ratio(t: &ComplexMatrix, p: PExponent) -> Result<f64> {
    let n = t.rows() as f64;
    let top = schatten_quasinorm(&triangular_projection(t)?, p)?;
    let bottom = schatten_quasinorm(t, p)?;
    if bottom == 0.0 {
        return Err(Error::InvalidArgument(
            "projection ratio of the zero matrix".into(),
        ));
    }
    Ok(top / (n.powf(p.dual_gap()) * bottom))
}

fn fejer_log(c: &mut Collector) -> Result<()> {
    let mut positive = Check::new("normalized_positive");
    let mut increasing = Check::new("ratio_strictly_increasing");
    let mut previous: Option<(u32, f64)> = None;
    for k in c.plan.ks.clone() {
        let start = Instant::now();
        let m = 1usize << k;
        let ratio = fejer_riesz_ratio_with(m, c.plan.oversampling)?;
        let normalized = ratio / (1.0 + m as f64).ln();
        positive.assert(normalized > 0.0, || format!("m={m}: {normalized}"));
        if let Some((pk, pr)) = previous {
            increasing.assert(ratio > pr, || format!("k={pk}: {pr} then k={k}: {ratio}"));
        }
        previous = Some((k, ratio));
        let ms = elapsed_ms(start);
        c.push(k, m as u64, 0, "ratio", ratio, ms);
        c.push(k, m as u64, 0, "normalized", normalized, ms);
    }
    c.checks.push(positive);
    c.checks.push(increasing);
    Ok(())
}

fn riesz_jump(c: &mut Collector) -> Result<()> {
    for k in c.plan.ks.clone() {
        let start = Instant::now();
        let m = 1usize << k;
        let ratio =
            riesz_jump_ratio_with(m, c.plan.p, BumpFunction::standard(), c.plan.oversampling)?;
        c.push(k, m as u64, 0, "ratio", ratio, elapsed_ms(start));
    }
    Ok(())
}

fn dirichlet_besov(c: &mut Collector) -> Result<()> {
    let mut level = Check::new("dyadic_level_term");
    for k in c.plan.ks.clone() {
        let start = Instant::now();
        let n = (1usize << k) + 1;
        let report = besov_quasinorm_with(
            &dirichlet_plus(n)?,
            c.plan.p,
            SmoothWindow::standard(),
            c.plan.oversampling,
        )?;
        let term = report.term(k);
        let floor = pow2(k) * (1.0 - 1e-6);
        level.assert(term >= floor, || format!("k={k}: term {term} < {floor}"));
        let ms = elapsed_ms(start);
        c.push(k, n as u64, 0, "besov", report.total, ms);
        c.push(k, n as u64, 0, "level_term", term, ms);
    }
    c.checks.push(level);
    Ok(())
}

fn projection_bound(c: &mut Collector) -> Result<()> {
    for k in c.plan.ks.clone() {
        let n = 1usize << k;
        for (family, each, worst_name) in [
            (1u64, "rank_one", "rank_one_max"),
            (2, "gaussian", "gaussian_max"),
        ] {
            let level_start = Instant::now();
            let mut worst: f64 = 0.0;
            for s in 0..c.plan.samples {
                let start = Instant::now();
                let mut rng = c.rng(k, s, family);
                let t = if family == 1 {
                    let u = rng.complex_normals(n);
                    let v = rng.complex_normals(n);
                    ComplexMatrix::outer(&u, &v)?
                } else {
                    ComplexMatrix::gaussian(n, n, &mut rng)?
                };
                let value = projection_ratio(&t, c.plan.p)?;
                worst = worst.max(value);
                c.push(k, n as u64, s as i64, each, value, elapsed_ms(start));
            }
            c.push(k, n as u64, -1, worst_name, worst, elapsed_ms(level_start));
        }
    }
    Ok(())
}

/// Result of running several experiments.
#[derive(Debug, Clone)]
pub struct BatchOutcome {
    pub outcomes: Vec<ExperimentOutcome>,
}

impl BatchOutcome {
    /// Conjunction of the per-experiment verdicts.
    pub fn verdict(&self) -> bool {
        self.outcomes.iter().all(ExperimentOutcome::verdict)
    }
}

/// Runs every registered experiment with its defaults, `seed` and, when
/// `out_dir` is given, writes `<out_dir>/<id>.csv` and `<id>.fits.json`.
pub fn run_all(seed: u64, out_dir: Option<&std::path::Path>) -> Result<BatchOutcome> {
    let configs: Vec<ExperimentConfig> = ExperimentId::ALL
        .into_iter()
        .map(|id| {
            let cfg = ExperimentConfig::new(id).with_seed(seed);
            match out_dir {
                Some(dir) => cfg.with_output(dir.join(format!("{id}.csv"))),
                None => cfg,
            }
        })
        .collect();
    if let Some(dir) = out_dir {
        output::ensure_dir(dir)?;
    }
    // validate every config and path before the first computation
    for cfg in &configs {
        let plan = cfg.resolve()?;
        if let Some(path) = &plan.output {
            output::probe_writable(path)?;
        }
    }
    let outcomes = configs.iter().map(run_experiment).collect::<Result<_>>()?;
    Ok(BatchOutcome { outcomes })
}

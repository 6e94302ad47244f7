use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::Value;

use schur_lab::experiments::{
    run_all, run_experiment, ExperimentConfig, ExperimentId, ExperimentOutcome,
};
use schur_lab::hankel::besov_quasinorm;
use schur_lab::matrix::{chi_matrix, delta_matrix, ones_matrix, singular_values};
use schur_lab::multiplier::{hankel_multiplier_upper, random_witness_search};
use schur_lab::trig::{dirichlet_plus, SmoothWindow};
use schur_lab::{ComplexMatrix, Error, PExponent, Result, TrigPoly};

#[derive(Parser)]
#[command(
    name = "schur-lab",
    version,
    about = "Schatten quasinorm and Schur multiplier experiments"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schatten quasinorm of a structured or user-supplied matrix.
    Spnorm(SpnormArgs),
    /// B_p^{1/p} quasinorm of an analytic polynomial.
    Besov(BesovArgs),
    /// Witness lower bound and Hankel upper bound for ‖Δ_n‖ or ‖χ_n‖ as a Schur multiplier.
    MultiplierBound(MultiplierArgs),
    /// Scaling experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct MatrixSource {
    /// Upper-triangular all-ones n x n.
    #[arg(long, value_name = "N", group = "source")]
    chi: Option<usize>,
    /// Hankel 0/1 matrix with ones where j + k < n.
    #[arg(long, value_name = "N", group = "source")]
    delta: Option<usize>,
    #[arg(long, value_name = "N", group = "source")]
    ones: Option<usize>,
    /// JSON array of rows; entries are numbers or [re, im] pairs.
    #[arg(long, value_name = "FILE", group = "source")]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct SpnormArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    p: f64,
    /// Also print the singular values.
    #[arg(long)]
    spectrum: bool,
}

#[derive(Args)]
#[group(id = "poly", required = true, multiple = false)]
struct PolySource {
    /// D_n^+ = 1 + z + ... + z^{n-1}.
    #[arg(long, value_name = "N", group = "poly")]
    dirichlet: Option<usize>,
    /// Real coefficients of z^0, z^1, ..., comma separated.
    #[arg(
        long,
        value_name = "LIST",
        group = "poly",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    coeffs: Option<Vec<f64>>,
}

#[derive(Args)]
struct BesovArgs {
    #[command(flatten)]
    poly: PolySource,
    #[arg(long)]
    p: f64,
    /// Print every level term.
    #[arg(long)]
    levels: bool,
}

#[derive(Args)]
#[group(id = "mult", required = true, multiple = false)]
struct MultiplierSource {
    #[arg(long, value_name = "N", group = "mult")]
    delta: Option<usize>,
    #[arg(long, value_name = "N", group = "mult")]
    chi: Option<usize>,
}

#[derive(Args)]
struct MultiplierArgs {
    #[command(flatten)]
    source: MultiplierSource,
    #[arg(long)]
    p: f64,
    /// Number of candidate witnesses in the search.
    #[arg(long, default_value_t = 400)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run one experiment (E1..E9).
    Run(RunArgs),
    /// Run every experiment with its defaults.
    All(AllArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment id; may be omitted when --config names one.
    id: Option<String>,
    /// JSON experiment config; flags given here override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    kmin: Option<u32>,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    oversampling: Option<usize>,
    /// CSV output; the fit summary goes to the same stem with `.fits.json`.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AllArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for `<id>.csv` and `<id>.fits.json`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::Output { .. }
            | Error::InvalidExponent(_)
            | Error::ExponentAboveOne(_)
            | Error::InvalidArgument(_)
            | Error::InvalidMatrix(_)
            | Error::InvalidPolynomial(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> std::result::Result<bool, Failure> {
    match command {
        Command::Spnorm(args) => spnorm(args),
        Command::Besov(args) => besov(args),
        Command::MultiplierBound(args) => multiplier_bound(args),
        Command::Experiment(ExperimentCommand::Run(args)) => experiment_run(args),
        Command::Experiment(ExperimentCommand::All(args)) => {
            let batch = run_all(args.seed, args.out.as_deref())?;
            for outcome in &batch.outcomes {
                report(outcome);
            }
            println!("overall: {}", verdict(batch.verdict()));
            Ok(batch.verdict())
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn load_matrix(source: &MatrixSource) -> Result<ComplexMatrix> {
    let positive = |n: usize| {
        if n == 0 {
            Err(Error::InvalidArgument(
                "matrix size must be positive".into(),
            ))
        } else {
            Ok(n)
        }
    };
    if let Some(n) = source.chi {
        return chi_matrix(positive(n)?);
    }
    if let Some(n) = source.delta {
        return delta_matrix(positive(n)?);
    }
    if let Some(n) = source.ones {
        return ones_matrix(positive(n)?);
    }
    let path = source.matrix.as_ref().expect("clap enforces one source");
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let bad = |why: &str| Error::InvalidMatrix(why.to_string());
    let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| bad("expected an array of rows"))?;
    let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(bad("matrix is empty"));
    }
    let mut data = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == cols)
            .ok_or_else(|| bad("ragged rows"))?;
        for entry in row {
            let z = match entry {
                Value::Number(x) => {
                    Complex64::new(x.as_f64().ok_or_else(|| bad("bad number"))?, 0.0)
                }
                Value::Array(pair) if pair.len() == 2 => {
                    let part = |v: &Value| v.as_f64().ok_or_else(|| bad("bad number"));
                    Complex64::new(part(&pair[0])?, part(&pair[1])?)
                }
                _ => return Err(bad("entries must be numbers or [re, im] pairs")),
            };
            data.push(z);
        }
    }
    ComplexMatrix::from_row_major(rows.len(), cols, data)
}

fn spnorm(args: SpnormArgs) -> std::result::Result<bool, Failure> {
    let p = PExponent::new(args.p)?;
    let a = load_matrix(&args.source)?;
    let s = singular_values(&a)?;
    println!("{}", s.schatten(p));
    if args.spectrum {
        for v in s.values() {
            println!("{v}");
        }
    }
    Ok(true)
}

fn besov(args: BesovArgs) -> std::result::Result<bool, Failure> {
    let p = PExponent::new(args.p)?;
    let phi = match (args.poly.dirichlet, &args.poly.coeffs) {
        (Some(n), _) => dirichlet_plus(n)?,
        (None, Some(c)) => TrigPoly::from_real(0, c)?,
        _ => unreachable!("clap enforces one polynomial"),
    };
    let report = besov_quasinorm(&phi, p, SmoothWindow::standard())?;
    println!("{}", report.total);
    if args.levels {
        println!("constant {}", report.zero_term);
        for l in &report.levels {
            println!("level {} {}", l.level, l.term);
        }
    }
    Ok(true)
}

fn multiplier_bound(args: MultiplierArgs) -> std::result::Result<bool, Failure> {
    let p = PExponent::new(args.p)?.require_at_most_one()?;
    if args.budget == 0 {
        return Err(Failure::Usage("--budget must be positive".into()));
    }
    let (n, a) = match (args.source.delta, args.source.chi) {
        (Some(n), _) if n > 0 => (n, delta_matrix(n)?),
        (_, Some(n)) if n > 0 => (n, chi_matrix(n)?),
        _ => return Err(Failure::Usage("matrix size must be positive".into())),
    };
    let lower = random_witness_search(&a, p, args.budget, args.seed)?;
    // χ_n and Δ_n differ by a column permutation, so share the Hankel bound
    let upper = hankel_multiplier_upper(&dirichlet_plus(n)?, p)?;
    println!("lower {}", lower.ratio);
    println!("upper {upper}");
    Ok(lower.ratio <= upper * (1.0 + schur_lab::hankel::QUADRATURE_SLACK))
}

fn experiment_run(args: RunArgs) -> std::result::Result<bool, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => {
            let id = args
                .id
                .as_deref()
                .ok_or_else(|| Failure::Usage("missing experiment id".into()))?;
            ExperimentConfig::new(id.parse::<ExperimentId>()?)
        }
    };
    if let (Some(id), Some(_)) = (&args.id, &args.config) {
        let id: ExperimentId = id.parse()?;
        if id != cfg.experiment {
            return Err(Failure::Usage(format!(
                "argument {id} conflicts with config experiment {}",
                cfg.experiment
            )));
        }
    }
    if args.kmin.is_some() || args.kmax.is_some() {
        cfg.k_list = None;
    }
    cfg.p = args.p.or(cfg.p);
    cfg.k_min = args.kmin.or(cfg.k_min);
    cfg.k_max = args.kmax.or(cfg.k_max);
    cfg.samples = args.samples.or(cfg.samples);
    cfg.seed = args.seed.or(cfg.seed);
    cfg.oversampling = args.oversampling.or(cfg.oversampling);
    cfg.output = args.out.or(cfg.output);
    let outcome = run_experiment(&cfg)?;
    report(&outcome);
    Ok(outcome.verdict())
}

fn report(outcome: &ExperimentOutcome) {
    let plan = &outcome.plan;
    println!(
        "{} {} p={} k={:?}",
        plan.id,
        plan.id.name(),
        plan.p,
        plan.ks
    );
    for f in &outcome.fits {
        let fit = &f.fit;
        println!(
            "  fit {}: slope {:.4} target {} tol {} ({:?}) residual {:.3e} {}",
            f.quantity,
            fit.slope,
            fit.target,
            fit.tolerance,
            fit.check,
            fit.max_residual,
            verdict(fit.pass)
        );
    }
    for c in &outcome.checks {
        match &c.failure {
            None => println!("  check {}: {} instances PASS", c.name, c.count),
            Some(why) => println!("  check {}: FAIL at {why}", c.name),
        }
    }
    println!("  verdict: {}", verdict(outcome.verdict()));
}

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use schur_lab::experiments::{compute, ExperimentConfig, ExperimentId};
use schur_lab::fit::fit_powerlaw;
use schur_lab::hankel::{
    besov_quasinorm, hankel_matrix, polynomial_hankel_sp_bound, HARD_SLACK, QUADRATURE_SLACK,
};
use schur_lab::matrix::{
    block_diag2, chi_matrix, delta_matrix, schatten_quasinorm, schur_product, singular_values,
    ComplexMatrix, PExponent,
};
use schur_lab::multiplier::{
    chi_corner, constructive_witness, double_witness, hankel_multiplier_upper,
    random_witness_search, witness_ratio,
};
use schur_lab::rng::SeededRng;
use schur_lab::trig::{
    apply_window, bump_poly, dirichlet_bound, dirichlet_plus, fejer, lp_norm, lp_piece,
    lp_quasinorm, quadrature_floor, riesz_plus, BumpFunction, SmoothWindow,
};
use schur_lab::TrigPoly;

fn p(x: f64) -> PExponent {
    PExponent::new(x).unwrap()
}

fn gaussian(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    ComplexMatrix::gaussian(rows, cols, &mut SeededRng::new(seed)).unwrap()
}

/// Gaussian or rank-one, depending on the seed.
fn mixed(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SeededRng::new(seed);
    if seed.is_multiple_of(3) {
        ComplexMatrix::outer(&rng.complex_normals(n), &rng.complex_normals(n)).unwrap()
    } else {
        ComplexMatrix::gaussian(n, n, &mut rng).unwrap()
    }
}

fn random_poly(lo: i64, width: usize, seed: u64) -> TrigPoly {
    TrigPoly::new(lo, SeededRng::new(seed).complex_normals(width)).unwrap()
}

/// `I - 2 v v^* / v^* v`.
fn reflector(n: usize, seed: u64) -> ComplexMatrix {
    let v = SeededRng::new(seed).complex_normals(n);
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let outer = ComplexMatrix::outer(&v, &v).unwrap();
    ComplexMatrix::identity(n)
        .unwrap()
        .try_sub(&outer.scale(Complex64::new(2.0 / vv, 0.0)).unwrap())
        .unwrap()
}

fn oracle_singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let m = DMatrix::from_fn(a.rows(), a.cols(), |j, k| a.get(j, k));
    let gram = m.adjoint() * &m;
    let mut values: Vec<f64> = gram
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn p_triangle(n in 1usize..=16, pv in 0.05f64..=1.0, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (mixed(n, s1), mixed(n, s2));
        let pe = p(pv);
        let lhs = schatten_quasinorm(&a.try_add(&b).unwrap(), pe).unwrap().powf(pv);
        let ra = schatten_quasinorm(&a, pe).unwrap().powf(pv);
        let rb = schatten_quasinorm(&b, pe).unwrap().powf(pv);
        prop_assert!(lhs <= (ra + rb) * (1.0 + HARD_SLACK), "{} > {}", lhs, ra + rb);
    }

    #[test]
    fn schatten_monotone_in_p(n in 1usize..=12, lo in 0.1f64..2.0, gap in 0.0f64..3.0, seed in any::<u64>()) {
        let a = mixed(n, seed);
        let small = schatten_quasinorm(&a, p(lo)).unwrap();
        let large = schatten_quasinorm(&a, p(lo + gap)).unwrap();
        prop_assert!(large <= small * (1.0 + 1e-12));
    }

    #[test]
    fn unitary_and_permutation_invariance(n in 1usize..=12, seed in any::<u64>(), shift in 0usize..12) {
        let a = gaussian(n, n, seed);
        let s = singular_values(&a).unwrap();
        let u = reflector(n, seed ^ 1);
        let w = reflector(n, seed ^ 2);
        let rotated = singular_values(&u.matmul(&a).unwrap().matmul(&w).unwrap()).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = singular_values(&a.permute_rows(&perm).unwrap().permute_cols(&perm).unwrap()).unwrap();
        let adjoint = singular_values(&a.conj_transpose()).unwrap();
        let top = s.largest();
        for other in [&rotated, &permuted, &adjoint] {
            for (x, y) in s.values().iter().zip(other.values()) {
                prop_assert!((x - y).abs() <= 1e-9 * top);
            }
        }
    }

    #[test]
    fn svd_matches_eigenvalue_oracle(rows in 1usize..=12, cols in 1usize..=12, seed in any::<u64>()) {
        let a = gaussian(rows, cols, seed);
        let ours = singular_values(&a).unwrap();
        let oracle = oracle_singular_values(&a);
        // the oracle returns cols values; ours returns min(rows, cols)
        for (j, x) in ours.values().iter().enumerate() {
            prop_assert!((x - oracle[j]).abs() <= 1e-8 * oracle[0].max(1.0), "{} vs {}", x, oracle[j]);
        }
    }

    #[test]
    fn endpoint_coefficients(lo in -12i64..12, width in 1usize..48, seed in any::<u64>()) {
        let f = random_poly(lo, width, seed);
        for pv in [0.4, 0.7, 1.0] {
            let norm = lp_norm(&f, p(pv));
            prop_assert!(f.coefficient(f.lo()).norm() <= norm * (1.0 + 1e-6));
            prop_assert!(f.coefficient(f.hi()).norm() <= norm * (1.0 + 1e-6));
        }
    }

    #[test]
    fn polynomial_hankel_bound(width in 1usize..=33, pv in 0.3f64..=1.0, seed in any::<u64>()) {
        let phi = random_poly(0, width, seed);
        let bound = polynomial_hankel_sp_bound(&phi, p(pv)).unwrap();
        prop_assert!(bound.holds(QUADRATURE_SLACK), "{:?}", bound);
    }

    #[test]
    fn hankel_multiplier_bound(width in 1usize..=20, pv in 0.3f64..=1.0, seed in any::<u64>()) {
        let phi = random_poly(0, width, seed);
        let gamma = hankel_matrix(&phi).unwrap();
        let witness = mixed(gamma.rows(), seed.wrapping_add(1));
        let ratio = witness_ratio(&gamma, &witness, p(pv)).unwrap().ratio;
        let upper = hankel_multiplier_upper(&phi, p(pv)).unwrap();
        prop_assert!(ratio <= upper * (1.0 + QUADRATURE_SLACK), "{} > {}", ratio, upper);
    }

    #[test]
    fn chi_split_p_triangle(n in 1usize..=8, pv in 0.1f64..=1.0, seed in any::<u64>()) {
        let b = gaussian(2 * n, 2 * n, seed);
        let pe = p(pv);
        let norm = |m: &ComplexMatrix| schatten_quasinorm(&schur_product(m, &b).unwrap(), pe).unwrap().powf(pv);
        let whole = norm(&chi_matrix(2 * n).unwrap());
        let parts = norm(&block_diag2(&chi_matrix(n).unwrap()).unwrap()) + norm(&chi_corner(n).unwrap());
        prop_assert!(whole <= parts * (1.0 + HARD_SLACK));
    }

    #[test]
    fn exact_power_laws_are_recovered(slope in -3.0f64..3.0, scale in 0.01f64..100.0, len in 3usize..12) {
        let pts: Vec<(f64, f64)> = (0..len).map(|i| {
            let x = 2f64.powi(i as i32 + 1);
            (x, scale * x.powf(slope))
        }).collect();
        let fit = fit_powerlaw(&pts, slope, 1e-9).unwrap();
        prop_assert!((fit.slope - slope).abs() <= 1e-12);
        prop_assert!(fit.pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn doubling_is_exact(rows in 1usize..=6, cols in 1usize..=6, pv in 0.2f64..2.0, seed in any::<u64>()) {
        let a = gaussian(rows, cols, seed);
        let b = gaussian(rows, cols, seed ^ 0x5555);
        let (base, doubled) = double_witness(&a, &b, p(pv)).unwrap();
        let want = 2f64.powf(1.0 / pv - 1.0);
        prop_assert!((doubled.ratio / base.ratio / want - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn chi_and_delta_share_spectrum() {
    for n in 1..=40 {
        let a = singular_values(&chi_matrix(n).unwrap()).unwrap();
        let b = singular_values(&delta_matrix(n).unwrap()).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-12 * a.largest(), "n={n}");
        }
    }
}

#[test]
fn noisy_power_law_passes() {
    let pts: Vec<(f64, f64)> = (1..=10)
        .map(|i| {
            let x = i as f64 * 3.0;
            let noise = if i % 2 == 0 { 1.01 } else { 0.99 };
            (x, x.powf(1.5) * noise)
        })
        .collect();
    assert!(fit_powerlaw(&pts, 1.5, 0.05).unwrap().pass);
}

fn experiment_kernels() -> Vec<(String, TrigPoly)> {
    let v = SmoothWindow::standard();
    let q = BumpFunction::standard();
    let mut out = Vec::new();
    for k in [3u32, 6, 9] {
        let m = 1usize << k;
        out.push((format!("D_{}", m + 1), dirichlet_plus(m + 1).unwrap()));
        out.push((
            format!("D*V_{k}"),
            apply_window(&dirichlet_plus(m + 1).unwrap(), k, v),
        ));
        out.push((format!("V_{k}"), lp_piece(k, v, 1 << (k + 1)).unwrap()));
        out.push((format!("K_{m}"), fejer(m).unwrap()));
        out.push((format!("P+K_{m}"), riesz_plus(&fejer(m).unwrap())));
        out.push((format!("Q_{m}"), bump_poly(m, q).unwrap()));
        out.push((format!("P+Q_{m}"), riesz_plus(&bump_poly(m, q).unwrap())));
        let (pk, rk) = constructive_witness(k, q).unwrap();
        out.push((format!("P_{k}"), pk));
        out.push((format!("R_{k}"), rk));
    }
    out
}

#[test]
fn quadrature_converges_at_floor() {
    for (name, f) in experiment_kernels() {
        for pv in [0.5, 2.0 / 3.0, 1.0] {
            let floor = quadrature_floor(&f);
            let coarse = lp_quasinorm(&f, p(pv), floor).unwrap();
            let fine = lp_quasinorm(&f, p(pv), 2 * floor).unwrap();
            assert!(
                (coarse / fine - 1.0).abs() < 1e-4,
                "{name} p={pv}: {coarse} vs {fine}"
            );
        }
    }
}

#[test]
fn dirichlet_norms_bounded() {
    for pv in [0.5, 0.75] {
        let k_hat = dirichlet_bound(p(pv)).unwrap();
        for n in 2..=2048 {
            let norm = lp_norm(&dirichlet_plus(n).unwrap(), p(pv));
            assert!(
                (1.0..=k_hat).contains(&norm),
                "p={pv} n={n}: {norm} outside [1, {k_hat}]"
            );
        }
    }
}

#[test]
fn besov_schatten_consistency() {
    let v = SmoothWindow::standard();
    for pv in [0.5, 2.0 / 3.0] {
        let pts: Vec<(f64, f64)> = (2u32..=9)
            .map(|k| {
                let phi = dirichlet_plus((1 << k) + 1).unwrap();
                let schatten = schatten_quasinorm(&hankel_matrix(&phi).unwrap(), p(pv)).unwrap();
                let besov = besov_quasinorm(&phi, p(pv), v).unwrap().total;
                ((1u64 << k) as f64, schatten / besov)
            })
            .collect();
        let fit = fit_powerlaw(&pts, 0.0, 0.15).unwrap();
        assert!(fit.pass, "p={pv}: log-ratio slope {}", fit.slope);
    }
}

#[test]
fn witness_search_is_deterministic() {
    let a = gaussian(6, 6, 31);
    let r1 = random_witness_search(&a, p(0.5), 400, 9).unwrap();
    let r2 = random_witness_search(&a, p(0.5), 400, 9).unwrap();
    assert_eq!(r1.ratio, r2.ratio);
    assert_eq!(r1.witness, r2.witness);
}

#[test]
fn experiment_csv_is_reproducible_without_wall_time() {
    let plan = || {
        ExperimentConfig::new(ExperimentId::E3)
            .with_range(2, 5)
            .with_samples(4)
            .with_seed(11)
            .resolve()
            .unwrap()
    };
    let strip = |records: &[schur_lab::experiments::SeriesRecord]| {
        let mut records = records.to_vec();
        records.iter_mut().for_each(|r| r.wall_ms = 0.0);
        schur_lab::experiments::csv_string(&records)
    };
    let a = compute(plan()).unwrap();
    let b = compute(plan()).unwrap();
    assert_eq!(strip(&a.records), strip(&b.records));
}

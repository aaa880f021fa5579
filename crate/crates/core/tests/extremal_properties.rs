use bergman::extremal::{bcl_check, clarkson_check, solve_extremal, ExtremalProblem};
use bergman::special::monomial_gram_weights;
use bergman::{bergman_norm, AnalyticFunction, TestFunction};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kernel() -> AnalyticFunction {
    TestFunction::RandomPolynomial { degree: 5, decay: 1.0, seed: 7 }.build().unwrap()
}

fn pairing(f: &AnalyticFunction, k: &AnalyticFunction, degree: usize, alpha: f64) -> f64 {
    let w = monomial_gram_weights(degree, alpha).unwrap();
    let fc = f.taylor_coefficients(degree);
    let kc = k.taylor_coefficients(degree);
    fc.iter().zip(&kc).zip(&w).map(|((a, b), w)| (a * b.conj()).re * w).sum()
}

fn max_coeff_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn rotation_equivariance() {
    let k = kernel();
    let (p, alpha, n) = (3.0, 0.0, 12);
    let t = 0.7;
    let base = solve_extremal(&ExtremalProblem::new(k.clone(), p, alpha, n).unwrap()).unwrap();
    let turned = solve_extremal(&ExtremalProblem::new(k.rotate(t), p, alpha, n).unwrap()).unwrap();
    assert!(base.converged && turned.converged);
    let expect = base.f.rotate(t).taylor_coefficients(n);
    let gap = max_coeff_gap(&turned.f.taylor_coefficients(n), &expect);
    assert!(gap < 1e-7, "gap {gap:e} residuals {} {}", base.stationarity_residual, turned.stationarity_residual);
    assert!((base.value - turned.value).abs() < 1e-9 * base.value);
}

#[test]
fn scaling_changes_the_value_not_the_maximiser() {
    let k = kernel();
    let (p, alpha, n) = (1.5, -0.3, 10);
    let base = solve_extremal(&ExtremalProblem::new(k.clone(), p, alpha, n).unwrap()).unwrap();
    let c = 3.5;
    let scaled = solve_extremal(&ExtremalProblem::new(k.scale(Complex64::new(c, 0.0)), p, alpha, n).unwrap()).unwrap();
    assert!(max_coeff_gap(&base.f.taylor_coefficients(n), &scaled.f.taylor_coefficients(n)) < 1e-7);
    assert!((scaled.value - c * base.value).abs() < 1e-9 * scaled.value);
}

#[test]
fn value_dominates_random_unit_competitors() {
    let k = kernel();
    let (p, alpha, n) = (4.0, 0.5, 8);
    let sol = solve_extremal(&ExtremalProblem::new(k.clone(), p, alpha, n).unwrap()).unwrap();
    assert!((bergman_norm(&sol.f, p, alpha).unwrap() - 1.0).abs() < 1e-9);
    assert!((pairing(&sol.f, &k, n, alpha) - sol.value).abs() < 1e-10 * sol.value);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let coeffs: Vec<Complex64> =
            (0..=n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let g = AnalyticFunction::polynomial("G", coeffs);
        let g = g.scale(Complex64::new(1.0 / bergman_norm(&g, p, alpha).unwrap(), 0.0));
        assert!(pairing(&g, &k, n, alpha) <= sol.value * (1.0 + 1e-9));
    }
}

#[test]
fn value_is_stable_in_the_degree() {
    let k = AnalyticFunction::real_polynomial("1+z/2-z^3/3", &[1.0, 0.5, 0.0, -1.0 / 3.0]);
    let (p, alpha) = (3.0, 0.0);
    let a = solve_extremal(&ExtremalProblem::new(k.clone(), p, alpha, 19).unwrap()).unwrap();
    let b = solve_extremal(&ExtremalProblem::new(k, p, alpha, 27).unwrap()).unwrap();
    assert!(a.converged && b.converged);
    assert!((a.value - b.value).abs() < 1e-6 * a.value);
}

#[test]
fn convexity_inequalities_on_seeded_pairs() {
    for seed in 0..20u64 {
        let f = TestFunction::RandomPolynomial { degree: 6, decay: 1.0, seed }.build().unwrap();
        let g = TestFunction::RandomPolynomial { degree: 6, decay: 0.5, seed: seed + 1000 }.build().unwrap();
        for &p in &[2.0, 3.0, 4.0] {
            assert!(clarkson_check(&f, &g, p, 0.0).unwrap(), "clarkson seed {seed} p {p}");
        }
        for &p in &[1.5, 2.0] {
            assert!(bcl_check(&f, &g, p, -0.5).unwrap(), "bcl seed {seed} p {p}");
        }
    }
}

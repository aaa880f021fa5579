//! The extremal problem `max Re <F, k>_alpha` over `||F||_{A^p_alpha} = 1`,
//! restricted to polynomials of degree at most `N`, and checks of the
//! regularity it inherits from `k`.
//!
//! The norm is discretised by a fixed tensor rule (graded radial panels in
//! `u = |z|^2`, equispaced angles); the pairing with `k` is exact through
//! the monomial Gram weights. The solver is a Riemannian ascent on the
//! discrete unit sphere whose search direction is preconditioned by the
//! Hessian of `||F||^p / p`, which makes the accepted full steps behave
//! like Newton steps near the optimum.

use std::f64::consts::{E, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{forward_fft, inverse_fft, AnalyticFunction};
use crate::error::{LabError, Result};
use crate::growth::{default_ladder, fit_power_law, TheoremReport, SLOPE_TOL};
use crate::means::{bergman_norm, bergman_norm_tol, lambda_star_seminorm, mean_profile, MeanKind, PROFILE_RING_TOL};
use crate::quadrature::{adaptive_circle_average, QuadratureRule};
use crate::special::{check_weight, monomial_gram_weights};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Angular count used by [`ExtremalProblem::new`]: a power of two above
/// `(p + 2)(N + 1)` for even integer `p` (exact), otherwise above `32 (N + 1)`
/// and at least 512.
pub fn default_angular_count(p: f64, degree: usize) -> usize {
    let n = degree as f64 + 1.0;
    if p.fract() == 0.0 && (p as u64) % 2 == 0 {
        (((p + 2.0) * n).ceil() as usize).next_power_of_two().max(64)
    } else {
        ((32.0 * n).ceil() as usize).next_power_of_two().max(512)
    }
}

/// Radial rule graded towards `u = 0` (30 levels, for zeros of `F` at the
/// origin when `p` is not an even integer) and `u = 1` (8 levels).
pub fn default_quadrature(alpha: f64, p: f64, degree: usize) -> Result<QuadratureRule> {
    QuadratureRule::graded(alpha, 16, 30, 8, default_angular_count(p, degree))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalProblem {
    pub k: AnalyticFunction,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub degree: usize,
    #[serde(skip)]
    pub quad: QuadratureRule,
    pub radial_nodes: usize,
    pub angular_count: usize,
    pub tol: f64,
    pub max_iters: usize,
}

impl ExtremalProblem {
    pub fn new(k: AnalyticFunction, p: f64, alpha: f64, degree: usize) -> Result<Self> {
        check_weight(alpha)?;
        if !(p > 1.0 && p.is_finite()) {
            return Err(LabError::Parameter(format!("extremal problem needs 1 < p < inf, got {p}")));
        }
        if k.is_zero() {
            return Err(LabError::Parameter("k must be nonzero".into()));
        }
        let quad = default_quadrature(alpha, p, degree)?;
        Ok(ExtremalProblem {
            radial_nodes: quad.radial_nodes().len(),
            angular_count: quad.angular_count(),
            k,
            p,
            q: p / (p - 1.0),
            alpha,
            degree,
            quad,
            tol: 1e-8,
            max_iters: 100,
        })
    }

    pub fn with_quadrature(mut self, quad: QuadratureRule) -> Result<Self> {
        if quad.alpha() != self.alpha {
            return Err(LabError::Parameter("quadrature weight does not match alpha".into()));
        }
        self.radial_nodes = quad.radial_nodes().len();
        self.angular_count = quad.angular_count();
        self.quad = quad;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub value: f64,
    pub residual: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSolution {
    #[serde(rename = "F")]
    pub f: AnalyticFunction,
    pub value: f64,
    pub stationarity_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
}

impl ExtremalSolution {
    pub fn coefficients(&self) -> &[Complex64] {
        self.f.coeffs()
    }

    /// `iteration,value,residual,step`, one row per iterate.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,value,residual,step\n");
        for row in &self.trace {
            out.push_str(&format!("{},{:.17e},{:.17e},{:.17e}\n", row.iteration, row.value, row.residual, row.step));
        }
        out
    }
}

/// Discretised `A^p_alpha` geometry for degree-`N` coefficient vectors.
struct Disc {
    p: f64,
    n: usize,
    m: usize,
    rings: Vec<(f64, f64)>,
    gram: Vec<f64>,
}

impl Disc {
    fn new(p: f64, alpha: f64, degree: usize, quad: &QuadratureRule) -> Result<Self> {
        let m = quad.angular_count();
        if m <= degree {
            return Err(LabError::Parameter(format!("angular count {m} must exceed the degree {degree}")));
        }
        Ok(Disc { p, n: degree + 1, m, rings: quad.rings().collect(), gram: monomial_gram_weights(degree, alpha)? })
    }

    fn ring_values(&self, a: &[Complex64], rho: f64) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.m];
        let mut s = 1.0;
        for (j, c) in a.iter().enumerate() {
            buf[j % self.m] += c * s;
            s *= rho;
        }
        inverse_fft(self.m).process(&mut buf);
        buf
    }

    /// Fourier coefficients `(1/M) sum_k v_k e^{-i l theta_k}`, index `l mod M`.
    fn fourier(&self, mut v: Vec<Complex64>) -> Vec<Complex64> {
        forward_fft(self.m).process(&mut v);
        let inv = 1.0 / self.m as f64;
        v.iter_mut().for_each(|c| *c *= inv);
        v
    }

    fn norm_pow(&self, a: &[Complex64]) -> f64 {
        let p = self.p;
        self.rings
            .iter()
            .map(|&(rho, w)| {
                let s: f64 = self.ring_values(a, rho).iter().map(|v| v.norm_sqr().powf(p / 2.0)).sum();
                w * s / self.m as f64
            })
            .sum()
    }

    fn normalize(&self, a: &[Complex64]) -> Vec<Complex64> {
        let s = self.norm_pow(a).powf(-1.0 / self.p);
        a.iter().map(|c| c * s).collect()
    }

    /// `g_j = int |F|^{p-2} F conj(z)^j dA_alpha` (the gradient of `||F||^p / p`).
    fn gradient(&self, a: &[Complex64]) -> Vec<Complex64> {
        let p = self.p;
        let mut g = vec![ZERO; self.n];
        for &(rho, w) in &self.rings {
            let v: Vec<Complex64> = self
                .ring_values(a, rho)
                .into_iter()
                .map(|f| {
                    let r = f.norm().max(1e-300);
                    f * r.powf(p - 2.0)
                })
                .collect();
            let c = self.fourier(v);
            let mut s = w;
            for (j, gj) in g.iter_mut().enumerate() {
                *gj += c[j % self.m] * s;
                s *= rho;
            }
        }
        g
    }

    /// Real Hessian of `||F||^p / p` in the coordinates `(Re a_0, Im a_0, Re a_1, ...)`.
    fn hessian(&self, a: &[Complex64]) -> DMatrix<f64> {
        let (p, n, m) = (self.p, self.n, self.m);
        // T[k][j] = int |F|^{p-2} z^j conj(z)^k,  S[j][k] = int |F|^{p-4} conj(F)^2 z^{j+k}
        let mut t = vec![ZERO; n * n];
        let mut s = vec![ZERO; n * n];
        let mut powers = vec![0.0; 2 * n];
        for &(rho, w) in &self.rings {
            let vals = self.ring_values(a, rho);
            let top = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let cut = if p < 2.0 { 1e-12 * top } else { 0.0 };
            let (mut w1, mut w2) = (Vec::with_capacity(m), Vec::with_capacity(m));
            for f in &vals {
                let r = f.norm();
                if r <= cut || r == 0.0 {
                    w1.push(ZERO);
                    w2.push(ZERO);
                } else {
                    let base = r.powf(p - 2.0);
                    w1.push(Complex64::new(base, 0.0));
                    w2.push(base * (f.conj() / r).powu(2));
                }
            }
            let c1 = self.fourier(w1);
            let c2 = self.fourier(w2);
            powers[0] = w;
            for i in 1..2 * n {
                powers[i] = powers[i - 1] * rho;
            }
            for k in 0..n {
                for j in 0..n {
                    let scale = powers[j + k];
                    t[k * n + j] += c1[(k + m - j) % m] * scale;
                    s[j * n + k] += c2[(m - (j + k) % m) % m] * scale;
                }
            }
        }
        let unit = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            for k in 0..n {
                for (aa, ca) in unit.iter().enumerate() {
                    for (bb, cb) in unit.iter().enumerate() {
                        let v = 0.5 * p * (ca * cb.conj() * t[k * n + j]).re
                            + 0.5 * (p - 2.0) * (ca * cb * s[j * n + k]).re;
                        h[(2 * j + aa, 2 * k + bb)] = v;
                    }
                }
            }
        }
        h
    }

    fn pairing(&self, a: &[Complex64], kc: &[Complex64]) -> f64 {
        a.iter().zip(kc).zip(&self.gram).map(|((x, y), w)| (x * y.conj()).re * w).sum()
    }
}

fn to_real(v: &[Complex64]) -> DVector<f64> {
    DVector::from_iterator(2 * v.len(), v.iter().flat_map(|c| [c.re, c.im]))
}

fn to_complex(v: &DVector<f64>) -> Vec<Complex64> {
    v.as_slice().chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn residual_parts(disc: &Disc, a: &[Complex64], kc: &[Complex64]) -> (f64, Vec<Complex64>, f64) {
    let lambda = disc.pairing(a, kc);
    let g = disc.gradient(a);
    let norm_p: f64 = a.iter().zip(&g).map(|(x, y)| (x * y.conj()).re).sum();
    let knorm = kc.iter().zip(&disc.gram).map(|(c, w)| c.norm_sqr() * w).sum::<f64>().sqrt();
    let direction: Vec<Complex64> =
        kc.iter().zip(&disc.gram).zip(&g).map(|((c, w), gj)| c * *w - gj * (lambda / norm_p)).collect();
    let res = direction.iter().map(|d| d.norm()).fold(0.0, f64::max) / knorm;
    (lambda, direction, res)
}

/// Maximum over `j <= N` of `|<z^j, k> - lambda <z^j, G> / <F, G>|` with
/// `G = |F|^{p-2} F` and `lambda = Re <F, k>`, divided by `||k_N||_{A^2_alpha}`.
pub fn stationarity_residual(
    f: &AnalyticFunction,
    k: &AnalyticFunction,
    p: f64,
    alpha: f64,
    degree: usize,
    quad: &QuadratureRule,
) -> Result<f64> {
    if !f.is_polynomial() || f.degree() > degree {
        return Err(LabError::UnsupportedRepresentation(format!("F must be a polynomial of degree <= {degree}")));
    }
    if !(p > 1.0) {
        return Err(LabError::Parameter(format!("p must exceed 1, got {p}")));
    }
    let disc = Disc::new(p, alpha, degree, quad)?;
    let mut a = f.coeffs().to_vec();
    a.resize(degree + 1, ZERO);
    let kc = k.taylor_coefficients(degree);
    Ok(residual_parts(&disc, &a, &kc).2)
}

/// Preconditioned Riemannian ascent with backtracking and renormalisation.
pub fn solve_extremal(prob: &ExtremalProblem) -> Result<ExtremalSolution> {
    let disc = Disc::new(prob.p, prob.alpha, prob.degree, &prob.quad)?;
    let kc = prob.k.taylor_coefficients(prob.degree);
    if kc.iter().all(|c| *c == ZERO) {
        return Err(LabError::Parameter(format!("k has no Taylor coefficients up to degree {}", prob.degree)));
    }
    let mut a = disc.normalize(&kc);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut last_step = 0.0;
    let mut iterations = 0;
    loop {
        let (lambda, direction, res) = residual_parts(&disc, &a, &kc);
        trace.push(TraceRow { iteration: iterations, value: lambda, residual: res, step: last_step });
        if res <= prob.tol {
            converged = true;
            break;
        }
        if iterations >= prob.max_iters {
            break;
        }
        let grad = to_real(&direction);
        let mut h = disc.hessian(&a);
        let ridge = 1e-14 * h.trace().abs() / h.nrows() as f64;
        for i in 0..h.nrows() {
            h[(i, i)] += ridge;
        }
        let step_dir = match h.cholesky() {
            Some(ch) => ch.solve(&grad) / lambda.max(f64::MIN_POSITIVE),
            None => grad.clone(),
        };
        let slope = grad.dot(&step_dir);
        let d = to_complex(&step_dir);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<Complex64> = a.iter().zip(&d).map(|(x, y)| x + y * t).collect();
            let trial = disc.normalize(&trial);
            let value = disc.pairing(&trial, &kc);
            let armijo = value >= lambda + 1e-4 * t * slope;
            // increments below rounding cannot pass Armijo; accept non-decrease
            let flat = t * slope <= 1e-13 * lambda.abs() && value >= lambda;
            if value.is_finite() && (armijo || flat) {
                accepted = Some(trial);
                break;
            }
            t *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some(next) => {
                a = next;
                last_step = t;
            }
            None => break,
        }
    }
    let last = *trace.last().expect("trace has the initial row");
    let mut coeffs = a;
    while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
        coeffs.pop();
    }
    Ok(ExtremalSolution {
        f: AnalyticFunction::polynomial(format!("extremal(p={}, alpha={}, N={})", prob.p, prob.alpha, prob.degree), coeffs),
        value: last.value,
        stationarity_residual: last.residual,
        iterations,
        converged,
        trace,
    })
}

fn sides_norms(f: &AnalyticFunction, g: &AnalyticFunction, p: f64, alpha: f64) -> Result<[f64; 4]> {
    let half = Complex64::new(0.5, 0.0);
    Ok([
        bergman_norm(f, p, alpha)?,
        bergman_norm(g, p, alpha)?,
        bergman_norm(&f.add(g).scale(half), p, alpha)?,
        bergman_norm(&f.sub(g).scale(half), p, alpha)?,
    ])
}

/// `(lhs, rhs)` of `||(f+g)/2||^p + ||(f-g)/2||^p <= ((||f||^q + ||g||^q)/2)^{p/q}`, `p >= 2`.
pub fn clarkson_sides(f: &AnalyticFunction, g: &AnalyticFunction, p: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(LabError::Parameter(format!("Clarkson's inequality is used for p >= 2, got {p}")));
    }
    let q = p / (p - 1.0);
    let [nf, ng, plus, minus] = sides_norms(f, g, p, alpha)?;
    Ok((plus.powf(p) + minus.powf(p), ((nf.powf(q) + ng.powf(q)) / 2.0).powf(p / q)))
}

pub fn clarkson_check(f: &AnalyticFunction, g: &AnalyticFunction, p: f64, alpha: f64) -> Result<bool> {
    let (lhs, rhs) = clarkson_sides(f, g, p, alpha)?;
    Ok(lhs <= rhs * (1.0 + 1e-9))
}

/// `(lhs, rhs)` of `||(f+g)/2||^2 + (p-1)||(f-g)/2||^2 <= (||f||^2 + ||g||^2)/2`, `1 < p <= 2`.
pub fn bcl_sides(f: &AnalyticFunction, g: &AnalyticFunction, p: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(LabError::Parameter(format!("the uniform-convexity inequality is used for 1 < p <= 2, got {p}")));
    }
    let [nf, ng, plus, minus] = sides_norms(f, g, p, alpha)?;
    Ok((plus * plus + (p - 1.0) * minus * minus, (nf * nf + ng * ng) / 2.0))
}

pub fn bcl_check(f: &AnalyticFunction, g: &AnalyticFunction, p: f64, alpha: f64) -> Result<bool> {
    let (lhs, rhs) = bcl_sides(f, g, p, alpha)?;
    Ok(lhs <= rhs * (1.0 + 1e-9))
}

fn require_converged(sol: &ExtremalSolution) -> Result<()> {
    if sol.converged {
        Ok(())
    } else {
        Err(LabError::ToleranceNotMet { best: sol.value, gap: sol.stationarity_residual })
    }
}

/// Smoothness of `k` (second differences in `A^q_alpha`, normalised so that
/// `<F, k> = 1`) bounds the second differences of the extremal `F`.
pub fn verify_ext_regularity(
    k: &AnalyticFunction,
    p: f64,
    alpha: f64,
    beta: f64,
    b: Option<f64>,
    t_grid: &[f64],
    degree: usize,
) -> Result<(TheoremReport, ExtremalSolution)> {
    const ID: &str = "ext-regularity";
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(LabError::Parameter(format!("beta must lie in (0, 2], got {beta}")));
    }
    let prob = ExtremalProblem::new(k.clone(), p, alpha, degree)?;
    let sol = solve_extremal(&prob)?;
    require_converged(&sol)?;
    let q = prob.q;
    let kk = k.scale(Complex64::new(1.0 / sol.value, 0.0));
    let est = lambda_star_seminorm(&kk, q, alpha, beta, t_grid)?;
    let big_b = match b {
        Some(b) if est.constant_estimate > b * (1.0 + 1e-9) => {
            return Err(LabError::HypothesisViolation {
                theorem: ID.into(),
                detail: format!("second differences of k need B >= {:.6e}, got {b:.6e}", est.constant_estimate),
            })
        }
        Some(b) => b,
        None => est.constant_estimate,
    };
    let mut report = TheoremReport::new(ID, k);
    report.hypothesis_constant = big_b;
    report.quantities.insert("value".into(), sol.value);
    report.quantities.insert("stationarity_residual".into(), sol.stationarity_residual);
    let (c, e) = if p >= 2.0 {
        (2.0 * E.powf(1.0 / E) * (big_b / 2.0).powf(1.0 / p), beta / p)
    } else {
        (2.0 * (p - 1.0).powf(-0.5) * (big_b / 2.0).sqrt(), beta / 2.0)
    };
    report.quantities.insert("constant".into(), c);
    for &t in t_grid {
        let d = bergman_norm_tol(&sol.f.second_difference(t), p, alpha, PROFILE_RING_TOL)?;
        report.check("second difference of F", t, d, c * t.powf(e));
    }
    Ok((report, sol))
}

/// Average of `|F|^{p-1} |F'|` over the circle of radius `r`.
fn weighted_derivative_mean(f: &AnalyticFunction, fp: &AnalyticFunction, p: f64, r: f64) -> Result<f64> {
    let g = |z: Complex64| f.eval_unchecked(z).norm().powf(p - 1.0) * fp.eval_unchecked(z).norm();
    adaptive_circle_average(&g, r, 1e-10, 0.0, &[])
}

/// With `alpha = 0` and `k` in the second-order smoothness class, checks
/// that `|F|^{p-1} F'` is integrable (growth exponent of its circle means
/// above `-1`), that `F'` lies in `A^{1.05}`, and the Holder chain
/// `M_1(|F|^{p-1} F') <= M_q(|F|^{p-1}) M_p(F')` on the ladder.
pub fn verify_pext(k: &AnalyticFunction, p: f64, degree: usize) -> Result<(TheoremReport, ExtremalSolution)> {
    const ID: &str = "pext";
    let prob = ExtremalProblem::new(k.clone(), p, 0.0, degree)?;
    let sol = solve_extremal(&prob)?;
    require_converged(&sol)?;
    let q = prob.q;
    let mut report = TheoremReport::new(ID, k);
    let est = lambda_star_seminorm(k, q, 0.0, 2.0, &crate::means::default_t_grid())?;
    report.hypothesis_constant = est.constant_estimate;
    let radii = default_ladder();
    let f = &sol.f;
    let fp = f.derivative();
    let m1: Vec<f64> = radii.iter().map(|&r| weighted_derivative_mean(f, &fp, p, r)).collect::<Result<_>>()?;
    let mf = mean_profile(MeanKind::CircleMp, f, p, 0.0, &radii)?;
    let mfp = mean_profile(MeanKind::CircleMp, &fp, p, 0.0, &radii)?;
    if m1.iter().all(|v| *v > 0.0) {
        let fit = fit_power_law(&radii, &m1)?;
        report.quantities.insert("slope_M1".into(), fit.fitted_slope);
        report.check("integrability slope", f64::NAN, -1.0 + 0.02, fit.fitted_slope);
    } else {
        report.notes.push("|F|^{p-1} F' vanishes identically".into());
    }
    let delta = 0.05;
    let dn = bergman_norm_tol(&fp, 1.0 + delta, 0.0, PROFILE_RING_TOL)?;
    report.quantities.insert("norm_F_prime_A_1.05".into(), dn);
    report.check("F' in A^{1+delta}", f64::NAN, dn, f64::MAX);
    for (((&r, &lhs), &a), &b) in radii.iter().zip(&m1).zip(&mf).zip(&mfp) {
        report.check("Holder chain", r, lhs, a.powf(p - 1.0) * b);
    }
    report.notes.push(format!("q = {q}"));
    Ok((report, sol))
}

/// Boundary Holder exponent targets: `-alpha/p` for `p >= 2`, and
/// `1 - 2/p - alpha/p` for `1 < p < 2`.
pub fn boundary_holder_exponent(p: f64, alpha: f64) -> Result<f64> {
    if p >= 2.0 && alpha > -1.0 && alpha < 0.0 {
        Ok(-alpha / p)
    } else if p > 1.0 && p < 2.0 && alpha > -1.0 && alpha < p - 2.0 {
        Ok(1.0 - 2.0 / p - alpha / p)
    } else {
        Err(LabError::Parameter(format!(
            "boundary regularity needs p >= 2 with -1 < alpha < 0, or 1 < p < 2 with -1 < alpha < p - 2 (p = {p}, alpha = {alpha})"
        )))
    }
}

/// Growth chain for `F'` and an empirical boundary Holder exponent of the
/// extremal `F`, from maximal second differences on `|z| = 1 - 2^{-12}`.
pub fn verify_boundary_holder(
    k: &AnalyticFunction,
    p: f64,
    alpha: f64,
    degree: usize,
) -> Result<(TheoremReport, ExtremalSolution)> {
    const ID: &str = "boundary-holder";
    let target = boundary_holder_exponent(p, alpha)?;
    let prob = ExtremalProblem::new(k.clone(), p, alpha, degree)?;
    let sol = solve_extremal(&prob)?;
    require_converged(&sol)?;
    let mut report = TheoremReport::new(ID, k);
    let est = lambda_star_seminorm(k, prob.q, alpha, 2.0, &crate::means::default_t_grid())?;
    report.hypothesis_constant = est.constant_estimate;
    let radii = default_ladder();
    let fp = sol.f.derivative();
    let nu = if p >= 2.0 { p } else { 2.5 };
    let expected = -1.0 + 2.0 / nu - (1.0 + alpha) / p;
    report.quantities.insert("expected_Mp_exponent".into(), expected);
    let mp = mean_profile(MeanKind::CircleMp, &fp, p, alpha, &radii)?;
    let minf: Vec<f64> = radii.iter().map(|&r| sup_on_circle(&fp, r)).collect();
    if fp.is_zero() {
        report.notes.push("F is constant".into());
    } else {
        let s = fit_power_law(&radii, &mp)?.fitted_slope;
        report.quantities.insert("slope_Mp_F_prime".into(), s);
        report.check("M_p(F') exponent", f64::NAN, expected - SLOPE_TOL, s);
        let s = fit_power_law(&radii, &minf)?.fitted_slope;
        report.quantities.insert("slope_Minf_F_prime".into(), s);
        report.check("M_inf(F') exponent above -1", f64::NAN, -1.0, s - f64::EPSILON);
    }
    let h = empirical_holder_exponent(&sol.f, 1.0 - 2f64.powi(-12));
    report.quantities.insert("target_exponent".into(), target);
    report.quantities.insert("empirical_exponent".into(), h);
    report.check("boundary Holder exponent", f64::NAN, target - 0.1, h);
    Ok((report, sol))
}

fn sup_on_circle(f: &AnalyticFunction, r: f64) -> f64 {
    let m = (8 * (f.degree() + 1)).next_power_of_two().max(256);
    let vals = f.ring_values(r, m);
    let (best, idx) = vals.iter().enumerate().fold((0.0, 0), |acc, (i, v)| if v.norm() > acc.0 { (v.norm(), i) } else { acc });
    // golden-section refinement around the best sample
    let h = 2.0 * PI / m as f64;
    let g = |t: f64| f.eval_unchecked(Complex64::from_polar(r, t)).norm();
    let (mut a, mut b) = (idx as f64 * h - h, idx as f64 * h + h);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let (x1, x2) = (b - phi * (b - a), a + phi * (b - a));
        if g(x1) > g(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    best.max(g(0.5 * (a + b)))
}

/// Slope of `log max_theta |Delta_t^2 F(r e^{i theta})|` against `log t`,
/// over `t = pi 2^{-j}`, `j = 3..=10`, capped at 2.
pub fn empirical_holder_exponent(f: &AnalyticFunction, r: f64) -> f64 {
    let m = 1usize << 13;
    let vals = f.ring_values(r, m);
    let mut ts = Vec::new();
    let mut ds = Vec::new();
    for j in 3..=10 {
        let shift = m >> (j + 1);
        let t = 2.0 * PI * shift as f64 / m as f64;
        let d = (0..m)
            .map(|i| (vals[(i + shift) % m] + vals[(i + m - shift) % m] - vals[i] * 2.0).norm())
            .fold(0.0, f64::max);
        ts.push(t);
        ds.push(d);
    }
    if ds.iter().any(|d| *d <= 0.0) {
        return 2.0;
    }
    crate::growth::fit_t_exponent(&ts, &ds).map(|(s, _)| s.min(2.0)).unwrap_or(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::monomial_norm;
    use crate::TestFunction;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_kernel_gives_constant_solution() {
        for &(p, alpha) in &[(1.5, 0.0), (3.0, -0.5), (4.0, 1.0)] {
            let prob = ExtremalProblem::new(AnalyticFunction::constant(c(1.0)), p, alpha, 6).unwrap();
            let sol = solve_extremal(&prob).unwrap();
            assert!(sol.converged);
            assert_relative_eq!(sol.value, 1.0, max_relative = 1e-10);
            let a = sol.coefficients();
            assert_relative_eq!(a[0].re, 1.0, max_relative = 1e-10);
            assert!(a[1..].iter().all(|x| x.norm() < 1e-9));
        }
    }

    #[test]
    fn quadratic_case_is_the_normalised_truncation() {
        let k = TestFunction::RandomPolynomial { degree: 8, decay: 1.0, seed: 11 }.build().unwrap();
        let alpha = 0.5;
        let prob = ExtremalProblem::new(k.clone(), 2.0, alpha, 8).unwrap();
        let sol = solve_extremal(&prob).unwrap();
        let w = monomial_gram_weights(8, alpha).unwrap();
        let norm = k.coeffs().iter().zip(&w).map(|(a, w)| a.norm_sqr() * w).sum::<f64>().sqrt();
        assert_relative_eq!(sol.value, norm, max_relative = 1e-10);
        for (a, b) in sol.coefficients().iter().zip(k.coeffs()) {
            assert!((a - b / norm).norm() < 1e-9);
        }
        assert!(sol.iterations <= 1);
    }

    #[test]
    fn monomial_kernels_give_monomials() {
        for &(m, p, alpha) in &[(1usize, 4.0, 0.0), (2, 1.5, 0.0), (3, 3.0, -0.5)] {
            let prob = ExtremalProblem::new(AnalyticFunction::monomial(m), p, alpha, 8).unwrap();
            let sol = solve_extremal(&prob).unwrap();
            assert!(sol.converged);
            let expect = 1.0 / monomial_norm(m as u32, p, alpha).unwrap();
            let a = sol.coefficients();
            assert_relative_eq!(a[m].re, expect, max_relative = 1e-8);
            assert!(a.iter().enumerate().all(|(j, x)| j == m || x.norm() < 1e-9));
        }
    }

    #[test]
    fn residual_examples() {
        let quad = default_quadrature(0.0, 4.0, 4).unwrap();
        let z = AnalyticFunction::monomial(1);
        let f = z.scale(c(1.0 / monomial_norm(1, 4.0, 0.0).unwrap()));
        assert!(stationarity_residual(&f, &z, 4.0, 0.0, 4, &quad).unwrap() <= 1e-8);
        let wrong = AnalyticFunction::monomial(2).scale(c(1.0 / monomial_norm(2, 4.0, 0.0).unwrap()));
        assert!(stationarity_residual(&wrong, &z, 4.0, 0.0, 4, &quad).unwrap() >= 0.1);
    }

    #[test]
    fn general_kernel_converges_and_ascends() {
        let k = TestFunction::TruncatedPole { gamma: 0.25, degree: 12 }.build().unwrap();
        for &p in &[1.5, 3.0, 4.0] {
            let prob = ExtremalProblem::new(k.clone(), p, 0.0, 12).unwrap();
            let sol = solve_extremal(&prob).unwrap();
            assert!(sol.converged, "p = {p}: {:?}", sol.trace);
            assert!(sol.trace.windows(2).all(|w| w[1].value >= w[0].value * (1.0 - 1e-14)));
            assert_relative_eq!(bergman_norm(&sol.f, p, 0.0).unwrap(), 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn convexity_inequalities_simple_cases() {
        let f = TestFunction::RandomPolynomial { degree: 5, decay: 1.0, seed: 2 }.build().unwrap();
        let g = f.scale(c(-1.0));
        assert!(clarkson_check(&f, &f, 3.0, 0.0).unwrap());
        assert!(clarkson_check(&f, &g, 3.0, 0.0).unwrap());
        assert!(bcl_check(&f, &f, 1.5, 0.0).unwrap());
        assert!(bcl_check(&f, &g, 1.5, 0.0).unwrap());
        assert!(clarkson_check(&f, &g, 1.5, 0.0).is_err());
        assert!(bcl_check(&f, &g, 3.0, 0.0).is_err());
    }

    #[test]
    fn ext_regularity_for_monomial() {
        let grid = crate::means::default_t_grid();
        let (rep, _) = verify_ext_regularity(&AnalyticFunction::monomial(2), 3.0, 0.0, 2.0, None, &grid, 4).unwrap();
        assert!(rep.all_satisfied, "{rep:?}");
    }

    #[test]
    fn holder_exponent_targets() {
        assert_relative_eq!(boundary_holder_exponent(4.0, -0.5).unwrap(), 0.125);
        assert!(boundary_holder_exponent(1.5, -0.4).is_err());
        assert!(boundary_holder_exponent(3.0, 0.2).is_err());
        let z3 = AnalyticFunction::monomial(3);
        assert!((empirical_holder_exponent(&z3, 0.999) - 2.0).abs() < 0.05);
    }
}

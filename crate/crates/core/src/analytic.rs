//! Analytic test functions on the unit disc.
//!
//! A function is a polynomial part plus a (possibly empty) sum of closed-form
//! terms. Closed forms stay exact under rotation, dilation and
//! differentiation, so means of `(1 - z)^{-gamma}` close to the boundary are
//! not polluted by truncation error.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Default truncation degree used when a closed form must be expanded.
pub const DEFAULT_TRUNCATION: usize = 256;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Closed-form summand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClosedTerm {
    /// `coeff * (1 - w z)^{-gamma}` with `|w| <= 1`, `gamma > 0`.
    PolePower {
        coeff: Complex64,
        w: Complex64,
        gamma: f64,
    },
    /// `coeff * exp(w z)`.
    Exponential { coeff: Complex64, w: Complex64 },
}

impl ClosedTerm {
    fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            ClosedTerm::PolePower { coeff, w, gamma } => coeff * (1.0 - w * z).powf(-gamma),
            ClosedTerm::Exponential { coeff, w } => coeff * (w * z).exp(),
        }
    }

    fn abs_pow(&self, z: Complex64, p: f64) -> f64 {
        match *self {
            ClosedTerm::PolePower { coeff, w, gamma } => {
                let q = 1.0 - w * z;
                coeff.norm().powf(p) * q.norm_sqr().powf(-gamma * p / 2.0)
            }
            ClosedTerm::Exponential { coeff, w } => (coeff.norm() * (w * z).re.exp()).powf(p),
        }
    }

    fn coeff(&self) -> Complex64 {
        match *self {
            ClosedTerm::PolePower { coeff, .. } | ClosedTerm::Exponential { coeff, .. } => coeff,
        }
    }

    fn with_coeff(&self, c: Complex64) -> ClosedTerm {
        let mut out = self.clone();
        match &mut out {
            ClosedTerm::PolePower { coeff, .. } | ClosedTerm::Exponential { coeff, .. } => *coeff = c,
        }
        out
    }

    fn scale_argument(&self, factor: Complex64) -> ClosedTerm {
        let mut out = self.clone();
        match &mut out {
            ClosedTerm::PolePower { w, .. } | ClosedTerm::Exponential { w, .. } => *w *= factor,
        }
        out
    }

    fn derivative(&self) -> ClosedTerm {
        match *self {
            ClosedTerm::PolePower { coeff, w, gamma } => ClosedTerm::PolePower {
                coeff: coeff * gamma * w,
                w,
                gamma: gamma + 1.0,
            },
            ClosedTerm::Exponential { coeff, w } => ClosedTerm::Exponential { coeff: coeff * w, w },
        }
    }

    fn taylor(&self, degree: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(degree + 1);
        match *self {
            ClosedTerm::PolePower { coeff, w, gamma } => {
                // (1 - wz)^{-g} = sum (g)_n / n! (wz)^n
                let mut c = coeff;
                for n in 0..=degree {
                    out.push(c);
                    c *= w * ((gamma + n as f64) / (n as f64 + 1.0));
                }
            }
            ClosedTerm::Exponential { coeff, w } => {
                let mut c = coeff;
                for n in 0..=degree {
                    out.push(c);
                    c *= w / (n as f64 + 1.0);
                }
            }
        }
        out
    }

    /// Modulus of the nearest singularity's reciprocal; 0 for entire terms.
    fn sharpness(&self) -> f64 {
        match *self {
            ClosedTerm::PolePower { w, .. } => w.norm(),
            ClosedTerm::Exponential { .. } => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ClosedTerm::PolePower { w, gamma, .. } => {
                if !(gamma > 0.0) {
                    return Err(LabError::Parameter(format!("pole power needs gamma > 0, got {gamma}")));
                }
                if w.norm() > 1.0 + 1e-15 {
                    return Err(LabError::Parameter(format!(
                        "pole location 1/w must lie outside the open disc (|w| = {})",
                        w.norm()
                    )));
                }
                Ok(())
            }
            ClosedTerm::Exponential { .. } => Ok(()),
        }
    }
}

/// An analytic function on the unit disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRecord", into = "FunctionRecord")]
pub struct AnalyticFunction {
    label: String,
    poly: Vec<Complex64>,
    terms: Vec<ClosedTerm>,
}

impl AnalyticFunction {
    /// Polynomial with the given Taylor coefficients `a_0..a_N`.
    pub fn polynomial(label: impl Into<String>, coeffs: Vec<Complex64>) -> Self {
        let mut f = AnalyticFunction { label: label.into(), poly: coeffs, terms: Vec::new() };
        f.trim();
        f
    }

    pub fn real_polynomial(label: impl Into<String>, coeffs: &[f64]) -> Self {
        Self::polynomial(label, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::polynomial("0", vec![ZERO])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(format!("{c}"), vec![c])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::polynomial(format!("z^{n}"), coeffs)
    }

    /// `(1 - z)^{-gamma}`.
    pub fn pole_power(gamma: f64) -> Result<Self> {
        Self::from_terms(
            format!("(1-z)^(-{gamma})"),
            Vec::new(),
            vec![ClosedTerm::PolePower {
                coeff: Complex64::new(1.0, 0.0),
                w: Complex64::new(1.0, 0.0),
                gamma,
            }],
        )
    }

    /// `exp(w z)`.
    pub fn exponential(w: Complex64) -> Self {
        AnalyticFunction {
            label: format!("exp({w} z)"),
            poly: vec![ZERO],
            terms: vec![ClosedTerm::Exponential { coeff: Complex64::new(1.0, 0.0), w }],
        }
    }

    pub fn from_terms(
        label: impl Into<String>,
        poly: Vec<Complex64>,
        terms: Vec<ClosedTerm>,
    ) -> Result<Self> {
        for t in &terms {
            t.validate()?;
        }
        let mut f = AnalyticFunction { label: label.into(), poly, terms };
        f.trim();
        Ok(f)
    }

    fn trim(&mut self) {
        while self.poly.len() > 1 && *self.poly.last().unwrap() == ZERO {
            self.poly.pop();
        }
        if self.poly.is_empty() {
            self.poly.push(ZERO);
        }
        self.terms.retain(|t| t.coeff() != ZERO);
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.is_empty()
    }

    /// Polynomial coefficients (the polynomial part for mixed functions).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.poly
    }

    pub fn closed_terms(&self) -> &[ClosedTerm] {
        &self.terms
    }

    /// Degree of the polynomial part.
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.poly.iter().all(|c| *c == ZERO)
    }

    /// Value at `z`, `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(LabError::Domain(format!("evaluation point {z} is not inside the unit disc")));
        }
        Ok(self.eval_unchecked(z))
    }

    /// Value at `z` on the closed disc; only polynomials may be evaluated on `|z| = 1`.
    pub fn eval_closed(&self, z: Complex64) -> Result<Complex64> {
        if self.is_polynomial() && z.norm() <= 1.0 + 1e-15 {
            Ok(self.eval_unchecked(z))
        } else {
            self.eval(z)
        }
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for c in self.poly.iter().rev() {
            acc = acc * z + c;
        }
        for t in &self.terms {
            acc += t.eval(z);
        }
        acc
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.eval_unchecked(ZERO)
    }

    /// `g(z) = f(e^{it} z)`.
    pub fn rotate(&self, t: f64) -> AnalyticFunction {
        let rot = Complex64::from_polar(1.0, t);
        let poly = self
            .poly
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * t))
            .collect();
        let terms = self.terms.iter().map(|term| term.scale_argument(rot)).collect();
        let mut g = AnalyticFunction { label: format!("{}(e^({t}i) z)", self.label), poly, terms };
        g.trim();
        g
    }

    /// `f(e^{it} z) + f(e^{-it} z) - 2 f(z)`.
    pub fn second_difference(&self, t: f64) -> AnalyticFunction {
        let poly = self
            .poly
            .iter()
            .enumerate()
            .map(|(n, c)| c * (2.0 * ((n as f64 * t).cos() - 1.0)))
            .collect();
        let mut terms = Vec::with_capacity(3 * self.terms.len());
        for term in &self.terms {
            terms.push(term.scale_argument(Complex64::from_polar(1.0, t)));
            terms.push(term.scale_argument(Complex64::from_polar(1.0, -t)));
            terms.push(term.with_coeff(term.coeff() * -2.0));
        }
        let mut g = AnalyticFunction { label: format!("D2[{}]({t})", self.label), poly, terms };
        g.trim();
        g
    }

    pub fn derivative(&self) -> AnalyticFunction {
        let poly = if self.poly.len() <= 1 {
            vec![ZERO]
        } else {
            self.poly.iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect()
        };
        let terms = self.terms.iter().map(ClosedTerm::derivative).collect();
        let mut g = AnalyticFunction { label: format!("{}'", self.label), poly, terms };
        g.trim();
        g
    }

    /// Antiderivative with constant term `c0`; polynomials only.
    pub fn antiderivative(&self, c0: Complex64) -> Result<AnalyticFunction> {
        if !self.is_polynomial() {
            return Err(LabError::UnsupportedRepresentation(format!(
                "antiderivative of closed form {}",
                self.label
            )));
        }
        let mut poly = Vec::with_capacity(self.poly.len() + 1);
        poly.push(c0);
        poly.extend(self.poly.iter().enumerate().map(|(n, c)| c / (n as f64 + 1.0)));
        Ok(AnalyticFunction::polynomial(format!("I[{}]", self.label), poly))
    }

    /// `f_s(z) = f(s z)` for `s` in `[0, 1]`.
    pub fn dilate(&self, s: f64) -> Result<AnalyticFunction> {
        if !(0.0..=1.0).contains(&s) {
            return Err(LabError::Parameter(format!("dilation factor must lie in [0, 1], got {s}")));
        }
        if s == 0.0 {
            return Ok(AnalyticFunction::constant(self.value_at_zero()).with_label(format!("{}(0)", self.label)));
        }
        let mut scale = 1.0;
        let poly = self
            .poly
            .iter()
            .map(|c| {
                let v = c * scale;
                scale *= s;
                v
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|t| t.scale_argument(Complex64::new(s, 0.0)))
            .collect();
        let mut g = AnalyticFunction { label: format!("{}({s} z)", self.label), poly, terms };
        g.trim();
        Ok(g)
    }

    pub fn scale(&self, c: Complex64) -> AnalyticFunction {
        let poly = self.poly.iter().map(|a| a * c).collect();
        let terms = self.terms.iter().map(|t| t.with_coeff(t.coeff() * c)).collect();
        let mut g = AnalyticFunction { label: format!("{c}*{}", self.label), poly, terms };
        g.trim();
        g
    }

    pub fn add(&self, other: &AnalyticFunction) -> AnalyticFunction {
        let n = self.poly.len().max(other.poly.len());
        let mut poly = vec![ZERO; n];
        for (i, c) in self.poly.iter().enumerate() {
            poly[i] += c;
        }
        for (i, c) in other.poly.iter().enumerate() {
            poly[i] += c;
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut g = AnalyticFunction {
            label: format!("{} + {}", self.label, other.label),
            poly,
            terms,
        };
        g.trim();
        g
    }

    pub fn sub(&self, other: &AnalyticFunction) -> AnalyticFunction {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
            .with_label(format!("{} - {}", self.label, other.label))
    }

    /// Taylor coefficients `a_0..a_degree` of the whole function.
    pub fn taylor_coefficients(&self, degree: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; degree + 1];
        for (i, c) in self.poly.iter().take(degree + 1).enumerate() {
            out[i] += c;
        }
        for t in &self.terms {
            for (i, c) in t.taylor(degree).into_iter().enumerate() {
                out[i] += c;
            }
        }
        out
    }

    /// Polynomial truncation at the given degree.
    /// Zeros of a polynomial from the eigenvalues of its companion matrix.
    /// `None` for closed forms or when the eigen-iteration fails.
    pub fn zeros(&self) -> Option<Vec<Complex64>> {
        if !self.is_polynomial() {
            return None;
        }
        let n = self.degree();
        if n == 0 {
            return Some(Vec::new());
        }
        // zeros at the origin are exact; deflate them first
        let k = self.poly.iter().position(|c| *c != ZERO).unwrap_or(n);
        let mut out = vec![ZERO; k];
        let rest = &self.poly[k..=n];
        let m = n - k;
        if m == 0 {
            return Some(out);
        }
        let lead = rest[m];
        let companion = DMatrix::<Complex64>::from_fn(m, m, |i, j| {
            if j == m - 1 {
                -rest[i] / lead
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        let roots = companion.try_schur(1e-15, 10_000).map(|s| s.eigenvalues())??;
        out.extend(roots.iter().copied());
        Some(out)
    }

    pub fn truncate(&self, degree: usize) -> AnalyticFunction {
        AnalyticFunction::polynomial(
            format!("T{degree}[{}]", self.label),
            self.taylor_coefficients(degree),
        )
    }

    /// Largest `|w|` among pole terms (0 when there are none).
    pub(crate) fn sharpness(&self) -> f64 {
        self.terms.iter().map(ClosedTerm::sharpness).fold(0.0, f64::max)
    }

    /// `(angle, width)` of the spike each pole term puts on the circle of
    /// radius `rho`.
    pub(crate) fn peaks(&self, rho: f64) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .filter_map(|t| match *t {
                ClosedTerm::PolePower { w, .. } if w.norm() > 0.0 => Some((-w.arg(), 1.0 - w.norm() * rho)),
                _ => None,
            })
            .collect()
    }

    /// Upper bound for `|f|` on the circle of radius `rho` from the moduli of
    /// the pieces; the rounding floor of evaluations is about `eps` times this.
    pub(crate) fn magnitude_scale(&self, rho: f64) -> f64 {
        let poly: f64 = self.poly.iter().rev().fold(0.0, |acc, c| acc * rho + c.norm());
        let closed: f64 = self
            .terms
            .iter()
            .map(|t| match *t {
                ClosedTerm::PolePower { coeff, w, gamma } => {
                    coeff.norm() * (1.0 - w.norm() * rho).max(f64::MIN_POSITIVE).powf(-gamma)
                }
                ClosedTerm::Exponential { coeff, w } => coeff.norm() * (w.norm() * rho).exp(),
            })
            .sum();
        poly + closed
    }

    /// Values on the circle of radius `rho` at the `m` equispaced angles `2 pi k / m`.
    pub fn ring_values(&self, rho: f64, m: usize) -> Vec<Complex64> {
        let mut values = self.poly_ring_values(rho, m);
        if !self.terms.is_empty() {
            for (k, v) in values.iter_mut().enumerate() {
                let z = Complex64::from_polar(rho, 2.0 * PI * k as f64 / m as f64);
                for t in &self.terms {
                    *v += t.eval(z);
                }
            }
        }
        values
    }

    /// `sum_k |f(rho e^{2 pi i k / m})|^p`.
    pub(crate) fn ring_abs_pow_sum(&self, rho: f64, m: usize, p: f64) -> f64 {
        let single_term = self.terms.len() == 1 && self.poly.iter().all(|c| *c == ZERO);
        if single_term {
            let t = &self.terms[0];
            return (0..m)
                .map(|k| t.abs_pow(Complex64::from_polar(rho, 2.0 * PI * k as f64 / m as f64), p))
                .sum();
        }
        self.ring_values(rho, m).iter().map(|v| abs_pow(*v, p)).sum()
    }

    fn poly_ring_values(&self, rho: f64, m: usize) -> Vec<Complex64> {
        let deg = self.degree();
        if deg == 0 {
            return vec![self.poly[0]; m];
        }
        if m < 32 && deg < 16 {
            return (0..m)
                .map(|k| {
                    let z = Complex64::from_polar(rho, 2.0 * PI * k as f64 / m as f64);
                    let mut acc = ZERO;
                    for c in self.poly.iter().rev() {
                        acc = acc * z + c;
                    }
                    acc
                })
                .collect();
        }
        // fold a_n rho^n onto residues mod m, then one inverse DFT
        let mut buf = vec![ZERO; m];
        let mut scale = 1.0;
        for (n, c) in self.poly.iter().enumerate() {
            buf[n % m] += c * scale;
            scale *= rho;
        }
        inverse_fft(m).process(&mut buf);
        buf
    }
}

pub(crate) fn abs_pow(v: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        v.norm_sqr()
    } else {
        v.norm_sqr().powf(p / 2.0)
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn inverse_fft(m: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m))
}

pub(crate) fn forward_fft(m: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(m))
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Serialized layout: `{label, kind, coeffs | params}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct FunctionRecord {
    label: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ClosedParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ClosedParams {
    poly: Vec<Complex64>,
    terms: Vec<ClosedTerm>,
}

impl From<AnalyticFunction> for FunctionRecord {
    fn from(f: AnalyticFunction) -> Self {
        if f.is_polynomial() {
            FunctionRecord { label: f.label, kind: "polynomial".into(), coeffs: Some(f.poly), params: None }
        } else {
            FunctionRecord {
                label: f.label,
                kind: "closed_form".into(),
                coeffs: None,
                params: Some(ClosedParams { poly: f.poly, terms: f.terms }),
            }
        }
    }
}

impl TryFrom<FunctionRecord> for AnalyticFunction {
    type Error = LabError;

    fn try_from(r: FunctionRecord) -> Result<Self> {
        match (r.kind.as_str(), r.coeffs, r.params) {
            ("polynomial", Some(c), _) if !c.is_empty() => Ok(AnalyticFunction::polynomial(r.label, c)),
            ("closed_form", _, Some(p)) => AnalyticFunction::from_terms(r.label, p.poly, p.terms),
            (kind, _, _) => Err(LabError::Parameter(format!("malformed function record of kind {kind:?}"))),
        }
    }
}

/// Recipes for the functions used to exercise the theorems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Monomial { n: usize },
    PolePower { gamma: f64 },
    /// Coefficients `max(n,1)^{-decay} (u + i v)` with `u, v` uniform in `[-1, 1)`.
    RandomPolynomial { degree: usize, decay: f64, seed: u64 },
    /// Taylor truncation of `(1 - z)^{-gamma}`.
    TruncatedPole { gamma: f64, degree: usize },
    /// Taylor truncation of `(1 - z)^{exponent}` (any real exponent).
    Binomial { exponent: f64, degree: usize },
    Polynomial { coeffs: Vec<Complex64> },
}

impl TestFunction {
    pub fn build(&self) -> Result<AnalyticFunction> {
        match *self {
            TestFunction::Monomial { n } => Ok(AnalyticFunction::monomial(n)),
            TestFunction::PolePower { gamma } => AnalyticFunction::pole_power(gamma),
            TestFunction::RandomPolynomial { degree, decay, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs = (0..=degree)
                    .map(|n| {
                        let mag = (n.max(1) as f64).powf(-decay);
                        let re: f64 = rng.gen_range(-1.0..1.0);
                        let im: f64 = rng.gen_range(-1.0..1.0);
                        Complex64::new(re, im) * mag
                    })
                    .collect();
                Ok(AnalyticFunction::polynomial(format!("random(deg={degree}, seed={seed})"), coeffs))
            }
            TestFunction::TruncatedPole { gamma, degree } => {
                Ok(AnalyticFunction::pole_power(gamma)?.truncate(degree))
            }
            TestFunction::Binomial { exponent, degree } => {
                let mut coeffs = Vec::with_capacity(degree + 1);
                let mut c = 1.0;
                for n in 0..=degree {
                    coeffs.push(Complex64::new(c, 0.0));
                    c *= (n as f64 - exponent) / (n as f64 + 1.0);
                }
                Ok(AnalyticFunction::polynomial(format!("T{degree}[(1-z)^({exponent})]"), coeffs))
            }
            TestFunction::Polynomial { ref coeffs } => {
                if coeffs.is_empty() {
                    return Err(LabError::Parameter("empty coefficient list".into()));
                }
                Ok(AnalyticFunction::polynomial("poly", coeffs.clone()))
            }
        }
    }

    /// Parses the command-line shorthand, e.g. `monomial:3`, `pole:0.5`,
    /// `random:8:2:42` (degree, decay exponent, seed), `truncated-pole:0.5:256`,
    /// `binomial:0.5:1024`, `poly:1,2,1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || LabError::Parameter(format!("cannot parse function spec {spec:?}"));
        let mut parts = spec.split(':');
        let kind = parts.next().ok_or_else(bad)?;
        let rest: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<f64> { rest.get(i).ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad()) };
        let int = |i: usize| -> Result<usize> { rest.get(i).ok_or_else(bad)?.trim().parse::<usize>().map_err(|_| bad()) };
        let f = match kind {
            "monomial" => TestFunction::Monomial { n: int(0)? },
            "pole" => TestFunction::PolePower { gamma: num(0)? },
            "random" => TestFunction::RandomPolynomial {
                degree: int(0)?,
                decay: num(1)?,
                seed: rest.get(2).map(|s| s.trim().parse::<u64>().map_err(|_| bad())).transpose()?.unwrap_or(0),
            },
            "truncated-pole" => TestFunction::TruncatedPole {
                gamma: num(0)?,
                degree: rest.get(1).map(|_| int(1)).transpose()?.unwrap_or(DEFAULT_TRUNCATION),
            },
            "binomial" => TestFunction::Binomial {
                exponent: num(0)?,
                degree: rest.get(1).map(|_| int(1)).transpose()?.unwrap_or(DEFAULT_TRUNCATION),
            },
            "poly" => {
                let coeffs = rest
                    .first()
                    .ok_or_else(bad)?
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                TestFunction::Polynomial { coeffs }
            }
            _ => return Err(bad()),
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TestFunction::PolePower { gamma } | TestFunction::TruncatedPole { gamma, .. } if !(gamma > 0.0) => {
                Err(LabError::Parameter(format!("pole power needs gamma > 0, got {gamma}")))
            }
            _ => Ok(()),
        }
    }
}

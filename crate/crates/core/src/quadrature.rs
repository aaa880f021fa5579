//! Integration over the disc against `dA_alpha = (alpha+1)(1-|z|^2)^alpha dA/pi`
//! and over circles.
//!
//! Radial integrals are taken in `u = |z|^2`, where `dA/pi = du dtheta / 2pi`
//! and the weight becomes exactly `(1-u)^alpha`. Angular integrals use the
//! uniform grid, which is exact for trigonometric polynomials.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::special::{check_weight, gamma};

/// Gauss rule for `int_0^1 g(x) (1-x)^a dx`, via Golub-Welsch on the
/// Jacobi matrix for the `(a, 0)` Jacobi polynomials.
pub fn gauss_jacobi_unit(n: usize, a: f64) -> Result<Vec<(f64, f64)>> {
    check_weight(a)?;
    if n < 1 {
        return Err(LabError::Parameter("Gauss rule needs at least one node".into()));
    }
    let b = 0.0;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let fi = i as f64;
        let diag = if i == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            let s = 2.0 * fi + a + b;
            (b * b - a * a) / (s * (s + 2.0))
        };
        jacobi[(i, i)] = diag;
        if i + 1 < n {
            let k = fi + 1.0;
            let s = 2.0 * k + a + b;
            let off = (4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
            jacobi[(i, i + 1)] = off;
            jacobi[(i + 1, i)] = off;
        }
    }
    let eig = jacobi.symmetric_eigen();
    // total mass of (1-t)^a on [-1, 1]
    let mu0 = 2f64.powf(a + 1.0) * gamma(a + 1.0) / gamma(a + 2.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = eig.eigenvalues[i];
            let v = eig.eigenvectors[(0, i)];
            // map t in [-1,1] to x = (1+t)/2; (1-t)^a dt = 2^{a+1} (1-x)^a dx
            ((1.0 + t) / 2.0, mu0 * v * v / 2f64.powf(a + 1.0))
        })
        .collect();
    if pairs.iter().any(|(x, w)| !x.is_finite() || !w.is_finite()) {
        return Err(LabError::Numeric("Jacobi eigenproblem produced non-finite nodes".into()));
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs)
}

/// Keeps interior panels geometrically graded towards both endpoints: a
/// panel `[a, b]` wider than its distance to 0 or to 1 is split at
/// `a 2^k` or `1 - (1-b) 2^k`.
fn regrade(breaks: Vec<f64>) -> Vec<f64> {
    let panels = breaks.len() - 1;
    let mut out = vec![breaks[0]];
    for (i, w) in breaks.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let mut extra = Vec::new();
        if i > 0 && a > 0.0 {
            let mut x = 2.0 * a;
            while x < b && b - a > a {
                extra.push(x);
                x *= 2.0;
            }
        }
        if i + 1 < panels && b < 1.0 {
            let mut d = 2.0 * (1.0 - b);
            while 1.0 - d > a && b - a > 1.0 - b {
                extra.push(1.0 - d);
                d *= 2.0;
            }
        }
        extra.sort_by(f64::total_cmp);
        out.extend(extra.into_iter().filter(|x| *x > a && *x < b));
        out.push(b);
    }
    out.dedup();
    out
}

/// Composite rule for `int_0^1 g(x) (1-x)^a dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    exponent: f64,
    panel_nodes: usize,
    breaks: Vec<f64>,
    nodes: Vec<(f64, f64)>,
}

impl RadialRule {
    /// A single Gauss-Jacobi panel.
    pub fn gauss_jacobi(exponent: f64, n: usize) -> Result<Self> {
        Self::from_breaks(exponent, n, vec![0.0, 1.0])
    }

    /// Panels graded geometrically towards both endpoints: breakpoints
    /// `2^{-j-1}` (`j = 1..=levels_zero`) and `1 - 2^{-j-1}` (`j = 1..=levels_one`),
    /// plus `1/2`. Interior panels use `n`-point Gauss-Legendre with the
    /// weight multiplied in; the panel touching 1 uses Gauss-Jacobi.
    pub fn graded(exponent: f64, n: usize, levels_zero: usize, levels_one: usize) -> Result<Self> {
        let mut breaks = vec![0.0];
        for j in (1..=levels_zero).rev() {
            breaks.push(0.5f64.powi(j as i32 + 1));
        }
        breaks.push(0.5);
        for j in 1..=levels_one {
            breaks.push(1.0 - 0.5f64.powi(j as i32 + 1));
        }
        breaks.push(1.0);
        Self::from_breaks(exponent, n, breaks)
    }

    fn from_breaks(exponent: f64, n: usize, breaks: Vec<f64>) -> Result<Self> {
        let breaks = regrade(breaks);
        let legendre = gauss_jacobi_unit(n, 0.0)?;
        let jacobi = gauss_jacobi_unit(n, exponent)?;
        let panels = breaks.len() - 1;
        let mut nodes = Vec::with_capacity(n * panels);
        for (i, w) in breaks.windows(2).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            let h = hi - lo;
            if i + 1 == panels {
                let scale = h.powf(exponent + 1.0);
                nodes.extend(jacobi.iter().map(|&(v, wt)| (lo + h * v, wt * scale)));
            } else {
                nodes.extend(legendre.iter().map(|&(v, wt)| {
                    let x = lo + h * v;
                    (x, wt * h * (1.0 - x).powf(exponent))
                }));
            }
        }
        Ok(RadialRule { exponent, panel_nodes: n, breaks, nodes })
    }

    /// Splits every panel wider than `max_width` into equal pieces.
    pub fn refined(&self, max_width: f64) -> Self {
        let mut breaks = vec![0.0];
        for w in self.breaks.windows(2) {
            let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
            for k in 1..=pieces {
                breaks.push(w[0] + (w[1] - w[0]) * k as f64 / pieces as f64);
            }
        }
        *breaks.last_mut().unwrap() = 1.0;
        Self::from_breaks(self.exponent, self.panel_nodes, breaks).expect("panel rules already built once")
    }

    /// Adds breakpoints at each point in `kinks` (inside `(0,1)`) and grades
    /// panels geometrically towards it over `levels` halvings.
    pub fn with_kinks(&self, kinks: &[f64], levels: usize) -> Self {
        let mut breaks = self.breaks.clone();
        for &c in kinks.iter().filter(|c| **c > 0.0 && **c < 1.0) {
            breaks.push(c);
            let mut d = 0.25;
            for _ in 0..levels {
                for b in [c - d, c + d] {
                    if b > 0.0 && b < 1.0 {
                        breaks.push(b);
                    }
                }
                d *= 0.5;
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        Self::from_breaks(self.exponent, self.panel_nodes, breaks).expect("panel rules already built once")
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().map(|&(x, w)| w * g(x)).sum()
    }

    /// Evaluates `g` at every node in parallel and sums in node order.
    pub fn try_integrate_par(&self, g: impl Fn(f64) -> Result<f64> + Sync) -> Result<f64> {
        let vals: Vec<f64> = self
            .nodes
            .par_iter()
            .map(|&(x, w)| g(x).map(|v| w * v))
            .collect::<Result<Vec<_>>>()?;
        Ok(vals.iter().sum())
    }
}

/// Tensor rule on the disc: radial nodes in `u = |z|^2` for the weight
/// `(1-u)^alpha` times a uniform angular grid of `angular_count` points.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    alpha: f64,
    radial: RadialRule,
    angular_count: usize,
}

impl QuadratureRule {
    /// Plain Gauss-Jacobi radial rule with `radial_node_count` nodes.
    pub fn build(alpha: f64, radial_node_count: usize, angular_count: usize) -> Result<Self> {
        check_weight(alpha)?;
        if radial_node_count < 2 {
            return Err(LabError::Parameter("need at least 2 radial nodes".into()));
        }
        Self::from_radial(alpha, RadialRule::gauss_jacobi(alpha, radial_node_count)?, angular_count)
    }

    /// Graded composite radial rule (see [`RadialRule::graded`]).
    pub fn graded(alpha: f64, n: usize, levels_zero: usize, levels_one: usize, angular_count: usize) -> Result<Self> {
        check_weight(alpha)?;
        Self::from_radial(alpha, RadialRule::graded(alpha, n, levels_zero, levels_one)?, angular_count)
    }

    fn from_radial(alpha: f64, radial: RadialRule, angular_count: usize) -> Result<Self> {
        if angular_count < 4 {
            return Err(LabError::Parameter(format!("angular count must be >= 4, got {angular_count}")));
        }
        Ok(QuadratureRule { alpha, radial, angular_count })
    }

    /// 64 radial x 256 angular.
    pub fn default_for(alpha: f64) -> Result<Self> {
        Self::build(alpha, 64, 256)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// `(u_j, w_j)` for `int_0^1 g(u) (1-u)^alpha du`.
    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        self.radial.nodes()
    }

    /// Ring radii `sqrt(u_j)` and their measure weights `(alpha+1) w_j`.
    pub fn rings(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let scale = self.alpha + 1.0;
        self.radial.nodes().iter().map(move |&(u, w)| (u.sqrt(), scale * w))
    }

    /// `int_D g dA_alpha`.
    pub fn integrate_disc(&self, g: impl Fn(Complex64) -> f64 + Sync) -> Result<f64> {
        let m = self.angular_count;
        self.integrate_rings(|rho| integrate_circle(&g, rho, m))
    }

    /// `(alpha+1) sum_j w_j h(sqrt(u_j))` for a ring-average function `h`.
    pub fn integrate_rings(&self, ring_mean: impl Fn(f64) -> Result<f64> + Sync) -> Result<f64> {
        let scale = self.alpha + 1.0;
        Ok(scale * self.radial.try_integrate_par(|u| ring_mean(u.sqrt()))?)
    }
}

/// Uniform average `(1/M) sum_m g(r e^{2 pi i m / M})`.
pub fn integrate_circle(g: impl Fn(Complex64) -> f64, r: f64, angular_count: usize) -> Result<f64> {
    if angular_count < 4 {
        return Err(LabError::Parameter(format!("angular count must be >= 4, got {angular_count}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(LabError::Parameter(format!("circle radius must lie in [0, 1], got {r}")));
    }
    let mut acc = 0.0;
    for m in 0..angular_count {
        let z = Complex64::from_polar(r, 2.0 * PI * m as f64 / angular_count as f64);
        let v = g(z);
        if !v.is_finite() {
            return Err(LabError::Evaluation { node: z });
        }
        acc += v;
    }
    Ok(acc / angular_count as f64)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7/15 panel with the QUADPACK error scaling.
fn gk15(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut pairs = [(0.0, 0.0); 7];
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * GAUSS7_WEIGHTS[3];
    let mut resabs = kronrod.abs();
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let (f1, f2) = (g(c - x), g(c + x));
        pairs[i] = (f1, f2);
        kronrod += GK_WEIGHTS[i] * (f1 + f2);
        resabs += GK_WEIGHTS[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += GAUSS7_WEIGHTS[i / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = GK_WEIGHTS[7] * (fc - mean).abs();
    for i in 0..7 {
        resasc += GK_WEIGHTS[i] * ((pairs[i].0 - mean).abs() + (pairs[i].1 - mean).abs());
    }
    let (resasc, resabs) = (resasc * h.abs(), resabs * h.abs());
    let mut err = ((kronrod - gauss) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (kronrod * h, err)
}

/// Adaptive Gauss-Kronrod average over `[0, 2pi)` of `theta -> g(r e^{i theta})`,
/// to within `max(rel_tol |average|, abs_tol)`. Each `(angle, width)` in
/// `peaks` marks a spike; the initial partition is graded towards it so
/// that spikes narrower than the first Kronrod nodes are not missed.
pub(crate) fn adaptive_circle_average(
    g: &(dyn Fn(Complex64) -> f64 + Sync),
    r: f64,
    rel_tol: f64,
    abs_tol: f64,
    peaks: &[(f64, f64)],
) -> Result<f64> {
    let bad = std::cell::Cell::new(None);
    let h = |theta: f64| {
        let z = Complex64::from_polar(r, theta);
        let v = g(z);
        if !v.is_finite() && bad.get().is_none() {
            bad.set(Some(z));
        }
        v
    };
    let mut breaks = vec![0.0, 2.0 * PI];
    for &(angle, width) in peaks {
        let c = angle.rem_euclid(2.0 * PI);
        breaks.push(c);
        let mut d = width.max(1e-15);
        while d < PI {
            breaks.extend([(c - d).rem_euclid(2.0 * PI), (c + d).rem_euclid(2.0 * PI)]);
            d *= 4.0;
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| *a - *b <= 1e-15);
    // global strategy: bisect the segment with the largest error estimate
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let (v, e) = gk15(&h, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Segment { a: w[0], b: w[1], value: v, err: e });
    }
    loop {
        if let Some(node) = bad.get() {
            return Err(LabError::Evaluation { node });
        }
        if err <= (rel_tol * total.abs()).max(2.0 * PI * abs_tol) || heap.len() >= 4000 {
            // running sums drift; confirm with exact sums before stopping
            total = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.err).sum();
            if err <= (rel_tol * total.abs()).max(2.0 * PI * abs_tol) || heap.len() >= 4000 {
                break;
            }
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&h, worst.a, mid);
        let (v2, e2) = gk15(&h, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
    }
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let total: f64 = segments.iter().map(|s| s.value).sum();
    Ok(total / (2.0 * PI))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of [`adaptive_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveValue {
    pub value: f64,
    /// Gap between the last two refinements (after extrapolation when used).
    pub estimate: f64,
    pub refinements: usize,
}

/// `int_D g dA_alpha` by successive refinement.
///
/// Each refinement deepens the geometric grading of the radial panels
/// towards the boundary and tightens the adaptive angular tolerance. The
/// loop stops when two successive values agree to `target_rel_tol`, or when
/// their Aitken-extrapolated values do while the differences contract
/// geometrically (algebraic boundary singularities). After 12 refinements
/// without agreement a [`LabError::ToleranceNotMet`] is returned.
pub fn adaptive_integrate(
    g: impl Fn(Complex64) -> f64 + Sync,
    alpha: f64,
    target_rel_tol: f64,
) -> Result<AdaptiveValue> {
    adaptive_integrate_floor(g, alpha, target_rel_tol, |_| 0.0, |_| Vec::new())
}

/// [`adaptive_integrate`] where the circle average at radius `rho` may stop
/// once its error is below `floor(rho)` and starts from a partition graded
/// towards `peaks(rho)`.
pub(crate) fn adaptive_integrate_floor(
    g: impl Fn(Complex64) -> f64 + Sync,
    alpha: f64,
    target_rel_tol: f64,
    floor: impl Fn(f64) -> f64 + Sync,
    peaks: impl Fn(f64) -> Vec<(f64, f64)> + Sync,
) -> Result<AdaptiveValue> {
    check_weight(alpha)?;
    if !(target_rel_tol >= 1e-12) {
        return Err(LabError::Parameter(format!("tolerance must be >= 1e-12, got {target_rel_tol}")));
    }
    let angular_tol = (target_rel_tol * 1e-2).max(1e-14);
    let mut values: Vec<f64> = Vec::new();
    let mut extrapolated: Vec<f64> = Vec::new();
    for level in 0..=12 {
        let rule = RadialRule::graded(alpha, 10, 12, 4 + 3 * level)?;
        let v = (alpha + 1.0)
            * rule.try_integrate_par(|u| {
                let rho = u.sqrt();
                adaptive_circle_average(&g, rho, angular_tol, floor(rho), &peaks(rho))
            })?;
        values.push(v);
        let n = values.len();
        if n >= 2 {
            let gap = (values[n - 1] - values[n - 2]).abs();
            if gap <= target_rel_tol * v.abs() {
                return Ok(AdaptiveValue { value: v, estimate: gap, refinements: level });
            }
        }
        if n >= 3 {
            let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
            let d1 = b - a;
            let d2 = c - b;
            let ratio = d2 / d1;
            if d1 != 0.0 && ratio > 0.0 && ratio < 0.9 {
                extrapolated.push(c + d2 * ratio / (1.0 - ratio));
                let m = extrapolated.len();
                if m >= 2 {
                    let gap = (extrapolated[m - 1] - extrapolated[m - 2]).abs();
                    if gap <= target_rel_tol * extrapolated[m - 1].abs() {
                        return Ok(AdaptiveValue { value: extrapolated[m - 1], estimate: gap, refinements: level });
                    }
                }
            } else {
                extrapolated.clear();
            }
        }
    }
    let n = values.len();
    Err(LabError::ToleranceNotMet { best: values[n - 1], gap: (values[n - 1] - values[n - 2]).abs() })
}

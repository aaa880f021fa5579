//! Circle and area integral means, Bergman and Hardy norms, and the
//! second-difference smoothness estimate.
//!
//! All area means reduce to one-dimensional radial integrals of the circle
//! mean `M_p(rho, f)^p`. Ring means use the trapezoid rule (spectrally
//! accurate for smooth periodic integrands, exact for `|poly|^p` with even
//! `p` on a fine enough grid) and switch to adaptive Gauss-Kronrod when a
//! boundary singularity makes the integrand too sharply peaked.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{abs_pow, AnalyticFunction};
use crate::error::{LabError, Result};
use crate::quadrature::{adaptive_circle_average, adaptive_integrate_floor, RadialRule};
use crate::special::check_weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeanKind {
    /// `M_p(r, f)`.
    CircleMp,
    /// `A_{p,alpha}(r, f)`: dilation hits both `f` and the weight.
    AreaA,
    /// `A~_{p,alpha}(r, f)`: `f` over `rD` against `(1-|z|^2)^alpha`.
    AreaATilde,
    /// `A^_{p,alpha}(r, f) = ||f_r||`.
    AreaAHat,
    /// `f` over `rD` against `(1-|z/r|^2)^alpha`.
    AreaAHatTilde,
}

impl MeanKind {
    pub const ALL: [MeanKind; 5] =
        [MeanKind::CircleMp, MeanKind::AreaA, MeanKind::AreaATilde, MeanKind::AreaAHat, MeanKind::AreaAHatTilde];

    pub fn name(self) -> &'static str {
        match self {
            MeanKind::CircleMp => "M",
            MeanKind::AreaA => "A",
            MeanKind::AreaATilde => "A_tilde",
            MeanKind::AreaAHat => "A_hat",
            MeanKind::AreaAHatTilde => "A_hat_tilde",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', ' '], "_");
        Ok(match key.as_str() {
            "m" | "mp" | "circle" | "circle_mp" => MeanKind::CircleMp,
            "a" | "area" | "area_a" => MeanKind::AreaA,
            "a_tilde" | "tilde" | "area_a_tilde" => MeanKind::AreaATilde,
            "a_hat" | "hat" | "area_a_hat" => MeanKind::AreaAHat,
            "a_hat_tilde" | "hat_tilde" | "area_a_hat_tilde" => MeanKind::AreaAHatTilde,
            _ => return Err(LabError::Parameter(format!("unknown mean kind '{s}'"))),
        })
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const RING_REL_TOL: f64 = 1e-13;
/// Ring tolerance for second-difference profiles.
pub const PROFILE_RING_TOL: f64 = 1e-10;
const POLY_RING_CAP: usize = 1 << 10;
const CLOSED_RING_CAP: usize = 1 << 9;
const PANEL_NODES: usize = 16;
/// Panel size once the ring tolerance is 1e-11 or coarser.
const COARSE_PANEL_NODES: usize = 10;
const LEVELS_ZERO: usize = 30;

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(LabError::Parameter(format!("exponent p must be positive and finite, got {p}")));
    }
    Ok(())
}

/// `M_p(rho, f)^p`, accurate to about 1e-13 relative.
pub fn circle_mean_pow(f: &AnalyticFunction, p: f64, rho: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(LabError::Parameter(format!("radius must lie in [0, 1], got {rho}")));
    }
    if rho == 1.0 && !f.is_polynomial() {
        return Err(LabError::Parameter("r = 1 is only allowed for polynomials".into()));
    }
    let v = ring_mean_pow(f, p, rho, RING_REL_TOL)?;
    if !v.is_finite() {
        return Err(LabError::NonFiniteMean { radius: rho });
    }
    Ok(v)
}

fn pow2ceil(x: f64) -> usize {
    let x = x.clamp(1.0, (1u64 << 40) as f64);
    (x.ceil() as usize).next_power_of_two()
}

/// Level below which errors in an average of `|f|^p` over the circle of
/// radius `rho` are rounding noise: evaluations of `f` carry an absolute
/// error of about `eps` times the sum of the moduli of its pieces.
fn noise_floor(f: &AnalyticFunction, p: f64, rho: f64) -> f64 {
    let noise = 1e3 * f64::EPSILON * f.magnitude_scale(rho);
    let rough = f.ring_abs_pow_sum(rho, 64, p) / 64.0;
    p * noise * rough.powf((p - 1.0) / p) + noise.powf(p)
}

pub(crate) fn ring_mean_pow(f: &AnalyticFunction, p: f64, rho: f64, tol: f64) -> Result<f64> {
    if rho == 0.0 || (f.degree() == 0 && f.closed_terms().is_empty()) {
        return Ok(abs_pow(f.value_at_zero(), p));
    }
    if f.is_polynomial() {
        let mut nonzero = f.coeffs().iter().enumerate().filter(|(_, c)| c.norm() != 0.0);
        if let (Some((n, c)), None) = (nonzero.next(), nonzero.next()) {
            return Ok(c.norm().powf(p) * rho.powf(n as f64 * p));
        }
    }
    let deg = f.degree() as f64;
    // cancellation between pieces (e.g. f - f(0) near 0) caps attainable relative accuracy
    let floor = (tol * f.magnitude_scale(rho).powf(p)).max(noise_floor(f, p, rho));
    let poly_nodes = p.max(2.0) * deg + 1.0;
    let mut m;
    let cap;
    if f.is_polynomial() {
        m = pow2ceil(poly_nodes).max(8);
        // |poly|^p with even integer p is a trigonometric polynomial of degree p*deg
        if p.fract() == 0.0 && (p as u64) % 2 == 0 {
            return Ok(f.ring_abs_pow_sum(rho, m, p) / m as f64);
        }
        cap = POLY_RING_CAP.max(2 * m);
    } else {
        let gap = (1.0 - rho * f.sharpness()).max(f64::MIN_POSITIVE);
        let wanted = (32.0 / gap).max(poly_nodes);
        if wanted > CLOSED_RING_CAP as f64 {
            return adaptive_circle_average(&|z| abs_pow(f.eval_unchecked(z), p), rho, tol, floor, &f.peaks(rho));
        }
        m = pow2ceil(wanted).max(16);
        cap = CLOSED_RING_CAP * 4;
    }
    let mut prev = f.ring_abs_pow_sum(rho, m, p) / m as f64;
    let mut agreed = false;
    loop {
        m *= 2;
        let next = f.ring_abs_pow_sum(rho, m, p) / m as f64;
        // two agreements in a row guard against accidental coincidences
        if (next - prev).abs() <= (tol * next.abs()).max(floor) {
            if agreed {
                return Ok(next);
            }
            agreed = true;
        } else {
            agreed = false;
        }
        if m >= cap {
            // slow trapezoid convergence means a zero or pole sits near the
            // circle; adaptive bisection localizes it
            return adaptive_circle_average(&|z| abs_pow(f.eval_unchecked(z), p), rho, tol, floor, &f.peaks(rho));
        }
        prev = next;
    }
}

/// Length scale on which the radial integrand varies near the top of the
/// range: distance to the nearest singularity, or `1/degree` for polynomials.
fn radial_gap(f: &AnalyticFunction, r: f64) -> f64 {
    let mut gap: f64 = 1.0;
    let s = f.sharpness();
    if s > 0.0 {
        gap = gap.min(1.0 - r * s);
    }
    if f.degree() > 0 {
        gap = gap.min((1.0 - r).max(1.0 / f.degree() as f64));
    }
    gap.max(1e-15)
}

fn levels_for(gap: f64) -> usize {
    ((1.0 / gap).log2().ceil().max(0.0) as usize + 6).clamp(6, 52)
}

/// Radii in `(0,1)` where `M_p(rho, f)^p` loses smoothness: circles through
/// zeros of `f`, which matter unless `p` is an even integer.
fn kink_radii(f: &AnalyticFunction, p: f64) -> Vec<f64> {
    let even = p.fract() == 0.0 && (p as u64) % 2 == 0;
    if even || f.degree() > 64 {
        return Vec::new();
    }
    let mut radii: Vec<f64> =
        f.zeros().unwrap_or_default().iter().map(|z| z.norm()).filter(|r| *r > 1e-12 && *r < 1.0).collect();
    radii.sort_by(f64::total_cmp);
    // conjugate pairs of real-coefficient polynomials share a radius
    radii.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    radii
}

/// Grading depth towards a kink, where `M_p^p` behaves like `|rho - rho_0|^{p+1}`:
/// the innermost panel width `w` should satisfy `w^{p+2} < tol`.
fn kink_levels(tol: f64, p: f64) -> usize {
    ((-tol.log2()) / (p + 2.0) - 2.0).ceil().clamp(3.0, 12.0) as usize
}

/// Graded rule for one radial route. `var` maps a radius to the route's
/// integration variable (so kinks land on breakpoints).
fn rule_for(
    exponent: f64,
    f: &AnalyticFunction,
    r: f64,
    extra_gap: f64,
    p: f64,
    tol: f64,
    var: impl Fn(f64) -> f64,
) -> Result<RadialRule> {
    let gap = radial_gap(f, r).min(extra_gap.max(1e-15));
    // M_p(rho)^p is smooth in rho^2 near 0 unless f(0) = 0 (then it behaves like rho^{kp})
    let levels_zero = if f.value_at_zero() == Complex64::new(0.0, 0.0) { LEVELS_ZERO } else { 3 };
    let nodes = if tol < 1e-11 { PANEL_NODES } else { COARSE_PANEL_NODES };
    let mut rule = RadialRule::graded(exponent, nodes, levels_zero, levels_for(gap))?;
    let deg = f.degree() as f64;
    if deg * p.max(1.0) > 32.0 {
        // high-degree polynomials: keep panels narrower than the scale 1/(p deg)
        rule = rule.refined(16.0 / (p.max(1.0) * deg));
    }
    let kinks: Vec<f64> = kink_radii(f, p).into_iter().map(var).collect();
    if !kinks.is_empty() {
        rule = rule.with_kinks(&kinks, kink_levels(tol, p));
    }
    Ok(rule)
}

/// `mean(kind, ...)^p` for area kinds and `M_p^p` for the circle kind.
pub fn mean_pow(kind: MeanKind, f: &AnalyticFunction, p: f64, alpha: f64, r: f64) -> Result<f64> {
    mean_pow_tol(kind, f, p, alpha, r, RING_REL_TOL)
}

/// [`mean_pow`] with ring averages computed to relative tolerance `tol`
/// (the default is 1e-13); coarser tolerances are much cheaper for
/// polynomials with many zeros when `p` is not an even integer.
pub fn mean_pow_tol(kind: MeanKind, f: &AnalyticFunction, p: f64, alpha: f64, r: f64, tol: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(tol > 0.0) {
        return Err(LabError::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    if kind == MeanKind::CircleMp {
        if !(0.0..=1.0).contains(&r) || (r == 1.0 && !f.is_polynomial()) {
            return circle_mean_pow(f, p, r);
        }
        let v = ring_mean_pow(f, p, r, tol)?;
        return if v.is_finite() { Ok(v) } else { Err(LabError::NonFiniteMean { radius: r }) };
    }
    check_weight(alpha)?;
    if !(0.0..1.0).contains(&r) {
        return Err(LabError::Parameter(format!("area means need r in [0, 1), got {r}")));
    }
    let f0 = abs_pow(f.value_at_zero(), p);
    if r == 0.0 {
        return Ok(match kind {
            MeanKind::AreaA | MeanKind::AreaAHat => f0,
            _ => 0.0,
        });
    }
    let a1 = alpha + 1.0;
    let ring = |rho: f64| {
        let v = ring_mean_pow(f, p, rho, tol)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LabError::NonFiniteMean { radius: rho })
        }
    };
    let value = match kind {
        MeanKind::CircleMp => unreachable!(),
        // u = |z|^2 in [0,1], weight (1-u)^alpha
        MeanKind::AreaAHat => {
            let rule = rule_for(alpha, f, r, 1.0, p, tol, |rho| (rho / r).powi(2))?;
            a1 * rule.try_integrate_par(|u| ring(r * u.sqrt()))?
        }
        // u-route with the dilated weight (1 - r^2 u)^alpha
        MeanKind::AreaA => {
            let rule = rule_for(0.0, f, r, 1.0 - r * r, p, tol, |rho| (rho / r).powi(2))?;
            a1 * rule.try_integrate_par(|u| Ok(ring(r * u.sqrt())? * (1.0 - r * r * u).powf(alpha)))?
        }
        // rho = r x, x in [0,1]: int_0^r M^p(rho) (1-rho^2)^alpha 2 rho d rho
        MeanKind::AreaATilde => {
            let rule = rule_for(0.0, f, r, 1.0 - r, p, tol, |rho| rho / r)?;
            a1 * r
                * r
                * rule.try_integrate_par(|x| {
                    let rho = r * x;
                    Ok(ring(rho)? * (1.0 - rho * rho).powf(alpha) * 2.0 * x)
                })?
        }
        // x = rho / r with weight (1-x)^alpha; (1-x^2)^alpha = (1-x)^alpha (1+x)^alpha
        MeanKind::AreaAHatTilde => {
            let rule = rule_for(alpha, f, r, 1.0, p, tol, |rho| rho / r)?;
            a1 * r * r * rule.try_integrate_par(|x| Ok(ring(r * x)? * (1.0 + x).powf(alpha) * 2.0 * x))?
        }
    };
    if !value.is_finite() {
        return Err(LabError::NonFiniteMean { radius: r });
    }
    Ok(value)
}

/// One of the five integral means at radius `r`.
pub fn mean(kind: MeanKind, f: &AnalyticFunction, p: f64, alpha: f64, r: f64) -> Result<f64> {
    Ok(mean_pow(kind, f, p, alpha, r)?.powf(1.0 / p))
}

/// Means at several radii, evaluated in parallel, in input order.
pub fn mean_profile(kind: MeanKind, f: &AnalyticFunction, p: f64, alpha: f64, radii: &[f64]) -> Result<Vec<f64>> {
    mean_profile_tol(kind, f, p, alpha, radii, RING_REL_TOL)
}

/// [`mean_profile`] with ring averages to relative tolerance `tol`.
pub fn mean_profile_tol(
    kind: MeanKind,
    f: &AnalyticFunction,
    p: f64,
    alpha: f64,
    radii: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    radii.par_iter().map(|&r| Ok(mean_pow_tol(kind, f, p, alpha, r, tol)?.powf(1.0 / p))).collect()
}

/// `r_j = 1 - 2^{-j}` for `j` in `j_min..=j_max`.
pub fn radii_ladder(j_min: u32, j_max: u32) -> Vec<f64> {
    (j_min..=j_max).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

/// Relative tolerance used by [`bergman_norm`] for closed forms.
pub const NORM_REL_TOL: f64 = 1e-9;

/// `||f||_{A^p_alpha}`.
pub fn bergman_norm(f: &AnalyticFunction, p: f64, alpha: f64) -> Result<f64> {
    Ok(bergman_norm_pow(f, p, alpha)?.powf(1.0 / p))
}

/// `||f||^p_{A^p_alpha}`.
pub fn bergman_norm_pow(f: &AnalyticFunction, p: f64, alpha: f64) -> Result<f64> {
    bergman_norm_pow_tol(f, p, alpha, RING_REL_TOL)
}

/// [`bergman_norm`] with ring averages to relative tolerance `tol`. Closed
/// forms settle to `max(1e3 tol, NORM_REL_TOL)`.
pub fn bergman_norm_tol(f: &AnalyticFunction, p: f64, alpha: f64, tol: f64) -> Result<f64> {
    Ok(bergman_norm_pow_tol(f, p, alpha, tol)?.powf(1.0 / p))
}

fn bergman_norm_pow_tol(f: &AnalyticFunction, p: f64, alpha: f64, tol: f64) -> Result<f64> {
    check_exponent(p)?;
    check_weight(alpha)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    if f.is_polynomial() {
        let rule = rule_for(alpha, f, 1.0, 1.0, p, tol, |rho| rho * rho)?;
        let v = (alpha + 1.0) * rule.try_integrate_par(|u| ring_mean_pow(f, p, u.sqrt(), tol))?;
        return if v.is_finite() { Ok(v) } else { Err(LabError::NonFiniteMean { radius: 1.0 }) };
    }
    let g = |z: Complex64| abs_pow(f.eval_unchecked(z), p);
    let floor = |rho: f64| noise_floor(f, p, rho);
    match adaptive_integrate_floor(g, alpha, (tol * 1e3).max(NORM_REL_TOL), floor, |rho| f.peaks(rho)) {
        Ok(v) => Ok(v.value),
        Err(LabError::ToleranceNotMet { best, gap }) => Err(LabError::NormDivergent(format!(
            "A^{p}_{alpha} norm of {} did not settle (last value {best:.6e}, gap {gap:.3e})",
            f.label()
        ))),
        Err(e) => Err(e),
    }
}

/// Accelerates a sequence with Wynn's epsilon algorithm and returns the
/// successive even-column estimates along the last diagonal.
fn wynn_estimates(seq: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for n in 0..seq.len() {
        // build the table for seq[0..=n] and read the deepest even entry
        let mut prev: Vec<f64> = vec![0.0; n + 2];
        let mut cur: Vec<f64> = seq[..=n].to_vec();
        let mut best = seq[n];
        let mut col = 0;
        while cur.len() > 1 {
            let next: Vec<f64> = (0..cur.len() - 1)
                .map(|i| {
                    let d = cur[i + 1] - cur[i];
                    if d == 0.0 {
                        f64::INFINITY
                    } else {
                        prev[i + 1] + 1.0 / d
                    }
                })
                .collect();
            prev = cur;
            cur = next;
            col += 1;
            if col % 2 == 0 {
                match cur.last() {
                    Some(v) if v.is_finite() => best = *v,
                    _ => break,
                }
            }
        }
        out.push(best);
    }
    out
}

/// Agreement required between successive ladder values in [`hardy_norm`].
pub const HARDY_REL_TOL: f64 = 1e-6;

/// `||f||_{H^p} = sup_r M_p(r, f)`.
///
/// Polynomials are evaluated on the unit circle. Other functions use the
/// ladder `r_j = 1 - 2^{-j}`, `j <= 14`, accepting the first value (raw or
/// epsilon-accelerated) that agrees with its predecessor.
pub fn hardy_norm(f: &AnalyticFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if f.is_polynomial() {
        return Ok(circle_mean_pow(f, p, 1.0)?.powf(1.0 / p));
    }
    let radii = radii_ladder(1, 14);
    let values = mean_profile(MeanKind::CircleMp, f, p, 0.0, &radii)?;
    let accelerated = wynn_estimates(&values);
    for j in 1..values.len() {
        let (a, b) = (values[j - 1], values[j]);
        if (b - a).abs() <= HARDY_REL_TOL * b.abs() {
            return Ok(b);
        }
        if j >= 4 {
            let (a, b) = (accelerated[j - 1], accelerated[j]);
            if (b - a).abs() <= HARDY_REL_TOL * b.abs() && b >= values[j] {
                return Ok(b);
            }
        }
    }
    Err(LabError::NormDivergent(format!(
        "H^{p} norm of {}: M_p still moving at r = 1 - 2^-14 (last {:.6e})",
        f.label(),
        values[values.len() - 1]
    )))
}

/// Second-difference smoothness profile of `f` in `A^p_alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub beta: f64,
    /// Largest `||Delta^2_t f|| / t^beta` over the grid: a lower bound for
    /// the seminorm.
    pub constant_estimate: f64,
    pub t_grid: Vec<f64>,
    /// `||Delta^2_t f||` at each grid point.
    pub norms: Vec<f64>,
    /// `||Delta^2_t f|| / t^beta` at each grid point.
    pub per_t_values: Vec<f64>,
}

/// `t = pi 2^{-j}`, `j = 0..=10`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=10).map(|j| PI * 0.5f64.powi(j)).collect()
}

pub fn lambda_star_seminorm(
    f: &AnalyticFunction,
    p: f64,
    alpha: f64,
    beta: f64,
    t_grid: &[f64],
) -> Result<HolderEstimate> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(LabError::Parameter(format!("beta must lie in (0, 2], got {beta}")));
    }
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0 && t <= PI)) {
        return Err(LabError::Parameter("t-grid values must lie in (0, pi]".into()));
    }
    let norms: Vec<f64> =
        t_grid.par_iter().map(|&t| bergman_norm_tol(&f.second_difference(t), p, alpha, PROFILE_RING_TOL)).collect::<Result<_>>()?;
    let per_t_values: Vec<f64> = norms.iter().zip(t_grid).map(|(n, t)| n / t.powf(beta)).collect();
    let constant_estimate = per_t_values.iter().cloned().fold(0.0, f64::max);
    Ok(HolderEstimate { beta, constant_estimate, t_grid: t_grid.to_vec(), norms, per_t_values })
}

/// `(abscissa, value)` rows with a column header, for plotting.
pub fn profile_csv(x_name: &str, y_name: &str, xs: &[f64], ys: &[f64]) -> String {
    let mut out = format!("{x_name},{y_name}\n");
    for (x, y) in xs.iter().zip(ys) {
        out.push_str(&format!("{x:.17e},{y:.17e}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{m_alpha_p, monomial_norm};
    use crate::TestFunction;
    use approx::assert_relative_eq;

    #[test]
    fn trivial_examples() {
        let one = AnalyticFunction::constant(Complex64::new(1.0, 0.0));
        for &r in &[0.0, 0.3, 0.99] {
            assert_relative_eq!(mean(MeanKind::AreaAHat, &one, 1.7, 0.4, r).unwrap(), 1.0, max_relative = 1e-13);
        }
        let z3 = AnalyticFunction::monomial(3);
        for &r in &[0.2, 0.7, 1.0] {
            assert_relative_eq!(mean(MeanKind::CircleMp, &z3, 1.3, 0.0, r).unwrap(), r.powi(3), max_relative = 1e-13);
        }
        let z = AnalyticFunction::monomial(1);
        for &r in &[0.25, 0.5, 0.9] {
            assert_relative_eq!(mean(MeanKind::AreaAHat, &z, 1.0, 0.0, r).unwrap(), 2.0 * r / 3.0, max_relative = 1e-12);
        }
        let c = AnalyticFunction::constant(Complex64::new(0.0, -2.5));
        assert_relative_eq!(bergman_norm(&c, 3.0, 0.5).unwrap(), 2.5, max_relative = 1e-14);
    }

    #[test]
    fn errors() {
        let z = AnalyticFunction::monomial(1);
        assert!(matches!(mean(MeanKind::AreaA, &z, 2.0, 0.0, 1.0), Err(LabError::Parameter(_))));
        assert!(matches!(mean(MeanKind::AreaA, &z, 2.0, -1.0, 0.5), Err(LabError::Parameter(_))));
        assert!(matches!(mean(MeanKind::CircleMp, &z, 0.0, 0.0, 0.5), Err(LabError::Parameter(_))));
        let pole = AnalyticFunction::pole_power(0.5).unwrap();
        assert!(matches!(mean(MeanKind::CircleMp, &pole, 2.0, 0.0, 1.0), Err(LabError::Parameter(_))));
        // p < 1 is accepted
        assert!(mean(MeanKind::AreaAHat, &z, 0.5, 0.0, 0.5).is_ok());
    }

    #[test]
    fn monomial_norms() {
        for n in [0u32, 1, 3, 7] {
            for &p in &[1.0, 4.0 / 3.0, 2.5] {
                for &alpha in &[-0.5, 0.0, 1.0] {
                    let f = AnalyticFunction::monomial(n as usize);
                    let got = bergman_norm(&f, p, alpha).unwrap();
                    assert_relative_eq!(got, monomial_norm(n, p, alpha).unwrap(), max_relative = 1e-11);
                }
            }
        }
    }

    #[test]
    fn pole_norms() {
        // ||(1-z)^{-g}||^2 in A^2_alpha by Gauss summation
        for &(g, alpha) in &[(0.4, 0.0), (0.75, 0.0), (0.5, -0.5), (1.2, 1.0)] {
            let f = AnalyticFunction::pole_power(g).unwrap();
            let got = bergman_norm_pow(&f, 2.0, alpha).unwrap();
            let want = crate::testing::pole_square_norm_series(g, alpha);
            assert_relative_eq!(got, want, max_relative = 1e-7);
        }
        let f = AnalyticFunction::pole_power(1.0).unwrap();
        assert!(matches!(bergman_norm(&f, 2.0, 0.0), Err(LabError::NormDivergent(_))));
    }

    #[test]
    fn hardy_norm_of_pole() {
        let g = 0.25;
        let f = AnalyticFunction::pole_power(g).unwrap();
        // Parseval: sum of squared binomial-series coefficients, with the tail
        // a_n^2 ~ n^{2g-2} / Gamma(g)^2 summed in closed form
        let mut a: f64 = 1.0;
        let mut sum = 0.0;
        let n_max = 2_000_000usize;
        for n in 0..n_max {
            sum += a * a;
            a *= (n as f64 + g) / (n as f64 + 1.0);
        }
        let gg = statrs::function::gamma::gamma(g);
        let tail = (n_max as f64).powf(2.0 * g - 1.0) / ((1.0 - 2.0 * g) * gg * gg);
        let want = (sum + tail).sqrt();
        assert_relative_eq!(hardy_norm(&f, 2.0).unwrap(), want, max_relative = 2e-6);
        let blowup = AnalyticFunction::pole_power(1.0).unwrap();
        assert!(matches!(hardy_norm(&blowup, 2.0), Err(LabError::NormDivergent(_))));
    }

    #[test]
    fn mean_identities_on_random_polynomials() {
        for seed in 0..3u64 {
            let f = TestFunction::RandomPolynomial { degree: 8, decay: 1.0, seed }.build().unwrap();
            for &p in &[1.0, 2.0, 3.0] {
                for &alpha in &[-0.5, 0.0, 2.0] {
                    for &r in &[0.1f64, 0.5, 0.9, 0.999] {
                        let s = r.powf(2.0 / p);
                        let a = mean(MeanKind::AreaA, &f, p, alpha, r).unwrap();
                        let at = mean(MeanKind::AreaATilde, &f, p, alpha, r).unwrap();
                        assert_relative_eq!(at, s * a, max_relative = 1e-10);
                        let ah = mean(MeanKind::AreaAHat, &f, p, alpha, r).unwrap();
                        let aht = mean(MeanKind::AreaAHatTilde, &f, p, alpha, r).unwrap();
                        assert_relative_eq!(aht, s * ah, max_relative = 1e-10);
                        if alpha <= 0.0 {
                            assert!(a <= ah * (1.0 + 1e-12));
                        } else {
                            assert!(ah <= a * (1.0 + 1e-12));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pole_means_near_boundary() {
        // M_2(r, (1-z)^{-1})^2 = 1/(1-r^2)
        let f = AnalyticFunction::pole_power(1.0).unwrap();
        for &r in &[0.5, 0.99, 1.0 - 1.0 / 4096.0, 1.0 - 1.0 / 65536.0] {
            let v = circle_mean_pow(&f, 2.0, r).unwrap();
            assert_relative_eq!(v, 1.0 / (1.0 - r * r), max_relative = 1e-11);
        }
        // A^_{2,0}(r, (1-z)^{-1})^2 = sum r^{2n}/(n+1) = -log(1-r^2)/r^2
        for &r in &[0.5, 0.99, 1.0 - 1.0 / 4096.0] {
            let v = mean_pow(MeanKind::AreaAHat, &f, 2.0, 0.0, r).unwrap();
            assert_relative_eq!(v, -(1.0 - r * r).ln() / (r * r), max_relative = 1e-10);
        }
    }

    #[test]
    fn seminorm_examples() {
        let c = AnalyticFunction::constant(Complex64::new(3.0, 1.0));
        let est = lambda_star_seminorm(&c, 2.0, 0.0, 1.0, &default_t_grid()).unwrap();
        assert_eq!(est.constant_estimate, 0.0);

        let z = AnalyticFunction::monomial(1);
        let (p, alpha) = (1.5, 0.5);
        let grid = default_t_grid();
        let est = lambda_star_seminorm(&z, p, alpha, 2.0, &grid).unwrap();
        let m = m_alpha_p(alpha, p).unwrap();
        for (t, v) in grid.iter().zip(&est.per_t_values) {
            assert_relative_eq!(*v, 2.0 * (1.0 - t.cos()) / (t * t) * m, max_relative = 1e-10);
        }
        assert!(est.constant_estimate <= m);
        let z2 = AnalyticFunction::monomial(2);
        let est = lambda_star_seminorm(&z2, 2.0, 0.0, 1.0, &[PI]).unwrap();
        assert!(est.constant_estimate < 1e-15);
        assert!(lambda_star_seminorm(&z2, 2.0, 0.0, 2.5, &[PI]).is_err());
    }

    #[test]
    fn pole_second_differences_at_small_t() {
        let f = AnalyticFunction::pole_power(0.5).unwrap();
        let grid = [PI / 512.0, PI / 1024.0];
        let est = lambda_star_seminorm(&f, 2.0, 0.0, 0.5, &grid).unwrap();
        for (t, n) in grid.iter().zip(&est.norms) {
            let oracle = crate::testing::pole_second_difference_square_norm(0.5, *t).sqrt();
            assert_relative_eq!(*n, oracle, max_relative = 1e-6);
        }
    }

    #[test]
    fn wynn_accelerates_geometric_tails() {
        let seq: Vec<f64> = (0..12).map(|j| 1.0 + 0.7f64.powi(j) + 0.3 * 0.5f64.powi(j)).collect();
        let est = wynn_estimates(&seq);
        assert!((est[11] - 1.0).abs() < 1e-10);
    }
}

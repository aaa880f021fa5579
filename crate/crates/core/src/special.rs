//! Special functions and the explicit constants used by the theorem verifiers.
//!
//! Gamma values come from a Lanczos approximation (g = 7, nine terms), which
//! is good to roughly fifteen significant digits for positive arguments.
//! The Gauss hypergeometric function is summed as a power series, with the
//! `x -> 1 - x` connection formula used close to `x = 1`.

use std::f64::consts::PI;

use crate::error::{LabError, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument, Gamma(x + 1) is being evaluated
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Natural logarithm of `|Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// Gamma function for real arguments. Poles return an infinity.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x > 140.0 {
        return ln_gamma(x).exp();
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x)
}

/// `1 / Gamma(x)`, which is entire; zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-9
}

const SERIES_REL_TOL: f64 = 1e-15;
const SERIES_MAX_TERMS: usize = 20_000_000;

fn hypergeometric_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small_run = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= SERIES_REL_TOL * sum.abs() {
            small_run += 1;
            // two consecutive tiny terms guard against an accidental near-zero term
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(LabError::Numeric(format!(
        "2F1({a}, {b}; {c}; {x}) series did not converge"
    )))
}

/// Gauss hypergeometric function `2F1(a, b; c; x)` for `x` in `[0, 1)`.
///
/// For `x > 0.7` the connection formula to `1 - x` is used when `c - a - b`
/// is not an integer. When it is an integer the direct series is still
/// summed if it terminates or if `c - a - b > 0` (the series then converges
/// on the closed unit interval); any other combination is rejected.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(LabError::Domain(format!(
            "2F1 lower parameter c = {c} is a non-positive integer"
        )));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(LabError::Domain(format!("2F1 argument x = {x} outside [0, 1)")));
    }
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if x <= 0.7 || terminating {
        return hypergeometric_series(a, b, c, x);
    }
    let s = c - a - b;
    if !near_integer(s) {
        let y = 1.0 - x;
        let gc = gamma(c);
        let first = gc * gamma(s) * recip_gamma(c - a) * recip_gamma(c - b);
        let second = gc * gamma(-s) * recip_gamma(a) * recip_gamma(b);
        let mut value = 0.0;
        if first != 0.0 {
            value += first * hypergeometric_series(a, b, a + b - c + 1.0, y)?;
        }
        if second != 0.0 {
            value += second * y.powf(s) * hypergeometric_series(c - a, c - b, s + 1.0, y)?;
        }
        return Ok(value);
    }
    if s > 0.0 {
        return hypergeometric_series(a, b, c, x);
    }
    Err(LabError::UnsupportedParameters(format!(
        "2F1({a}, {b}; {c}; {x}): c - a - b = {s} is a non-positive integer near x = 1"
    )))
}

/// Value of `2F1(a, b; c; 1)` by Gauss's summation theorem (needs `c - a - b > 0`).
pub fn gauss_2f1_at_one(a: f64, b: f64, c: f64) -> Result<f64> {
    let s = c - a - b;
    if s <= 0.0 || is_nonpositive_integer(c) {
        return Err(LabError::Domain(format!(
            "2F1({a}, {b}; {c}; 1) diverges (c - a - b = {s})"
        )));
    }
    Ok(gamma(c) * gamma(s) * recip_gamma(c - a) * recip_gamma(c - b))
}

/// Upper bound constant for `int_0^1 (1-y)^{-s} (1-xy)^{-m} y^k dy <= C1 (1-x)^{1-s-m}`.
pub fn c1_constant(s: f64, m: f64, k: f64) -> Result<f64> {
    check_c1(s, m, k)?;
    if 2.0 + k > s + m && 2.0 + k > s {
        return Ok(gamma(s + m - 1.0) * gamma(1.0 - s) / gamma(m));
    }
    c1_constant_by_maximum(s, m, k)
}

fn check_c1(s: f64, m: f64, k: f64) -> Result<()> {
    if !(s < 1.0 && m + s > 1.0 && k > -1.0) {
        return Err(LabError::Domain(format!(
            "C1 requires s < 1, m + s > 1, k > -1 (got s = {s}, m = {m}, k = {k})"
        )));
    }
    Ok(())
}

/// The defining form of C1: a Beta-type prefactor times the maximum of a
/// `2F1` over `[0, 1]`. The maximum is located on a grid of spacing 1e-3,
/// then refined by golden-section search around the best grid point.
pub fn c1_constant_by_maximum(s: f64, m: f64, k: f64) -> Result<f64> {
    check_c1(s, m, k)?;
    let a = 2.0 + k - s - m;
    let b = 1.0 - s;
    let c = 2.0 + k - s;
    let prefactor = gamma(k + 1.0) * gamma(1.0 - s) / gamma(c);
    let f = |x: f64| -> Result<f64> {
        if x >= 1.0 {
            gauss_2f1_at_one(a, b, c)
        } else {
            gauss_2f1(a, b, c, x)
        }
    };
    let mut best_x = 0.0;
    let mut best = f(0.0)?;
    for i in 1..=1000 {
        let x = i as f64 * 1e-3;
        let v = f(x)?;
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let lo = (best_x - 1e-3).max(0.0);
    let hi = (best_x + 1e-3).min(1.0 - 1e-12);
    if hi > lo {
        let (x, v) = golden_section_max(lo, hi, 60, |x| f(x))?;
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let _ = best_x;
    Ok(prefactor * best)
}

fn golden_section_max(
    mut lo: f64,
    mut hi: f64,
    iters: usize,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

/// `(1/2pi) int_0^{2pi} |1 - r e^{i theta}|^{-p} d theta`, via
/// `(1 - r^2)^{1-p} 2F1(1 - p/2, 1 - p/2; 1; r^2)`.
pub fn circle_kernel_mean(p: f64, r: f64) -> Result<f64> {
    check_kernel(p, r)?;
    let a = 1.0 - p / 2.0;
    let x = r * r;
    Ok((1.0 - x).powf(1.0 - p) * gauss_2f1(a, a, 1.0, x)?)
}

/// The bound `Gamma(p-1) / Gamma(p/2)^2 (1 - r^2)^{1-p}` on [`circle_kernel_mean`].
pub fn circle_kernel_bound(p: f64, r: f64) -> Result<f64> {
    check_kernel(p, r)?;
    Ok(kernel_gamma_ratio(p) * (1.0 - r * r).powf(1.0 - p))
}

/// `Gamma(p-1) / Gamma(p/2)^2`.
pub fn kernel_gamma_ratio(p: f64) -> f64 {
    let g = gamma(p / 2.0);
    gamma(p - 1.0) / (g * g)
}

fn check_kernel(p: f64, r: f64) -> Result<()> {
    if !(p > 1.0) {
        return Err(LabError::Domain(format!("kernel mean needs p > 1, got {p}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(LabError::Domain(format!("kernel mean needs 0 <= r < 1, got {r}")));
    }
    Ok(())
}

/// Poisson-kernel constant `(3 pi^6 + 3 pi^4 rho + 8 pi^2 rho^2 + 24 rho^3) / (24 pi rho^3)`.
pub fn c3_constant(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(LabError::Domain(format!("C3 needs 0 < rho <= 1, got {rho}")));
    }
    let pi2 = PI * PI;
    let num = 3.0 * pi2 * pi2 * pi2 + 3.0 * pi2 * pi2 * rho + 8.0 * pi2 * rho * rho
        + 24.0 * rho * rho * rho;
    Ok(num / (24.0 * PI * rho * rho * rho))
}

/// `||z^n||_{A^p_alpha}^p = Gamma(alpha + 2) Gamma(np/2 + 1) / Gamma(np/2 + alpha + 2)`.
pub fn monomial_norm_pow(n: u32, p: f64, alpha: f64) -> Result<f64> {
    check_weight(alpha)?;
    if !(p > 0.0) {
        return Err(LabError::Parameter(format!("exponent p must be positive, got {p}")));
    }
    let h = n as f64 * p / 2.0;
    Ok((ln_gamma(alpha + 2.0) + ln_gamma(h + 1.0) - ln_gamma(h + alpha + 2.0)).exp())
}

/// `||z^n||_{A^p_alpha}`.
pub fn monomial_norm(n: u32, p: f64, alpha: f64) -> Result<f64> {
    Ok(monomial_norm_pow(n, p, alpha)?.powf(1.0 / p))
}

/// `M_{alpha,p} = ||z||_{A^p_alpha}`.
pub fn m_alpha_p(alpha: f64, p: f64) -> Result<f64> {
    monomial_norm(1, p, alpha)
}

/// Gram weights `<z^n, z^n>_{A^2_alpha} = n! Gamma(alpha + 2) / Gamma(n + alpha + 2)` for `n = 0..=degree`.
pub fn monomial_gram_weights(degree: usize, alpha: f64) -> Result<Vec<f64>> {
    check_weight(alpha)?;
    let mut out = Vec::with_capacity(degree + 1);
    let mut g = 1.0;
    for n in 0..=degree {
        out.push(g);
        g *= (n as f64 + 1.0) / (n as f64 + alpha + 2.0);
    }
    Ok(out)
}

pub(crate) fn check_weight(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(LabError::Parameter(format!(
            "weight exponent alpha must satisfy alpha > -1, got {alpha}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(100.0), 359.134_205_369_575_4, max_relative = 1e-14);
        assert_eq!(recip_gamma(-3.0), 0.0);
    }

    #[test]
    fn hypergeometric_at_origin_is_one() {
        assert_eq!(gauss_2f1(0.3, -1.7, 2.5, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn hypergeometric_log_identity() {
        // 2F1(1,1;2;x) = -ln(1-x)/x
        for &x in &[0.1, 0.5, 0.69, 0.75, 0.9, 0.99] {
            let expected = -(1.0f64 - x).ln() / x;
            let got = gauss_2f1(1.0, 1.0, 2.0, x);
            if x <= 0.7 {
                assert_relative_eq!(got.unwrap(), expected, max_relative = 1e-13);
            } else {
                // c - a - b = 0 near x = 1 is not supported
                assert!(matches!(got, Err(LabError::UnsupportedParameters(_))));
            }
        }
        assert_relative_eq!(
            gauss_2f1(1.0, 1.0, 2.0, 0.5).unwrap(),
            1.386_294_361_119_890_6,
            max_relative = 1e-14
        );
    }

    #[test]
    fn hypergeometric_connection_formula_matches_closed_form() {
        // 2F1(a, b; b; x) = (1 - x)^{-a}
        for &x in &[0.75, 0.9, 0.99] {
            let got = gauss_2f1(0.3, 1.45, 1.45, x).unwrap();
            assert_relative_eq!(got, (1.0 - x).powf(-0.3), max_relative = 1e-12);
        }
        // arcsin identity: 2F1(1/2, 1/2; 3/2; x^2) = arcsin(x)/x
        for &x in &[0.85f64, 0.95, 0.999] {
            let got = gauss_2f1(0.5, 0.5, 1.5, x * x).unwrap();
            assert_relative_eq!(got, x.asin() / x, max_relative = 1e-12);
        }
    }

    #[test]
    fn hypergeometric_rejects_bad_parameters() {
        assert!(matches!(gauss_2f1(1.0, 1.0, -2.0, 0.3), Err(LabError::Domain(_))));
        assert!(matches!(gauss_2f1(1.0, 1.0, 2.0, 1.0), Err(LabError::Domain(_))));
    }

    #[test]
    fn c1_closed_form_examples() {
        assert_relative_eq!(c1_constant(0.5, 1.0, 0.0).unwrap(), PI, max_relative = 1e-13);
        assert_relative_eq!(c1_constant(0.0, 2.0, 0.0).unwrap(), 1.0, max_relative = 1e-13);
        assert!(c1_constant(1.0, 1.0, 0.0).is_err());
        assert!(c1_constant(0.5, 0.4, 0.0).is_err());
        assert!(c1_constant(0.5, 1.0, -1.0).is_err());
    }

    #[test]
    fn c1_maximum_route_agrees_with_closed_form() {
        for &(s, m, k) in &[(0.5, 1.0, 0.0), (-0.3, 1.6, 0.5), (0.2, 1.2, 1.0)] {
            let closed = c1_constant(s, m, k).unwrap();
            let by_max = c1_constant_by_maximum(s, m, k).unwrap();
            assert_relative_eq!(closed, by_max, max_relative = 1e-10);
        }
    }

    #[test]
    fn c1_general_branch_bounds_the_integral() {
        // 2 + k <= s + m: the closed form does not apply
        let (s, m, k) = (0.5, 2.0, 0.0);
        let c1 = c1_constant(s, m, k).unwrap();
        let rule = crate::quadrature::RadialRule::graded(-s, 16, 0, 24).unwrap();
        for &x in &[0.0, 0.5, 0.9, 0.99] {
            let integral = rule.integrate(|y| (1.0 - x * y).powf(-m) * y.powf(k));
            assert!(integral <= c1 * (1.0 - x).powf(1.0 - s - m) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn kernel_mean_examples() {
        assert_relative_eq!(circle_kernel_mean(2.0, 0.5).unwrap(), 4.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(
            circle_kernel_mean(2.0, 0.9).unwrap(),
            1.0 / (1.0 - 0.81),
            max_relative = 1e-14
        );
        let v = circle_kernel_mean(3.0, 0.5).unwrap();
        let bound = circle_kernel_bound(3.0, 0.5).unwrap();
        assert!(v <= bound);
        assert_relative_eq!(bound, 1.0 / (gamma(1.5).powi(2)) / 0.75f64.powi(2), max_relative = 1e-14);
    }

    #[test]
    fn c3_formula_value() {
        // independent evaluation of C1(1) + C2(1)/2 with C1(r) = (3pi^6 + 3pi^4 r)/(24 pi r^3)
        // and C2(r) = (2pi^2 r^2 + 6 r^3)/(3 pi r^3)
        let c1 = (3.0 * PI.powi(6) + 3.0 * PI.powi(4)) / (24.0 * PI);
        let c2 = (2.0 * PI.powi(2) + 6.0) / (3.0 * PI);
        assert_relative_eq!(c3_constant(1.0).unwrap(), c1 + c2 / 2.0, max_relative = 1e-14);
        assert_relative_eq!(c3_constant(1.0).unwrap(), 43.493_752_620_578, max_relative = 1e-12);
        assert!(c3_constant(0.0).is_err());
    }

    #[test]
    fn m_alpha_p_values() {
        assert_relative_eq!(m_alpha_p(0.0, 1.0).unwrap(), 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(m_alpha_p(0.0, 2.0).unwrap(), 0.5f64.sqrt(), max_relative = 1e-14);
        let mut prev = f64::INFINITY;
        for i in 0..=90 {
            let alpha = -0.9 + i as f64 * 0.01;
            let m = m_alpha_p(alpha, 1.7).unwrap();
            assert!(m < prev);
            prev = m;
        }
    }

    #[test]
    fn gram_weights_match_monomial_norms() {
        let w = monomial_gram_weights(6, 0.4).unwrap();
        for (n, wn) in w.iter().enumerate() {
            assert_relative_eq!(*wn, monomial_norm_pow(n as u32, 2.0, 0.4).unwrap(), max_relative = 1e-13);
        }
    }
}

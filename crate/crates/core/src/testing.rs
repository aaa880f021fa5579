//! Fixed data and independent oracles for unit tests.

pub fn golden_random_poly_42() -> Vec<(f64, f64)> {
    vec![
        (0.3637923846133426, 0.900550815344968),
        (-0.1449671942869606, 0.25472104239468063),
        (-0.10570306042940869, -0.17502056485483752),
        (-0.042657653422686743, 0.06752728159458371),
        (0.03390609760035712, -0.032676841952332586),
        (0.0005493496272055154, 0.032144253763901905),
        (0.02538834827311895, 0.005165476129129666),
        (0.00933871373472552, -0.013096473091298839),
        (0.002356035831272099, -0.010257428409355451),
    ]
}

/// `||(1-z)^{-gamma}||^2` in `A^2_alpha`: the coefficient sum
/// `sum ((gamma)_n/n!)^2 n! Gamma(alpha+2)/Gamma(n+alpha+2)` is a 2F1 at 1,
/// so Gauss's summation gives a closed form.
pub fn pole_square_norm_series(gamma: f64, alpha: f64) -> f64 {
    use statrs::function::gamma::gamma as g;
    g(alpha + 2.0) * g(alpha + 2.0 - 2.0 * gamma) / (g(alpha + 2.0 - gamma) * g(alpha + 2.0 - gamma))
}

/// `||f(e^{it} z) - 2 f(z) + f(e^{-it} z)||^2` in `A^2_0` for `f = (1-z)^{-gamma}`,
/// `gamma < 1`, summed from the Taylor coefficients with an averaged tail.
pub fn pole_second_difference_square_norm(gamma: f64, t: f64) -> f64 {
    use statrs::function::gamma::gamma as g;
    const N: usize = 4_000_000;
    let mut c: f64 = 1.0;
    let mut sum = 0.0;
    for n in 0..N {
        let d = 2.0 * (n as f64 * t).cos() - 2.0;
        sum += c * c * d * d / (n as f64 + 1.0);
        c *= (n as f64 + gamma) / (n as f64 + 1.0);
    }
    // c_n^2 ~ n^{2 gamma - 2} / Gamma(gamma)^2 and d^2 averages to 6
    let tail = 6.0 / (g(gamma) * g(gamma)) * (N as f64).powf(2.0 * gamma - 2.0) / (2.0 - 2.0 * gamma);
    sum + tail
}

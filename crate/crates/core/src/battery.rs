//! Built-in battery: monomials `z^n` (`n <= 8`), poles `(1-z)^{-gamma}`
//! (`gamma` in {0.25, 0.5, 0.75}) and ten seeded random polynomials, run
//! through every growth and smoothness verifier at a few `(p, alpha)`
//! settings. Exponents are chosen per function from its known growth so
//! that each hypothesis holds with a finite constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticFunction, TestFunction};
use crate::error::Result;
use crate::growth::{
    default_ladder, remove_linear_term, verify_area_to_hardy, verify_derivative_transfer, verify_growth_to_lip,
    verify_hardy_bergman_holder, verify_hardy_to_area, verify_lip_to_growth, verify_mean_equivalence, Direction,
    Growth, TheoremReport,
};
use crate::means::default_t_grid;

pub const POLE_POWERS: [f64; 3] = [0.25, 0.5, 0.75];
pub const RANDOM_COUNT: u64 = 10;
pub const RANDOM_DEGREE: usize = 8;
pub const RANDOM_DECAY: f64 = 1.0;
/// `(p, alpha)` settings; each keeps every battery pole in `A^p_alpha`.
pub const SETTINGS: [(f64, f64); 3] = [(2.0, 0.0), (3.0, 1.0), (2.0, -0.25)];

/// Exponent margin used where the true growth is logarithmic.
const LOG_MARGIN: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct BatteryEntry {
    pub recipe: TestFunction,
    pub function: AnalyticFunction,
    /// `gamma` for poles; `None` for polynomials.
    pub pole: Option<f64>,
}

/// The battery with random polynomials seeded `seed, seed+1, ..., seed+9`.
pub fn battery(seed: u64) -> Result<Vec<BatteryEntry>> {
    let mut recipes: Vec<TestFunction> = (0..=8).map(|n| TestFunction::Monomial { n }).collect();
    recipes.extend(POLE_POWERS.iter().map(|&gamma| TestFunction::PolePower { gamma }));
    recipes.extend(
        (0..RANDOM_COUNT)
            .map(|i| TestFunction::RandomPolynomial { degree: RANDOM_DEGREE, decay: RANDOM_DECAY, seed: seed + i }),
    );
    recipes
        .into_iter()
        .map(|recipe| {
            let pole = match recipe {
                TestFunction::PolePower { gamma } => Some(gamma),
                _ => None,
            };
            Ok(BatteryEntry { function: recipe.build()?, recipe, pole })
        })
        .collect()
}

/// Growth orders of `f` in `A^p_alpha` terms.
#[derive(Debug, Clone, Copy)]
struct Orders {
    /// Exponent of the area means (`(alpha+2)/p - gamma`, capped at 0).
    area: f64,
    /// Exponent of `M_p` (`1/p - gamma`, capped at 0).
    circle: f64,
    /// `(alpha+2)/p - gamma` (infinite for polynomials).
    raw: f64,
}

impl Orders {
    fn of(entry: &BatteryEntry, p: f64, alpha: f64) -> Self {
        match entry.pole {
            Some(gamma) => {
                let raw = (alpha + 2.0) / p - gamma;
                Orders { area: upper(raw), circle: upper(1.0 / p - gamma), raw }
            }
            None => Orders { area: 0.0, circle: 0.0, raw: f64::INFINITY },
        }
    }
}

/// `min(0, e)` as a growth exponent, with a margin when `e = 0` (log growth).
fn upper(e: f64) -> f64 {
    if e.abs() < 1e-12 {
        -LOG_MARGIN
    } else {
        e.min(0.0)
    }
}

fn tagged(mut report: TheoremReport, p: f64, alpha: f64, beta: f64) -> TheoremReport {
    report.quantities.insert("p".into(), p);
    report.quantities.insert("alpha".into(), alpha);
    if beta.is_finite() {
        report.quantities.insert("beta".into(), beta);
    }
    report
}

/// Area/circle/derivative transfer checks for one entry and setting.
pub fn growth_transfer_reports(entry: &BatteryEntry, p: f64, alpha: f64) -> Result<Vec<TheoremReport>> {
    let f = &entry.function;
    let radii = default_ladder();
    let o = Orders::of(entry, p, alpha);
    let mut out = Vec::new();

    let growth = if (o.raw).abs() < 1e-12 { Growth::Log } else { Growth::Power(o.area) };
    out.push(tagged(verify_area_to_hardy(f, p, alpha, growth, None, &radii, false)?, p, alpha, o.area));
    if alpha <= 0.0 {
        out.push(tagged(verify_area_to_hardy(f, p, alpha, growth, None, &radii, true)?, p, alpha, o.area));
    }

    let beta = o.circle + (1.0 + alpha) / p;
    out.push(tagged(verify_hardy_to_area(f, p, alpha, beta, None, &radii)?, p, alpha, beta));

    out.push(tagged(verify_mean_equivalence(f, p, alpha, o.area, &radii)?, p, alpha, o.area));

    let integrate_beta = match entry.pole {
        Some(_) => upper(o.raw - 1.0),
        None => 0.0,
    };
    out.push(tagged(
        verify_derivative_transfer(f, p, alpha, integrate_beta, &radii, Direction::Integrate)?,
        p,
        alpha,
        integrate_beta,
    ));
    let differentiate_beta = -o.area;
    out.push(tagged(
        verify_derivative_transfer(f, p, alpha, differentiate_beta, &radii, Direction::Differentiate)?,
        p,
        alpha,
        differentiate_beta,
    ));
    Ok(out)
}

/// Smoothness exponent used for the second-difference checks: 2 for
/// polynomials, `(alpha+2)/p - gamma - 0.05` for poles.
pub fn smoothness_exponent(entry: &BatteryEntry, p: f64, alpha: f64) -> f64 {
    match entry.pole {
        Some(gamma) => ((alpha + 2.0) / p - gamma - LOG_MARGIN).min(2.0),
        None => 2.0,
    }
}

/// Smoothness/growth checks for one entry and setting.
pub fn holder_transfer_reports(entry: &BatteryEntry, p: f64, alpha: f64) -> Result<Vec<TheoremReport>> {
    let radii = default_ladder();
    let grid = default_t_grid();
    let beta = smoothness_exponent(entry, p, alpha);
    let mut out = Vec::new();
    out.push(tagged(verify_lip_to_growth(&entry.function, p, alpha, beta, None, &radii, &grid)?, p, alpha, beta));
    let g = remove_linear_term(&entry.function);
    out.push(tagged(verify_growth_to_lip(&g, p, alpha, beta, None, &radii, &grid)?, p, alpha, beta));
    if entry.pole.is_none() && p > 1.0 {
        out.push(tagged(verify_hardy_bergman_holder(&entry.function, p, alpha, 2.0, &grid)?, p, alpha, 2.0));
    }
    Ok(out)
}

/// Which verifier families to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    GrowthTransfer,
    HolderTransfer,
}

/// Runs one suite over the battery and every setting, in a fixed order.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<TheoremReport>> {
    let entries = battery(seed)?;
    let jobs: Vec<(&BatteryEntry, f64, f64)> =
        SETTINGS.iter().flat_map(|&(p, a)| entries.iter().map(move |e| (e, p, a))).collect();
    let chunks: Vec<Vec<TheoremReport>> = jobs
        .par_iter()
        .map(|&(e, p, a)| match suite {
            Suite::GrowthTransfer => growth_transfer_reports(e, p, a),
            Suite::HolderTransfer => holder_transfer_reports(e, p, a),
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Both suites, growth transfer first.
pub fn run_all(seed: u64) -> Result<Vec<TheoremReport>> {
    let mut out = run_suite(Suite::GrowthTransfer, seed)?;
    out.extend(run_suite(Suite::HolderTransfer, seed)?);
    Ok(out)
}

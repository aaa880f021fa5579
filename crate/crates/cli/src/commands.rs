//! One function per subcommand. Each returns whether its checks passed.

use bergman::battery::{run_all, run_suite, Suite};
use bergman::extremal::{
    default_angular_count, solve_extremal, verify_boundary_holder, verify_ext_regularity, verify_pext,
    ExtremalProblem,
};
use bergman::growth::{
    fit_growth_exponent, verify_area_to_hardy, verify_derivative_transfer, verify_growth_to_lip,
    verify_hardy_bergman_holder, verify_hardy_to_area, verify_lip_to_growth, verify_mean_equivalence, Direction,
    Growth, TheoremReport,
};
use bergman::means::{lambda_star_seminorm, mean_profile};
use bergman::{LabError, QuadratureRule};
use serde_json::json;

use crate::config::{Format, RunConfig, UsageError};
use crate::output::{csv, emit, json_doc, num, write_atomic, Metadata};

#[derive(Debug)]
pub enum RunError {
    Usage(UsageError),
    Lab(LabError),
    Io(std::io::Error),
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e)
    }
}

impl From<LabError> for RunError {
    fn from(e: LabError) -> Self {
        RunError::Lab(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

type Outcome = Result<bool, RunError>;

pub const THEOREMS: &[&str] = &[
    "area-to-hardy",
    "hardy-to-area",
    "mean-equivalence",
    "derivative-transfer",
    "lip-to-growth",
    "growth-to-lip",
    "hardy-bergman-holder",
    "ext-regularity",
    "pext",
    "boundary-holder",
    "all",
    "growth-transfer",
    "holder-transfer",
];

pub fn run(config: &RunConfig) -> Outcome {
    use crate::config::CommandKind::*;
    match config.command {
        Means => means(config),
        Growth => growth(config),
        Holder => holder(config),
        Extremal => extremal(config),
        Verify => verify(config),
    }
}

fn means(config: &RunConfig) -> Outcome {
    let f = config.function("means")?;
    let kinds = config.mean_kinds();
    let columns: Vec<Vec<f64>> = kinds
        .iter()
        .map(|&k| mean_profile(k, &f, config.p, config.alpha, &config.radii))
        .collect::<Result<_, _>>()?;
    let meta = Metadata::of(config);
    let doc = match config.format {
        Format::Csv => {
            let mut header = vec!["r"];
            header.extend(kinds.iter().map(|k| k.name()));
            let rows: Vec<Vec<f64>> = config
                .radii
                .iter()
                .enumerate()
                .map(|(i, &r)| std::iter::once(r).chain(columns.iter().map(|c| c[i])).collect())
                .collect();
            csv(&meta, &[("function", f.label().to_string())], &header, &rows)
        }
        Format::Json => {
            let values: serde_json::Map<String, serde_json::Value> =
                kinds.iter().zip(&columns).map(|(k, c)| (k.name().to_string(), json!(c))).collect();
            json_doc(&meta, vec![("function", json!(f.label())), ("radii", json!(config.radii)), ("means", json!(values))])
        }
    };
    emit(config, &doc)?;
    Ok(true)
}

fn growth(config: &RunConfig) -> Outcome {
    let f = config.function("growth")?;
    let kind = config.mean_kinds()[0];
    let report = fit_growth_exponent(&f, kind, config.p, config.alpha, &config.radii)?;
    let meta = Metadata::of(config);
    let doc = match config.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> = report
                .radii
                .iter()
                .zip(&report.values)
                .map(|(&r, &v)| vec![r, v, report.fit_constant * (1.0 - r).powf(report.fitted_slope)])
                .collect();
            let extra = [
                ("function", f.label().to_string()),
                ("kind", kind.name().to_string()),
                ("fitted_slope", num(report.fitted_slope)),
                ("tail_slope", num(report.tail_slope)),
                ("fit_constant", num(report.fit_constant)),
                ("max_rel_residual", num(report.max_rel_residual)),
                ("log_flag", report.log_flag.to_string()),
            ];
            csv(&meta, &extra, &["r", "value", "fit"], &rows)
        }
        Format::Json => json_doc(&meta, vec![("function", json!(f.label())), ("kind", json!(kind.name())), ("report", json!(report))]),
    };
    emit(config, &doc)?;
    Ok(true)
}

fn holder(config: &RunConfig) -> Outcome {
    let f = config.function("holder")?;
    let beta = config.beta.unwrap_or(2.0);
    let est = lambda_star_seminorm(&f, config.p, config.alpha, beta, &config.t_grid)?;
    let meta = Metadata::of(config);
    let doc = match config.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> = est
                .t_grid
                .iter()
                .zip(est.norms.iter().zip(&est.per_t_values))
                .map(|(&t, (&n, &v))| vec![t, n, v])
                .collect();
            let extra = [
                ("function", f.label().to_string()),
                ("beta", num(beta)),
                ("constant_estimate", num(est.constant_estimate)),
            ];
            csv(&meta, &extra, &["t", "norm", "norm_over_t_beta"], &rows)
        }
        Format::Json => json_doc(&meta, vec![("function", json!(f.label())), ("estimate", json!(est))]),
    };
    emit(config, &doc)?;
    Ok(true)
}

fn extremal_problem(config: &RunConfig) -> Result<ExtremalProblem, RunError> {
    let k = config.function("extremal")?;
    let mut prob = ExtremalProblem::new(k, config.p, config.alpha, config.degree)?
        .with_tol(config.tol)
        .with_max_iters(config.max_iters);
    let angular = config.angular_count.unwrap_or_else(|| default_angular_count(config.p, config.degree));
    let quad = match config.radial_nodes {
        Some(n) => Some(QuadratureRule::build(config.alpha, n, angular)?),
        None if config.angular_count.is_some() => Some(QuadratureRule::graded(config.alpha, 16, 30, 8, angular)?),
        None => None,
    };
    if let Some(q) = quad {
        prob = prob.with_quadrature(q)?;
    }
    Ok(prob)
}

fn extremal(config: &RunConfig) -> Outcome {
    let prob = extremal_problem(config)?;
    let sol = solve_extremal(&prob)?;
    let meta = Metadata::of(config);
    let doc = match config.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> =
                sol.trace.iter().map(|t| vec![t.iteration as f64, t.value, t.residual, t.step]).collect();
            let extra = [
                ("kernel", prob.k.label().to_string()),
                ("value", num(sol.value)),
                ("stationarity_residual", num(sol.stationarity_residual)),
                ("converged", sol.converged.to_string()),
            ];
            csv(&meta, &extra, &["iteration", "value", "residual", "step"], &rows)
        }
        Format::Json => json_doc(&meta, vec![("kernel", json!(prob.k.label())), ("solution", json!(sol))]),
    };
    emit(config, &doc)?;
    Ok(sol.converged)
}

fn direction(config: &RunConfig) -> Direction {
    if config.direction == "differentiate" {
        Direction::Differentiate
    } else {
        Direction::Integrate
    }
}

fn named_report(config: &RunConfig, name: &str) -> Result<TheoremReport, RunError> {
    let (p, alpha, radii, grid) = (config.p, config.alpha, &config.radii, &config.t_grid);
    Ok(match name {
        "area-to-hardy" => {
            let f = config.function(name)?;
            let growth = if config.log_growth { Growth::Log } else { Growth::Power(config.beta.unwrap_or(0.0)) };
            verify_area_to_hardy(&f, p, alpha, growth, config.b, radii, config.hat)?
        }
        "hardy-to-area" => verify_hardy_to_area(&config.function(name)?, p, alpha, config.beta_or(name)?, config.b, radii)?,
        "mean-equivalence" => {
            verify_mean_equivalence(&config.function(name)?, p, alpha, config.beta.unwrap_or(0.0), radii)?
        }
        "derivative-transfer" => verify_derivative_transfer(
            &config.function(name)?,
            p,
            alpha,
            config.beta.unwrap_or(0.0),
            radii,
            direction(config),
        )?,
        "lip-to-growth" => {
            verify_lip_to_growth(&config.function(name)?, p, alpha, config.beta_or(name)?, config.b, radii, grid)?
        }
        "growth-to-lip" => {
            verify_growth_to_lip(&config.function(name)?, p, alpha, config.beta_or(name)?, config.b, radii, grid)?
        }
        "hardy-bergman-holder" => {
            verify_hardy_bergman_holder(&config.function(name)?, p, alpha, config.beta.unwrap_or(2.0), grid)?
        }
        "ext-regularity" => {
            let k = config.function(name)?;
            verify_ext_regularity(&k, p, alpha, config.beta.unwrap_or(2.0), config.b, grid, config.degree)?.0
        }
        "pext" => verify_pext(&config.function(name)?, p, config.degree)?.0,
        "boundary-holder" => verify_boundary_holder(&config.function(name)?, p, alpha, config.degree)?.0,
        _ => {
            return Err(UsageError(format!("unknown theorem {name:?}; expected one of {}", THEOREMS.join(", "))).into())
        }
    })
}

fn summary_table(reports: &[TheoremReport]) -> String {
    let cell = |r: &TheoremReport, key: &str| r.quantities.get(key).map(|v| num(*v)).unwrap_or_else(|| "-".into());
    let mut out = format!("{:<34} {:<32} {:>5} {:>6} {:>22} {:>7}  result\n", "theorem", "function", "p", "alpha", "beta", "checks");
    for r in reports {
        let checks = r.margins.iter().filter(|m| !m.informational).count();
        out.push_str(&format!(
            "{:<34} {:<32} {:>5} {:>6} {:>22} {:>7}  {}\n",
            r.theorem_id,
            r.function,
            cell(r, "p"),
            cell(r, "alpha"),
            cell(r, "beta"),
            checks,
            if r.all_satisfied { "pass" } else { "FAIL" }
        ));
    }
    let passed = reports.iter().filter(|r| r.all_satisfied).count();
    out.push_str(&format!("{passed}/{} reports passed\n", reports.len()));
    out
}

fn verify(config: &RunConfig) -> Outcome {
    let name = config.theorem.as_deref().expect("checked in resolve");
    let reports = match name {
        "all" => run_all(config.seed)?,
        "growth-transfer" => run_suite(Suite::GrowthTransfer, config.seed)?,
        "holder-transfer" => run_suite(Suite::HolderTransfer, config.seed)?,
        _ => {
            let mut r = named_report(config, name)?;
            r.quantities.entry("p".into()).or_insert(config.p);
            r.quantities.entry("alpha".into()).or_insert(config.alpha);
            if let Some(b) = config.beta {
                r.quantities.entry("beta".into()).or_insert(b);
            }
            vec![r]
        }
    };
    let passed = reports.iter().filter(|r| r.all_satisfied).count();
    let all_passed = passed == reports.len();
    let meta = Metadata::of(config);
    let table = summary_table(&reports);
    let summary = json!({ "reports": reports.len(), "passed": passed, "failed": reports.len() - passed });

    match &config.output {
        Some(dir) if dir.is_dir() => {
            for (i, r) in reports.iter().enumerate() {
                let doc = json_doc(&meta, vec![("report", json!(r))]);
                write_atomic(&dir.join(format!("{i:03}-{}.json", r.theorem_id.replace('/', "-"))), &doc)?;
            }
            write_atomic(&dir.join("summary.json"), &json_doc(&meta, vec![("summary", summary)]))?;
            print!("{table}");
        }
        _ => {
            let doc = match config.format {
                Format::Json => json_doc(&meta, vec![("summary", summary), ("reports", json!(reports))]),
                Format::Csv => verify_csv(&meta, &reports),
            };
            emit(config, &doc)?;
            if config.output.is_some() {
                print!("{table}");
            } else {
                eprint!("{table}");
            }
        }
    }
    Ok(all_passed)
}

fn verify_csv(meta: &Metadata, reports: &[TheoremReport]) -> String {
    let mut out = csv(meta, &[], &["theorem", "function", "p", "alpha", "beta", "hypothesis_constant", "failures", "all_satisfied"], &[]);
    for r in reports {
        let q = |k: &str| r.quantities.get(k).map(|v| num(*v)).unwrap_or_default();
        out.push_str(&format!(
            "{},\"{}\",{},{},{},{},{},{}\n",
            r.theorem_id,
            r.function.replace('"', "'"),
            q("p"),
            q("alpha"),
            q("beta"),
            num(r.hypothesis_constant),
            r.failures().count(),
            r.all_satisfied
        ));
    }
    out
}

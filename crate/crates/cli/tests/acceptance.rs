//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bergman::extremal::{
    bcl_check, clarkson_check, solve_extremal, verify_boundary_holder, verify_ext_regularity, verify_pext,
    ExtremalProblem,
};
use bergman::means::{default_t_grid, mean};
use bergman::special::{circle_kernel_mean, monomial_norm, monomial_norm_pow};
use bergman::{bergman_norm, integrate_circle, AnalyticFunction, MeanKind, QuadratureRule, TestFunction};
use serde_json::Value;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn worst(acc: &mut (f64, String), err: f64, what: impl FnOnce() -> String) {
    if err > acc.0 || err.is_nan() {
        *acc = (err, what());
    }
}

fn within(label: &str, acc: (f64, String), tol: f64) -> Check {
    if acc.0 <= tol {
        Ok(format!("max {label} {:.2e} <= {tol:.0e}", acc.0))
    } else {
        Err(format!("max {label} {:.2e} > {tol:.0e} at {}", acc.0, acc.1))
    }
}

fn lab<T>(r: bergman::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// 1. Monomial norms by disc quadrature against the Gamma closed form.
fn monomial_norms() -> Check {
    let mut acc = (0.0, String::new());
    for &alpha in &[-0.5, 0.0, 0.5, 1.0] {
        let rule = lab(QuadratureRule::graded(alpha, 16, 30, 8, 16))?;
        for &p in &[1.0, 4.0 / 3.0, 2.0, 3.0, 4.0] {
            for n in 0..=10u32 {
                let s = n as f64 * p;
                let quad = lab(rule.integrate_disc(|z| z.norm().powf(s)))?.powf(1.0 / p);
                let lib = lab(bergman_norm(&AnalyticFunction::monomial(n as usize), p, alpha))?;
                let exact = lab(monomial_norm(n, p, alpha))?;
                worst(&mut acc, rel(quad, exact).max(rel(lib, exact)), || format!("n={n} p={p} alpha={alpha}"));
            }
        }
    }
    let z = lab(bergman_norm(&AnalyticFunction::monomial(1), 1.0, 0.0))?;
    worst(&mut acc, rel(z, 2.0 / 3.0), || "||z|| in A^1_0".into());
    let closed = lab(monomial_norm_pow(1, 1.0, 0.0))?;
    worst(&mut acc, rel(closed, 2.0 / 3.0), || "closed form of ||z|| in A^1_0".into());
    within("relative error", acc, 1e-9)
}

// 2. Dilation identities between the area means.
fn mean_identities() -> Check {
    let mut acc = (0.0, String::new());
    let p = 3.0;
    for seed in 0..10u64 {
        let f = lab(TestFunction::RandomPolynomial { degree: 8, decay: 1.0, seed }.build())?;
        for &alpha in &[-0.5, 0.0, 1.0] {
            for j in 1..=10 {
                let r = j as f64 / 10.0 - if j == 10 { 0.01 } else { 0.0 };
                let scale = r.powf(2.0 / p);
                let a = lab(mean(MeanKind::AreaA, &f, p, alpha, r))?;
                let at = lab(mean(MeanKind::AreaATilde, &f, p, alpha, r))?;
                let ah = lab(mean(MeanKind::AreaAHat, &f, p, alpha, r))?;
                let aht = lab(mean(MeanKind::AreaAHatTilde, &f, p, alpha, r))?;
                worst(&mut acc, rel(at, scale * a).max(rel(aht, scale * ah)), || {
                    format!("seed={seed} alpha={alpha} r={r}")
                });
            }
        }
    }
    within("relative error", acc, 1e-10)
}

// 3. Circle average of |1 - z|^{-p} against a fine trapezoid rule.
fn kernel_integral() -> Check {
    let mut acc = (0.0, String::new());
    let radii: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).chain([0.99]).collect();
    for &p in &[1.5, 2.0, 3.0] {
        for &r in &radii {
            let direct = lab(integrate_circle(|z| (1.0 - z).norm().powf(-p), r, 1 << 14))?;
            let lib = lab(circle_kernel_mean(p, r))?;
            worst(&mut acc, rel(lib, direct), || format!("p={p} r={r}"));
        }
    }
    let quad = within("relative error", acc, 1e-8)?;
    let mut exact = (0.0, String::new());
    for &r in &radii {
        let lib = lab(circle_kernel_mean(2.0, r))?;
        worst(&mut exact, rel(lib, 1.0 / (1.0 - r * r)), || format!("p=2 r={r}"));
    }
    Ok(format!("{quad}; p=2 {}", within("relative error", exact, 1e-12)?))
}

// 6. Extremal solver against known maximisers.
fn extremal_solver() -> Check {
    let mut residual = 0.0f64;
    let mut track = |sol: &bergman::extremal::ExtremalSolution, what: &str| -> Result<(), String> {
        if !sol.converged {
            return Err(format!("{what}: not converged"));
        }
        residual = residual.max(sol.stationarity_residual);
        Ok(())
    };

    let n = 10;
    let mut hilbert = (0.0, String::new());
    for &alpha in &[-0.5, 0.0, 1.0] {
        let k = lab(TestFunction::RandomPolynomial { degree: n, decay: 1.0, seed: 11 }.build())?;
        let sol = lab(solve_extremal(&lab(ExtremalProblem::new(k.clone(), 2.0, alpha, n))?))?;
        track(&sol, "p=2")?;
        let kc = k.taylor_coefficients(n);
        let norm = kc
            .iter()
            .enumerate()
            .map(|(j, c)| Ok(c.norm_sqr() * monomial_norm_pow(j as u32, 2.0, alpha)?))
            .sum::<bergman::Result<f64>>()
            .map_err(|e| e.to_string())?
            .sqrt();
        let fc = sol.f.taylor_coefficients(n);
        let gap = fc.iter().zip(&kc).map(|(f, c)| (f - c / norm).norm()).fold(0.0, f64::max);
        worst(&mut hilbert, gap, || format!("alpha={alpha}"));
    }
    let a = within("p=2 coefficient gap", hilbert, 1e-9)?;

    let mut mono = (0.0, String::new());
    for &p in &[4.0 / 3.0, 3.0, 4.0] {
        for &alpha in &[0.0, 0.5] {
            for m in 0..=4usize {
                let sol = lab(solve_extremal(&lab(ExtremalProblem::new(AnalyticFunction::monomial(m), p, alpha, 8))?))?;
                track(&sol, &format!("z^{m} p={p}"))?;
                let scale = 1.0 / lab(monomial_norm(m as u32, p, alpha))?;
                let gap = sol
                    .f
                    .taylor_coefficients(8)
                    .iter()
                    .enumerate()
                    .map(|(j, c)| if j == m { (c - scale).norm() } else { c.norm() })
                    .fold(0.0, f64::max);
                worst(&mut mono, gap, || format!("m={m} p={p} alpha={alpha}"));
            }
        }
    }
    let b = within("monomial coefficient gap", mono, 1e-7)?;

    let k = lab(TestFunction::RandomPolynomial { degree: 5, decay: 1.0, seed: 7 }.build())?;
    let t = 0.7;
    let base = lab(solve_extremal(&lab(ExtremalProblem::new(k.clone(), 3.0, 0.0, 12))?))?;
    let turned = lab(solve_extremal(&lab(ExtremalProblem::new(k.rotate(t), 3.0, 0.0, 12))?))?;
    track(&base, "rotation base")?;
    track(&turned, "rotation turned")?;
    let expect = base.f.rotate(t).taylor_coefficients(12);
    let gap = turned.f.taylor_coefficients(12).iter().zip(&expect).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let d = within("rotation gap", (gap, "t=0.7".into()), 1e-7)?;

    let c = within("stationarity residual", (residual, String::new()), 1e-8)?;
    Ok(format!("{a}; {b}; {c}; {d}"))
}

fn report_line(id: &str, rep: &bergman::growth::TheoremReport) -> Result<(), String> {
    if rep.all_satisfied {
        Ok(())
    } else {
        let first = rep.failures().next().map(|m| format!("{} at {}", m.check, m.point)).unwrap_or_default();
        Err(format!("{id} on {} failed: {first}", rep.function))
    }
}

// 7. Second differences of the extremal function against the explicit constants.
fn ext_regularity() -> Check {
    let grid = default_t_grid();
    let sum = AnalyticFunction::real_polynomial("z+z^3", &[0.0, 1.0, 0.0, 1.0]);
    let pole = lab(TestFunction::TruncatedPole { gamma: 0.25, degree: 16 }.build())?;
    let mut runs = 0;
    for k in [&sum, &pole] {
        for &p in &[1.5, 3.0, 4.0] {
            let (rep, _) = lab(verify_ext_regularity(k, p, 0.0, 2.0, None, &grid, 16))?;
            report_line(&format!("p={p}"), &rep)?;
            runs += 1;
        }
    }
    Ok(format!("{runs} configurations satisfied on {} t values", grid.len()))
}

// 8. Clarkson and Ball-Carlen-Lieb on seeded pairs.
fn convexity_pair(seed: u64) -> Result<usize, String> {
    let f = lab(TestFunction::RandomPolynomial { degree: 6, decay: 1.0, seed }.build())?;
    let g = lab(TestFunction::RandomPolynomial { degree: 6, decay: 0.5, seed: seed + 10_000 }.build())?;
    for &p in &[2.0, 3.0, 4.0] {
        if !lab(clarkson_check(&f, &g, p, 0.0))? {
            return Err(format!("clarkson fails at seed {seed}, p={p}"));
        }
    }
    for &p in &[1.5, 2.0] {
        if !lab(bcl_check(&f, &g, p, 0.0))? {
            return Err(format!("ball-carlen-lieb fails at seed {seed}, p={p}"));
        }
    }
    Ok(5)
}

fn convexity_inequalities() -> Check {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let counts: Vec<Result<usize, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || (w..200).step_by(workers as usize).map(convexity_pair).sum::<Result<usize, String>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let checks = counts.into_iter().sum::<Result<usize, String>>()?;
    Ok(format!("{checks} inequalities hold on 200 pairs"))
}

// 9. Integrability and boundary regularity of extremal functions.
fn integrability() -> Check {
    let pole4 = lab(TestFunction::TruncatedPole { gamma: 0.25, degree: 16 }.build())?;
    let random = lab(TestFunction::RandomPolynomial { degree: 6, decay: 1.0, seed: 0 }.build())?;
    let pext_cases = [(AnalyticFunction::monomial(1), 3.0), (pole4.add(&AnalyticFunction::monomial(2)), 3.0), (random, 4.0 / 3.0)];
    for (k, p) in &pext_cases {
        let (rep, _) = lab(verify_pext(k, *p, 16))?;
        report_line(&format!("pext p={p}"), &rep)?;
    }
    let sum = AnalyticFunction::real_polynomial("z+z^3", &[0.0, 1.0, 0.0, 1.0]);
    let pole8 = lab(TestFunction::TruncatedPole { gamma: 0.125, degree: 16 }.build())?;
    let holder_cases = [(sum, 3.0, -0.5), (pole8.clone(), 4.0, -0.5), (pole8, 1.5, -0.8)];
    for (k, p, alpha) in &holder_cases {
        let (rep, _) = lab(verify_boundary_holder(k, *p, *alpha, 16))?;
        report_line(&format!("boundary-holder p={p} alpha={alpha}"), &rep)?;
    }
    Ok(format!("{} pext and {} boundary-holder configurations satisfied", pext_cases.len(), holder_cases.len()))
}

const GROWTH_IDS: [&str; 4] = ["area-to-hardy", "hardy-to-area", "mean-equivalence", "derivative-transfer"];
const HOLDER_IDS: [&str; 3] = ["lip-to-growth", "growth-to-lip", "hardy-bergman-holder"];

fn run_verify_all(out: &Path) -> Result<(Vec<u8>, Duration), String> {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_bergman"))
        .args(["verify", "all", "--format", "json", "-o"])
        .arg(out)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let bytes = std::fs::read(out).map_err(|e| e.to_string())?;
    if !(status.success() || status.code() == Some(1)) {
        return Err(format!("verify all exited with {status}"));
    }
    Ok((bytes, elapsed))
}

fn suite_result(doc: &Value, ids: &[&str]) -> Check {
    let reports = doc["reports"].as_array().ok_or("no reports in output")?;
    let mut total = 0;
    for r in reports {
        let id = r["theorem_id"].as_str().unwrap_or_default();
        if !ids.contains(&id) {
            continue;
        }
        total += 1;
        if r["all_satisfied"] != Value::Bool(true) {
            return Err(format!("{id} on {} failed", r["function"]));
        }
    }
    if total == 0 {
        return Err("suite produced no reports".into());
    }
    Ok(format!("{total} reports satisfied"))
}

fn line(id: u32, name: &str, result: &Check, elapsed: Duration, budget: Duration) -> bool {
    let ok = result.is_ok() && elapsed <= budget;
    let detail = match result {
        Ok(s) => s.clone(),
        Err(s) => s.clone(),
    };
    let timing = if elapsed <= budget {
        format!("{:.1}s", elapsed.as_secs_f64())
    } else {
        format!("{:.1}s over budget {}s", elapsed.as_secs_f64(), budget.as_secs())
    };
    println!("criterion {id:>2} {:<4} {name}: {detail} [{timing}]", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "monomial norms", budget: Duration::from_secs(10), run: monomial_norms },
        Criterion { id: 2, name: "mean identities", budget: Duration::from_secs(30), run: mean_identities },
        Criterion { id: 3, name: "kernel integral", budget: Duration::from_secs(10), run: kernel_integral },
        Criterion { id: 6, name: "extremal solver", budget: Duration::from_secs(120), run: extremal_solver },
        Criterion { id: 7, name: "extremal regularity", budget: Duration::from_secs(300), run: ext_regularity },
        Criterion { id: 8, name: "convexity inequalities", budget: Duration::from_secs(120), run: convexity_inequalities },
        Criterion { id: 9, name: "integrability", budget: Duration::from_secs(300), run: integrability },
    ];
    let mut all_ok = true;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        all_ok &= line(c.id, c.name, &result, start.elapsed(), c.budget);
    }

    let dir = tempfile::tempdir().expect("temporary directory");
    let first = run_verify_all(&dir.path().join("first.json"));
    let second = run_verify_all(&dir.path().join("second.json"));
    let five_min = Duration::from_secs(300);
    match &first {
        Ok((bytes, elapsed)) => {
            let doc: Result<Value, String> = serde_json::from_slice(bytes).map_err(|e| e.to_string());
            let growth = doc.as_ref().map_err(Clone::clone).and_then(|d| suite_result(d, &GROWTH_IDS));
            let holder = doc.as_ref().map_err(Clone::clone).and_then(|d| suite_result(d, &HOLDER_IDS));
            // One run covers both suites, so it must fit a single budget.
            all_ok &= line(4, "growth-transfer suite", &growth, *elapsed, five_min);
            all_ok &= line(5, "holder-transfer suite", &holder, *elapsed, five_min);
        }
        Err(e) => {
            all_ok &= line(4, "growth-transfer suite", &Err(e.clone()), Duration::ZERO, five_min);
            all_ok &= line(5, "holder-transfer suite", &Err(e.clone()), Duration::ZERO, five_min);
        }
    }
    let determinism = match (&first, &second) {
        (Ok((a, _)), Ok((b, _))) if a == b => Ok(format!("two runs byte-identical ({} bytes)", a.len())),
        (Ok(_), Ok(_)) => Err("outputs differ".to_string()),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    let elapsed = second.as_ref().map(|(_, t)| *t).unwrap_or_default();
    all_ok &= line(10, "determinism", &determinism, elapsed, Duration::MAX);

    if !all_ok {
        std::process::exit(1);
    }
}

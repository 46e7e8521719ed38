//! `rodov`: build comparison splines, match derivative norms, compute
//! rearrangements and run the verification suites.

mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rodov::{
    build_Psi, check_bohr_favard, check_comparison, check_ligun, check_nagy, check_rearrangement_ineq,
    check_sign_changes, check_lp_lower, distribution, ligun_orders, match_targets, norm_profile, rearrangement,
    run_suite, self_check, Case, CheckReport, Error, Interval, NormTargets, PsiParams, Suite, SuiteSummary,
    TestFunction, TrigPoly, VerifyOptions,
};
use serde::Serialize;

use output::{csv, emit, json, num, sidecar_path, Format};

#[derive(Parser)]
#[command(name = "rodov", version, about = "Rodov comparison splines and comparison inequalities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a spline (or one of its derivatives) over one period.
    Spline(SplineArgs),
    /// Table of derivative sup norms k = 0..r.
    Norms(NormsArgs),
    /// Recover (a1, a2, b, lambda) from prescribed derivative norms.
    Match(MatchArgs),
    /// Decreasing rearrangement of |x^(k)| and its cumulative integral.
    Rearrange(RearrangeArgs),
    /// Run verification suites on random, user-supplied or equality-case inputs.
    Verify(VerifyArgs),
}

/// Spline shape. Without `--b`, `--lambda` and `--params` this is the base
/// spline of period `2T`, i.e. `b = 1` and `lambda = 2T`.
#[derive(Args, Clone)]
struct Shape {
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a2: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// JSON file with keys r, a1, a2, b, lambda (for example the output of `match`).
    #[arg(long, conflicts_with_all = ["r", "b", "lambda"])]
    params: Option<PathBuf>,
}

impl Shape {
    fn resolve(&self) -> Result<PsiParams, Fail> {
        if let Some(path) = &self.params {
            let p: PsiParams = read_json(path)?;
            p.validate()?;
            return Ok(p);
        }
        let r = self.r.ok_or_else(|| Fail::Config("--r is required".into()))?;
        let lam = self.lambda.unwrap_or(2.0 * (self.a1 + self.a2 + 2.0));
        Ok(PsiParams::new(r, self.a1, self.a2, self.b.unwrap_or(1.0), lam)?)
    }
}

#[derive(Args)]
struct SplineArgs {
    #[command(flatten)]
    shape: Shape,
    /// Derivative order to sample.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Samples t_i = i * period / n, i = 0..n.
    #[arg(short = 'n', long = "samples", default_value_t = 1024)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; with CSV a JSON sidecar of breakpoints and coefficients is written beside it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormsArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    case: Case,
    #[arg(long)]
    r: usize,
    /// Target norms in ascending order of derivative: 0, r-1, r (a); 0, r-2, r (b); 0, r-2, r-1, r (c).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    targets: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RearrangeArgs {
    #[command(flatten)]
    shape: Shape,
    /// Trigonometric test function, JSON {period, cos, sin}; replaces the spline.
    #[arg(long, conflicts_with_all = ["r", "params"])]
    input: Option<PathBuf>,
    /// Rearrange |x^(k)|.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(short = 'n', long = "samples", default_value_t = 1025)]
    samples: usize,
    /// Report u on [0, 1] and the cumulative integral divided by the period.
    #[arg(long)]
    unit: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// a, b, c or `all`.
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Equality cases x = Psi for the given shape.
    #[arg(long = "self", conflicts_with = "input")]
    self_check: bool,
    /// Trigonometric test function, JSON {period, cos, sin}, checked against the given shape.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    shape: Shape,
    /// Lp exponents for user input (default 1,2,4).
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Lq exponents for the Nagy-type check on user input (default 2,4,8).
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    /// Derivative order for the Ligun-type check on user input (default: every legal order).
    #[arg(long)]
    k: Option<usize>,
    /// Points of the tau grid in the comparison check.
    #[arg(long)]
    grid: Option<usize>,
    /// Levels sampled per monotone branch.
    #[arg(long)]
    levels: Option<usize>,
    /// Points of the t grid in the rearrangement check.
    #[arg(short = 'n', long = "samples")]
    samples: Option<usize>,
    /// Shifts tried in the sign-change scan.
    #[arg(long)]
    shifts: Option<usize>,
    /// Slack tolerance, relative to the scale of each check.
    #[arg(long)]
    tol: Option<f64>,
    /// Relative tolerance of equality preconditions.
    #[arg(long)]
    tol_equality: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Fail {
    Config(String),
    Lib(Error),
    Io(std::io::Error),
    Exit(u8, &'static str),
}

const VIOLATION: Fail = Fail::Exit(1, "verification found violations");

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Io(e)
    }
}

fn lib_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 3,
        Error::NoBracket { .. } => 4,
        Error::HypothesisFailed(_) | Error::EqualityPreconditionFailed { .. } => 5,
        _ => 2,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Fail::Config(format!("{}: {e}", path.display())))
}

fn read_trig(path: &Path) -> Result<TestFunction, Fail> {
    let t: TrigPoly = read_json(path)?;
    t.validate()?;
    Ok(TestFunction::Trig(t))
}

// ---- spline ----

#[derive(Serialize)]
struct SplineJson {
    params: PsiParams,
    k: usize,
    period: f64,
    breakpoints: Vec<f64>,
    segments: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<[f64; 2]>>,
}

fn cmd_spline(a: &SplineArgs) -> Result<(), Fail> {
    if a.samples == 0 {
        return Err(Fail::Config("--samples must be positive".into()));
    }
    let p = a.shape.resolve()?;
    if a.k > p.r {
        return Err(Error::KOutOfRange { k: a.k, r: p.r }.into());
    }
    let f = build_Psi(&p)?.derivative(a.k);
    let period = f.period();
    let rows: Vec<[f64; 2]> = (0..a.samples)
        .map(|i| {
            let t = period * i as f64 / a.samples as f64;
            [t, f.eval(t)]
        })
        .collect();
    let mut doc = SplineJson {
        params: p,
        k: a.k,
        period,
        breakpoints: f.breakpoints().to_vec(),
        segments: f.segments().to_vec(),
        samples: None,
    };
    match a.format {
        Format::Json => {
            doc.samples = Some(rows);
            emit(a.out.as_deref(), &json(&doc)?)?;
        }
        Format::Csv => {
            let body: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
            emit(a.out.as_deref(), &csv(&["t", "value"], &body))?;
            if let Some(out) = &a.out {
                let side = sidecar_path(out);
                fs::write(&side, json(&doc)?)?;
                info!("sidecar written to {}", side.display());
            }
        }
    }
    Ok(())
}

// ---- norms ----

#[derive(Serialize)]
struct NormRow {
    k: usize,
    norm: f64,
}

#[derive(Serialize)]
struct NormsJson {
    params: PsiParams,
    norms: Vec<NormRow>,
}

fn cmd_norms(a: &NormsArgs) -> Result<(), Fail> {
    let p = a.shape.resolve()?;
    let rows = norm_profile(&p)?;
    let text = match a.format {
        Format::Csv => rows.iter().fold(String::from("k,norm\n"), |s, &(k, v)| s + &format!("{k},{}\n", num(v))),
        Format::Json => json(&NormsJson {
            params: p,
            norms: rows.into_iter().map(|(k, norm)| NormRow { k, norm }).collect(),
        })?,
    };
    emit(a.out.as_deref(), &text)?;
    Ok(())
}

// ---- match ----

#[derive(Serialize)]
struct MatchJson {
    #[serde(flatten)]
    params: PsiParams,
    case: Case,
    targets: BTreeMap<usize, f64>,
    residuals: BTreeMap<usize, f64>,
}

fn cmd_match(a: &MatchArgs) -> Result<(), Fail> {
    if a.r < a.case.min_order() {
        return Err(Fail::Config(format!("case {} needs r >= {}", a.case, a.case.min_order())));
    }
    let orders = a.case.orders(a.r);
    if orders.len() != a.targets.len() {
        return Err(Fail::Config(format!(
            "case {} needs {} targets (orders {:?}), got {}",
            a.case,
            orders.len(),
            orders,
            a.targets.len()
        )));
    }
    let targets: BTreeMap<usize, f64> = orders.into_iter().zip(a.targets.iter().copied()).collect();
    let t = NormTargets::new(a.r, targets.clone());
    let p = match_targets(a.case, &t)?;
    let residuals = t.residuals(&p)?;
    let text = match a.format {
        Format::Json => json(&MatchJson {
            params: p,
            case: a.case,
            targets,
            residuals,
        })?,
        Format::Csv => csv(&["r", "a1", "a2", "b", "lambda"], &[vec![p.r as f64, p.a1, p.a2, p.b, p.lam]]),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(())
}

// ---- rearrange ----

#[derive(Serialize)]
struct RearrangeJson {
    k: usize,
    length: f64,
    unit: bool,
    critical_levels: Vec<f64>,
    rows: Vec<[f64; 3]>,
}

fn cmd_rearrange(a: &RearrangeArgs) -> Result<(), Fail> {
    if a.samples < 2 {
        return Err(Fail::Config("--samples must be at least 2".into()));
    }
    let x = match &a.input {
        Some(path) => read_trig(path)?,
        None => TestFunction::Spline(build_Psi(&a.shape.resolve()?)?),
    };
    let g = x.derivative_poly(a.k)?.abs();
    let w = Interval::new(0.0, g.period())?;
    let d = distribution(&g, &w)?;
    let ra = rearrangement(&g, &w, a.samples)?;
    let len = ra.length;
    let scale = if a.unit { len } else { 1.0 };
    let mut rows = Vec::with_capacity(ra.u.len());
    for (&u, &v) in ra.u.iter().zip(&ra.values) {
        rows.push([u / scale, v, d.cumulative(u)? / scale]);
    }
    let text = match a.format {
        Format::Csv => csv(&["u", "r", "cumulative"], &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()),
        Format::Json => json(&RearrangeJson {
            k: a.k,
            length: len,
            unit: a.unit,
            critical_levels: ra.critical_levels,
            rows,
        })?,
    };
    emit(a.out.as_deref(), &text)?;
    Ok(())
}

// ---- verify ----

#[derive(Serialize)]
struct CaseChecks {
    case: Case,
    checks: Vec<CheckReport>,
}

#[derive(Serialize)]
struct SelfJson {
    mode: &'static str,
    params: PsiParams,
    pass: bool,
    cases: Vec<CaseChecks>,
}

#[derive(Serialize)]
struct InputCheck {
    suite: Suite,
    case: Case,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

#[derive(Serialize)]
struct InputJson {
    mode: &'static str,
    params: PsiParams,
    input: TestFunction,
    pass: bool,
    checks: Vec<InputCheck>,
}

#[derive(Serialize)]
struct RandomJson {
    mode: &'static str,
    seed: u64,
    trials: usize,
    pass: bool,
    suites: Vec<SuiteSummary>,
}

fn parse_list<T: std::str::FromStr<Err = Error> + Copy>(s: &str, all: &[T]) -> Result<(Vec<T>, bool), Fail> {
    if s.eq_ignore_ascii_case("all") {
        Ok((all.to_vec(), true))
    } else {
        Ok((vec![s.parse::<T>().map_err(|e| Fail::Config(e.to_string()))?], false))
    }
}

fn verify_options(a: &VerifyArgs) -> Result<VerifyOptions, Fail> {
    let d = VerifyOptions::default();
    let o = VerifyOptions {
        tau_grid: a.grid.unwrap_or(d.tau_grid),
        levels: a.levels.unwrap_or(d.levels),
        t_grid: a.samples.unwrap_or(d.t_grid),
        shifts: a.shifts.unwrap_or(d.shifts),
        tol_verify: a.tol.unwrap_or(d.tol_verify),
        tol_equality: a.tol_equality.unwrap_or(d.tol_equality),
        ..d
    };
    if o.tau_grid < 2 || o.levels < 2 || o.t_grid < 2 || o.shifts == 0 {
        return Err(Fail::Config("grid sizes must be at least 2 and shifts positive".into()));
    }
    if !(o.tol_verify >= 0.0) || !(o.tol_equality >= 0.0) {
        return Err(Fail::Config("tolerances must be non-negative".into()));
    }
    Ok(o)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Fail> {
    let (suites, all_suites) = parse_list(&a.suite, &Suite::ALL)?;
    let (cases, all_cases) = parse_list(&a.case, &Case::ALL)?;
    let opts = verify_options(a)?;
    if a.self_check {
        verify_self(a, &cases, all_cases, &opts)
    } else if let Some(path) = &a.input {
        verify_input(a, read_trig(path)?, &suites, all_suites, &cases, all_cases, &opts)
    } else {
        verify_random(a, &suites, &cases, &opts)
    }
}

fn admitted(p: &PsiParams, cases: &[Case], all: bool) -> Result<Vec<Case>, Fail> {
    if !all {
        cases[0].admits(p)?;
        return Ok(cases.to_vec());
    }
    let ok: Vec<Case> = cases.iter().copied().filter(|c| c.admits(p).is_ok()).collect();
    if ok.is_empty() {
        return Err(Fail::Config(format!("no case admits r = {}, a1 = {}, a2 = {}", p.r, p.a1, p.a2)));
    }
    Ok(ok)
}

fn verify_self(a: &VerifyArgs, cases: &[Case], all: bool, opts: &VerifyOptions) -> Result<(), Fail> {
    let p = a.shape.resolve()?;
    let mut out = Vec::new();
    for case in admitted(&p, cases, all)? {
        out.push(CaseChecks {
            case,
            checks: self_check(&p, case, opts)?,
        });
    }
    let pass = out.iter().all(|c| c.checks.iter().all(|r| r.pass));
    emit(
        a.out.as_deref(),
        &json(&SelfJson {
            mode: "self",
            params: p,
            pass,
            cases: out,
        })?,
    )?;
    if pass { Ok(()) } else { Err(VIOLATION) }
}

fn verify_input(
    a: &VerifyArgs,
    x: TestFunction,
    suites: &[Suite],
    all_suites: bool,
    cases: &[Case],
    all_cases: bool,
    opts: &VerifyOptions,
) -> Result<(), Fail> {
    let p = a.shape.resolve()?;
    let ps = if a.p.is_empty() { vec![1.0, 2.0, 4.0] } else { a.p.clone() };
    let qs = if a.q.is_empty() { vec![2.0, 4.0, 8.0] } else { a.q.clone() };
    let mut checks = Vec::new();
    let mut code = 0u8;
    for case in admitted(&p, cases, all_cases)? {
        for &suite in suites {
            let mut runs: Vec<(Option<f64>, Option<f64>, Option<usize>)> = Vec::new();
            match suite {
                Suite::Ligun => {
                    let ks = match a.k {
                        Some(k) => vec![k],
                        None => ligun_orders(case, p.r),
                    };
                    for &pe in &ps {
                        runs.extend(ks.iter().map(|&k| (Some(pe), None, Some(k))));
                    }
                }
                Suite::LpLower => runs.extend(ps.iter().map(|&pe| (Some(pe), None, None))),
                Suite::Nagy => {
                    for &pe in &ps {
                        runs.extend(qs.iter().filter(|&&q| q > pe).map(|&q| (Some(pe), Some(q), None)));
                    }
                }
                _ => runs.push((None, None, None)),
            }
            for (pe, q, k) in runs {
                let res = match suite {
                    Suite::Comparison => check_comparison(&x, &p, case, opts),
                    Suite::SignChanges => check_sign_changes(&x, &p, case, opts),
                    Suite::Rearrangement => check_rearrangement_ineq(&x, &p, case, opts),
                    Suite::Ligun => check_ligun(&x, &p, case, pe.unwrap(), k.unwrap(), opts),
                    Suite::BohrFavard => check_bohr_favard(&x, &p, case, opts),
                    Suite::LpLower => check_lp_lower(&x, &p, case, pe.unwrap(), opts),
                    Suite::Nagy => check_nagy(&x, &p, case, pe.unwrap(), q.unwrap(), opts),
                };
                let mut entry = InputCheck {
                    suite,
                    case,
                    p: pe,
                    q,
                    k,
                    report: None,
                    error: None,
                    skipped: None,
                };
                match res {
                    Ok(rep) => {
                        if !rep.pass {
                            code = code.max(1);
                        }
                        entry.report = Some(rep);
                    }
                    // under `all`, checks whose preconditions do not apply are skipped
                    Err(e @ Error::NotApplicable(_)) if all_suites => entry.skipped = Some(e.to_string()),
                    Err(e) => {
                        warn!("{suite} case {case}: {e}");
                        code = code.max(lib_code(&e));
                        entry.error = Some(e.to_string());
                    }
                }
                checks.push(entry);
            }
        }
    }
    emit(
        a.out.as_deref(),
        &json(&InputJson {
            mode: "input",
            params: p,
            input: x,
            pass: code == 0,
            checks,
        })?,
    )?;
    match code {
        0 => Ok(()),
        1 => Err(VIOLATION),
        5 => Err(Fail::Exit(5, "hypothesis or precondition failed; see report")),
        c => Err(Fail::Exit(c, "check could not run; see report")),
    }
}

fn verify_random(a: &VerifyArgs, suites: &[Suite], cases: &[Case], opts: &VerifyOptions) -> Result<(), Fail> {
    if a.trials == 0 {
        return Err(Fail::Config("--trials must be positive".into()));
    }
    let mut out = Vec::new();
    for &suite in suites {
        for &case in cases {
            let s = run_suite(suite, case, a.trials, a.seed, opts);
            info!("{suite} case {case}: {} violations, {} errors", s.violations, s.errors.len());
            out.push(s);
        }
    }
    let pass = out.iter().all(SuiteSummary::pass);
    emit(
        a.out.as_deref(),
        &json(&RandomJson {
            mode: "random",
            seed: a.seed,
            trials: a.trials,
            pass,
            suites: out,
        })?,
    )?;
    if pass { Ok(()) } else { Err(VIOLATION) }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RODOV_LOG", "warn")).init();
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Spline(a) => cmd_spline(a),
        Cmd::Norms(a) => cmd_norms(a),
        Cmd::Match(a) => cmd_match(a),
        Cmd::Rearrange(a) => cmd_rearrange(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Exit(c, m)) => {
            eprintln!("rodov: {m}");
            ExitCode::from(c)
        }
        Err(Fail::Config(m)) => {
            eprintln!("rodov: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Io(e)) => {
            eprintln!("rodov: {e}");
            ExitCode::from(2)
        }
        Err(Fail::Lib(e)) => {
            eprintln!("rodov: {e}");
            ExitCode::from(lib_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(lib_code(&Error::Infeasible(String::new())), 3);
        assert_eq!(lib_code(&Error::NoBracket { doublings: 1 }), 4);
        assert_eq!(lib_code(&Error::HypothesisFailed(String::new())), 5);
        assert_eq!(lib_code(&Error::NonPositiveLambda(0.0)), 2);
    }

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(num(-0.5), "-5.0000000000000000e-1");
        assert_eq!(num(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}

//! Executable checks of the comparison inequalities, admissible test-function
//! generators and a randomized trial harness.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rearrange::distribution;
use crate::rodov::psi_sup_norm;
use crate::scaling::{build_Psi, Psi_derivative_norm, Psi_lp_norm, PsiParams};
use crate::testfn::{TestFunction, TrigPoly};
use crate::{BranchInverter, Case, Interval};

/// Grid sizes and tolerances shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tau_grid: usize,
    pub levels: usize,
    pub shifts: usize,
    pub branch_samples: usize,
    pub t_grid: usize,
    /// Relative slack tolerance, multiplied by the scale of each check.
    pub tol_verify: f64,
    /// Relative tolerance of the equality preconditions.
    pub tol_equality: f64,
    /// Relative margin below `±‖Ψ‖` where levels are clamped.
    pub level_margin: f64,
    /// Relative rounding allowance of hypothesis comparisons.
    pub hypothesis_rel: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tau_grid: 2048,
            levels: 512,
            shifts: 64,
            branch_samples: 512,
            t_grid: 256,
            tol_verify: 1e-8,
            tol_equality: 1e-9,
            level_margin: 1e-6,
            hypothesis_rel: 1e-12,
        }
    }
}

/// One required bound `‖x^{(k)}‖∞ ≤ ‖Ψ^{(k)}‖∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisEntry {
    pub k: usize,
    pub measured: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Outcome of one check; `pass ⇔ worst_slack ≥ -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub reading: String,
    pub hypothesis: Vec<HypothesisEntry>,
    pub pass: bool,
    pub worst_slack: f64,
    pub tolerance: f64,
    pub scale: f64,
    pub witness: BTreeMap<String, f64>,
}

impl CheckReport {
    fn new(name: &str, reading: &str, hypothesis: Vec<HypothesisEntry>, scale: f64, tol_rel: f64) -> Self {
        Self {
            name: name.into(),
            reading: reading.into(),
            hypothesis,
            pass: true,
            worst_slack: f64::INFINITY,
            tolerance: tol_rel * scale,
            scale,
            witness: BTreeMap::new(),
        }
    }

    fn offer(&mut self, slack: f64, witness: &[(&str, f64)]) {
        if slack < self.worst_slack || self.witness.is_empty() {
            self.worst_slack = slack;
            self.witness = witness.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.worst_slack >= -self.tolerance;
        self
    }

    /// `worst_slack / scale`.
    pub fn relative_slack(&self) -> f64 {
        if self.scale > 0.0 {
            self.worst_slack / self.scale
        } else {
            self.worst_slack
        }
    }
}

const READ_HYP: &str = "certified sup of x^(k) against the closed-form norm of Psi^(k)";
const READ_CMP: &str = "|x'(tau)| <= |Psi'(xi)| for every xi with Psi(xi) = x(tau); \
     levels within the margin of +-||Psi|| are clamped to the margin";
const READ_SIGNS: &str = "Psi - x(. + s) has at most one sign change on each monotone branch of Psi, \
     for every shift s on the grid";
const READ_REARR: &str = "hypothesis of the comparison theorem for (x, Psi_lambda); \
     right side uses the lambda = 1 member scaled by lambda^(r-1)";
const READ_LIGUN: &str = "hypothesis of the comparison theorem for (x, Psi_lambda); \
     right side uses the lambda = 1 member scaled by lambda^(r-k); k >= 1";
const READ_BF: &str = "derivative bounds without k = 0 against the lambda = 1 member";
const READ_LP_LOWER: &str = "derivative bounds without k = 0 against Psi_lambda and E0(x) = ||Psi_lambda||; \
     left side on (0,1), right side on (0,lambda)";
const READ_NAGY: &str = "derivative bounds without k = 0 against Psi_lambda and \
     ||Psi_lambda||_Lp(0,lambda) = ||x - c(x)||_Lp(0,1)";

fn unit() -> Interval<f64> {
    Interval { lo: 0.0, hi: 1.0 }
}

/// Compares certified sup norms of `x^{(k)}` with `‖Ψ^{(k)}‖` for each `k` in `ks`.
pub fn check_hypothesis(x: &TestFunction, p: &PsiParams, ks: &[usize], opts: &VerifyOptions) -> Result<CheckReport> {
    p.validate()?;
    let mut entries = Vec::with_capacity(ks.len());
    let mut rep = CheckReport::new("hypothesis", READ_HYP, Vec::new(), 1.0, opts.hypothesis_rel);
    for &k in ks {
        let bound = Psi_derivative_norm(p, k)?;
        let measured = x.certified_sup(k)?;
        let slack = (bound - measured) / bound;
        entries.push(HypothesisEntry {
            k,
            measured,
            bound,
            holds: slack >= -opts.hypothesis_rel,
        });
        rep.offer(slack, &[("k", k as f64), ("measured", measured), ("bound", bound)]);
    }
    if ks.is_empty() {
        rep.worst_slack = 0.0;
    }
    rep.hypothesis = entries;
    Ok(rep.finish())
}

fn require_hypothesis(x: &TestFunction, p: &PsiParams, ks: &[usize], opts: &VerifyOptions) -> Result<Vec<HypothesisEntry>> {
    let rep = check_hypothesis(x, p, ks, opts)?;
    if let Some(e) = rep.hypothesis.iter().find(|e| !e.holds) {
        return Err(Error::HypothesisFailed(format!(
            "||x^({})|| = {:e} exceeds {:e}",
            e.k, e.measured, e.bound
        )));
    }
    Ok(rep.hypothesis)
}

fn require_unit_periodic(x: &TestFunction) -> Result<()> {
    if !x.is_unit_periodic() {
        return Err(Error::NotApplicable(format!(
            "x must be 1-periodic, its period is {}",
            x.period()
        )));
    }
    Ok(())
}

/// Pointwise comparison `|x'(τ)| ≤ m(x(τ))` over a τ grid plus level crossings.
pub fn check_comparison(x: &TestFunction, p: &PsiParams, case: Case, opts: &VerifyOptions) -> Result<CheckReport> {
    case.admits(p)?;
    let hyp = require_hypothesis(x, p, &case.orders(p.r), opts)?;
    let psi = build_Psi(p)?;
    let dpsi = psi.differentiate();
    let norm = Psi_derivative_norm(p, 0)?;
    let dnorm = Psi_derivative_norm(p, 1)?;
    let cap = (1.0 - opts.level_margin) * norm;
    let inverters: Vec<BranchInverter<f64>> = psi
        .monotone_branches()
        .iter()
        .map(|b| BranchInverter::new(&psi, &b.interval))
        .collect();

    let x0 = x.derivative_poly(0)?;
    let x1 = x.derivative_poly(1)?;
    let period = x.period();
    let mut taus: Vec<f64> = (0..opts.tau_grid)
        .map(|i| period * i as f64 / opts.tau_grid as f64)
        .collect();
    for b in x0.monotone_branches() {
        let inv = BranchInverter::new(&x0, &b.interval);
        let (v0, v1) = inv.end_values();
        let (lo, hi) = (v0.min(v1), v0.max(v1));
        for j in 0..opts.levels {
            let y = -cap + 2.0 * cap * (j as f64 + 0.5) / opts.levels as f64;
            if y > lo && y < hi {
                taus.push(inv.invert(y)?);
            }
        }
    }

    let mut rep = CheckReport::new("comparison", READ_CMP, hyp, dnorm, opts.tol_verify);
    for &tau in &taus {
        let y = x0.eval(tau);
        let yc = y.clamp(-cap, cap);
        let xd = x1.eval(tau).abs();
        let mut m = f64::INFINITY;
        let mut xi_best = f64::NAN;
        for inv in &inverters {
            let xi = inv.invert(yc)?;
            let v = dpsi.eval(xi).abs();
            if v < m {
                m = v;
                xi_best = xi;
            }
        }
        rep.offer(m - xd, &[("tau", tau), ("xi", xi_best), ("y", y), ("x_prime", xd), ("psi_prime", m)]);
    }
    Ok(rep.finish())
}

/// Sign changes of `Ψ - x(· + s)` on every monotone branch of `Ψ`.
pub fn check_sign_changes(x: &TestFunction, p: &PsiParams, case: Case, opts: &VerifyOptions) -> Result<CheckReport> {
    case.admits(p)?;
    let hyp = require_hypothesis(x, p, &case.orders(p.r), opts)?;
    let psi = build_Psi(p)?;
    let x0 = x.derivative_poly(0)?;
    let tol = opts.tol_verify * Psi_derivative_norm(p, 0)?;
    let branches = psi.monotone_branches();
    let m = opts.branch_samples.max(2);
    let mut rep = CheckReport::new("sign_changes", READ_SIGNS, hyp, 1.0, 0.0);
    for j in 0..opts.shifts.max(1) {
        let s = x.period() * j as f64 / opts.shifts.max(1) as f64;
        for b in &branches {
            let (lo, len) = (b.interval.lo, b.interval.len());
            let mut changes = 0usize;
            let mut last = 0i8;
            for i in 0..m {
                let t = lo + len * i as f64 / (m - 1) as f64;
                let d = psi.eval(t) - x0.eval(t + s);
                if d.abs() <= tol {
                    continue;
                }
                let sg = if d > 0.0 { 1 } else { -1 };
                if last != 0 && sg != last {
                    changes += 1;
                }
                last = sg;
            }
            rep.offer(1.0 - changes as f64, &[("shift", s), ("branch_lo", lo), ("branch_hi", b.interval.hi), ("changes", changes as f64)]);
        }
    }
    Ok(rep.finish())
}

/// `∫_0^t r(|x'|) ≤ λ^{r-1} ∫_0^t r(|Ψ'_{·,1}|)` on a grid of `t ∈ (0, 1]`.
pub fn check_rearrangement_ineq(x: &TestFunction, p: &PsiParams, case: Case, opts: &VerifyOptions) -> Result<CheckReport> {
    case.admits(p)?;
    require_unit_periodic(x)?;
    let hyp = require_hypothesis(x, p, &case.orders(p.r), opts)?;
    let gx = x.derivative_poly(1)?.abs();
    let dx = distribution(&gx, &unit())?;
    let p1 = p.with_lambda(1.0);
    let gpsi = build_Psi(&p1)?.differentiate().abs();
    let dpsi = distribution(&gpsi, &unit())?;
    let factor = p.lam.powi(p.r as i32 - 1);
    let scale = factor * dpsi.cumulative(1.0)?.max(f64::MIN_POSITIVE);
    let mut rep = CheckReport::new("rearrangement", READ_REARR, hyp, scale, opts.tol_verify);
    let n = opts.t_grid.max(1);
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let lhs = dx.cumulative(t)?;
        let rhs = factor * dpsi.cumulative(t)?;
        rep.offer(rhs - lhs, &[("t", t), ("lhs", lhs), ("rhs", rhs)]);
    }
    Ok(rep.finish())
}

/// Orders `k` admitted by the Ligun-type inequality for `case` and `r`.
pub fn ligun_orders(case: Case, r: usize) -> Vec<usize> {
    let top = match case {
        Case::A => r.saturating_sub(2),
        Case::B | Case::C => r.saturating_sub(3),
    };
    (1..=top).collect()
}

/// `‖x^{(k)}‖_{L_p(0,1)} ≤ λ^{r-k} ‖Ψ^{(k)}_{·,1}‖_{L_p(0,1)}`.
pub fn check_ligun(x: &TestFunction, p: &PsiParams, case: Case, pexp: f64, k: usize, opts: &VerifyOptions) -> Result<CheckReport> {
    case.admits(p)?;
    if !ligun_orders(case, p.r).contains(&k) {
        return Err(Error::KOutOfRange { k, r: p.r });
    }
    if !(pexp >= 1.0) || !pexp.is_finite() {
        return Err(Error::InvalidParams(format!("exponent p = {pexp} must be at least 1")));
    }
    require_unit_periodic(x)?;
    let hyp = require_hypothesis(x, p, &case.orders(p.r), opts)?;
    let lhs = x.lp_norm(k, pexp, &unit())?;
    let base = build_Psi(&p.with_lambda(1.0))?.derivative(k).lp_norm(pexp, &unit())?;
    let rhs = p.lam.powi((p.r - k) as i32) * base;
    let mut rep = CheckReport::new("ligun", READ_LIGUN, hyp, rhs.max(lhs), opts.tol_verify);
    rep.offer(rhs - lhs, &[("k", k as f64), ("p", pexp), ("lhs", lhs), ("rhs", rhs)]);
    Ok(rep.finish())
}

/// `(c(x), E0(x))` from certified extrema: `c = (max + min) / 2`, `E0 = (max - min) / 2`.
pub fn best_constant(x: &TestFunction) -> Result<(f64, f64)> {
    let (lo, hi) = x.certified_range()?;
    Ok((0.5 * (hi + lo), 0.5 * (hi - lo)))
}

/// `E0(x) ≤ ‖Ψ_{·,1}‖`; `p0` must have `λ = 1`.
pub fn check_bohr_favard(x: &TestFunction, p0: &PsiParams, case: Case, opts: &VerifyOptions) -> Result<CheckReport> {
    case.admits(p0)?;
    if p0.lam != 1.0 {
        return Err(Error::InvalidParams(format!("lambda must be 1, got {}", p0.lam)));
    }
    require_unit_periodic(x)?;
    let hyp = require_hypothesis(x, p0, &case.derivative_orders(p0.r), opts)?;
    let (c, e0) = best_constant(x)?;
    let norm = Psi_derivative_norm(p0, 0)?;
    let mut rep = CheckReport::new("bohr_favard", READ_BF, hyp, norm, opts.tol_verify);
    rep.offer(norm - e0, &[("c", c), ("e0", e0), ("psi_norm", norm)]);
    Ok(rep.finish())
}

fn require_equality(lhs: f64, rhs: f64, opts: &VerifyOptions) -> Result<()> {
    if (lhs - rhs).abs() > opts.tol_equality * rhs.abs().max(lhs.abs()) {
        return Err(Error::EqualityPreconditionFailed { lhs, rhs });
    }
    Ok(())
}

/// `‖x‖_{L_p(0,1)} ≥ ‖Ψ‖_{L_p(0,λ)}` given `E0(x) = ‖Ψ‖`.
pub fn check_lp_lower(x: &TestFunction, p: &PsiParams, case: Case, pexp: f64, opts: &VerifyOptions) -> Result<CheckReport> {
    case.admits(p)?;
    require_unit_periodic(x)?;
    let hyp = require_hypothesis(x, p, &case.derivative_orders(p.r), opts)?;
    let (_, e0) = best_constant(x)?;
    require_equality(e0, Psi_derivative_norm(p, 0)?, opts)?;
    let lhs = x.lp_norm(0, pexp, &unit())?;
    let rhs = Psi_lp_norm(p, pexp)?;
    let mut rep = CheckReport::new("lp-lower", READ_LP_LOWER, hyp, rhs, opts.tol_verify);
    rep.offer(lhs - rhs, &[("p", pexp), ("lhs", lhs), ("rhs", rhs), ("e0", e0)]);
    Ok(rep.finish())
}

/// `‖Ψ‖_{L_q(0,λ)} ≥ ‖x - c(x)‖_{L_q(0,1)}` given equality of the `L_p` norms.
pub fn check_nagy(x: &TestFunction, p: &PsiParams, case: Case, pexp: f64, qexp: f64, opts: &VerifyOptions) -> Result<CheckReport> {
    if !(pexp > 0.0 && qexp > pexp) || !qexp.is_finite() {
        return Err(Error::BadExponents { p: pexp, q: qexp });
    }
    case.admits(p)?;
    require_unit_periodic(x)?;
    let hyp = require_hypothesis(x, p, &case.derivative_orders(p.r), opts)?;
    let (c, e0) = best_constant(x)?;
    let xc = x.plus_constant(-c);
    if e0 == 0.0 {
        let mut rep = CheckReport::new("nagy", READ_NAGY, hyp, 1.0, opts.tol_verify);
        rep.offer(0.0, &[("p", pexp), ("q", qexp), ("degenerate", 1.0)]);
        return Ok(rep.finish());
    }
    require_equality(xc.lp_norm(0, pexp, &unit())?, Psi_lp_norm(p, pexp)?, opts)?;
    let psi_q = Psi_lp_norm(p, qexp)?;
    let x_q = xc.lp_norm(0, qexp, &unit())?;
    let mut rep = CheckReport::new("nagy", READ_NAGY, hyp, psi_q, opts.tol_verify);
    rep.offer(psi_q - x_q, &[("p", pexp), ("q", qexp), ("lhs", psi_q), ("rhs", x_q), ("c", c)]);
    Ok(rep.finish())
}

/// How [`generate_admissible`] builds `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// `f Ψ` with `|f| ≤ 1`.
    ScaledPsi(f64),
    /// `Ψ(· + s)`.
    ShiftedPsi(f64),
    /// A random 1-periodic trigonometric polynomial scaled into the bounds.
    Trig,
}

/// A random trigonometric polynomial of period 1 with at most 4 harmonics.
pub fn random_trig(seed: u64) -> TrigPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = rng.gen_range(1..=4usize);
    let mut cos = vec![0.0; j + 1];
    let mut sin = vec![0.0; j + 1];
    cos[0] = rng.gen_range(-0.5..0.5);
    for h in 1..=j {
        if h == j || rng.gen_bool(0.8) {
            cos[h] = rng.gen_range(-1.0..1.0);
            sin[h] = rng.gen_range(-1.0..1.0);
        }
    }
    TrigPoly { period: 1.0, cos, sin }
}

/// A test function satisfying `‖x^{(k)}‖ ≤ ‖Ψ^{(k)}‖` for every `k` in `ks`.
pub fn generate_admissible(p: &PsiParams, ks: &[usize], kind: GenKind, seed: u64) -> Result<TestFunction> {
    match kind {
        GenKind::ScaledPsi(f) => {
            if !(f.abs() <= 1.0) {
                return Err(Error::InvalidParams(format!("scale factor {f} must lie in [-1, 1]")));
            }
            Ok(TestFunction::Spline(build_Psi(p)?.scale(f)))
        }
        GenKind::ShiftedPsi(s) => TestFunction::Spline(build_Psi(p)?).shifted(s),
        GenKind::Trig => {
            let raw = TestFunction::Trig(random_trig(seed));
            let mut factor = f64::INFINITY;
            for &k in ks {
                let m = raw.certified_sup(k)?;
                if m > 0.0 {
                    factor = factor.min(Psi_derivative_norm(p, k)? / m);
                }
            }
            if !factor.is_finite() {
                factor = 1.0;
            }
            Ok(raw.scaled(factor * (1.0 - 1e-9)))
        }
    }
}

fn sup_norms(x: &TestFunction, ks: &[usize]) -> Result<Vec<(usize, f64)>> {
    ks.iter().map(|&k| x.certified_sup(k).map(|v| (k, v))).collect()
}

fn base_norm(j: usize, a1: f64, a2: f64) -> Result<f64> {
    if j == 0 {
        Ok(1.0)
    } else {
        psi_sup_norm(j, a1, a2)
    }
}

/// Parameters with shape `(r, a1, a2)` making `E0(x) = ‖Ψ‖` and the derivative
/// bounds of `ks` hold; `u ∈ (0, 1]` shrinks `σ` below its largest admissible value.
pub fn tune_lp_lower(x: &TestFunction, r: usize, a1: f64, a2: f64, ks: &[usize], u: f64) -> Result<PsiParams> {
    let (_, e0) = best_constant(x)?;
    if !(e0 > 0.0) {
        return Err(Error::InvalidParams("x is constant".into()));
    }
    let nr = base_norm(r, a1, a2)?;
    let mut sigma = f64::INFINITY;
    for (k, xk) in sup_norms(x, ks)? {
        if xk > 0.0 && k > 0 {
            sigma = sigma.min((e0 * base_norm(r - k, a1, a2)? / (nr * xk)).powf(1.0 / k as f64));
        }
    }
    let sigma = u * sigma;
    let b = e0 / (sigma.powi(r as i32) * nr);
    PsiParams::new(r, a1, a2, b, 2.0 * (a1 + a2 + 2.0) * sigma)
}

/// Parameters making `‖Ψ‖_{L_p(0,λ)} = ‖x - c(x)‖_{L_p(0,1)}` and the derivative bounds hold.
pub fn tune_nagy(x: &TestFunction, r: usize, a1: f64, a2: f64, ks: &[usize], pexp: f64, u: f64) -> Result<PsiParams> {
    let (c, _) = best_constant(x)?;
    let xp = x.plus_constant(-c).lp_norm(0, pexp, &unit())?;
    if !(xp > 0.0) {
        return Err(Error::InvalidParams("x is constant".into()));
    }
    let t = a1 + a2 + 2.0;
    let lp = crate::rodov::psi_shared(r, a1, a2)?.lp_norm(pexp, &Interval::new(0.0, 2.0 * t)?)?;
    let mut sigma = f64::INFINITY;
    for (k, xk) in sup_norms(x, ks)? {
        if xk > 0.0 && k > 0 {
            let e = 1.0 / (k as f64 + 1.0 / pexp);
            sigma = sigma.min((xp * base_norm(r - k, a1, a2)? / (lp * xk)).powf(e));
        }
    }
    let sigma = u * sigma;
    let b = xp / (sigma.powf(r as f64 + 1.0 / pexp) * lp);
    PsiParams::new(r, a1, a2, b, 2.0 * t * sigma)
}

/// A family of randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Comparison,
    SignChanges,
    Rearrangement,
    Ligun,
    BohrFavard,
    LpLower,
    Nagy,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Comparison,
        Suite::SignChanges,
        Suite::Rearrangement,
        Suite::Ligun,
        Suite::BohrFavard,
        Suite::LpLower,
        Suite::Nagy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Comparison => "comparison",
            Suite::SignChanges => "sign-changes",
            Suite::Rearrangement => "rearrangement",
            Suite::Ligun => "ligun",
            Suite::BohrFavard => "bohr-favard",
            Suite::LpLower => "lp-lower",
            Suite::Nagy => "nagy",
        }
    }

    /// Smallest `r` with a non-trivial check for `case`.
    pub fn min_order(self, case: Case) -> usize {
        match (self, case) {
            (Suite::Ligun, Case::A) => 3,
            (Suite::Ligun, _) => 4,
            _ => case.min_order(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('_', "-");
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

/// Inputs of one randomized check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub suite: Suite,
    pub case: Case,
    pub params: PsiParams,
    pub x: TestFunction,
    pub pexp: f64,
    pub qexp: f64,
    pub k: usize,
}

const EXPONENTS: [f64; 3] = [1.0, 2.0, 4.0];
const PAIRS: [(f64, f64); 8] = [
    (1.0, 2.0),
    (1.0, 4.0),
    (1.0, 8.0),
    (2.0, 4.0),
    (2.0, 8.0),
    (4.0, 8.0),
    (1.0, 2.0),
    (2.0, 4.0),
];

fn draw_shape(case: Case, r_lo: usize, rng: &mut ChaCha8Rng) -> (usize, f64, f64) {
    let r = rng.gen_range(r_lo..=5);
    let a1 = if case == Case::A { 0.0 } else { rng.gen_range(0.0..5.0) };
    let a2 = if case == Case::B { 0.0 } else { rng.gen_range(0.0..5.0) };
    (r, a1, a2)
}

/// Draws the inputs of trial `seed` for `suite` and `case`.
pub fn sample_trial(suite: Suite, case: Case, seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, a1, a2) = draw_shape(case, suite.min_order(case), &mut rng);
    let b = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let roll: f64 = rng.gen();
    let tseed = rng.gen::<u64>();
    let (pexp, qexp) = match suite {
        Suite::Nagy => PAIRS[rng.gen_range(0..PAIRS.len())],
        _ => (EXPONENTS[rng.gen_range(0..3)], 0.0),
    };
    let k = {
        let ks = ligun_orders(case, r);
        if ks.is_empty() { 0 } else { ks[rng.gen_range(0..ks.len())] }
    };
    let periodic = !matches!(suite, Suite::Comparison | Suite::SignChanges);
    // spline inputs of the 1-periodic suites use λ = 1/n
    let lam = if periodic && roll >= 0.7 {
        1.0 / rng.gen_range(1..=3) as f64
    } else {
        rng.gen_range(0.3..3.0)
    };
    let lam = if suite == Suite::BohrFavard { 1.0 } else { lam };
    let params = PsiParams::new(r, a1, a2, b, lam)?;
    let ks = match suite {
        Suite::BohrFavard | Suite::LpLower | Suite::Nagy => case.derivative_orders(r),
        _ => case.orders(r),
    };
    let f = rng.gen_range(0.3..1.0);
    let s = rng.gen_range(0.0..1.0) * lam;
    let u = if rng.gen_bool(0.3) { 1.0 - 1e-9 } else { rng.gen_range(0.3..1.0) };
    let c0 = rng.gen_range(-2.0..2.0);
    let (params, x) = match suite {
        Suite::LpLower | Suite::Nagy => {
            let x = if roll < 0.7 {
                TestFunction::Trig(random_trig(tseed))
            } else {
                let x = generate_admissible(&params, &ks, GenKind::ShiftedPsi(s), tseed)?;
                if suite == Suite::Nagy { x.plus_constant(c0) } else { x }
            };
            let p = if suite == Suite::LpLower {
                tune_lp_lower(&x, r, a1, a2, &ks, u)?
            } else {
                tune_nagy(&x, r, a1, a2, &ks, pexp, u)?
            };
            (p, x)
        }
        _ => {
            let kind = if roll < 0.7 {
                GenKind::Trig
            } else if roll < 0.85 {
                GenKind::ScaledPsi(f)
            } else {
                GenKind::ShiftedPsi(s)
            };
            let x = generate_admissible(&params, &ks, kind, tseed)?;
            let x = if suite == Suite::BohrFavard { x.plus_constant(c0) } else { x };
            (params, x)
        }
    };
    Ok(Trial {
        suite,
        case,
        params,
        x,
        pexp,
        qexp,
        k,
    })
}

/// Runs the check of `t.suite` on the trial inputs.
pub fn run_trial(t: &Trial, opts: &VerifyOptions) -> Result<CheckReport> {
    let (x, p, c) = (&t.x, &t.params, t.case);
    match t.suite {
        Suite::Comparison => check_comparison(x, p, c, opts),
        Suite::SignChanges => check_sign_changes(x, p, c, opts),
        Suite::Rearrangement => check_rearrangement_ineq(x, p, c, opts),
        Suite::Ligun => check_ligun(x, p, c, t.pexp, t.k, opts),
        Suite::BohrFavard => check_bohr_favard(x, p, c, opts),
        Suite::LpLower => check_lp_lower(x, p, c, t.pexp, opts),
        Suite::Nagy => check_nagy(x, p, c, t.pexp, t.qexp, opts),
    }
}

/// Aggregate of a randomized suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub case: Case,
    pub trials: usize,
    pub seed: u64,
    pub violations: usize,
    pub errors: Vec<String>,
    pub worst_relative_slack: f64,
    pub worst: Option<CheckReport>,
    pub worst_trial: Option<Trial>,
}

impl SuiteSummary {
    pub fn pass(&self) -> bool {
        self.violations == 0 && self.errors.is_empty()
    }
}

/// Runs `trials` trials with seeds `seed, seed + 1, …` in parallel.
pub fn run_suite(suite: Suite, case: Case, trials: usize, seed: u64, opts: &VerifyOptions) -> SuiteSummary {
    let results: Vec<(u64, Result<(Trial, CheckReport)>)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let out = sample_trial(suite, case, s).and_then(|t| run_trial(&t, opts).map(|rep| (t, rep)));
            (s, out)
        })
        .collect();
    let mut sum = SuiteSummary {
        suite,
        case,
        trials,
        seed,
        violations: 0,
        errors: Vec::new(),
        worst_relative_slack: f64::INFINITY,
        worst: None,
        worst_trial: None,
    };
    for (s, res) in results {
        match res {
            Ok((t, rep)) => {
                if !rep.pass {
                    sum.violations += 1;
                    log::warn!("{suite} case {case} seed {s}: slack {:e}", rep.worst_slack);
                }
                if rep.relative_slack() < sum.worst_relative_slack {
                    sum.worst_relative_slack = rep.relative_slack();
                    sum.worst = Some(rep);
                    sum.worst_trial = Some(t);
                }
            }
            Err(e) => sum.errors.push(format!("seed {s}: {e}")),
        }
    }
    sum
}

/// Equality-case reports for `x = Ψ` (or its `λ = 1` member) across every suite.
pub fn self_check(p: &PsiParams, case: Case, opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    case.admits(p)?;
    let psi = TestFunction::Spline(build_Psi(p)?);
    let shifted = psi.shifted(0.3 * p.lam)?;
    let p1 = p.with_lambda(1.0);
    let psi1 = TestFunction::Spline(build_Psi(&p1)?);
    let mut out = vec![
        check_comparison(&shifted, p, case, opts)?,
        check_sign_changes(&shifted, p, case, opts)?,
        check_rearrangement_ineq(&psi1, &p1, case, opts)?,
        check_bohr_favard(&psi1, &p1, case, opts)?,
    ];
    for k in ligun_orders(case, p.r) {
        out.push(check_ligun(&psi1, &p1, case, 2.0, k, opts)?);
    }
    out.push(check_lp_lower(&psi1, &p1, case, 2.0, opts)?);
    out.push(check_nagy(&psi1, &p1, case, 2.0, 4.0, opts)?);
    Ok(out)
}

//! Worked examples for rearrangements, test functions and the inequality checks.

mod common;

use std::f64::consts::PI;

use common::*;
use ::rodov::*;

fn iv(lo: f64, hi: f64) -> Interval<f64> {
    Interval::new(lo, hi).unwrap()
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

/// Dense midpoint samples of `g` on the window, sorted decreasingly.
fn sorted_samples(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| g(lo + (hi - lo) * (i as f64 + 0.5) / n as f64))
        .collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn grid_measure(g: impl Fn(f64) -> f64, lo: f64, hi: f64, y: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    (0..n).filter(|&i| g(lo + h * (i as f64 + 0.5)) > y).count() as f64 * h
}

fn sine(amp: f64) -> TestFunction {
    TestFunction::Trig(TrigPoly::new(1.0, vec![], vec![0.0, amp]).unwrap())
}

fn constant(c: f64) -> TestFunction {
    TestFunction::Trig(TrigPoly::new(1.0, vec![c], vec![]).unwrap())
}

fn spline(p: &PsiParams) -> TestFunction {
    TestFunction::Spline(build_Psi(p).unwrap())
}

// ---- rearrange ----

#[test]
fn distribution_examples() {
    let tri = build_psi1(0.0, 0.0).unwrap().abs();
    let d = distribution(&tri, &iv(0.0, 4.0)).unwrap();
    let oracle = grid_measure(|t| tri.eval(t), 0.0, 4.0, 0.5, 1 << 16);
    assert!((d.measure_above(0.5) - 2.0).abs() < 1e-12);
    assert!((oracle - 2.0).abs() < 1e-3);

    let one = PiecewisePoly::constant(1.0, 1.0).unwrap();
    let d = distribution(&one, &iv(0.0, 1.0)).unwrap();
    assert_eq!(d.measure_above(0.5), 1.0);
    assert_eq!(d.measure_above(1.5), 0.0);

    let g = build_psi1(1.0, 0.0).unwrap().abs();
    let d = distribution(&g, &iv(0.0, 6.0)).unwrap();
    let oracle = grid_measure(|t| g.eval(t), 0.0, 6.0, 0.5, 1 << 16);
    assert!((d.measure_above(0.5) - 2.0).abs() < 1e-12);
    assert!((oracle - 2.0).abs() < 1e-3);
}

#[test]
fn rearrangement_examples() {
    let tri = build_psi1(0.0, 0.0).unwrap().abs();
    let r = rearrangement(&tri, &iv(0.0, 4.0), 257).unwrap().normalize();
    let sorted = sorted_samples(|t| tri.eval(t), 0.0, 4.0, 1 << 16);
    for (u, v) in r.u.iter().zip(&r.values) {
        assert!((v - (1.0 - u)).abs() <= 1e-8, "r({u}) = {v}");
        let idx = ((u * sorted.len() as f64) as usize).min(sorted.len() - 1);
        assert!((v - sorted[idx]).abs() < 1e-3);
    }

    let c = PiecewisePoly::constant(2.0, 0.7).unwrap();
    let r = rearrangement(&c, &iv(0.0, 2.0), 33).unwrap();
    assert!(r.values.iter().all(|&v| v == 0.7 || r.u.last() == Some(&2.0)));
    assert!(r.values[..r.values.len() - 1].iter().all(|&v| v == 0.7));

    // |ψ₁(1,0)| on [0,6): d(y) = 4(1 - y), so r(u) = 1 - u/4 on [0,4] and 0 after
    let g = build_psi1(1.0, 0.0).unwrap().abs();
    let r = rearrangement(&g, &iv(0.0, 6.0), 601).unwrap();
    let sorted = sorted_samples(|t| g.eval(t), 0.0, 6.0, 1 << 16);
    for (u, v) in r.u.iter().zip(&r.values) {
        let want = if *u < 4.0 { 1.0 - u / 4.0 } else { 0.0 };
        assert!((v - want).abs() <= 1e-10, "r({u}) = {v}");
        let idx = ((u / 6.0 * sorted.len() as f64) as usize).min(sorted.len() - 1);
        assert!((v - sorted[idx]).abs() < 1e-3);
    }
}

#[test]
fn cumulative_examples() {
    // triangle wave on the unit window
    let tri = build_psi1(0.0, 0.0).unwrap().abs().rescale(0.25, 1.0).unwrap();
    let got = cumulative_rearrangement(&tri, &iv(0.0, 1.0), 1.0).unwrap();
    let sorted = sorted_samples(|t| tri.eval(t), 0.0, 1.0, 1 << 16);
    let oracle: f64 = sorted.iter().sum::<f64>() / sorted.len() as f64;
    assert!((got - 0.5).abs() < 1e-12);
    assert!((oracle - 0.5).abs() < 1e-6);
    let half = cumulative_rearrangement(&tri, &iv(0.0, 1.0), 0.5).unwrap();
    assert!((half - simpson(|u| 1.0 - u, 0.0, 0.5, 64)).abs() < 1e-12);

    let c = PiecewisePoly::constant(1.0, 3.0).unwrap();
    for t in [0.0, 0.25, 1.0] {
        assert!((cumulative_rearrangement(&c, &iv(0.0, 1.0), t).unwrap() - 3.0 * t).abs() < 1e-14);
    }
    assert_eq!(cumulative_rearrangement(&tri, &iv(0.0, 1.0), 0.0).unwrap(), 0.0);
    assert!(matches!(
        cumulative_rearrangement(&tri, &iv(0.0, 1.0), 1.5),
        Err(Error::TOutOfRange { .. })
    ));
}

// ---- test functions and hypotheses ----

#[test]
fn hypothesis_examples() {
    let p = PsiParams::new(3, 0.0, 1.0, 1.0, 1.0).unwrap();
    let ks = Case::A.orders(3);
    let rep = check_hypothesis(&spline(&p), &p, &ks, &opts()).unwrap();
    assert!(rep.pass && rep.worst_slack.abs() < 1e-12);

    let rep = check_hypothesis(&spline(&p).scaled(0.999), &p, &ks, &opts()).unwrap();
    assert!(rep.pass && (rep.worst_slack - 0.001).abs() < 1e-9);

    // 0.1 sin 2πt has ‖x^{(k)}‖ = 0.1 (2π)^k against Ψ matched to (3/2, 1, 1)
    let p = match_case_a(2, 1.5, 1.0, 1.0).unwrap();
    let rep = check_hypothesis(&sine(0.1), &p, &[0, 1, 2], &opts()).unwrap();
    for e in &rep.hypothesis {
        let exact = 0.1 * (2.0 * PI).powi(e.k as i32);
        assert!(e.measured >= exact && e.measured <= exact * (1.0 + 1e-12));
        assert_eq!(e.holds, exact <= e.bound);
    }
    assert_eq!(
        rep.hypothesis.iter().map(|e| e.holds).collect::<Vec<_>>(),
        vec![true, true, false]
    );
    assert!(!rep.pass);
}

#[test]
fn spline_derivatives_beyond_r_are_unavailable() {
    let p = PsiParams::new(3, 1.0, 0.0, 1.0, 2.0).unwrap();
    assert!(matches!(
        check_hypothesis(&spline(&p), &p, &[4], &opts()),
        Err(Error::KOutOfRange { .. })
    ));
    assert!(matches!(
        spline(&p).certified_sup(4),
        Err(Error::DerivativeUnavailable { k: 4, max: 3 })
    ));
}

#[test]
fn generate_admissible_examples() {
    let p = PsiParams::new(4, 1.5, 0.5, 1.2, 0.8).unwrap();
    let ks = Case::C.orders(4);
    let x = generate_admissible(&p, &ks, GenKind::ScaledPsi(0.9), 0).unwrap();
    let rep = check_hypothesis(&x, &p, &ks, &opts()).unwrap();
    assert!(rep.pass && (rep.worst_slack - 0.1).abs() < 1e-9);

    let a = generate_admissible(&p, &ks, GenKind::Trig, 42).unwrap();
    assert_eq!(a, generate_admissible(&p, &ks, GenKind::Trig, 42).unwrap());
    let rep = check_hypothesis(&a, &p, &ks, &opts()).unwrap();
    assert!(rep.pass);
    // the binding order sits on its bound up to the safety factor
    assert!(rep.worst_slack < 1e-8);

    let s = generate_admissible(&p, &ks, GenKind::ShiftedPsi(0.3), 0).unwrap();
    let rep = check_hypothesis(&s, &p, &ks, &opts()).unwrap();
    assert!(rep.pass && rep.worst_slack.abs() < 1e-12);
}

// ---- comparison and sign changes ----

#[test]
fn comparison_examples() {
    let p = PsiParams::new(3, 0.0, 1.5, 1.0, 2.0).unwrap();
    let dnorm = Psi_derivative_norm(&p, 1).unwrap();
    let x = spline(&p).shifted(0.3 * p.lam).unwrap();
    let rep = check_comparison(&x, &p, Case::A, &opts()).unwrap();
    assert!(rep.pass);
    assert!(rep.worst_slack.abs() <= 1e-9 * dnorm, "{}", rep.worst_slack);

    let rep = check_comparison(&spline(&p).scaled(0.9), &p, Case::A, &opts()).unwrap();
    assert!(rep.pass && rep.worst_slack > 0.0);

    let x = generate_admissible(&p, &Case::A.orders(3), GenKind::Trig, 5).unwrap();
    let rep = check_comparison(&x, &p, Case::A, &opts()).unwrap();
    assert!(rep.pass);
    // witness re-evaluated directly: Ψ(ξ) = x(τ) and the slack is |Ψ'(ξ)| - |x'(τ)|
    let psi = build_Psi(&p).unwrap();
    let (tau, xi) = (rep.witness["tau"], rep.witness["xi"]);
    let y = x.eval(tau).clamp(-(1.0 - 1e-6) * Psi_derivative_norm(&p, 0).unwrap(), f64::INFINITY);
    assert!((psi.eval(xi) - y).abs() < 1e-9);
    let d = central_diff(|t| psi.eval(t), xi, 1e-6).abs() - x.derivative_at(1, tau).unwrap().abs();
    assert!((d - rep.worst_slack).abs() < 1e-6 * dnorm);
}

#[test]
fn comparison_requires_the_hypothesis() {
    let p = PsiParams::new(3, 0.0, 1.5, 1.0, 2.0).unwrap();
    assert!(matches!(
        check_comparison(&spline(&p).scaled(1.01), &p, Case::A, &opts()),
        Err(Error::HypothesisFailed(_))
    ));
}

#[test]
fn euler_splines_reproduce_the_classical_comparison() {
    // a1 = a2 = 0: Ψ is a rescaled Euler spline
    let p = PsiParams::new(4, 0.0, 0.0, 1.0, 1.0).unwrap();
    let phi = euler_phi(4, 2.0 * PI / p.lam).unwrap();
    let psi = build_Psi(&p).unwrap();
    for i in 0..64 {
        let t = i as f64 / 64.0;
        assert!((phi.eval(t) - psi.eval(t)).abs() < 1e-12);
    }
    for seed in 0..5 {
        let x = generate_admissible(&p, &Case::A.orders(4), GenKind::Trig, seed).unwrap();
        assert!(check_comparison(&x, &p, Case::A, &opts()).unwrap().pass);
    }
}

fn oracle_changes(d: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> usize {
    let mut last = 0.0f64;
    let mut n = 0;
    for i in 0..=4000 {
        let v = d(lo + (hi - lo) * i as f64 / 4000.0);
        if v.abs() <= tol {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            n += 1;
        }
        last = v.signum();
    }
    n
}

#[test]
fn sign_change_examples() {
    let p = PsiParams::new(3, 0.0, 1.0, 1.0, 1.0).unwrap();
    let rep = check_sign_changes(&constant(0.0), &p, Case::A, &opts()).unwrap();
    assert!(rep.pass);

    let psi = build_Psi(&p).unwrap();
    let x = spline(&p).scaled(0.9);
    let rep = check_sign_changes(&x, &p, Case::A, &opts()).unwrap();
    assert!(rep.pass);
    for b in psi.monotone_branches() {
        let n = oracle_changes(|t| psi.eval(t) - x.eval(t), b.interval.lo, b.interval.hi, 1e-12);
        assert_eq!(n, 1);
    }

    let x = generate_admissible(&p, &Case::A.orders(3), GenKind::Trig, 9).unwrap();
    assert!(check_sign_changes(&x, &p, Case::A, &opts()).unwrap().pass);
}

// ---- rearrangement and Ligun-type inequalities ----

#[test]
fn rearrangement_inequality_examples() {
    let p = PsiParams::new(3, 0.0, 1.0, 1.0, 0.5).unwrap();
    let rep = check_rearrangement_ineq(&spline(&p), &p, Case::A, &opts()).unwrap();
    assert!(rep.pass);
    assert!(rep.worst_slack.abs() <= 1e-9 * rep.scale);

    let c = 0.5 * Psi_derivative_norm(&p, 0).unwrap();
    let rep = check_rearrangement_ineq(&constant(c), &p, Case::A, &opts()).unwrap();
    assert!(rep.pass && rep.witness["lhs"] == 0.0);

    let x = generate_admissible(&p, &Case::A.orders(3), GenKind::Trig, 3).unwrap();
    assert!(check_rearrangement_ineq(&x, &p, Case::A, &opts()).unwrap().pass);

    let q = PsiParams::new(3, 0.0, 1.0, 1.0, 0.4).unwrap();
    assert!(matches!(
        check_rearrangement_ineq(&spline(&q), &q, Case::A, &opts()),
        Err(Error::NotApplicable(_))
    ));
}

#[test]
fn ligun_examples() {
    let p = PsiParams::new(4, 0.0, 1.0, 1.0, 0.5).unwrap();
    let x = spline(&p);
    for k in ligun_orders(Case::A, 4) {
        let rep = check_ligun(&x, &p, Case::A, 1.0, k, &opts()).unwrap();
        assert!(rep.pass);
        assert!(rep.worst_slack.abs() <= 1e-9 * rep.scale);
        let oracle = simpson(|t| x.derivative_at(k, t).unwrap().abs(), 0.0, 1.0, 1 << 14);
        assert!(rel_close(rep.witness["lhs"], oracle, 1e-6));
    }
    assert!(check_ligun(&constant(0.0), &p, Case::A, 1.0, 1, &opts()).unwrap().pass);
    let t = generate_admissible(&p, &Case::A.orders(4), GenKind::Trig, 8).unwrap();
    assert!(check_ligun(&t, &p, Case::A, 2.0, 2, &opts()).unwrap().pass);
    assert!(matches!(
        check_ligun(&x, &p, Case::A, 2.0, 0, &opts()),
        Err(Error::KOutOfRange { k: 0, r: 4 })
    ));
    let q = PsiParams::new(4, 1.0, 1.0, 1.0, 0.5).unwrap();
    assert!(matches!(
        check_ligun(&spline(&q), &q, Case::C, 2.0, 2, &opts()),
        Err(Error::KOutOfRange { k: 2, r: 4 })
    ));
}

// ---- best constant and its consequences ----

#[test]
fn best_constant_examples() {
    let (c, e) = best_constant(&sine(1.0)).unwrap();
    assert!(c.abs() < 1e-14 && (e - 1.0).abs() < 1e-14);

    let p = PsiParams::new(3, 1.0, 0.5, 1.3, 2.0).unwrap();
    let x = spline(&p);
    let (c, e) = best_constant(&x).unwrap();
    let psi = build_Psi(&p).unwrap();
    let n = 1 << 16;
    let samples: Vec<f64> = (0..n).map(|i| psi.eval(p.lam * i as f64 / n as f64)).collect();
    let hi = samples.iter().cloned().fold(f64::MIN, f64::max);
    let lo = samples.iter().cloned().fold(f64::MAX, f64::min);
    assert!(c.abs() < 1e-12);
    assert!(rel_close(e, Psi_derivative_norm(&p, 0).unwrap(), 1e-12));
    assert!(rel_close(e, 0.5 * (hi - lo), 1e-6));

    let (c, e) = best_constant(&constant(5.0)).unwrap();
    assert_eq!((c, e), (5.0, 0.0));
}

#[test]
fn bohr_favard_examples() {
    let p = PsiParams::new(3, 1.0, 0.0, 1.0, 1.0).unwrap();
    let rep = check_bohr_favard(&spline(&p), &p, Case::B, &opts()).unwrap();
    assert!(rep.pass && rep.worst_slack.abs() <= 1e-12 * rep.scale);

    let rep = check_bohr_favard(&constant(3.0), &p, Case::B, &opts()).unwrap();
    assert!(rep.pass && rep.witness["e0"] == 0.0);

    let x = generate_admissible(&p, &Case::B.derivative_orders(3), GenKind::Trig, 2).unwrap();
    assert!(check_bohr_favard(&x, &p, Case::B, &opts()).unwrap().pass);

    let q = p.with_lambda(2.0);
    assert!(check_bohr_favard(&spline(&q), &q, Case::B, &opts()).is_err());
}

#[test]
fn lp_lower_examples() {
    let p = PsiParams::new(3, 0.5, 0.5, 1.0, 1.0).unwrap();
    for x in [spline(&p), spline(&p).shifted(0.37).unwrap()] {
        let rep = check_lp_lower(&x, &p, Case::C, 2.0, &opts()).unwrap();
        assert!(rep.pass && rep.worst_slack.abs() <= 1e-9 * rep.scale);
    }
    let x = TestFunction::Trig(TrigPoly::new(1.0, vec![0.1, 0.3], vec![0.0, 0.2, -0.1]).unwrap());
    let ks = Case::C.derivative_orders(3);
    let q = tune_lp_lower(&x, 3, 0.5, 0.5, &ks, 0.8).unwrap();
    let (_, e0) = best_constant(&x).unwrap();
    assert!(rel_close(Psi_derivative_norm(&q, 0).unwrap(), e0, 1e-12));
    for p_exp in [1.0, 2.0, 4.0] {
        assert!(check_lp_lower(&x, &q, Case::C, p_exp, &opts()).unwrap().pass);
    }
    assert!(matches!(
        check_lp_lower(&x.scaled(0.5), &q, Case::C, 2.0, &opts()),
        Err(Error::EqualityPreconditionFailed { .. })
    ));
}

#[test]
fn nagy_examples() {
    let p = PsiParams::new(4, 0.0, 2.0, 1.0, 1.0).unwrap();
    for (a, b) in [(1.0, 2.0), (2.0, 8.0)] {
        let rep = check_nagy(&spline(&p), &p, Case::A, a, b, &opts()).unwrap();
        assert!(rep.pass && rep.worst_slack.abs() <= 1e-9 * rep.scale);
    }
    let rep = check_nagy(&constant(2.5), &p, Case::A, 1.0, 2.0, &opts()).unwrap();
    assert!(rep.pass && rep.worst_slack == 0.0);

    let x = TestFunction::Trig(TrigPoly::new(1.0, vec![1.0, 0.2], vec![0.0, -0.4, 0.1]).unwrap());
    let ks = Case::A.derivative_orders(4);
    let q = tune_nagy(&x, 4, 0.0, 2.0, &ks, 2.0, 0.7).unwrap();
    let rep = check_nagy(&x, &q, Case::A, 2.0, 4.0, &opts()).unwrap();
    assert!(rep.pass);
    // independent Lq oracle on x - c(x)
    let (c, _) = best_constant(&x).unwrap();
    let xq = simpson(|t| (x.eval(t) - c).powi(4), 0.0, 1.0, 1 << 12).powf(0.25);
    assert!(rel_close(rep.witness["rhs"], xq, 1e-9));

    assert!(matches!(
        check_nagy(&x, &q, Case::A, 2.0, 2.0, &opts()),
        Err(Error::BadExponents { .. })
    ));
}

#[test]
fn self_check_reports_equality() {
    let p = PsiParams::new(4, 0.7, 0.3, 1.5, 2.0).unwrap();
    for rep in self_check(&p, Case::C, &opts()).unwrap() {
        assert!(rep.pass, "{}", rep.name);
        if rep.name != "sign_changes" {
            assert!(rep.worst_slack.abs() <= 1e-9 * rep.scale, "{} {}", rep.name, rep.worst_slack);
        }
    }
}

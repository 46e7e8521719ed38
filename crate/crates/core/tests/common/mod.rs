//! Independent oracles: direct table formulas and grid integration, sharing
//! nothing with the library beyond the functions under test.
#![allow(dead_code)]

/// `ψ_1(a1, a2; t)` straight from the trapezoid table and the odd half-period shift.
pub fn psi1_table(a1: f64, a2: f64, t: f64) -> f64 {
    let big_t = a1 + a2 + 2.0;
    let mut u = t.rem_euclid(2.0 * big_t);
    let mut sign = 1.0;
    if u >= big_t {
        u -= big_t;
        sign = -1.0;
    }
    let v = if u <= a1 {
        0.0
    } else if u <= a1 + 1.0 {
        u - a1
    } else if u <= a1 + a2 + 1.0 {
        1.0
    } else {
        big_t - u
    };
    sign * v
}

/// Samples of `ψ_r` on `n` uniform points of one period, by repeated
/// cumulative trapezoid integration and mean removal.
pub fn psi_grid(r: usize, a1: f64, a2: f64, n: usize) -> Vec<f64> {
    let p = 2.0 * (a1 + a2 + 2.0);
    let h = p / n as f64;
    let mut f: Vec<f64> = (0..n).map(|i| psi1_table(a1, a2, i as f64 * h)).collect();
    for _ in 1..r {
        let mut g = vec![0.0; n];
        for i in 1..n {
            g[i] = g[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        }
        let mean = g.iter().sum::<f64>() / n as f64;
        g.iter_mut().for_each(|v| *v -= mean);
        f = g;
    }
    f
}

/// Linear interpolation into a periodic grid.
pub fn grid_eval(samples: &[f64], period: f64, t: f64) -> f64 {
    let n = samples.len();
    let x = t.rem_euclid(period) / period * n as f64;
    let i = x.floor() as usize % n;
    let w = x - x.floor();
    samples[i] * (1.0 - w) + samples[(i + 1) % n] * w
}

pub fn grid_max_abs(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    (0..=n)
        .map(|i| f(lo + (hi - lo) * i as f64 / n as f64).abs())
        .fold(0.0, f64::max)
}

pub fn central_diff(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

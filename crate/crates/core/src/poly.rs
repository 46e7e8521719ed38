//! Dense polynomial kernels in a local variable, `p(u) = c[0] + c[1] u + ...`.

use crate::scalar::{lit, Scalar};

/// Highest polynomial degree accepted by root isolation.
pub const MAX_DEGREE: usize = 64;

#[inline]
pub(crate) fn horner<T: Scalar>(c: &[T], u: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, &a| acc * u + a)
}

pub(crate) fn derivative<T: Scalar>(c: &[T]) -> Vec<T> {
    if c.len() <= 1 {
        return vec![T::zero()];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(m, &a)| a * T::from_usize(m).unwrap())
        .collect()
}

/// Coefficients of `c0 + ∫_0^u p`.
pub(crate) fn antiderivative<T: Scalar>(c: &[T], c0: T) -> Vec<T> {
    let mut out = Vec::with_capacity(c.len() + 1);
    out.push(c0);
    out.extend(
        c.iter()
            .enumerate()
            .map(|(m, &a)| a / T::from_usize(m + 1).unwrap()),
    );
    out
}

pub(crate) fn integrate<T: Scalar>(c: &[T], a: T, b: T) -> T {
    let p = antiderivative(c, T::zero());
    horner(&p, b) - horner(&p, a)
}

/// Coefficients of `q(u) = p(u + h)`.
pub(crate) fn taylor_shift<T: Scalar>(c: &[T], h: T) -> Vec<T> {
    let mut a = c.to_vec();
    let n = a.len();
    if h == T::zero() || n < 2 {
        return a;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            a[j] = a[j] + h * a[j + 1];
        }
    }
    a
}

/// Coefficients of `q(u) = amp * p(s u)`.
pub(crate) fn rescale<T: Scalar>(c: &[T], s: T, amp: T) -> Vec<T> {
    let mut f = amp;
    c.iter()
        .map(|&a| {
            let v = a * f;
            f = f * s;
            v
        })
        .collect()
}

/// Upper bound of `|p|` on `[lo, hi]` from the coefficient magnitudes.
pub(crate) fn magnitude_bound<T: Scalar>(c: &[T], lo: T, hi: T) -> T {
    let w = lo.abs().max(hi.abs());
    c.iter().rev().fold(T::zero(), |acc, &a| acc * w + a.abs())
}

pub(crate) fn degree<T: Scalar>(c: &[T]) -> usize {
    c.iter().rposition(|&a| a != T::zero()).unwrap_or(0)
}

/// Zeros of one polynomial piece on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum PieceZeros<T> {
    Everywhere,
    Points(Vec<T>),
}

/// Real zeros of `p` on `[lo, hi]`: sign crossings plus touches where `|p| <= tol`
/// at a critical point. Critical points come from the derivative chain.
pub(crate) fn real_roots_in<T: Scalar>(c: &[T], lo: T, hi: T, tol: T) -> PieceZeros<T> {
    let deg = degree(c);
    let c = &c[..=deg];
    if magnitude_bound(c, lo, hi) <= tol {
        return PieceZeros::Everywhere;
    }
    if deg == 0 {
        return PieceZeros::Points(Vec::new());
    }
    let mut nodes = vec![lo];
    if deg >= 2 && hi > lo {
        let dtol = tol * lit::<T>(1e-3) / (hi - lo);
        if let PieceZeros::Points(ps) = real_roots_in(&derivative(c), lo, hi, dtol) {
            nodes.extend(ps.into_iter().filter(|&x| x > lo && x < hi));
        }
    }
    if hi > lo {
        nodes.push(hi);
    }
    let vals: Vec<T> = nodes.iter().map(|&x| horner(c, x)).collect();
    let mut roots: Vec<T> = Vec::new();
    let push = |x: T, roots: &mut Vec<T>| {
        if roots.last().map_or(true, |&l| x > l) {
            roots.push(x);
        }
    };
    for i in 0..nodes.len() {
        if vals[i].abs() <= tol {
            push(nodes[i], &mut roots);
        }
        if i + 1 < nodes.len() {
            let (fa, fb) = (vals[i], vals[i + 1]);
            if fa.abs() > tol && fb.abs() > tol && (fa > T::zero()) != (fb > T::zero()) {
                let x = solve_bracketed(|u| horner(c, u), nodes[i], nodes[i + 1], fa, fb);
                push(x, &mut roots);
            }
        }
    }
    PieceZeros::Points(roots)
}

/// Illinois regula falsi on a sign-changing bracket, with bisection safeguard.
pub(crate) fn solve_bracketed<T: Scalar, F: Fn(T) -> T>(
    f: F,
    mut a: T,
    mut b: T,
    mut fa: T,
    mut fb: T,
) -> T {
    let zero = T::zero();
    if fa == zero {
        return a;
    }
    if fb == zero {
        return b;
    }
    let four_eps = T::epsilon() * lit(4.0);
    let half = lit::<T>(0.5);
    let mut side = 0i8;
    let mut last_width = b - a;
    for it in 0..400 {
        let width = b - a;
        if width <= four_eps * a.abs().max(b.abs()) || width <= T::min_positive_value() {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        // bisect every few steps if regula falsi is not shrinking the bracket
        if !(x > a && x < b) || (it % 4 == 3 && width > half * last_width) {
            x = a + half * width;
            if it % 4 == 3 {
                last_width = width;
            }
        }
        if !(x > a && x < b) {
            break;
        }
        let fx = f(x);
        if fx == zero {
            return x;
        }
        if (fx > zero) == (fa > zero) {
            a = x;
            fa = fx;
            if side == -1 {
                fb = fb * half;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa = fa * half;
            }
            side = 1;
        }
    }
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

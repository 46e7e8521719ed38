//! Periodic test functions with exact derivative access.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Interval, PiecewisePoly};

/// Taylor degree used to turn trigonometric derivatives into piecewise polynomials.
const TAYLOR_DEGREE: usize = 14;
/// Largest `ω h` per Taylor segment.
const TAYLOR_STEP: f64 = 0.5;

/// `Σ_j cos[j] cos(ω_j t) + sin[j] sin(ω_j t)` with `ω_j = 2πj / period`.
///
/// `cos[0]` is the constant term and `sin[0]` is ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub period: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(period: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let t = Self { period, cos, sin };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0) || !self.period.is_finite() {
            return Err(Error::InvalidParams(format!("period {} must be positive", self.period)));
        }
        if self.cos.iter().chain(&self.sin).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("non-finite trigonometric coefficient".into()));
        }
        Ok(())
    }

    fn harmonics(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn coef(&self, j: usize) -> (f64, f64) {
        (
            self.cos.get(j).copied().unwrap_or(0.0),
            if j == 0 { 0.0 } else { self.sin.get(j).copied().unwrap_or(0.0) },
        )
    }

    fn omega(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.period
    }

    fn max_omega(&self) -> f64 {
        (1..self.harmonics())
            .rev()
            .find(|&j| self.coef(j) != (0.0, 0.0))
            .map_or(0.0, |j| self.omega(j))
    }

    /// `n`-th derivative of one harmonic given `cos θ`, `sin θ`.
    fn harmonic_derivative(c: f64, s: f64, w: f64, n: usize, cs: f64, sn: f64) -> f64 {
        // d^n/dt^n [c cos θ + s sin θ] rotates (cos θ, sin θ) by n quarter turns
        let v = match n % 4 {
            0 => c * cs + s * sn,
            1 => -c * sn + s * cs,
            2 => -c * cs - s * sn,
            _ => c * sn - s * cs,
        };
        v * w.powi(n as i32)
    }

    pub fn derivative_at(&self, n: usize, t: f64) -> f64 {
        let mut acc = if n == 0 { self.coef(0).0 } else { 0.0 };
        for j in 1..self.harmonics() {
            let (c, s) = self.coef(j);
            if c == 0.0 && s == 0.0 {
                continue;
            }
            let w = self.omega(j);
            let (sn, cs) = (w * t).sin_cos();
            acc += Self::harmonic_derivative(c, s, w, n, cs, sn);
        }
        acc
    }

    /// `Σ_j ω_j^n |(cos[j], sin[j])|`, an upper bound for `‖x^{(n)}‖∞`.
    pub fn amplitude_bound(&self, n: usize) -> f64 {
        let mut b = if n == 0 { self.coef(0).0.abs() } else { 0.0 };
        for j in 1..self.harmonics() {
            let (c, s) = self.coef(j);
            b += self.omega(j).powi(n as i32) * c.hypot(s);
        }
        b
    }

    fn taylor_segments(&self) -> usize {
        ((self.max_omega() * self.period / TAYLOR_STEP).ceil() as usize).max(1)
    }

    /// `x^{(k)}` as a piecewise Taylor polynomial with error at most
    /// [`TrigPoly::taylor_error`].
    pub fn derivative_poly(&self, k: usize) -> Result<PiecewisePoly> {
        let n = self.taylor_segments();
        let h = self.period / n as f64;
        let mut breaks = Vec::with_capacity(n);
        let mut segs = Vec::with_capacity(n);
        let active: Vec<(f64, f64, f64)> = (1..self.harmonics())
            .map(|j| {
                let (c, s) = self.coef(j);
                (c, s, self.omega(j))
            })
            .filter(|&(c, s, _)| c != 0.0 || s != 0.0)
            .collect();
        for i in 0..n {
            let t0 = i as f64 * h;
            let mut coeffs = vec![0.0; TAYLOR_DEGREE + 1];
            if k == 0 {
                coeffs[0] = self.coef(0).0;
            }
            for &(c, s, w) in &active {
                let (sn, cs) = (w * t0).sin_cos();
                let mut fact = 1.0;
                for (m, slot) in coeffs.iter_mut().enumerate() {
                    if m > 0 {
                        fact *= m as f64;
                    }
                    *slot += Self::harmonic_derivative(c, s, w, k + m, cs, sn) / fact;
                }
            }
            breaks.push(t0);
            segs.push(coeffs);
        }
        PiecewisePoly::new(self.period, breaks, segs)
    }

    /// Lagrange remainder bound of [`TrigPoly::derivative_poly`] for order `k`.
    pub fn taylor_error(&self, k: usize) -> f64 {
        let h = self.period / self.taylor_segments() as f64;
        let m = TAYLOR_DEGREE + 1;
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        self.amplitude_bound(k + m) * h.powi(m as i32) / fact
    }

    pub fn scaled(&self, f: f64) -> Self {
        Self {
            period: self.period,
            cos: self.cos.iter().map(|c| c * f).collect(),
            sin: self.sin.iter().map(|c| c * f).collect(),
        }
    }

    /// `x(· + s)`.
    pub fn shifted(&self, s: f64) -> Self {
        let mut cos = vec![0.0; self.harmonics()];
        let mut sin = vec![0.0; self.harmonics()];
        for j in 0..self.harmonics() {
            let (c, d) = self.coef(j);
            if j == 0 {
                cos[0] = c;
                continue;
            }
            let (sn, cs) = (self.omega(j) * s).sin_cos();
            cos[j] = c * cs + d * sn;
            sin[j] = d * cs - c * sn;
        }
        Self {
            period: self.period,
            cos,
            sin,
        }
    }

    pub fn plus_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        if out.cos.is_empty() {
            out.cos.push(0.0);
        }
        out.cos[0] += c;
        out
    }
}

/// A periodic test function: a trigonometric polynomial or a spline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TestFunction {
    Trig(TrigPoly),
    Spline(PiecewisePoly),
}

impl TestFunction {
    pub fn period(&self) -> f64 {
        match self {
            TestFunction::Trig(t) => t.period,
            TestFunction::Spline(f) => f.period(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TestFunction::Trig(t) => t.validate(),
            TestFunction::Spline(f) => f.validate(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TestFunction::Trig(p) => p.derivative_at(0, t),
            TestFunction::Spline(f) => f.eval(t),
        }
    }

    /// Highest derivative order that exists as a bounded function.
    ///
    /// For a spline this is the first order whose derivative jumps at a breakpoint.
    pub fn max_order(&self) -> usize {
        match self {
            TestFunction::Trig(_) => usize::MAX,
            TestFunction::Spline(f) => {
                let mut g = f.clone();
                for j in 0..=f.degree() {
                    if g.continuity_gap() > 1e-9 * (1.0 + g.sup_norm()) {
                        return j;
                    }
                    g = g.differentiate();
                }
                usize::MAX
            }
        }
    }

    fn check_order(&self, k: usize) -> Result<()> {
        let max = self.max_order();
        if k > max {
            return Err(Error::DerivativeUnavailable { k, max });
        }
        Ok(())
    }

    pub fn derivative_at(&self, k: usize, t: f64) -> Result<f64> {
        self.check_order(k)?;
        Ok(match self {
            TestFunction::Trig(p) => p.derivative_at(k, t),
            TestFunction::Spline(f) => f.derivative(k).eval(t),
        })
    }

    /// `x^{(k)}` as a piecewise polynomial; see [`TestFunction::derivative_error`].
    pub fn derivative_poly(&self, k: usize) -> Result<PiecewisePoly> {
        self.check_order(k)?;
        match self {
            TestFunction::Trig(p) => p.derivative_poly(k),
            TestFunction::Spline(f) => Ok(f.derivative(k)),
        }
    }

    /// Uniform bound on `|x^{(k)} - derivative_poly(k)|`.
    pub fn derivative_error(&self, k: usize) -> f64 {
        match self {
            TestFunction::Trig(p) => p.taylor_error(k),
            TestFunction::Spline(_) => 0.0,
        }
    }

    /// An upper bound on `‖x^{(k)}‖∞`.
    pub fn certified_sup(&self, k: usize) -> Result<f64> {
        Ok(self.derivative_poly(k)?.sup_norm() + self.derivative_error(k))
    }

    /// Bounds `(lo, hi)` with `lo ≤ min x` and `hi ≥ max x`.
    pub fn certified_range(&self) -> Result<(f64, f64)> {
        let (lo, hi) = self.derivative_poly(0)?.range();
        let e = self.derivative_error(0);
        Ok((lo - e, hi + e))
    }

    /// `‖x^{(k)}‖_{L_p(window)}`.
    pub fn lp_norm(&self, k: usize, p: f64, window: &Interval<f64>) -> Result<f64> {
        self.derivative_poly(k)?.lp_norm(p, window)
    }

    /// True when the period divides 1, so `x` is 1-periodic.
    pub fn is_unit_periodic(&self) -> bool {
        let n = 1.0 / self.period();
        n >= 1.0 - 1e-12 && (n - n.round()).abs() <= 1e-9 * n
    }

    pub fn scaled(&self, f: f64) -> Self {
        match self {
            TestFunction::Trig(p) => TestFunction::Trig(p.scaled(f)),
            TestFunction::Spline(g) => TestFunction::Spline(g.scale(f)),
        }
    }

    /// `x(· + s)`.
    pub fn shifted(&self, s: f64) -> Result<Self> {
        Ok(match self {
            TestFunction::Trig(p) => TestFunction::Trig(p.shifted(s)),
            TestFunction::Spline(g) => TestFunction::Spline(g.window(s, s + g.period())?),
        })
    }

    pub fn plus_constant(&self, c: f64) -> Self {
        match self {
            TestFunction::Trig(p) => TestFunction::Trig(p.plus_constant(c)),
            TestFunction::Spline(g) => TestFunction::Spline(g.add_constant(c)),
        }
    }
}

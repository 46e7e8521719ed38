//! The scaled family `Ψ_{a1,a2,b,λ}(t) = b σ^r ψ_r(a1, a2; t/σ)` with
//! `σ = λ / (2 a1 + 2 a2 + 4)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rodov::{psi_shared, psi_sup_norm, RodovParams};
use crate::{Interval, PiecewisePoly};

/// A member of the scaled family; serialized with keys `r, a1, a2, b, lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiParams {
    pub r: usize,
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
    #[serde(rename = "lambda")]
    pub lam: f64,
}

impl PsiParams {
    pub fn new(r: usize, a1: f64, a2: f64, b: f64, lam: f64) -> Result<Self> {
        let p = Self { r, a1, a2, b, lam };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        RodovParams::new(self.r, self.a1, self.a2)?;
        if self.b == 0.0 || !self.b.is_finite() {
            return Err(Error::InvalidParams(format!("amplitude b = {} must be nonzero", self.b)));
        }
        if !(self.lam > 0.0) || !self.lam.is_finite() {
            return Err(Error::NonPositiveLambda(self.lam));
        }
        Ok(())
    }

    pub fn rodov(&self) -> RodovParams {
        RodovParams {
            r: self.r,
            a1: self.a1,
            a2: self.a2,
        }
    }

    /// Half period `T` of the base spline.
    pub fn half_period(&self) -> f64 {
        self.a1 + self.a2 + 2.0
    }

    /// Time scale `σ = λ / 2T`.
    pub fn sigma(&self) -> f64 {
        self.lam / (2.0 * self.half_period())
    }

    /// Same shape with a different period, all else fixed.
    pub fn with_lambda(&self, lam: f64) -> Self {
        Self { lam, ..*self }
    }
}

/// `Ψ` as a `λ`-periodic piecewise polynomial.
#[allow(non_snake_case)]
pub fn build_Psi(p: &PsiParams) -> Result<PiecewisePoly> {
    p.validate()?;
    let s = p.sigma();
    let f = psi_shared(p.r, p.a1, p.a2)?.rescale(s, p.b * s.powi(p.r as i32))?;
    // pin the period to λ exactly rather than 2T·σ
    PiecewisePoly::new(p.lam, f.breakpoints().to_vec(), f.segments().to_vec())
}

/// `‖Ψ^{(k)}‖∞ = |b| σ^{r-k} ‖ψ_{r-k}‖∞`, with `‖ψ_0‖∞ = 1`.
#[allow(non_snake_case)]
pub fn Psi_derivative_norm(p: &PsiParams, k: usize) -> Result<f64> {
    p.validate()?;
    if k > p.r {
        return Err(Error::KOutOfRange { k, r: p.r });
    }
    let base = if k == p.r {
        1.0
    } else {
        psi_sup_norm(p.r - k, p.a1, p.a2)?
    };
    Ok(p.b.abs() * p.sigma().powi((p.r - k) as i32) * base)
}

/// `(k, ‖Ψ^{(k)}‖∞)` for `k = 0..=r`.
pub fn norm_profile(p: &PsiParams) -> Result<Vec<(usize, f64)>> {
    (0..=p.r)
        .map(|k| Psi_derivative_norm(p, k).map(|n| (k, n)))
        .collect()
}

/// `‖Ψ‖_{L_p(0,λ)} = |b| σ^{r + 1/p} ‖ψ_r‖_{L_p(0,2T)}`.
#[allow(non_snake_case)]
pub fn Psi_lp_norm(p: &PsiParams, pexp: f64) -> Result<f64> {
    p.validate()?;
    let t = p.half_period();
    let base = psi_shared(p.r, p.a1, p.a2)?.lp_norm(pexp, &Interval::new(0.0, 2.0 * t)?)?;
    Ok(p.b.abs() * p.sigma().powf(p.r as f64 + 1.0 / pexp) * base)
}

//! The base splines `ψ_r(a1, a2; ·)` and the Euler perfect splines.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::PiecewisePoly;

/// Identifies `ψ_r(a1, a2; ·)`; the half period is `T = a1 + a2 + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RodovParams {
    pub r: usize,
    pub a1: f64,
    pub a2: f64,
}

impl RodovParams {
    pub fn new(r: usize, a1: f64, a2: f64) -> Result<Self> {
        let p = Self { r, a1, a2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidParams("order r must be at least 1".into()));
        }
        check_shape(self.a1, self.a2)
    }

    pub fn half_period(&self) -> f64 {
        self.a1 + self.a2 + 2.0
    }

    pub fn build(&self) -> Result<PiecewisePoly> {
        build_psi(self.r, self.a1, self.a2)
    }
}

fn check_shape(a1: f64, a2: f64) -> Result<()> {
    for (name, v) in [("a1", a1), ("a2", a2)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::NegativeParameter { name, value: v });
        }
    }
    Ok(())
}

/// `ψ_1(a1, a2; ·)`: a trapezoid on `[0, T]` continued by `ψ_1(t + T) = -ψ_1(t)`.
pub fn build_psi1(a1: f64, a2: f64) -> Result<PiecewisePoly> {
    check_shape(a1, a2)?;
    let t = a1 + a2 + 2.0;
    // (start, coefficients in the local variable)
    let mut rows: Vec<(f64, Vec<f64>)> = Vec::with_capacity(8);
    if a1 > 0.0 {
        rows.push((0.0, vec![0.0]));
    }
    rows.push((a1, vec![0.0, 1.0]));
    if a2 > 0.0 {
        rows.push((a1 + 1.0, vec![1.0]));
    }
    rows.push((a1 + a2 + 1.0, vec![1.0, -1.0]));
    let half = rows.len();
    for i in 0..half {
        let (s, c) = &rows[i];
        let neg = c.iter().map(|v| -v).collect();
        rows.push((s + t, neg));
    }
    // tiny a1 or a2 can round a row to zero length
    let ends: Vec<f64> = rows.iter().skip(1).map(|r| r.0).chain([2.0 * t]).collect();
    let rows: Vec<_> = rows.into_iter().zip(ends).filter(|(r, e)| *e > r.0).map(|(r, _)| r).collect();
    let (breaks, segs) = rows.into_iter().unzip();
    PiecewisePoly::new(2.0 * t, breaks, segs)
}

type CacheKey = (usize, u64, u64);

const CACHE_LIMIT: usize = 8192;

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<PiecewisePoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<PiecewisePoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn key(r: usize, a1: f64, a2: f64) -> CacheKey {
    // +0.0 folds -0.0 onto 0.0
    (r, (a1 + 0.0).to_bits(), (a2 + 0.0).to_bits())
}

/// Shared handle to the cached `ψ_r(a1, a2; ·)`.
pub fn psi_shared(r: usize, a1: f64, a2: f64) -> Result<Arc<PiecewisePoly>> {
    if r == 0 {
        return Err(Error::InvalidParams("order r must be at least 1".into()));
    }
    check_shape(a1, a2)?;
    let k = key(r, a1, a2);
    if let Some(f) = cache().read().expect("psi cache poisoned").get(&k) {
        return Ok(Arc::clone(f));
    }
    let f = if r == 1 {
        build_psi1(a1, a2)?
    } else {
        psi_shared(r - 1, a1, a2)?.antiderivative_zero_mean()?
    };
    let f = Arc::new(f);
    let mut map = cache().write().expect("psi cache poisoned");
    if map.len() >= CACHE_LIMIT {
        map.clear();
    }
    map.insert(k, Arc::clone(&f));
    Ok(f)
}

/// `ψ_r(a1, a2; ·)`, the `(r-1)`-fold zero-mean periodic antiderivative of `ψ_1`.
pub fn build_psi(r: usize, a1: f64, a2: f64) -> Result<PiecewisePoly> {
    psi_shared(r, a1, a2).map(|f| (*f).clone())
}

/// The two zeros of `ψ_r` in `[0, 2T)`.
///
/// Even orders vanish at the centre of the unit bump and half a period later;
/// odd orders at the centre of the zero run of `ψ_1`, which is `a1 / 2`.
pub fn psi_zeros(r: usize, a1: f64, a2: f64) -> Result<(f64, f64)> {
    RodovParams::new(r, a1, a2)?;
    if r == 1 && a1 > 0.0 {
        return Err(Error::NotApplicable(
            "psi_1 with a1 > 0 vanishes on whole intervals".into(),
        ));
    }
    let t = a1 + a2 + 2.0;
    Ok(if r % 2 == 1 {
        (0.5 * a1, 0.5 * a1 + t)
    } else {
        (a1 + a2 / 2.0 + 1.0, 2.0 * a1 + 1.5 * a2 + 3.0)
    })
}

/// `‖ψ_r(a1, a2)‖∞`, read off at the known extremum.
pub fn psi_sup_norm(r: usize, a1: f64, a2: f64) -> Result<f64> {
    RodovParams::new(r, a1, a2)?;
    let f = psi_shared(r, a1, a2)?;
    Ok(match r {
        1 => 1.0,
        2 => f.eval(0.0).abs(),
        _ => f.eval(psi_zeros(r - 1, a1, a2)?.0).abs(),
    })
}

/// The Euler spline `φ_{λ,r}` of period `2π/λ`.
pub fn euler_phi(r: usize, lam: f64) -> Result<PiecewisePoly> {
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(Error::NonPositiveLambda(lam));
    }
    let s = PI / (2.0 * lam);
    psi_shared(r, 0.0, 0.0)?.rescale(s, s.powi(r as i32))
}

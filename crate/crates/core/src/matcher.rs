//! Recovering `Ψ` parameters from prescribed derivative norms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rodov::psi_sup_norm;
use crate::roots::{solve_increasing, SolveOptions};
use crate::scaling::{Psi_derivative_norm, PsiParams};

/// Which derivative norms are prescribed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `{0, r-1, r}` with `a1 = 0`.
    A,
    /// `{0, r-2, r}` with `a2 = 0`.
    B,
    /// `{0, r-2, r-1, r}`.
    C,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::A, Case::B, Case::C];

    pub fn min_order(self) -> usize {
        match self {
            Case::A => 2,
            Case::B | Case::C => 3,
        }
    }

    /// The prescribed orders, ascending.
    pub fn orders(self, r: usize) -> Vec<usize> {
        match self {
            Case::A => vec![0, r - 1, r],
            Case::B => vec![0, r - 2, r],
            Case::C => vec![0, r - 2, r - 1, r],
        }
    }

    /// The orders without `0`.
    pub fn derivative_orders(self, r: usize) -> Vec<usize> {
        self.orders(r).into_iter().filter(|&k| k > 0).collect()
    }

    /// Checks the shape constraints the case places on `(r, a1, a2)`.
    pub fn admits(self, p: &PsiParams) -> Result<()> {
        if p.r < self.min_order() {
            return Err(Error::InvalidParams(format!(
                "case {self} needs r >= {}, got {}",
                self.min_order(),
                p.r
            )));
        }
        match self {
            Case::A if p.a1 != 0.0 => Err(Error::InvalidParams("case a needs a1 = 0".into())),
            Case::B if p.a2 != 0.0 => Err(Error::InvalidParams("case b needs a2 = 0".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "a",
            Case::B => "b",
            Case::C => "c",
        })
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Case::A),
            "b" => Ok(Case::B),
            "c" => Ok(Case::C),
            _ => Err(Error::InvalidParams(format!("unknown case {s:?}"))),
        }
    }
}

/// Target sup norms `‖x^{(s)}‖` keyed by order `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormTargets {
    pub r: usize,
    pub m: BTreeMap<usize, f64>,
}

impl NormTargets {
    pub fn new(r: usize, m: BTreeMap<usize, f64>) -> Self {
        Self { r, m }
    }

    /// Targets for `case`, read off the norm profile of `p`.
    pub fn from_params(case: Case, p: &PsiParams) -> Result<Self> {
        let m = case
            .orders(p.r)
            .into_iter()
            .map(|k| Psi_derivative_norm(p, k).map(|n| (k, n)))
            .collect::<Result<_>>()?;
        Ok(Self { r: p.r, m })
    }

    fn get(&self, k: usize) -> f64 {
        self.m[&k]
    }

    pub fn validate(&self, case: Case) -> Result<()> {
        if self.r < case.min_order() {
            return Err(Error::InvalidParams(format!(
                "case {case} needs r >= {}, got {}",
                case.min_order(),
                self.r
            )));
        }
        let want = case.orders(self.r);
        if self.m.keys().copied().collect::<Vec<_>>() != want {
            return Err(Error::InvalidParams(format!(
                "case {case} with r = {} needs targets for orders {want:?}",
                self.r
            )));
        }
        if let Some((k, v)) = self.m.iter().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParams(format!("target for order {k} must be positive, got {v}")));
        }
        Ok(())
    }

    /// Relative mismatch `|‖Ψ^{(s)}‖ / M_s - 1|` per prescribed order.
    pub fn residuals(&self, p: &PsiParams) -> Result<BTreeMap<usize, f64>> {
        self.m
            .iter()
            .map(|(&k, &v)| Psi_derivative_norm(p, k).map(|n| (k, (n / v - 1.0).abs())))
            .collect()
    }
}

fn params(r: usize, a1: f64, a2: f64, b: f64, sigma: f64) -> Result<PsiParams> {
    PsiParams::new(r, a1, a2, b, 2.0 * (a1 + a2 + 2.0) * sigma)
}

/// Case a: `a1 = 0`, matching orders `{0, r-1, r}`.
pub fn match_case_a(r: usize, m0: f64, mr1: f64, mr: f64) -> Result<PsiParams> {
    let t = NormTargets::new(r, BTreeMap::from([(0, m0), (r.saturating_sub(1), mr1), (r, mr)]));
    t.validate(Case::A)?;
    let sigma = mr1 / mr;
    let goal = m0 * mr.powi(r as i32 - 1) / mr1.powi(r as i32);
    let a2 = solve_increasing(|a2| psi_sup_norm(r, 0.0, a2), goal, &SolveOptions::default())?;
    params(r, 0.0, a2, mr, sigma)
}

/// Case b: `a2 = 0`, matching orders `{0, r-2, r}`.
pub fn match_case_b(r: usize, m0: f64, mr2: f64, mr: f64) -> Result<PsiParams> {
    let t = NormTargets::new(r, BTreeMap::from([(0, m0), (r.saturating_sub(2), mr2), (r, mr)]));
    t.validate(Case::B)?;
    let sigma = |a1: f64| -> Result<f64> { Ok((mr2 / (mr * psi_sup_norm(2, a1, 0.0)?)).sqrt()) };
    let a1 = solve_increasing(
        |a1| Ok(mr * sigma(a1)?.powi(r as i32) * psi_sup_norm(r, a1, 0.0)?),
        m0,
        &SolveOptions::default(),
    )?;
    params(r, a1, 0.0, mr, sigma(a1)?)
}

/// Case c: matching orders `{0, r-2, r-1, r}` by a nested solve, `a2` inside `a1`.
pub fn match_case_c(r: usize, m0: f64, mr2: f64, mr1: f64, mr: f64) -> Result<PsiParams> {
    let t = NormTargets::new(
        r,
        BTreeMap::from([
            (0, m0),
            (r.saturating_sub(2), mr2),
            (r.saturating_sub(1), mr1),
            (r, mr),
        ]),
    );
    t.validate(Case::C)?;
    let opts = SolveOptions::default();
    let sigma = mr1 / mr;
    let goal2 = mr2 * mr / (mr1 * mr1);
    let goal0 = m0 * mr.powi(r as i32 - 1) / mr1.powi(r as i32);
    let inner = |a1: f64| solve_increasing(|a2| psi_sup_norm(2, a1, a2), goal2, &opts);
    let a1 = solve_increasing(|a1| psi_sup_norm(r, a1, inner(a1)?), goal0, &opts)?;
    params(r, a1, inner(a1)?, mr, sigma)
}

/// Dispatches on `case`; the targets must carry exactly the case's orders.
pub fn match_targets(case: Case, t: &NormTargets) -> Result<PsiParams> {
    t.validate(case)?;
    let r = t.r;
    match case {
        Case::A => match_case_a(r, t.get(0), t.get(r - 1), t.get(r)),
        Case::B => match_case_b(r, t.get(0), t.get(r - 2), t.get(r)),
        Case::C => match_case_c(r, t.get(0), t.get(r - 2), t.get(r - 1), t.get(r)),
    }
}

//! Distribution functions and decreasing rearrangements of nonnegative
//! piecewise polynomials.
//!
//! Everything is computed from monotone pieces of the source, so `d(y)`,
//! `r(u)` and `∫_0^t r` are exact up to root-solving accuracy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::Tolerances;
use crate::poly::{self, PieceZeros};
use crate::{Interval, PiecewisePoly};

#[derive(Debug, Clone)]
struct MonoPiece {
    coeffs: Vec<f64>,
    len: f64,
    v0: f64,
    v1: f64,
}

impl MonoPiece {
    fn lo(&self) -> f64 {
        self.v0.min(self.v1)
    }

    fn hi(&self) -> f64 {
        self.v0.max(self.v1)
    }

    /// Local `u` where the piece crosses level `y`, for `lo < y < hi`.
    fn crossing(&self, y: f64) -> f64 {
        poly::solve_bracketed(
            |u| poly::horner(&self.coeffs, u) - y,
            0.0,
            self.len,
            self.v0 - y,
            self.v1 - y,
        )
    }

    /// The sub-interval `[a, b]` of `[0, len]` where the piece exceeds `y`
    /// (`strict`) or reaches it.
    fn above(&self, y: f64, strict: bool) -> Option<(f64, f64)> {
        let (lo, hi) = (self.lo(), self.hi());
        let beats = |v: f64| if strict { v > y } else { v >= y };
        if !beats(hi) {
            return None;
        }
        if beats(lo) {
            return Some((0.0, self.len));
        }
        let u = self.crossing(y);
        Some(if self.v1 > self.v0 { (u, self.len) } else { (0.0, u) })
    }
}

/// `y ↦ |{t ∈ window : g(t) > y}|` for a nonnegative `g`.
#[derive(Debug, Clone)]
pub struct Distribution {
    pieces: Vec<MonoPiece>,
    length: f64,
    levels: Vec<f64>,
    /// `d(levels[j])`
    above: Vec<f64>,
    /// `|{g ≥ levels[j]}|`, the left limit of `d` at the level
    reaching: Vec<f64>,
}

/// Builds the distribution function of `g` on `window`.
pub fn distribution(g: &PiecewisePoly, window: &Interval<f64>) -> Result<Distribution> {
    let mut pieces = Vec::new();
    for pc in g.pieces(window.lo, window.hi) {
        let c = poly::taylor_shift(&g.segments()[pc.seg], pc.u0);
        let len = pc.u1 - pc.u0;
        let mut cuts = vec![0.0];
        if c.len() > 2 {
            let d = poly::derivative(&c);
            if let PieceZeros::Points(rs) = poly::real_roots_in(&d, 0.0, len, 0.0) {
                cuts.extend(rs.into_iter().filter(|&u| u > 0.0 && u < len));
            }
        }
        cuts.push(len);
        for w in cuts.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let coeffs = poly::taylor_shift(&c, w[0]);
            let l = w[1] - w[0];
            let (v0, v1) = (poly::horner(&coeffs, 0.0), poly::horner(&coeffs, l));
            pieces.push(MonoPiece {
                coeffs,
                len: l,
                v0,
                v1,
            });
        }
    }
    let min = pieces.iter().map(MonoPiece::lo).fold(f64::INFINITY, f64::min);
    let max = pieces.iter().map(MonoPiece::hi).fold(0.0, f64::max);
    let tol = Tolerances::<f64>::default().root_rel * (1.0 + max);
    if min < -tol {
        return Err(Error::NegativeInput { min });
    }
    let mut levels: Vec<f64> = pieces
        .iter()
        .flat_map(|p| [p.v0.max(0.0), p.v1.max(0.0)])
        .collect();
    levels.push(0.0);
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let mut dist = Distribution {
        pieces,
        length: window.len(),
        levels,
        above: Vec::new(),
        reaching: Vec::new(),
    };
    dist.above = dist.levels.iter().map(|&y| dist.measure(y, true)).collect();
    dist.reaching = dist.levels.iter().map(|&y| dist.measure(y, false)).collect();
    Ok(dist)
}

impl Distribution {
    fn measure(&self, y: f64, strict: bool) -> f64 {
        self.pieces
            .iter()
            .filter_map(|p| p.above(y, strict).map(|(a, b)| b - a))
            .sum()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Sorted critical levels (segment end values and extrema, clamped at 0).
    pub fn critical_levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn max_value(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    /// `d(y) = |{g > y}|`.
    pub fn measure_above(&self, y: f64) -> f64 {
        if y < 0.0 {
            return self.length;
        }
        self.measure(y, true)
    }

    /// `r(u) = inf{y ≥ 0 : d(y) ≤ u}`, right-continuous and non-increasing.
    pub fn rearranged(&self, u: f64) -> f64 {
        if u >= self.length {
            return 0.0;
        }
        let u = u.max(0.0);
        // smallest level whose strict measure fits under u
        let j = self.above.partition_point(|&d| d > u);
        if j == 0 {
            return self.levels[0];
        }
        if u >= self.reaching[j] {
            // the strict measure drops past u only at the jump into levels[j]
            let (lo, hi) = (self.levels[j - 1], self.levels[j]);
            let (fa, fb) = (self.above[j - 1] - u, self.reaching[j] - u);
            if fb < 0.0 && fa > 0.0 {
                return poly::solve_bracketed(|y| self.measure(y, true) - u, lo, hi, fa, fb);
            }
            return hi;
        }
        self.levels[j]
    }

    /// `∫(g - y)₊` over the window.
    pub fn excess(&self, y: f64) -> f64 {
        self.pieces
            .iter()
            .filter_map(|p| {
                p.above(y, true)
                    .map(|(a, b)| poly::integrate(&p.coeffs, a, b) - y * (b - a))
            })
            .sum()
    }

    /// `∫_0^t r(u) du = t r(t) + ∫(g - r(t))₊`.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.length * (1.0 + 1e-12)) {
            return Err(Error::TOutOfRange {
                t,
                len: self.length,
            });
        }
        let t = t.min(self.length);
        let y = self.rearranged(t);
        Ok(t * y + self.excess(y))
    }
}

/// A sampled decreasing rearrangement; `u` runs over `[0, length]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rearrangement {
    pub length: f64,
    pub u: Vec<f64>,
    pub values: Vec<f64>,
    pub critical_levels: Vec<f64>,
}

impl Rearrangement {
    /// Same samples on the unit window.
    pub fn normalize(&self) -> Self {
        Self {
            length: 1.0,
            u: self.u.iter().map(|u| u / self.length).collect(),
            values: self.values.clone(),
            critical_levels: self.critical_levels.clone(),
        }
    }
}

/// `r(g, ·)` on `n` uniform points plus every `u` where a critical level is reached.
pub fn rearrangement(g: &PiecewisePoly, window: &Interval<f64>, n: usize) -> Result<Rearrangement> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 samples, got {n}")));
    }
    let d = distribution(g, window)?;
    let len = d.length();
    let mut u: Vec<f64> = (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect();
    u.extend(d.above.iter().chain(&d.reaching).filter(|&&v| v > 0.0 && v < len));
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // critical u's that coincide up to rounding are merged
    let eps = 1e-12 * len;
    u.dedup_by(|a, b| *a - *b <= eps);
    let mut values: Vec<f64> = u.iter().map(|&x| d.rearranged(x)).collect();
    // level solves are accurate to rounding; enforce exact monotonicity
    for i in 1..values.len() {
        values[i] = values[i].min(values[i - 1]);
    }
    Ok(Rearrangement {
        length: len,
        u,
        values,
        critical_levels: d.levels.clone(),
    })
}

/// `∫_0^t r(g, u) du` on `window`.
pub fn cumulative_rearrangement(g: &PiecewisePoly, window: &Interval<f64>, t: f64) -> Result<f64> {
    distribution(g, window)?.cumulative(t)
}

/// `|f'|` as a piecewise polynomial, split where `f'` changes sign.
pub fn abs_derivative(f: &PiecewisePoly) -> PiecewisePoly {
    f.differentiate().abs()
}

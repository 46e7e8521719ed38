//! Root finding for increasing functions on `[0, ∞)`.

use crate::error::{Error, Result};

/// Bracket growth and polishing controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Bracket doublings from `[0, 1]` before giving up.
    pub max_doublings: usize,
    /// Bisection stops at this bracket width (relative to `max(1, hi)`).
    pub bisect_width: f64,
    /// Targets this close below `g(0)` (relative) are treated as `g(0)`.
    pub feasibility_rel: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_doublings: 60,
            bisect_width: 1e-10,
            feasibility_rel: 1e-12,
        }
    }
}

/// Solves `g(x) = target` for `x ≥ 0` with `g` increasing.
///
/// Monotonicity is checked on every evaluation; a violation aborts with
/// [`Error::NonMonotone`] instead of returning a dubious root.
pub fn solve_increasing<G>(g: G, target: f64, opts: &SolveOptions) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let g0 = g(0.0)?;
    let scale = target.abs().max(g0.abs()).max(f64::MIN_POSITIVE);
    if target <= g0 {
        if g0 - target <= opts.feasibility_rel * scale {
            return Ok(0.0);
        }
        return Err(Error::Infeasible(format!(
            "target {target} lies below the minimum {g0} of the objective"
        )));
    }
    let (mut lo, mut glo) = (0.0, g0);
    let (mut hi, mut ghi) = (1.0, g(1.0)?);
    let mut doublings = 0;
    loop {
        if !(ghi > glo) {
            return Err(Error::NonMonotone(format!(
                "objective not increasing along bracket: g({lo}) = {glo}, g({hi}) = {ghi}"
            )));
        }
        if ghi >= target {
            break;
        }
        if doublings == opts.max_doublings {
            return Err(Error::NoBracket { doublings });
        }
        doublings += 1;
        lo = hi;
        glo = ghi;
        hi *= 2.0;
        ghi = g(hi)?;
    }
    log::debug!("bracket [{lo}, {hi}] after {doublings} doublings");
    while hi - lo > opts.bisect_width * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm < glo || gm > ghi {
            return Err(Error::NonMonotone(format!(
                "g({mid}) = {gm} outside [{glo}, {ghi}]"
            )));
        }
        if gm < target {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    // secant polish inside the final bracket
    let (mut a, mut fa) = (lo, glo - target);
    let (mut b, mut fb) = (hi, ghi - target);
    if fa == 0.0 {
        return Ok(a);
    }
    for _ in 0..8 {
        if fb == 0.0 || fb == fa {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        if !(c >= lo && c <= hi) {
            break;
        }
        let fc = g(c)? - target;
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        if fc.abs() <= 4.0 * f64::EPSILON * scale {
            break;
        }
    }
    Ok(if fb.abs() <= fa.abs() { b } else { a })
}

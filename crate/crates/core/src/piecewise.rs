//! Calculus of periodic piecewise polynomials.
//!
//! A [`Piecewise`] stores one coefficient vector per segment, expressed in the
//! local variable `u = t - start`. Every query is periodic in `t`; windows may
//! start anywhere and span several periods.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, PieceZeros, MAX_DEGREE};
use crate::quad;
use crate::scalar::{as_f64, lit, Scalar};

/// A half-open window `[lo, hi)` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParams(format!(
                "interval needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, t: T) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn mid(&self) -> T {
        (self.lo + self.hi) * lit(0.5)
    }
}

/// A zero of a piecewise polynomial: an isolated point or a run where it vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Root<T> {
    Point(T),
    Interval(Interval<T>),
}

impl<T: Scalar> Root<T> {
    fn first(&self) -> T {
        match self {
            Root::Point(t) => *t,
            Root::Interval(iv) => iv.lo,
        }
    }
}

/// A maximal monotone stretch of one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch<T> {
    pub interval: Interval<T>,
    pub increasing: bool,
}

/// Numerical tolerances of the piecewise calculus (all relative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Zero test: `|f| <= root_rel * (1 + sup_norm)`.
    pub root_rel: T,
    /// Mean test: `|mean| <= mean_rel * period * sup_norm`.
    pub mean_rel: T,
    /// Adaptive quadrature for non-integer exponents.
    pub quad_rel: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        let rel = T::default_rel_tol();
        Self {
            root_rel: rel,
            mean_rel: rel,
            quad_rel: lit::<T>(1e-10).max(rel),
        }
    }
}

/// Part of a window lying inside one segment.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece<T> {
    pub t0: T,
    pub t1: T,
    pub seg: usize,
    pub u0: T,
    pub u1: T,
}

/// A periodic piecewise polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piecewise<T> {
    period: T,
    breakpoints: Vec<T>,
    segments: Vec<Vec<T>>,
}

impl<T: Scalar> Piecewise<T> {
    pub fn new(period: T, breakpoints: Vec<T>, segments: Vec<Vec<T>>) -> Result<Self> {
        let f = Self {
            period,
            breakpoints,
            segments,
        };
        f.validate()?;
        Ok(f)
    }

    /// Checks the structural invariants; useful after deserialization.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPiecewise(m));
        if !(self.period > T::zero()) || !self.period.is_finite() {
            return bad(format!("period {} must be positive", self.period));
        }
        if self.breakpoints.is_empty() || self.breakpoints[0] != T::zero() {
            return bad("breakpoints must start at 0".into());
        }
        if self.breakpoints.len() != self.segments.len() {
            return bad("one coefficient vector per breakpoint".into());
        }
        if self.breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("breakpoints must be strictly increasing".into());
        }
        if !(*self.breakpoints.last().unwrap() < self.period) {
            return bad("last breakpoint must lie below the period".into());
        }
        for s in &self.segments {
            if s.is_empty() {
                return bad("empty coefficient vector".into());
            }
            if s.len() - 1 > MAX_DEGREE {
                return Err(Error::DegreeTooHigh(s.len() - 1));
            }
            if s.iter().any(|c| !c.is_finite()) {
                return bad("non-finite coefficient".into());
            }
        }
        Ok(())
    }

    pub fn constant(period: T, value: T) -> Result<Self> {
        Self::new(period, vec![T::zero()], vec![vec![value]])
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Vec<T>] {
        &self.segments
    }

    pub fn num_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn degree(&self) -> usize {
        self.segments.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn segment_end(&self, i: usize) -> T {
        self.breakpoints.get(i + 1).copied().unwrap_or(self.period)
    }

    pub fn segment_len(&self, i: usize) -> T {
        self.segment_end(i) - self.breakpoints[i]
    }

    /// Splits `t` into the start of its period and the offset within it.
    fn reduce(&self, t: T) -> (T, T) {
        let p = self.period;
        let mut base = (t / p).floor() * p;
        let mut u = t - base;
        if u >= p {
            u = u - p;
            base = base + p;
        }
        if u < T::zero() {
            u = T::zero();
        }
        (base, u)
    }

    fn seg_index(&self, u: T) -> usize {
        self.breakpoints
            .partition_point(|&b| b <= u)
            .saturating_sub(1)
    }

    /// Value at `t`; at a breakpoint the right-hand segment is used.
    pub fn eval(&self, t: T) -> T {
        let (_, u) = self.reduce(t);
        let i = self.seg_index(u);
        poly::horner(&self.segments[i], u - self.breakpoints[i])
    }

    /// Segment-wise derivative with the same breakpoints.
    pub fn differentiate(&self) -> Self {
        Self {
            period: self.period,
            breakpoints: self.breakpoints.clone(),
            segments: self.segments.iter().map(|s| poly::derivative(s)).collect(),
        }
    }

    pub fn derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.differentiate())
    }

    pub fn integral(&self) -> T {
        self.segments
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, s)| {
                acc + poly::integrate(s, T::zero(), self.segment_len(i))
            })
    }

    /// Mean over one period, integrated segment-exactly.
    pub fn mean(&self) -> T {
        self.integral() / self.period
    }

    pub fn antiderivative_zero_mean(&self) -> Result<Self> {
        self.antiderivative_zero_mean_with(&Tolerances::default())
    }

    /// The continuous periodic antiderivative with zero mean.
    ///
    /// Fails with [`Error::NonZeroMeanInput`] when the input mean exceeds
    /// `mean_rel * period * sup_norm`; a residual mean below that is removed
    /// before integrating so the result is exactly periodic.
    pub fn antiderivative_zero_mean_with(&self, tol: &Tolerances<T>) -> Result<Self> {
        let m = self.mean();
        let bound = tol.mean_rel * self.period * self.sup_norm();
        if m.abs() > bound {
            return Err(Error::NonZeroMeanInput {
                mean: as_f64(m),
                tol: as_f64(bound),
            });
        }
        let mut acc = T::zero();
        let mut segments = Vec::with_capacity(self.segments.len());
        for (i, s) in self.segments.iter().enumerate() {
            let mut c = s.clone();
            c[0] = c[0] - m;
            let f = poly::antiderivative(&c, acc);
            acc = poly::horner(&f, self.segment_len(i));
            segments.push(f);
        }
        let mut out = Self {
            period: self.period,
            breakpoints: self.breakpoints.clone(),
            segments,
        };
        let shift = out.mean();
        for s in &mut out.segments {
            s[0] = s[0] - shift;
        }
        Ok(out)
    }

    /// Largest jump between adjacent segments, including the wrap at the period.
    pub fn continuity_gap(&self) -> T {
        let n = self.segments.len();
        (0..n).fold(T::zero(), |gap, i| {
            let left = poly::horner(&self.segments[i], self.segment_len(i));
            let right = self.segments[(i + 1) % n][0];
            gap.max((left - right).abs())
        })
    }

    /// Critical points of one segment in `(0, len)` plus both ends.
    fn segment_candidates(&self, i: usize) -> Vec<T> {
        let len = self.segment_len(i);
        let mut pts = vec![T::zero(), len];
        if self.segments[i].len() > 2 {
            let d = poly::derivative(&self.segments[i]);
            if let PieceZeros::Points(ps) = poly::real_roots_in(&d, T::zero(), len, T::zero()) {
                pts.extend(ps);
            }
        }
        pts
    }

    /// `(‖f‖∞, t)` with `t` a point where the supremum is attained.
    pub fn extremum(&self) -> (T, T) {
        let mut best = (T::zero(), T::zero());
        for i in 0..self.segments.len() {
            for u in self.segment_candidates(i) {
                let v = poly::horner(&self.segments[i], u).abs();
                if v > best.0 {
                    best = (v, self.breakpoints[i] + u);
                }
            }
        }
        best
    }

    pub fn sup_norm(&self) -> T {
        self.extremum().0
    }

    /// `(min f, max f)` over one period.
    pub fn range(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..self.segments.len() {
            for u in self.segment_candidates(i) {
                let v = poly::horner(&self.segments[i], u);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }

    pub(crate) fn zero_tol(&self, tol: &Tolerances<T>) -> T {
        tol.root_rel * (T::one() + self.sup_norm())
    }

    pub(crate) fn pieces(&self, lo: T, hi: T) -> Vec<Piece<T>> {
        let mut out = Vec::new();
        if !(hi > lo) {
            return out;
        }
        let n = self.segments.len();
        let (mut base, local) = self.reduce(lo);
        let mut idx = self.seg_index(local);
        let mut t0 = lo;
        for _ in 0..50_000_000usize {
            let start = base + self.breakpoints[idx];
            let end = base + self.segment_end(idx);
            let t1 = end.min(hi);
            if t1 > t0 {
                let len = self.segment_len(idx);
                out.push(Piece {
                    t0,
                    t1,
                    seg: idx,
                    u0: (t0 - start).max(T::zero()).min(len),
                    u1: (t1 - start).max(T::zero()).min(len),
                });
            }
            if end >= hi {
                break;
            }
            t0 = t0.max(end);
            idx += 1;
            if idx == n {
                idx = 0;
                base = base + self.period;
            }
        }
        out
    }

    fn time_eps(&self, window: &Interval<T>) -> T {
        let scale = self
            .period
            .max(window.lo.abs())
            .max(window.hi.abs())
            .max(T::one());
        T::epsilon() * lit(1e3) * scale
    }

    pub fn roots(&self, window: &Interval<T>) -> Result<Vec<Root<T>>> {
        self.roots_with(window, self.zero_tol(&Tolerances::default()))
    }

    /// Zeros on `[lo, hi)` with absolute zero tolerance `tol`.
    ///
    /// Runs where `f` vanishes are reported as [`Root::Interval`]; a window on
    /// which `f` vanishes entirely is [`Error::IdenticallyZero`].
    pub fn roots_with(&self, window: &Interval<T>, tol: T) -> Result<Vec<Root<T>>> {
        let eps = self.time_eps(window);
        let mut out: Vec<Root<T>> = Vec::new();
        for pc in self.pieces(window.lo, window.hi) {
            let origin = pc.t0 - pc.u0;
            let at = |u: T| {
                if u == pc.u0 {
                    pc.t0
                } else if u == pc.u1 {
                    pc.t1
                } else {
                    origin + u
                }
            };
            match poly::real_roots_in(&self.segments[pc.seg], pc.u0, pc.u1, tol) {
                PieceZeros::Everywhere => match out.last_mut() {
                    Some(Root::Interval(iv)) if pc.t0 <= iv.hi + eps => iv.hi = pc.t1,
                    Some(Root::Point(p)) if (pc.t0 - *p).abs() <= eps => {
                        let lo = *p;
                        *out.last_mut().unwrap() = Root::Interval(Interval { lo, hi: pc.t1 });
                    }
                    _ => out.push(Root::Interval(Interval {
                        lo: pc.t0,
                        hi: pc.t1,
                    })),
                },
                PieceZeros::Points(us) => {
                    for u in us {
                        let t = at(u);
                        let dup = match out.last() {
                            Some(Root::Interval(iv)) => t <= iv.hi + eps,
                            Some(Root::Point(p)) => (t - *p).abs() <= eps,
                            None => false,
                        };
                        if !dup {
                            out.push(Root::Point(t));
                        }
                    }
                }
            }
        }
        out.retain(|r| r.first() < window.hi - eps);
        if let [Root::Interval(iv)] = out.as_slice() {
            if iv.lo <= window.lo + eps && iv.hi >= window.hi - eps {
                return Err(Error::IdenticallyZero);
            }
        }
        Ok(out)
    }

    /// Maximal runs of constant sign (`-1`, `0`, `1`) on the window.
    pub(crate) fn sign_runs(&self, window: &Interval<T>, tol: T) -> Vec<(T, T, i8)> {
        let eps = self.time_eps(window);
        let mut cuts = vec![window.lo, window.hi];
        let pieces = self.pieces(window.lo, window.hi);
        cuts.extend(pieces.iter().skip(1).map(|p| p.t0));
        if let Ok(rs) = self.roots_with(window, tol) {
            for r in rs {
                match r {
                    Root::Point(t) => cuts.push(t),
                    Root::Interval(iv) => {
                        cuts.push(iv.lo);
                        cuts.push(iv.hi);
                    }
                }
            }
        }
        cuts.retain(|&t| t >= window.lo && t <= window.hi);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|b, a| (*b - *a).abs() <= eps);
        let mut runs: Vec<(T, T, i8)> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let v = self.eval((a + b) * lit(0.5));
            let s = if v.abs() <= tol {
                0
            } else if v > T::zero() {
                1
            } else {
                -1
            };
            match runs.last_mut() {
                Some(last) if last.2 == s => last.1 = b,
                _ => runs.push((a, b, s)),
            }
        }
        runs
    }

    pub fn sign_changes(&self, window: &Interval<T>) -> usize {
        self.sign_changes_with(window, self.zero_tol(&Tolerances::default()))
    }

    /// Strict sign alternations on the window; values within `tol` of zero
    /// separate runs but never count by themselves.
    pub fn sign_changes_with(&self, window: &Interval<T>, tol: T) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for (_, _, s) in self.sign_runs(window, tol) {
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    pub fn monotone_branches(&self) -> Vec<Branch<T>> {
        let d = self.differentiate();
        let tol = d.zero_tol(&Tolerances::default());
        self.monotone_branches_with(tol)
    }

    /// Partition of `[0, period)` into maximal monotone branches; boundaries are
    /// where `f'` changes sign, and a run with `f' ≡ 0` joins the branch before it.
    /// A branch may extend past `period` when it wraps around.
    pub fn monotone_branches_with(&self, derivative_tol: T) -> Vec<Branch<T>> {
        let d = self.differentiate();
        let whole = Interval {
            lo: T::zero(),
            hi: self.period,
        };
        let runs: Vec<(T, i8)> = d
            .sign_runs(&whole, derivative_tol)
            .into_iter()
            .filter(|r| r.2 != 0)
            .map(|r| (r.0, r.2))
            .collect();
        let single = |increasing| {
            vec![Branch {
                interval: whole,
                increasing,
            }]
        };
        if runs.is_empty() {
            return single(true);
        }
        let mut changes: Vec<(T, bool)> = Vec::new();
        let mut prev = runs.last().unwrap().1;
        for &(start, s) in &runs {
            if s != prev {
                changes.push((start, s > 0));
            }
            prev = s;
        }
        if changes.is_empty() {
            return single(runs[0].1 > 0);
        }
        let n = changes.len();
        (0..n)
            .map(|i| {
                let (lo, inc) = changes[i];
                let hi = if i + 1 < n {
                    changes[i + 1].0
                } else {
                    changes[0].0 + self.period
                };
                Branch {
                    interval: Interval { lo, hi },
                    increasing: inc,
                }
            })
            .collect()
    }

    /// A `t` in the branch with `f(t) = y`.
    pub fn invert_on_branch(&self, branch: &Interval<T>, y: T) -> Result<T> {
        BranchInverter::new(self, branch).invert(y)
    }

    /// `(∫_window |f|^p)^{1/p}`; exact Gauss rules for integer `p`, adaptive
    /// Gauss–Kronrod otherwise.
    pub fn lp_norm(&self, p: T, window: &Interval<T>) -> Result<T> {
        self.lp_norm_with(p, window, &Tolerances::default())
    }

    pub fn lp_norm_with(&self, p: T, window: &Interval<T>, tol: &Tolerances<T>) -> Result<T> {
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::InvalidParams(format!("exponent p = {p} must be positive")));
        }
        let integer = p.fract() == T::zero() && p <= lit(64.0);
        let pi = p.to_usize().unwrap_or(0);
        let mut total = T::zero();
        for pc in self.pieces(window.lo, window.hi) {
            let c = &self.segments[pc.seg];
            let deg = poly::degree(c);
            let even = integer && pi % 2 == 0;
            let mut cuts = vec![pc.u0];
            if !even && deg >= 1 {
                if let PieceZeros::Points(rs) = poly::real_roots_in(c, pc.u0, pc.u1, T::zero()) {
                    cuts.extend(rs.into_iter().filter(|&u| u > pc.u0 && u < pc.u1));
                }
            }
            cuts.push(pc.u1);
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                if !(b > a) {
                    continue;
                }
                let s = if poly::horner(c, (a + b) * lit(0.5)) < T::zero() {
                    -T::one()
                } else {
                    T::one()
                };
                total = total
                    + if integer {
                        let n = (deg * pi) / 2 + 1;
                        quad::gauss(|u| (s * poly::horner(c, u)).powi(pi as i32), a, b, n)
                    } else {
                        quad::adaptive(
                            |u| (s * poly::horner(c, u)).max(T::zero()).powf(p),
                            a,
                            b,
                            tol.quad_rel,
                        )
                    };
            }
        }
        Ok(total.max(T::zero()).powf(T::one() / p))
    }

    /// `f(lo + u)` for `u ∈ [0, hi - lo)`, as a function of period `hi - lo`.
    pub fn window(&self, lo: T, hi: T) -> Result<Self> {
        let _ = Interval::new(lo, hi)?;
        let mut breakpoints = Vec::new();
        let mut segments = Vec::new();
        for pc in self.pieces(lo, hi) {
            let b = pc.t0 - lo;
            if breakpoints.last().map_or(false, |&l| !(b > l)) {
                continue;
            }
            breakpoints.push(b);
            segments.push(poly::taylor_shift(&self.segments[pc.seg], pc.u0));
        }
        if breakpoints.is_empty() {
            return Err(Error::InvalidPiecewise("empty window".into()));
        }
        breakpoints[0] = T::zero();
        Self::new(hi - lo, breakpoints, segments)
    }

    /// `amp * f(t / sigma)`, of period `sigma * period`.
    pub fn rescale(&self, sigma: T, amp: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::InvalidParams(format!("time scale {sigma} must be positive")));
        }
        let inv = T::one() / sigma;
        Self::new(
            self.period * sigma,
            self.breakpoints.iter().map(|&b| b * sigma).collect(),
            self.segments
                .iter()
                .map(|s| poly::rescale(s, inv, amp))
                .collect(),
        )
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            period: self.period,
            breakpoints: self.breakpoints.clone(),
            segments: self
                .segments
                .iter()
                .map(|s| s.iter().map(|&a| a * c).collect())
                .collect(),
        }
    }

    pub fn add_constant(&self, c: T) -> Self {
        let mut out = self.clone();
        for s in &mut out.segments {
            s[0] = s[0] + c;
        }
        out
    }

    /// Pointwise difference of two functions sharing a period.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let p = self.period;
        if (p - other.period).abs() > lit::<T>(1e-12) * p {
            return Err(Error::InvalidParams(format!(
                "periods differ: {} vs {}",
                p, other.period
            )));
        }
        let eps = T::epsilon() * lit(16.0) * p;
        let mut cuts: Vec<T> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter().filter(|&&b| b < p))
            .copied()
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|b, a| (*b - *a).abs() <= eps);
        let mut segments = Vec::with_capacity(cuts.len());
        for (j, &s) in cuts.iter().enumerate() {
            let e = cuts.get(j + 1).copied().unwrap_or(p);
            let mid = (s + e) * lit(0.5);
            let i = self.seg_index(mid);
            let k = other.seg_index(mid.min(other.period));
            let a = poly::taylor_shift(&self.segments[i], s - self.breakpoints[i]);
            let b = poly::taylor_shift(&other.segments[k], s - other.breakpoints[k]);
            let n = a.len().max(b.len());
            segments.push(
                (0..n)
                    .map(|m| {
                        a.get(m).copied().unwrap_or(T::zero())
                            - b.get(m).copied().unwrap_or(T::zero())
                    })
                    .collect(),
            );
        }
        Self::new(p, cuts, segments)
    }

    /// `|f|`, with segments split at sign changes so each stays polynomial.
    pub fn abs(&self) -> Self {
        let tol = T::zero();
        // cuts closer than this to a segment end are rounding artifacts
        let eps = T::epsilon() * lit(16.0) * self.period.max(T::one());
        let mut breakpoints = Vec::new();
        let mut segments = Vec::new();
        for (i, c) in self.segments.iter().enumerate() {
            let len = self.segment_len(i);
            let mut cuts = vec![T::zero()];
            if poly::degree(c) >= 1 {
                if let PieceZeros::Points(rs) = poly::real_roots_in(c, T::zero(), len, tol) {
                    for u in rs {
                        if u > *cuts.last().unwrap() + eps && u < len - eps {
                            cuts.push(u);
                        }
                    }
                }
            }
            cuts.push(len);
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let start = self.breakpoints[i] + a;
                if !(b > a) || breakpoints.last().map_or(false, |&l| !(start > l)) {
                    continue;
                }
                let neg = poly::horner(c, (a + b) * lit(0.5)) < T::zero();
                let mut q = poly::taylor_shift(c, a);
                if neg {
                    q.iter_mut().for_each(|x| *x = -*x);
                }
                breakpoints.push(start);
                segments.push(q);
            }
        }
        breakpoints[0] = T::zero();
        Self {
            period: self.period,
            breakpoints,
            segments,
        }
    }
}

/// Level inversion on one monotone branch, with per-piece end values cached.
#[derive(Debug, Clone)]
pub struct BranchInverter<'a, T> {
    f: &'a Piecewise<T>,
    pieces: Vec<(Piece<T>, T, T)>,
    increasing: bool,
    tol: T,
}

impl<'a, T: Scalar> BranchInverter<'a, T> {
    pub fn new(f: &'a Piecewise<T>, branch: &Interval<T>) -> Self {
        let pieces: Vec<(Piece<T>, T, T)> = f
            .pieces(branch.lo, branch.hi)
            .into_iter()
            .map(|pc| {
                let c = &f.segments[pc.seg];
                (pc, poly::horner(c, pc.u0), poly::horner(c, pc.u1))
            })
            .collect();
        let first = pieces.first().map_or(T::zero(), |p| p.1);
        let last = pieces.last().map_or(T::zero(), |p| p.2);
        let tol = Tolerances::<T>::default().root_rel * (T::one() + first.abs().max(last.abs()));
        Self {
            f,
            increasing: last >= first,
            pieces,
            tol,
        }
    }

    /// `(f(lo), f(hi⁻))` at the branch ends.
    pub fn end_values(&self) -> (T, T) {
        (
            self.pieces.first().map_or(T::zero(), |p| p.1),
            self.pieces.last().map_or(T::zero(), |p| p.2),
        )
    }

    pub fn increasing(&self) -> bool {
        self.increasing
    }

    pub fn invert(&self, y: T) -> Result<T> {
        let (a, b) = self.end_values();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if y < lo - self.tol || y > hi + self.tol || y.is_nan() {
            return Err(Error::LevelOutOfRange {
                y: as_f64(y),
                lo: as_f64(lo),
                hi: as_f64(hi),
            });
        }
        let y = y.max(lo).min(hi);
        let inc = self.increasing;
        // first piece whose far end reaches y
        let k = self
            .pieces
            .partition_point(|p| if inc { p.2 < y } else { p.2 > y })
            .min(self.pieces.len() - 1);
        let (pc, v0, v1) = self.pieces[k];
        let c = &self.f.segments[pc.seg];
        let (fa, fb) = (v0 - y, v1 - y);
        let u = if fa == T::zero() || (fa > T::zero()) == (fb > T::zero()) {
            if fa.abs() <= fb.abs() {
                pc.u0
            } else {
                pc.u1
            }
        } else {
            poly::solve_bracketed(|u| poly::horner(c, u) - y, pc.u0, pc.u1, fa, fb)
        };
        Ok(pc.t0 + (u - pc.u0))
    }
}

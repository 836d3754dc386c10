//! Zero-error capacity.
//!
//! The characteristic series is `v(x) = (q − 1) Σ_{i,j} x^{L(i,j)}`; its unique
//! positive root `ρ` of `v(x) = 1` gives `C₀ = −log₂ ρ`. The constant-weight
//! curve uses the root `ρ_ω` of `Σ (L − 1/ω) x^L = 0` and
//! `C₀(ω) = ω·log₂ v(ρ_ω) − log₂ ρ_ω`, maximised at
//! `ω* = 1 / ((q − 1) Σ L ρ^L)`.
//!
//! Everything runs in binary floating point of a precision derived from the
//! tolerance. Series are never trusted blindly: each sign decision carries an
//! explicit bound on the omitted tail. Exponents of different classes differ
//! mod `ℓ`, so all exponents are distinct and the tail past `L₀` is dominated
//! by the full geometric series `Σ_{k ≥ L₀} x^k`.

use std::cmp::Ordering;

use dashu_float::FBig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::{block_len, BlockLen};
use crate::error::{Error, Result};
use crate::word::{ChannelParams, Repetition};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Binary arbitrary-precision float used for all capacity numerics.
pub type Real = FBig;

/// Working precision, in bits, for a target tolerance.
pub fn precision_for(tol: f64) -> usize {
    let bits = (-tol.log2()).ceil().max(0.0) as usize;
    (bits + 64).max(128)
}

fn real(v: u64, prec: usize) -> Real {
    Real::from(v).with_precision(prec).value()
}

fn real_f64(v: f64, prec: usize) -> Real {
    Real::try_from(v).expect("finite float").with_precision(prec).value()
}

/// Nearest `f64`.
pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

/// `x^e` for `0 ≤ x ≤ 1`. Once the result would drop below `2^(-4·prec)`
/// it saturates there instead: this keeps float exponents in range for
/// astronomically large `e` and still bounds the true value from above.
fn pow(x: &Real, e: u64) -> Real {
    let prec = x.precision();
    let floor_bits = 4 * prec as isize;
    let lx = -to_f64(x).log2();
    if e == 0 {
        return real(1, prec);
    }
    if lx.is_infinite() {
        return real(0, prec);
    }
    if lx > 0.0 && (e as f64) * lx > floor_bits as f64 {
        return Real::from_parts(1.into(), -floor_bits).with_precision(prec).value();
    }
    let mut e = e;
    let mut base = x.clone();
    let mut acc = real(1, prec);
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

fn log2(x: &Real) -> Real {
    x.ln() / real(2, x.precision()).ln()
}

/// `2^-(prec - 16)`: the resolution below which a sign is treated as zero.
fn slack(prec: usize) -> Real {
    let e = (prec - 16) as isize;
    Real::from_parts(1.into(), -e).with_precision(prec).value()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1), got {tol}")))
    }
}

/// `v_{q,ℓ,r}` as a lazily generated list of exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharSeries {
    params: ChannelParams,
}

impl CharSeries {
    pub fn new(params: ChannelParams) -> Self {
        CharSeries { params }
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// Each exponent appears with this coefficient.
    pub fn multiplicity(&self) -> u32 {
        self.params.q() - 1
    }

    /// True for `r = ∞`, where `v` is the polynomial `(q − 1)(x + .. + x^ℓ)`.
    pub fn is_polynomial(&self) -> bool {
        self.params.r().is_unbounded()
    }

    /// Exponents `L(i, j)` in increasing order. Levels are sorted as a
    /// whole (`L(ℓ, j) < L(1, j + 1)`), so this walks level by level.
    /// Stops early if the next exponent overflows `u64`.
    pub fn terms(&self) -> Terms {
        Terms { params: self.params, class: 1, level: 0, done: false }
    }
}

pub struct Terms {
    params: ChannelParams,
    class: u32,
    level: u32,
    done: bool,
}

impl Terms {
    /// True if the series is infinite but the iterator ran out of `u64`.
    fn overflowed(&self) -> bool {
        self.done && !self.params.r().is_unbounded()
    }
}

impl Iterator for Terms {
    type Item = BlockLen;

    fn next(&mut self) -> Option<BlockLen> {
        if self.done {
            return None;
        }
        let Some(len) = block_len(&self.params, self.class, self.level) else {
            self.done = true;
            return None;
        };
        let item = BlockLen { len, class: self.class, level: self.level };
        self.class += 1;
        if self.class > self.params.ell() {
            self.class = 1;
            self.level += 1;
        }
        Some(item)
    }
}

/// How far to sum the series in [`eval_v`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Levels `j ≤ J`.
    Levels(u32),
    /// Add terms until the certified tail bound is at most this.
    Tail(f64),
}

/// Partial sum of `v` with a bound on what was left out:
/// `partial ≤ v(x) ≤ partial + tail_bound`.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub partial: Real,
    pub tail_bound: Real,
    /// Number of levels summed.
    pub levels: u32,
}

impl SeriesValue {
    /// Midpoint of the certified interval.
    pub fn estimate(&self) -> f64 {
        to_f64(&(&self.partial + &self.tail_bound / real(2, self.partial.precision())))
    }
}

/// `(q − 1) Σ_{k ≥ L₀} x^k`.
fn geometric_tail(mult: &Real, x: &Real, l0: u64) -> Real {
    let one = real(1, x.precision());
    mult * pow(x, l0) / (&one - x)
}

/// `Σ_{k ≥ L₀} k x^k = x^{L₀} (L₀ / (1 − x) + x / (1 − x)²)`.
fn weighted_geometric_tail(x: &Real, l0: u64) -> Real {
    let prec = x.precision();
    let gap = real(1, prec) - x;
    pow(x, l0) * (real(l0, prec) / &gap + x / (&gap * &gap))
}

/// Past overflow the true next exponent exceeds `u64::MAX`, so using
/// `u64::MAX` still bounds the tail from above.
const OVERFLOW_EXPONENT: u64 = u64::MAX;

/// Bound on `(q − 1) Σ x^L` over the terms not yet summed, the first of
/// which has exponent `l0`. For a polynomial this is the exact remainder.
fn tail_bound(series: &CharSeries, mult: &Real, x: &Real, l0: u64) -> Real {
    if series.is_polynomial() {
        let rest = (l0..=u64::from(series.params.ell())).fold(real(0, x.precision()), |acc, k| acc + pow(x, k));
        mult * rest
    } else {
        geometric_tail(mult, x, l0)
    }
}

pub fn eval_v(series: &CharSeries, x: &Real, truncation: Truncation) -> Result<SeriesValue> {
    let prec = x.precision().max(128);
    let x = x.clone().with_precision(prec).value();
    let zero = real(0, prec);
    let one = real(1, prec);
    if x < zero {
        return Err(Error::InvalidArgument("the series is evaluated at x ≥ 0".into()));
    }
    if x >= one && !series.is_polynomial() {
        return Err(Error::InvalidArgument("the series diverges for x ≥ 1".into()));
    }
    let mult = real(u64::from(series.multiplicity()), prec);
    let mut partial = zero.clone();
    let mut levels = 0;
    let mut terms = series.terms();
    loop {
        let Some(b) = terms.next() else {
            let tail = if terms.overflowed() { geometric_tail(&mult, &x, OVERFLOW_EXPONENT) } else { zero };
            return Ok(SeriesValue { partial, tail_bound: tail, levels });
        };
        let stop = match truncation {
            Truncation::Levels(j) => b.level > j,
            Truncation::Tail(eps) => tail_bound(series, &mult, &x, b.len) <= real_f64(eps, prec),
        };
        if stop {
            let tail = tail_bound(series, &mult, &x, b.len);
            return Ok(SeriesValue { partial, tail_bound: tail, levels });
        }
        partial += &mult * pow(&x, b.len);
        levels = b.level + 1;
    }
}

/// Certified comparison of `v(x)` with 1; `Equal` means within `2^-(prec-16)`.
fn compare_v(series: &CharSeries, x: &Real, prec: usize) -> (Ordering, u32) {
    let one = real(1, prec);
    let eps = slack(prec);
    let mult = real(u64::from(series.multiplicity()), prec);
    let hi_cut = &one + &eps;
    let lo_cut = &one - &eps;
    let mut partial = real(0, prec);
    let mut levels = 0;
    let mut terms = series.terms();
    loop {
        let next = terms.next();
        if partial > hi_cut {
            return (Ordering::Greater, levels);
        }
        let tail = match next {
            Some(b) => tail_bound(series, &mult, x, b.len),
            None if terms.overflowed() => geometric_tail(&mult, x, OVERFLOW_EXPONENT),
            None => real(0, prec),
        };
        if &partial + &tail < lo_cut {
            return (Ordering::Less, levels);
        }
        if tail <= eps || next.is_none() {
            return (Ordering::Equal, levels);
        }
        let b = next.expect("checked above");
        partial += &mult * pow(x, b.len);
        levels = b.level + 1;
    }
}

/// Certified sign of `g(x) = Σ (L − 1/ω) x^L`; `Equal` means within the
/// working resolution.
fn compare_weighted(series: &CharSeries, x: &Real, inv_omega: &Real, prec: usize) -> (Ordering, u32) {
    let eps = slack(prec);
    let neg_eps = real(0, prec) - &eps;
    let mut partial = real(0, prec);
    let mut levels = 0;
    let mut terms = series.terms();
    loop {
        let next = terms.next();
        let l0 = match next {
            Some(b) => Some(b.len),
            None if terms.overflowed() => Some(OVERFLOW_EXPONENT),
            None => None,
        };
        // Once L₀ > 1/ω every remaining coefficient is positive, so the
        // tail lies in [0, Σ_{k ≥ L₀} k x^k].
        let settled = l0.is_none_or(|l| real(l, prec) > *inv_omega);
        if settled {
            if partial > eps {
                return (Ordering::Greater, levels);
            }
            let tail = l0.map_or_else(|| real(0, prec), |l| weighted_geometric_tail(x, l));
            if &partial + &tail < neg_eps {
                return (Ordering::Less, levels);
            }
            if tail <= eps || next.is_none() {
                return (Ordering::Equal, levels);
            }
        } else if next.is_none() {
            // Overflowed before the weights turned positive; only reachable
            // for ω far below any representable block length.
            return (partial.cmp(&real(0, prec)), levels);
        }
        let b = next.expect("checked above");
        partial += (real(b.len, prec) - inv_omega) * pow(x, b.len);
        levels = b.level + 1;
    }
}

/// Outcome of [`solve_rho`].
#[derive(Clone, Debug)]
pub struct CapacityResult {
    pub params: ChannelParams,
    pub rho: Real,
    /// `C₀ = −log₂ ρ` in bits per symbol.
    pub c0: Real,
    /// Deepest series level used by any evaluation.
    pub truncation_levels: u32,
    /// Bound on `|ρ − ρ_true|`.
    pub root_tolerance: f64,
    lo: Real,
    hi: Real,
}

impl CapacityResult {
    pub fn rho_f64(&self) -> f64 {
        to_f64(&self.rho)
    }

    pub fn c0_f64(&self) -> f64 {
        to_f64(&self.c0)
    }

    /// Interval certified to contain the true root.
    pub fn bracket(&self) -> (&Real, &Real) {
        (&self.lo, &self.hi)
    }
}

/// Right end of the initial bracket, before validation.
fn upper_end(params: &ChannelParams, prec: usize) -> Real {
    let q = u64::from(params.q());
    match (q, params.r()) {
        (2, Repetition::Unbounded) => real(1, prec),
        (2, _) => real(1, prec) - Real::from_parts(1.into(), -20).with_precision(prec).value(),
        _ => real(1, prec) / real(q - 1, prec),
    }
}

/// `ρ` by certified bisection on `[1/q, 1/(q − 1)]` (`[1/q, 1 − 2⁻²⁰]` for
/// `q = 2`). A bisection step is only taken once the partial sum, together
/// with its tail bound, puts `v(m)` strictly on one side of 1.
pub fn solve_rho(params: &ChannelParams, tol: f64) -> Result<CapacityResult> {
    check_tol(tol)?;
    let prec = precision_for(tol);
    let series = CharSeries::new(*params);
    let eps = slack(prec);
    let mut lo = real(1, prec) / real(u64::from(params.q()), prec);
    let mut hi = upper_end(params, prec);
    let mut deepest = 0;

    let (at_lo, l) = compare_v(&series, &lo, prec);
    deepest = deepest.max(l);
    if at_lo == Ordering::Greater {
        return Err(Error::Invariant(format!("v(1/q) > 1 for {params}")));
    }
    if at_lo == Ordering::Equal {
        hi = lo.clone();
    }
    // For q = 2 and very large r the root can sit above 1 − 2⁻²⁰; move the
    // right end towards 1 until it brackets.
    let mut k: isize = 20;
    loop {
        let (at_hi, l) = compare_v(&series, &hi, prec);
        deepest = deepest.max(l);
        match at_hi {
            Ordering::Greater => break,
            Ordering::Equal => {
                lo = hi.clone();
                break;
            }
            Ordering::Less if params.q() == 2 && (k as usize) < prec - 16 => {
                k = (2 * k).min(prec as isize - 16);
                hi = real(1, prec) - Real::from_parts(1.into(), -k).with_precision(prec).value();
            }
            Ordering::Less => return Err(Error::Invariant(format!("no sign change in the bracket for {params}"))),
        }
    }

    let width = real_f64(tol, prec);
    let two = real(2, prec);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        let (side, l) = compare_v(&series, &mid, prec);
        deepest = deepest.max(l);
        match side {
            Ordering::Greater => hi = mid,
            Ordering::Less => lo = mid,
            Ordering::Equal => {
                lo = mid.clone();
                hi = mid;
            }
        }
    }
    // v' ≥ q − 1 ≥ 1 near the root, so a resolution-level miss in v moves
    // the root by at most the same amount.
    let pad = &eps * real(4, prec);
    let rho = (&lo + &hi) / &two;
    let root_tolerance = to_f64(&((&hi - &lo) / &two + &pad));
    let c0 = real(0, prec) - log2(&rho);
    Ok(CapacityResult {
        params: *params,
        rho,
        c0,
        truncation_levels: deepest,
        root_tolerance,
        lo: lo - &pad,
        hi: hi + &pad,
    })
}

/// A point of the constant-weight capacity curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CWCapacityResult {
    pub params: ChannelParams,
    pub omega: f64,
    /// `ρ_ω`; at the endpoints this is the limit (1 at `ω = 0`, 0 at `ω = 1`).
    pub rho_omega: f64,
    pub c0_omega: f64,
}

/// `C₀(ω)` for `0 ≤ ω ≤ 1`.
///
/// Interior points need finite `r`: for `r = ∞` and `ω ≤ 1/ℓ` the weighted
/// polynomial has no positive root, and the saddle-point formula describes
/// exact-length rather than bounded-length codes.
pub fn cw_capacity(params: &ChannelParams, omega: f64, tol: f64) -> Result<CWCapacityResult> {
    check_tol(tol)?;
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::InvalidArgument(format!("omega must lie in [0, 1], got {omega}")));
    }
    let at = |rho_omega, c0_omega| Ok(CWCapacityResult { params: *params, omega, rho_omega, c0_omega });
    if omega == 0.0 {
        return at(1.0, 0.0);
    }
    if omega == 1.0 {
        return at(0.0, f64::from(params.q() - 1).log2());
    }
    params.finite_r("constant-weight capacity at interior omega")?;

    let prec = precision_for(tol);
    let series = CharSeries::new(*params);
    let one = real(1, prec);
    let two = real(2, prec);
    let inv = &one / real_f64(omega, prec);
    let limit = prec as isize - 16;

    // g(x) ≈ (1 − 1/ω)x < 0 near 0; g > 0 close enough to 1.
    let mut lo = &one / &two;
    let mut k: isize = 1;
    loop {
        match compare_weighted(&series, &lo, &inv, prec).0 {
            Ordering::Less => break,
            _ if k < limit => {
                k += 1;
                lo = Real::from_parts(1.into(), -k).with_precision(prec).value();
            }
            _ => return Err(Error::Invariant(format!("g has no negative value near 0 for {params}"))),
        }
    }
    let mut hi = &one - &lo;
    let mut k: isize = 1;
    loop {
        match compare_weighted(&series, &hi, &inv, prec).0 {
            Ordering::Greater => break,
            _ if k < limit => {
                k += 1;
                hi = &one - Real::from_parts(1.into(), -k).with_precision(prec).value();
            }
            _ => return Err(Error::Invariant(format!("g has no positive value near 1 for {params}"))),
        }
    }

    let width = real_f64(tol, prec);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        match compare_weighted(&series, &mid, &inv, prec).0 {
            Ordering::Greater => hi = mid,
            Ordering::Less => lo = mid,
            Ordering::Equal => {
                lo = mid.clone();
                hi = mid;
            }
        }
    }
    let rho = (&lo + &hi) / &two;
    let v = eval_v(&series, &rho, Truncation::Tail(tol * 1e-6))?;
    let v = &v.partial + &v.tail_bound / &two;
    let c0 = real_f64(omega, prec) * log2(&v) - log2(&rho);
    at(to_f64(&rho), to_f64(&c0))
}

/// Golden-section estimate of the peak of `C₀(ω)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakScan {
    pub omega: f64,
    pub c0_omega: f64,
}

/// Outcome of [`omega_star`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaStar {
    pub params: ChannelParams,
    pub omega: f64,
    pub rho: f64,
    pub c0: f64,
    /// Set when `ρ = 1`, i.e. `C₀ = 0` and the weight curve is flat.
    pub degenerate: bool,
    /// Numerical confirmation of the maximum; only for finite `r`.
    pub scan: Option<PeakScan>,
}

/// `ω* = 1 / ((q − 1) Σ L ρ^L)`. For finite `r` a golden-section scan of
/// [`cw_capacity`] must find nothing more than `10·tol` above `C₀(ω*)`,
/// otherwise this returns [`Error::Invariant`].
pub fn omega_star(params: &ChannelParams, tol: f64) -> Result<OmegaStar> {
    let cap = solve_rho(params, tol)?;
    let prec = precision_for(tol);
    let rho = cap.rho.clone();
    let one = real(1, prec);
    let eps = slack(prec);
    let degenerate = rho >= &one - &eps;

    let series = CharSeries::new(*params);
    let mut sum = real(0, prec);
    let mut terms = series.terms();
    loop {
        let next = terms.next();
        if !degenerate {
            let l0 = match next {
                Some(b) => Some(b.len),
                None if terms.overflowed() => Some(OVERFLOW_EXPONENT),
                None => None,
            };
            if !series.is_polynomial() && l0.is_none_or(|l| weighted_geometric_tail(&rho, l) <= eps) {
                break;
            }
        }
        let Some(b) = next else { break };
        sum += real(b.len, prec) * pow(&rho, b.len);
    }
    let omega = to_f64(&(&one / (real(u64::from(params.q() - 1), prec) * sum)));

    let scan = if params.r().is_unbounded() || degenerate {
        None
    } else {
        let f = |w: f64| cw_capacity(params, w, tol).map(|r| r.c0_omega);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        while b - a > 1e-6 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = f(d)?;
            }
        }
        let (w, best) = if fc >= fd { (c, fc) } else { (d, fd) };
        let at_star = f(omega)?;
        if at_star < best - 10.0 * tol {
            return Err(Error::Invariant(format!(
                "C0(omega*) = {at_star} at omega* = {omega}, but the scan found {best} at {w}"
            )));
        }
        Some(PeakScan { omega: w, c0_omega: best })
    };
    Ok(OmegaStar { params: *params, omega, rho: cap.rho_f64(), c0: cap.c0_f64(), degenerate, scan })
}

/// One row of the capacity table; `penalty = log₂(ρ_∞ / ρ) = C₀ − C₀(∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub q: u32,
    pub ell: u32,
    /// A positive integer or `inf`.
    pub r: String,
    pub rho: f64,
    pub c0: f64,
    pub c0_inf: f64,
    pub penalty: f64,
}

pub fn capacity_row(params: &ChannelParams, tol: f64) -> Result<CapacityRow> {
    let cap = solve_rho(params, tol)?;
    let inf = solve_rho(&ChannelParams::unbounded(params.q(), params.ell())?, tol)?;
    Ok(CapacityRow {
        q: params.q(),
        ell: params.ell(),
        r: params.r().to_string(),
        rho: cap.rho_f64(),
        c0: cap.c0_f64(),
        c0_inf: inf.c0_f64(),
        penalty: to_f64(&(&cap.c0 - &inf.c0)),
    })
}

/// Rows for every grid point, in grid order. Points are solved in parallel.
pub fn capacity_table(grid: &[ChannelParams], tol: f64) -> Result<Vec<CapacityRow>> {
    grid.par_iter().map(|p| capacity_row(p, tol)).collect()
}

/// The grid `ℓ ∈ ells`, `r ∈ rs` for one alphabet size, `ℓ` outermost.
pub fn grid(q: u32, ells: impl IntoIterator<Item = u32>, rs: &[Repetition]) -> Result<Vec<ChannelParams>> {
    let mut out = Vec::new();
    for ell in ells {
        for &r in rs {
            out.push(ChannelParams::new(q, ell, r)?);
        }
    }
    Ok(out)
}

//! Accuracy planning: direct-sum cutoff, Taylor order and the photon-number
//! window outside of which the Poisson mass is below `n̄^{-l}`.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

/// Targets derived from an accuracy goal `o(n̄^{-l})`.
#[derive(Clone, Debug)]
pub struct PrecisionPlan {
    pub l: u32,
    /// Taylor order from the closed formula, `None` outside its domain.
    pub p: Option<u32>,
    /// Window half-width in units of `√n̄`; only defined for `n̄ > 1`.
    pub alpha0: Option<BigReal>,
    pub t_cutoff: u64,
}

impl PrecisionPlan {
    pub fn new(nbar: &BigReal, l: u32, prec: Precision) -> Result<Self> {
        check_positive(nbar)?;
        let p = match expansion_order(nbar, l, prec) {
            Ok(p) => Some(p),
            Err(Error::Planner(_)) => None,
            Err(e) => return Err(e),
        };
        let alpha0 = if *nbar > 1 {
            Some(window_bound_alpha(nbar, l, prec)?)
        } else {
            None
        };
        Ok(Self {
            l,
            p,
            alpha0,
            t_cutoff: truncation_cutoff(nbar, l, prec)?,
        })
    }
}

fn check_positive(nbar: &BigReal) -> Result<()> {
    if !nbar.is_finite() || *nbar <= 0 {
        return Err(Error::argument(format!(
            "n̄ must be positive and finite, got {}",
            nbar.to_f64()
        )));
    }
    Ok(())
}

/// `g(t) = ln (t−1)! + n̄ − (t+l) ln n̄`; the cutoff is the first `t` with `g(t) > 0`.
fn cutoff_gap(t: u64, l: u32, nbar: &Float, ln_nbar: &Float) -> Float {
    let bits = nbar.prec();
    let mut g = Float::with_val(bits, t).ln_gamma();
    g += nbar;
    g -= Float::with_val(bits, ln_nbar * (t + u64::from(l)));
    g
}

/// Smallest `t ≥ max(1, ⌊n̄⌋)` with `(t−1)! > e^{−n̄} n̄^{t+l}`.
///
/// Below `⌊n̄⌋` the inequality can hold spuriously (both sides tiny) without
/// bounding the tail, so the search starts at the mode. From there `g`
/// is non-decreasing, which allows exponential then binary search.
pub fn truncation_cutoff(nbar: &BigReal, l: u32, prec: Precision) -> Result<u64> {
    check_positive(nbar)?;
    let bits = prec.widened(10).bits();
    let x = Float::with_val(bits, nbar);
    let ln_x = Float::with_val(bits, x.ln_ref());
    let start = (nbar.to_f64().floor() as u64).max(1);
    if cutoff_gap(start, l, &x, &ln_x) > 0 {
        return Ok(start);
    }
    let mut lo = start;
    let mut step = 1u64.max((nbar.to_f64().sqrt()) as u64);
    let mut hi = start + step;
    while cutoff_gap(hi, l, &x, &ln_x) <= 0 {
        lo = hi;
        step = step.saturating_mul(2);
        hi = hi
            .checked_add(step)
            .ok_or_else(|| Error::Resource("cutoff search overflow".into()))?;
    }
    // invariant: g(lo) ≤ 0 < g(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if cutoff_gap(mid, l, &x, &ln_x) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Taylor order `p = ⌈ln(√2 n̄^{l−1/2}(l+1) ln n̄) / (½ ln n̄ − ln((l+1) ln n̄))⌉`.
///
/// Fails with a planner error when the denominator is not positive; direct
/// summation is the right tool there.
pub fn expansion_order(nbar: &BigReal, l: u32, prec: Precision) -> Result<u32> {
    check_positive(nbar)?;
    if *nbar <= 1 {
        return Err(Error::Planner(format!(
            "expansion order undefined for n̄ = {} ≤ 1; use direct summation",
            nbar.to_f64()
        )));
    }
    let bits = prec.bits();
    let ln_n = Float::with_val(bits, nbar.ln_ref());
    let lp1 = Float::with_val(bits, l + 1);
    let lp1_ln = Float::with_val(bits, &lp1 * &ln_n);
    let denom = Float::with_val(bits, &ln_n / 2u32) - Float::with_val(bits, lp1_ln.ln_ref());
    if denom <= 0 {
        return Err(Error::Planner(format!(
            "expansion-order formula has non-positive denominator {:.6} at n̄ = {}, l = {l}; use direct summation",
            denom.to_f64(),
            nbar.to_f64()
        )));
    }
    // ln(√2) + (l − ½) ln n̄ + ln((l+1) ln n̄)
    let mut numer = Float::with_val(bits, Float::with_val(bits, 2).ln() / 2u32);
    numer += Float::with_val(bits, &ln_n * (f64::from(l) - 0.5));
    numer += Float::with_val(bits, lp1_ln.ln_ref());
    let p = Float::with_val(bits, numer / denom).ceil();
    let p = p.to_f64();
    if p < 1.0 {
        return Ok(1);
    }
    if p > f64::from(u32::MAX) {
        return Err(Error::Planner("expansion order overflows".into()));
    }
    Ok(p as u32)
}

/// `α₀ = 1/√n̄ + (l+1) ln n̄/√n̄ + √((l+1)²(ln n̄)²/n̄ + 2(l+1) ln n̄)`.
pub fn window_bound_alpha(nbar: &BigReal, l: u32, prec: Precision) -> Result<BigReal> {
    check_positive(nbar)?;
    if *nbar <= 1 {
        return Err(Error::argument(format!(
            "window bound needs n̄ > 1, got {}",
            nbar.to_f64()
        )));
    }
    let bits = prec.bits();
    let sqrt_n = Float::with_val(bits, nbar.sqrt_ref());
    let a = Float::with_val(bits, nbar.ln_ref()) * (l + 1);
    let mut inner = Float::with_val(bits, a.square_ref()) / nbar;
    inner += Float::with_val(bits, &a * 2u32);
    let mut alpha = Float::with_val(bits, 1 + &a) / &sqrt_n;
    alpha += inner.sqrt();
    Ok(alpha)
}

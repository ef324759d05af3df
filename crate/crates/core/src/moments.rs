//! Poisson photon-number statistics: raw and central moments, tail masses.

use std::sync::OnceLock;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

/// Largest moment order backed by the exact Stirling table.
pub const MAX_MOMENT_ORDER: u32 = 64;

/// Exact Stirling numbers of the second kind, `S(j, k)` for `0 ≤ k ≤ j ≤ 64`.
fn stirling_table() -> &'static [Vec<Integer>] {
    static TABLE: OnceLock<Vec<Vec<Integer>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = MAX_MOMENT_ORDER as usize;
        let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n + 1);
        rows.push(vec![Integer::from(1)]);
        for j in 1..=n {
            let prev = &rows[j - 1];
            let mut row = vec![Integer::new(); j + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                // S(j,k) = k S(j-1,k) + S(j-1,k-1)
                let mut v = Integer::from(&prev[k - 1]);
                if k < j {
                    v += Integer::from(&prev[k] * k as u32);
                }
                *slot = v;
            }
            rows.push(row);
        }
        rows
    })
}

/// `S(j, k)`, the Stirling number of the second kind.
pub fn stirling2(j: u32, k: u32) -> Result<Integer> {
    check_order(j)?;
    if k > j {
        return Ok(Integer::new());
    }
    Ok(stirling_table()[j as usize][k as usize].clone())
}

fn check_order(j: u32) -> Result<()> {
    if j > MAX_MOMENT_ORDER {
        return Err(Error::argument(format!(
            "moment order {j} exceeds the supported maximum {MAX_MOMENT_ORDER}"
        )));
    }
    Ok(())
}

fn check_nbar(nbar: &BigReal) -> Result<()> {
    if !(nbar.is_finite() && *nbar > 0) {
        return Err(Error::argument(format!(
            "mean photon number must be positive, got {nbar}"
        )));
    }
    Ok(())
}

/// Extra decimal digits needed so the alternating binomial transform of
/// raw moments keeps `prec` digits: the raw moments grow like `n̄^j`.
fn cancellation_guard(nbar: &BigReal, j: u32) -> u32 {
    let mag = nbar.to_f64().abs().max(1.0).log10();
    (f64::from(j) * mag).ceil() as u32 + 10
}

/// `E[n^j]` for `n ~ Poisson(n̄)`, i.e. the Touchard polynomial `Σ_k S(j,k) n̄^k`.
pub fn poisson_raw_moment(nbar: &BigReal, j: u32, prec: Precision) -> Result<BigReal> {
    check_nbar(nbar)?;
    check_order(j)?;
    Ok(prec.real(&raw_moment_at(nbar, j, prec.bits())))
}

fn raw_moment_at(nbar: &BigReal, j: u32, bits: u32) -> BigReal {
    let row = &stirling_table()[j as usize];
    let x = Float::with_val(bits, nbar);
    // Horner over k = j..0
    let mut acc = Float::new(bits);
    for coeff in row.iter().rev() {
        acc *= &x;
        acc += coeff;
    }
    acc
}

/// All raw moments `E[n^0] .. E[n^max_order]` at `bits` of precision.
fn raw_moments_at(nbar: &BigReal, max_order: u32, bits: u32) -> Vec<BigReal> {
    (0..=max_order)
        .map(|j| raw_moment_at(nbar, j, bits))
        .collect()
}

/// `μ_j = E[(n − n̄)^j]`, computed as `Σ_i C(j,i) (−n̄)^{j−i} E[n^i]`.
///
/// The binomial transform cancels about `j·log10 n̄` digits, so it is
/// evaluated at a correspondingly widened precision before rounding back.
pub fn poisson_central_moment(nbar: &BigReal, j: u32, prec: Precision) -> Result<BigReal> {
    check_nbar(nbar)?;
    check_order(j)?;
    let table = poisson_central_moments(nbar, j, prec)?;
    Ok(table
        .into_iter()
        .nth(j as usize)
        .expect("table has j+1 entries"))
}

/// Central moments `μ_0 .. μ_max_order`.
pub fn poisson_central_moments(
    nbar: &BigReal,
    max_order: u32,
    prec: Precision,
) -> Result<Vec<BigReal>> {
    check_nbar(nbar)?;
    check_order(max_order)?;
    let wide = prec.widened(cancellation_guard(nbar, max_order));
    let bits = wide.bits();
    let raw = raw_moments_at(nbar, max_order, bits);
    let neg = Float::with_val(bits, -nbar);
    let mut out = Vec::with_capacity(max_order as usize + 1);
    for j in 0..=max_order {
        let mut acc = Float::new(bits);
        let mut binom = Integer::from(1);
        for (i, raw_i) in raw.iter().enumerate().take(j as usize + 1) {
            let i = i as u32;
            let mut term = Float::with_val(bits, &neg).pow(j - i);
            term *= &binom;
            term *= raw_i;
            acc += term;
            // C(j, i+1) = C(j, i)·(j−i)/(i+1)
            binom *= j - i;
            binom /= i + 1;
        }
        out.push(prec.real(&acc));
    }
    Ok(out)
}

/// `e^{−n̄} n̄^n / n!` evaluated through logarithms so large `n̄` cannot underflow.
pub fn poisson_weight(nbar: &BigReal, n: u64, prec: Precision) -> BigReal {
    // exp amplifies the absolute error of its argument, whose size is ~n̄
    let guard = (nbar.to_f64().abs().max(n as f64).max(10.0)).log10().ceil() as u32 + 10;
    let wide = prec.widened(guard);
    let bits = wide.bits();
    let x = Float::with_val(bits, nbar);
    let mut log_w = Float::with_val(bits, x.ln_ref()) * n;
    log_w -= &x;
    log_w -= Float::with_val(bits, n + 1).ln_gamma();
    prec.real(&log_w.exp())
}

/// `Σ_{n=lo..hi} e^{−n̄} n̄^n / n!`; `hi = None` sums to convergence.
///
/// Terms are generated multiplicatively outward from the term nearest the
/// mode, and each side stops once its geometric tail bound drops below the
/// working resolution relative to the accumulated mass.
pub fn poisson_tail(nbar: &BigReal, lo: u64, hi: Option<u64>, prec: Precision) -> Result<BigReal> {
    check_nbar(nbar)?;
    if let Some(h) = hi {
        if h < lo {
            return Err(Error::argument(format!("empty range: lo={lo} > hi={h}")));
        }
    }
    let bits = prec.widened(5).bits();
    let mode = nbar.to_f64().floor().max(0.0) as u64;
    let anchor = match hi {
        Some(h) => mode.clamp(lo, h),
        None => mode.max(lo),
    };
    let x = Float::with_val(bits, nbar);
    let w0 = Float::with_val(bits, poisson_weight(nbar, anchor, prec.widened(5)));
    let cutoff = Float::with_val(bits, 1) >> (bits as i32 + 4);

    let mut sum = w0.clone();
    // upward
    let mut w = w0.clone();
    let mut n = anchor;
    while hi.is_none_or(|h| n < h) {
        w *= &x;
        w /= n + 1;
        n += 1;
        sum += &w;
        if let Some(bound) = geometric_tail_bound(&w, &x, n, true) {
            if bound <= Float::with_val(bits, &sum * &cutoff) {
                break;
            }
        }
    }
    // downward
    let mut w = w0;
    let mut n = anchor;
    while n > lo {
        w *= n;
        w /= &x;
        n -= 1;
        sum += &w;
        if let Some(bound) = geometric_tail_bound(&w, &x, n, false) {
            if bound <= Float::with_val(bits, &sum * &cutoff) {
                break;
            }
        }
    }
    Ok(prec.real(&sum))
}

/// Bound on the remaining mass beyond term `n` (weight `w`) in the given
/// direction, valid once successive weight ratios are below one.
pub(crate) fn geometric_tail_bound(w: &Float, nbar: &Float, n: u64, upward: bool) -> Option<Float> {
    let bits = w.prec();
    let ratio = if upward {
        Float::with_val(bits, nbar / Float::with_val(bits, n + 1))
    } else {
        if n == 0 {
            return Some(Float::new(bits));
        }
        Float::with_val(bits, Float::with_val(bits, n) / nbar)
    };
    if ratio >= 1 {
        return None;
    }
    let one_minus = Float::with_val(bits, 1 - &ratio);
    Some(Float::with_val(bits, w * &ratio) / one_minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(60).unwrap()
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling2(0, 0).unwrap(), 1);
        assert_eq!(stirling2(4, 2).unwrap(), 7);
        assert_eq!(stirling2(5, 3).unwrap(), 25);
        assert_eq!(stirling2(10, 5).unwrap(), 42525);
        assert_eq!(stirling2(3, 5).unwrap(), 0);
        assert!(stirling2(65, 1).is_err());
    }

    #[test]
    fn raw_moment_identities() {
        let prec = p();
        let nbar = prec.int(10);
        assert_eq!(poisson_raw_moment(&nbar, 0, prec).unwrap(), 1);
        assert_eq!(poisson_raw_moment(&nbar, 1, prec).unwrap(), 10);
        assert_eq!(poisson_raw_moment(&nbar, 2, prec).unwrap(), 110);
        assert!(poisson_raw_moment(&nbar, 65, prec).is_err());
        assert!(poisson_raw_moment(&prec.int(-1), 2, prec).is_err());
    }

    #[test]
    fn central_moment_identities() {
        let prec = p();
        let nbar = prec.int(10);
        assert_eq!(poisson_central_moment(&nbar, 0, prec).unwrap(), 1);
        assert_eq!(poisson_central_moment(&nbar, 1, prec).unwrap(), 0);
        assert_eq!(poisson_central_moment(&nbar, 2, prec).unwrap(), 10);
        // μ3 = n̄, μ4 = n̄ + 3n̄²
        assert_eq!(poisson_central_moment(&nbar, 3, prec).unwrap(), 10);
        assert_eq!(poisson_central_moment(&nbar, 4, prec).unwrap(), 310);
    }

    #[test]
    fn central_moments_survive_large_nbar() {
        // μ_{j+1} = n̄ Σ_{i<j} C(j,i) μ_i has no cancellation; compare against it.
        let prec = p();
        let nbar = prec.int(1_000_000);
        let got = poisson_central_moments(&nbar, 16, prec).unwrap();
        let mut rec: Vec<Float> = vec![prec.one(), prec.zero()];
        for j in 1..16u32 {
            let mut acc = prec.zero();
            let mut binom = Integer::from(1);
            for i in 0..j {
                acc += Float::with_val(prec.bits(), &rec[i as usize] * &binom);
                binom *= j - i;
                binom /= i + 1;
            }
            rec.push(acc * &nbar);
        }
        for (j, (a, b)) in got.iter().zip(&rec).enumerate() {
            if b.is_zero() {
                assert!(a.is_zero(), "μ_{j}");
                continue;
            }
            let rel = (Float::with_val(prec.bits(), a - b) / b).abs();
            assert!(rel < prec.pow10(-55), "μ_{j} rel err {rel}");
        }
    }

    #[test]
    fn weight_matches_closed_form() {
        let prec = p();
        let nbar = prec.int(10);
        let w = poisson_weight(&nbar, 3, prec);
        let expected: Float = Float::with_val(prec.bits(), (-prec.int(10)).exp()) * 1000u32 / 6u32;
        let rel = (Float::with_val(prec.bits(), &w - &expected) / &expected).abs();
        assert!(rel < prec.pow10(-58));
    }

    #[test]
    fn tail_normalizes() {
        let prec = p();
        for nbar in [1i64, 10, 1000, 10_000] {
            let total = poisson_tail(&prec.int(nbar), 0, None, prec).unwrap();
            let err = Float::with_val(prec.bits(), total - 1u32).abs();
            assert!(err < prec.pow10(5 - 60), "n̄={nbar}: {err}");
        }
    }

    #[test]
    fn tail_rejects_empty_range() {
        let prec = p();
        assert!(poisson_tail(&prec.int(10), 5, Some(4), prec).is_err());
        assert!(poisson_tail(&prec.zero(), 0, None, prec).is_err());
    }

    #[test]
    fn finite_tail_is_partial_sum() {
        let prec = p();
        let nbar = prec.int(10);
        let mut direct = prec.zero();
        for n in 3..=7u64 {
            direct += poisson_weight(&nbar, n, prec);
        }
        let tail = poisson_tail(&nbar, 3, Some(7), prec).unwrap();
        let err = Float::with_val(prec.bits(), tail - direct).abs();
        assert!(err < prec.pow10(-57));
    }
}

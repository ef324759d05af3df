//! Working-precision context for all high-precision arithmetic.
//!
//! Every computation in this crate takes a [`Precision`] explicitly; values
//! carry their own MPFR precision and no global state is consulted.

use std::f64::consts::LOG2_10;
use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real number.
pub type BigReal = Float;

/// Extra binary digits carried beyond the requested decimal precision.
const GUARD_BITS: u32 = 16;

/// Decimal working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 50;
    pub const MIN_DIGITS: u32 = 30;

    /// A context carrying `digits` significant decimal digits (at least 30).
    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::argument(format!(
                "working precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Self { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn bits(self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Same context with `extra` more decimal digits.
    pub fn widened(self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
        }
    }

    pub fn zero(self) -> BigReal {
        Float::new(self.bits())
    }

    pub fn one(self) -> BigReal {
        Float::with_val(self.bits(), 1)
    }

    pub fn int(self, value: i64) -> BigReal {
        Float::with_val(self.bits(), value)
    }

    pub fn uint(self, value: u64) -> BigReal {
        Float::with_val(self.bits(), value)
    }

    /// Exact conversion of an `f64` (no decimal rounding is introduced).
    pub fn from_f64(self, value: f64) -> BigReal {
        Float::with_val(self.bits(), value)
    }

    pub fn ratio(self, num: i64, den: i64) -> BigReal {
        Float::with_val(self.bits(), num) / den
    }

    /// Re-round an existing value into this context.
    pub fn real(self, value: &BigReal) -> BigReal {
        Float::with_val(self.bits(), value)
    }

    /// Parse a decimal literal such as `"0.000039303916656063668561194770"` or `"1e4"`.
    pub fn parse(self, literal: &str) -> Result<BigReal> {
        let parsed = Float::parse(literal.trim())
            .map_err(|e| Error::argument(format!("cannot parse number {literal:?}: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }

    pub fn pi(self) -> BigReal {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

    /// `10^(-digits)`, the nominal resolution of this context.
    pub fn epsilon(self) -> BigReal {
        self.pow10(-(self.digits as i32))
    }

    pub fn pow10(self, exponent: i32) -> BigReal {
        Float::with_val(self.bits(), 10).pow(exponent)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.digits)
    }
}

/// Scientific rendering with `significant` digits, e.g. `3.926516425530077299575028e-5`.
///
/// The output depends only on the value and `significant`, so repeated runs
/// render byte-identical text.
pub fn format_sci(value: &BigReal, significant: usize) -> String {
    if value.is_zero() {
        return if significant > 1 {
            format!("0.{}e0", "0".repeat(significant - 1))
        } else {
            "0e0".to_string()
        };
    }
    let (negative, digits, exp) =
        value.to_sign_string_exp_round(10, Some(significant), Round::Nearest);
    let exp = exp.expect("finite non-zero value has an exponent") - 1;
    let mut out = String::with_capacity(significant + 8);
    if negative {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// `|a - b|` as an `f64`, convenient for tolerance checks and reporting.
pub fn abs_diff(a: &BigReal, b: &BigReal) -> f64 {
    let prec = a.prec().max(b.prec());
    Float::with_val(prec, a - b).abs().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(Precision::new(29).is_err());
        assert_eq!(Precision::new(30).unwrap().digits(), 30);
        assert_eq!(Precision::default().digits(), 50);
    }

    #[test]
    fn bits_cover_requested_digits() {
        let p = Precision::new(50).unwrap();
        assert!(f64::from(p.bits()) >= 50.0 * LOG2_10);
    }

    #[test]
    fn sci_format_is_stable() {
        let p = Precision::default();
        let x = p.parse("0.000039265164255300772995750283").unwrap();
        assert_eq!(format_sci(&x, 10), "3.926516426e-5");
        assert_eq!(format_sci(&p.int(-110), 3), "-1.10e2");
        assert_eq!(format_sci(&p.zero(), 3), "0.00e0");
        assert_eq!(format_sci(&p.one(), 1), "1e0");
    }

    #[test]
    fn precision_d_matches_d_plus_10() {
        // sqrt(2)·π at d digits agrees with the d+10 result to 10^(1-d).
        for digits in [30u32, 50, 80] {
            let lo = Precision::new(digits).unwrap();
            let hi = lo.widened(10);
            let a = Float::with_val(lo.bits(), lo.int(2).sqrt() * lo.pi());
            let b = Float::with_val(hi.bits(), hi.int(2).sqrt() * hi.pi());
            let rel = Float::with_val(hi.bits(), (a - &b) / &b).abs();
            assert!(rel <= hi.pow10(1 - digits as i32));
        }
    }
}

//! Pulse area `kπ`, with `k` an exact non-negative rational.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

/// Pulse-area index `k`: one pulse satisfies `g t √n̄ = kπ/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PulseArea(Ratio<i64>);

impl PulseArea {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::argument("pulse area denominator is zero"));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(k: Ratio<i64>) -> Result<Self> {
        if k < Ratio::from_integer(0) {
            return Err(Error::argument(format!(
                "pulse area index must be non-negative, got {k}"
            )));
        }
        Ok(Self(k))
    }

    pub fn integer(k: i64) -> Result<Self> {
        Self::new(k, 1)
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        *self.0.numer() == 0
    }

    pub fn to_real(self, prec: Precision) -> BigReal {
        prec.ratio(*self.0.numer(), *self.0.denom())
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Coupling phase `τ = kπ / (2√n̄)` reached at the end of one pulse.
    pub fn tau(self, nbar: &BigReal, prec: Precision) -> BigReal {
        let bits = prec.bits();
        let mut tau = Float::with_val(bits, self.to_real(prec) * prec.pi());
        tau /= Float::with_val(bits, nbar.sqrt_ref()) * 2u32;
        tau
    }

    /// Rabi periods elapsed after `m` pulses, `N_R = m·k/2`.
    pub fn rabi_periods(self, m: u64) -> Ratio<i64> {
        self.0 * Ratio::new(m as i64, 2)
    }

    /// True when `m` pulses complete a whole number of Rabi periods, i.e.
    /// the ideal rotation after `m` pulses is the identity.
    pub fn completes_period(self, m: u64) -> bool {
        self.rabi_periods(m).is_integer()
    }
}

impl fmt::Display for PulseArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for PulseArea {
    type Err = Error;

    /// Accepts `"2"`, `"1/2"` and finite decimals such as `"0.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::argument(format!("cannot parse pulse area {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return Self::new(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let denom = 10i64.pow(frac.len() as u32);
            let negative = int.starts_with('-');
            let int: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let frac: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad())?
            };
            let magnitude = int.abs() * denom + frac;
            return Self::new(if negative { -magnitude } else { magnitude }, denom);
        }
        Self::integer(s.parse().map_err(|_| bad())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(
            "2".parse::<PulseArea>().unwrap(),
            PulseArea::integer(2).unwrap()
        );
        assert_eq!(
            "1/2".parse::<PulseArea>().unwrap(),
            PulseArea::new(1, 2).unwrap()
        );
        assert_eq!(
            "0.5".parse::<PulseArea>().unwrap(),
            PulseArea::new(1, 2).unwrap()
        );
        assert_eq!(
            "2.25".parse::<PulseArea>().unwrap(),
            PulseArea::new(9, 4).unwrap()
        );
        assert!("-1".parse::<PulseArea>().is_err());
        assert!("-0.5".parse::<PulseArea>().is_err());
        assert!("1/0".parse::<PulseArea>().is_err());
        assert!("abc".parse::<PulseArea>().is_err());
    }

    #[test]
    fn rabi_periods_and_identity_points() {
        let half = PulseArea::new(1, 2).unwrap();
        assert_eq!(half.rabi_periods(8), Ratio::from_integer(2));
        assert!(half.completes_period(4));
        assert!(!half.completes_period(2));
        let one = PulseArea::integer(1).unwrap();
        assert!(one.completes_period(2));
        assert!(!one.completes_period(3));
        assert!(PulseArea::integer(2).unwrap().completes_period(1));
    }

    #[test]
    fn tau_for_full_period() {
        let prec = Precision::default();
        let nbar = prec.int(10_000);
        let tau = PulseArea::integer(2).unwrap().tau(&nbar, prec);
        // 2π/(2·100)
        let expected = prec.pi() / 100u32;
        assert_eq!(tau, expected);
    }
}

//! Exponential fits `A e^{−b N_R}` to the collapse envelope.

use num_rational::Ratio;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::pulse::{envelope_sequence, InversionPoint, PulseMap};

/// Inversion `w` after `n_rabi` Rabi periods.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopePoint {
    pub n_rabi: BigReal,
    pub w: BigReal,
}

impl EnvelopePoint {
    pub fn new(n_rabi: BigReal, w: BigReal) -> Self {
        Self { n_rabi, w }
    }

    pub fn from_inversion(p: &InversionPoint, prec: Precision) -> Self {
        Self {
            n_rabi: ratio_to_real(p.n_rabi, prec),
            w: p.w.clone(),
        }
    }
}

fn ratio_to_real(r: Ratio<i64>, prec: Precision) -> BigReal {
    prec.ratio(*r.numer(), *r.denom())
}

#[derive(Clone, Debug)]
pub struct FitResult {
    /// `A = exp(intercept)`
    pub amplitude: BigReal,
    /// `b = −slope`, per Rabi period.
    pub rate: BigReal,
    /// RMS of `ln W − (ln A − b N_R)` over the points used.
    pub rms_residual: BigReal,
    pub n_used: usize,
    /// Points dropped because `W ≤ 0`.
    pub n_excluded: usize,
}

impl FitResult {
    /// `A e^{−b N_R}`
    pub fn model(&self, n_rabi: &BigReal) -> BigReal {
        let bits = self.amplitude.prec();
        let e = Float::with_val(bits, -Float::with_val(bits, &self.rate * n_rabi)).exp();
        e * &self.amplitude
    }
}

/// Ordinary least squares of `ln W` against `N_R`.
///
/// `N_R` must be strictly increasing. Points with `W ≤ 0` are skipped and
/// counted in `n_excluded`; at least three positive points are required.
pub fn fit_exponential(points: &[EnvelopePoint]) -> Result<FitResult> {
    for pair in points.windows(2) {
        if pair[1].n_rabi <= pair[0].n_rabi {
            return Err(Error::argument(format!(
                "N_R must be strictly increasing, got {} after {}",
                pair[1].n_rabi.to_f64(),
                pair[0].n_rabi.to_f64()
            )));
        }
    }
    if let Some(p) = points.first() {
        if p.n_rabi < 0 {
            return Err(Error::argument("N_R must be non-negative"));
        }
    }
    let used: Vec<&EnvelopePoint> = points.iter().filter(|p| p.w > 0).collect();
    if used.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            found: used.len(),
        });
    }
    let bits = used
        .iter()
        .map(|p| p.w.prec().max(p.n_rabi.prec()))
        .max()
        .unwrap_or(64);
    let n = used.len() as u64;
    let ys: Vec<BigReal> = used
        .iter()
        .map(|p| Float::with_val(bits, p.w.ln_ref()))
        .collect();

    let mut mean_x = Float::new(bits);
    let mut mean_y = Float::new(bits);
    for (p, y) in used.iter().zip(&ys) {
        mean_x += &p.n_rabi;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    let mut sxx = Float::new(bits);
    let mut sxy = Float::new(bits);
    for (p, y) in used.iter().zip(&ys) {
        let dx = Float::with_val(bits, &p.n_rabi - &mean_x);
        sxy += Float::with_val(bits, &dx * Float::with_val(bits, y - &mean_y));
        sxx += dx.square();
    }
    let slope = sxy / &sxx;
    let intercept = mean_y - Float::with_val(bits, &slope * &mean_x);

    let mut ss = Float::new(bits);
    for (p, y) in used.iter().zip(&ys) {
        let pred = Float::with_val(bits, &slope * &p.n_rabi) + &intercept;
        ss += Float::with_val(bits, y - pred).square();
    }
    Ok(FitResult {
        amplitude: intercept.exp(),
        rate: -slope,
        rms_residual: (ss / n).sqrt(),
        n_used: used.len(),
        n_excluded: points.len() - used.len(),
    })
}

/// Envelope points (whole Rabi periods) with `N_R ≤ max_rabi`.
pub fn envelope_points(map: &PulseMap, max_rabi: u64) -> Result<Vec<EnvelopePoint>> {
    let k = map
        .k
        .ok_or_else(|| Error::argument("envelope needs a pulse-area channel"))?;
    if k.is_zero() {
        return Err(Error::argument("envelope needs k > 0"));
    }
    // m k / 2 ≤ max_rabi
    let m_max = (Ratio::from_integer(2 * max_rabi as i64) / k.ratio()).to_integer() as u64;
    let prec = map.precision();
    Ok(envelope_sequence(map, m_max)?
        .iter()
        .map(|p| EnvelopePoint::from_inversion(p, prec))
        .collect())
}

/// [`fit_exponential`] over [`envelope_points`].
pub fn fit_envelope(map: &PulseMap, max_rabi: u64) -> Result<FitResult> {
    fit_exponential(&envelope_points(map, max_rabi)?)
}

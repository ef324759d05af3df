//! Gate failure probability `p_f = ½(1 − r^{(0)} · r^{(m)})` and its average
//! over the pure-state sphere.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

use super::evolve::Evolution;
use super::linalg::BlochState;
use super::map::PulseMap;
use crate::error::{Error, Result};
use crate::precision::BigReal;

/// Default Monte Carlo seed.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// `½(1 − r0 · r^{(m)})`.
pub fn failure_probability(r0: &BlochState, map: &PulseMap, m: u64) -> Result<BigReal> {
    failure_with(r0, &Evolution::new(map, m)?)
}

fn failure_with(r0: &BlochState, ev: &Evolution) -> Result<BigReal> {
    let rm = ev.apply(r0);
    Ok((1 - r0.dot(&rm)) / 2u32)
}

/// The same quantity expanded in the closed-form coefficients:
///
/// `p_f = −½[ (S3+S5)^m x² + |λ|^m (cos mθ (y²+z²) + sin mθ q_J/√det J)
///          + B1 (y c_y + z c_z) + B2 l_J − 1 ]`
///
/// with `q_J = (a−d)(y² − z²) + 2(b+c) y z` and
/// `l_J = (a−d)(y c_y − z c_z) + 2b y c_z + 2c z c_y`.
pub fn failure_probability_expansion(r0: &BlochState, map: &PulseMap, m: u64) -> Result<BigReal> {
    let decomp = map.decomposition();
    let t = decomp.trig.as_ref().ok_or_else(|| {
        Error::DegenerateChannel(format!(
            "closed-form expansion needs Δ < 0, got Δ = {}",
            decomp.delta.to_f64()
        ))
    })?;
    let bits = map.precision().bits();
    let f = |v: Float| Float::with_val(bits, v);
    let (x, y, z) = (r0.x(), r0.y(), r0.z());
    let (cy, cz) = (&map.shift[1], &map.shift[2]);
    let amd = f(Float::with_val(bits, &decomp.a - &decomp.d));

    let mut total = f(Float::with_val(bits, (&map.mxx).pow(m)) * x * x);

    let rho_m = f(Float::with_val(bits, (&t.modulus).pow(m)));
    let angle = f(Float::with_val(bits, &t.theta * m));
    let (sin_m, cos_m) = angle.sin_cos(Float::new(bits));
    let yy_zz = f(Float::with_val(bits, y * y) + Float::with_val(bits, z * z));
    let mut q_j = f(Float::with_val(bits, y * y) - Float::with_val(bits, z * z)) * &amd;
    q_j += f(Float::with_val(bits, &decomp.b + &decomp.c) * 2u32) * y * z;
    let rot = f(cos_m * yy_zz) + f(sin_m * q_j) / &t.sqrt_det_j;
    total += rho_m * rot;

    if m > 0 {
        let g = super::power::geometric_sum(&decomp, m)?;
        let lin = f(Float::with_val(bits, y * cy) + Float::with_val(bits, z * cz));
        let mut l_j = f(Float::with_val(bits, y * cy) - Float::with_val(bits, z * cz)) * &amd;
        l_j += f(Float::with_val(bits, &decomp.b * 2u32) * y * cz);
        l_j += f(Float::with_val(bits, &decomp.c * 2u32) * z * cy);
        total += g.b1 * lin;
        total += g.b2 * l_j;
    }
    Ok((1 - total) / 2u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AverageMode {
    /// Exact average over the uniform sphere: `½(1 − ((S3+S5)^m + tr M1^m)/3)`.
    Analytic,
    /// Sample mean over `count` uniform random unit vectors.
    MonteCarlo { seed: u64, count: u64 },
}

#[derive(Clone, Debug)]
pub struct AverageFailure {
    pub mean: BigReal,
    /// Standard error of the mean; zero in analytic mode.
    pub std_error: f64,
}

/// Average of `p_f` over initial pure states.
pub fn average_failure_probability(
    map: &PulseMap,
    m: u64,
    mode: AverageMode,
) -> Result<AverageFailure> {
    let ev = Evolution::new(map, m)?;
    average_failure_with(map, &ev, mode)
}

/// [`average_failure_probability`] reusing a prepared [`Evolution`] of `map`.
pub fn average_failure_with(
    map: &PulseMap,
    ev: &Evolution,
    mode: AverageMode,
) -> Result<AverageFailure> {
    let prec = map.precision();
    let bits = prec.bits();
    match mode {
        AverageMode::Analytic => {
            let overlap = Float::with_val(bits, &ev.mxx_m + ev.m1_m.trace()) / 3u32;
            Ok(AverageFailure {
                mean: (1 - overlap) / 2u32,
                std_error: 0.0,
            })
        }
        AverageMode::MonteCarlo { seed, count } => {
            if count < 2 {
                return Err(Error::argument(
                    "Monte Carlo average needs at least 2 samples",
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = Float::new(bits);
            let mut sum_sq = 0.0f64;
            for _ in 0..count {
                let r0 = random_unit_vector(&mut rng, bits);
                let pf = failure_with(&r0, ev)?;
                let v = pf.to_f64();
                sum_sq += v * v;
                sum += pf;
            }
            let mean = sum / count;
            let mean_f = mean.to_f64();
            let n = count as f64;
            let var = ((sum_sq - n * mean_f * mean_f) / (n - 1.0)).max(0.0);
            Ok(AverageFailure {
                mean,
                std_error: (var / n).sqrt(),
            })
        }
    }
}

/// Uniform direction via `z ~ U[−1, 1]`, `φ ~ U[0, 2π)`.
fn random_unit_vector(rng: &mut ChaCha8Rng, bits: u32) -> BlochState {
    let z = Float::with_val(bits, rng.random_range(-1.0f64..1.0));
    let phi = Float::with_val(bits, rng.random::<f64>() * TAU);
    let rho = Float::with_val(bits, 1 - Float::with_val(bits, z.square_ref())).sqrt();
    let (s, c) = phi.sin_cos(Float::new(bits));
    BlochState::raw([
        Float::with_val(bits, &rho * c),
        Float::with_val(bits, &rho * s),
        z,
    ])
}

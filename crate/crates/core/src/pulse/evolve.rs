//! Bloch vector after `m` pulses, population inversion and intra-pulse profiles.

use rug::ops::Pow;
use rug::Float;

use super::linalg::{BlochState, Mat2};
use super::map::{build_pulse_map, PulseMap};
use super::power::{geometric_sum_matrix, matrix_power, PowerBranch, PowerDecomposition};
use crate::area::PulseArea;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::series::{compute_sums, Strategy, SumIndex};

/// `r ↦ M^m r + (M^{m−1} + … + I) c` for a fixed `m`.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub m: u64,
    /// `(S3 + S5)^m`
    pub mxx_m: BigReal,
    pub m1_m: Mat2,
    /// `(y, z)` part of the accumulated shift.
    pub shift_m: [BigReal; 2],
    pub branch: PowerBranch,
}

impl Evolution {
    pub fn new(map: &PulseMap, m: u64) -> Result<Self> {
        Self::with_decomposition(map, &map.decomposition(), m)
    }

    pub fn with_decomposition(map: &PulseMap, decomp: &PowerDecomposition, m: u64) -> Result<Self> {
        let bits = map.precision().bits();
        let power = matrix_power(decomp, m);
        let sum = geometric_sum_matrix(decomp, m)?;
        let shift_m = sum
            .matrix
            .apply(&[map.shift[1].clone(), map.shift[2].clone()]);
        Ok(Self {
            m,
            mxx_m: Float::with_val(bits, (&map.mxx).pow(m)),
            m1_m: power.matrix,
            shift_m,
            branch: power.branch,
        })
    }

    pub fn apply(&self, r: &BlochState) -> BlochState {
        let bits = self.mxx_m.prec();
        let x = Float::with_val(bits, &self.mxx_m * r.x());
        let [y, z] = self.m1_m.apply(&[r.y().clone(), r.z().clone()]);
        BlochState::raw([
            x,
            Float::with_val(bits, &y + &self.shift_m[0]),
            Float::with_val(bits, &z + &self.shift_m[1]),
        ])
    }
}

/// `r^{(m)}` starting from `r0`.
pub fn evolve(r0: &BlochState, map: &PulseMap, m: u64) -> Result<BlochState> {
    Ok(Evolution::new(map, m)?.apply(r0))
}

/// `W_m = −r_z^{(m)}` for the initial state `|1⟩`.
pub fn inversion_at_pulse(
    nbar: &BigReal,
    k: PulseArea,
    m: u64,
    strategy: Strategy,
    prec: Precision,
) -> Result<BigReal> {
    let map = build_pulse_map(nbar, k, strategy, prec)?;
    inversion_from_map(&map, m)
}

pub fn inversion_from_map(map: &PulseMap, m: u64) -> Result<BigReal> {
    let r = evolve(&BlochState::excited(map.precision()), map, m)?;
    Ok(-r.z().clone())
}

/// One point of an inversion sequence at pulse boundaries.
#[derive(Clone, Debug)]
pub struct InversionPoint {
    pub m: u64,
    /// Rabi periods `m k / 2`.
    pub n_rabi: num_rational::Ratio<i64>,
    pub w: BigReal,
}

/// `W_0 .. W_{m_max}` for the initial state `|1⟩`.
pub fn inversion_sequence(map: &PulseMap, m_max: u64) -> Result<Vec<InversionPoint>> {
    let k = map
        .k
        .ok_or_else(|| Error::argument("inversion sequence needs a pulse-area channel"))?;
    let decomp = map.decomposition();
    let r0 = BlochState::excited(map.precision());
    (0..=m_max)
        .map(|m| {
            let r = Evolution::with_decomposition(map, &decomp, m)?.apply(&r0);
            Ok(InversionPoint {
                m,
                n_rabi: k.rabi_periods(m),
                w: -r.z().clone(),
            })
        })
        .collect()
}

/// Points of [`inversion_sequence`] where `m` pulses complete whole Rabi
/// periods (the `2π` points), i.e. the collapse envelope.
pub fn envelope_sequence(map: &PulseMap, m_max: u64) -> Result<Vec<InversionPoint>> {
    let k = map
        .k
        .ok_or_else(|| Error::argument("envelope needs a pulse-area channel"))?;
    Ok(inversion_sequence(map, m_max)?
        .into_iter()
        .filter(|p| k.completes_period(p.m))
        .collect())
}

/// `S8, S9, S10` on a uniform `τ` grid over one pulse, `[0, kπ/(2√n̄)]`,
/// both endpoints included. Independent of how many pulses preceded.
#[derive(Clone, Debug)]
pub struct ProfileGrid {
    pub taus: Vec<BigReal>,
    s8: Vec<BigReal>,
    s9: Vec<BigReal>,
    s10: Vec<BigReal>,
}

impl ProfileGrid {
    pub fn new(
        nbar: &BigReal,
        k: PulseArea,
        samples: usize,
        strategy: Strategy,
        prec: Precision,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::argument(format!(
                "profile needs at least 2 samples, got {samples}"
            )));
        }
        let end = k.tau(nbar, prec);
        let mut grid = Self {
            taus: Vec::with_capacity(samples),
            s8: Vec::with_capacity(samples),
            s9: Vec::with_capacity(samples),
            s10: Vec::with_capacity(samples),
        };
        for i in 0..samples {
            let tau = Float::with_val(prec.bits(), &end * i as u64) / (samples as u64 - 1);
            let s = compute_sums(nbar, &tau, &SumIndex::PROFILE, strategy, prec)?;
            grid.s8.push(s[&SumIndex::S8].clone());
            grid.s9.push(s[&SumIndex::S9].clone());
            grid.s10.push(s[&SumIndex::S10].clone());
            grid.taus.push(tau);
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// `W = 1 − 2p` with `p = ½[(S8 + S9) + r_z (S8 − S9) + r_y S10]`.
    pub fn inversion(&self, r: &BlochState) -> Vec<BigReal> {
        let bits = r.z().prec();
        (0..self.len())
            .map(|i| {
                let mut two_p = Float::with_val(bits, &self.s8[i] + &self.s9[i]);
                two_p += Float::with_val(bits, &self.s8[i] - &self.s9[i]) * r.z();
                two_p += Float::with_val(bits, r.y() * &self.s10[i]);
                1 - two_p
            })
            .collect()
    }
}

/// `(τ, W)` across pulse `m + 1`, starting from `|1⟩` evolved through `m` pulses.
pub fn inversion_profile(
    nbar: &BigReal,
    k: PulseArea,
    m: u64,
    samples: usize,
    strategy: Strategy,
    prec: Precision,
) -> Result<Vec<(BigReal, BigReal)>> {
    let map = build_pulse_map(nbar, k, strategy, prec)?;
    let grid = ProfileGrid::new(nbar, k, samples, strategy, prec)?;
    let r = evolve(&BlochState::excited(prec), &map, m)?;
    Ok(grid.taus.iter().cloned().zip(grid.inversion(&r)).collect())
}

/// Indices of local maxima in a sampled profile. Interior points need
/// `w[i−1] < w[i] ≥ w[i+1]`; endpoints count when they exceed their
/// single neighbour.
pub fn local_maxima(w: &[f64]) -> Vec<usize> {
    let n = w.len();
    if n < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if w[0] > w[1] {
        out.push(0);
    }
    for i in 1..n - 1 {
        if w[i] > w[i - 1] && w[i] >= w[i + 1] {
            out.push(i);
        }
    }
    if w[n - 1] > w[n - 2] {
        out.push(n - 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxima_detection() {
        assert_eq!(local_maxima(&[3.0, 1.0, 2.0, 0.0]), vec![0, 2]);
        assert_eq!(local_maxima(&[0.0, 1.0, 2.0]), vec![2]);
        assert_eq!(local_maxima(&[1.0, 1.0, 1.0]), Vec::<usize>::new());
        assert_eq!(local_maxima(&[0.0, 2.0, 2.0, 0.0]), vec![1]);
    }
}

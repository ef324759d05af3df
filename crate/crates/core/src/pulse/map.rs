//! The one-pulse affine Bloch channel `r ↦ M r + c`.

use std::collections::BTreeMap;

use rug::Float;

use super::linalg::{BlochState, Complex, DensityMatrix, Mat2};
use super::power::PowerDecomposition;
use crate::area::PulseArea;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::series::{compute_sums, Strategy, SumIndex};

/// `M = diag(Mxx, M1)` acting on `(x, (y, z))` plus the shift `c = (0, S7−S1, S4−S6)`.
///
/// `M1 = [[S5−S3, −(S1+S7)], [2 S2, S4+S6−1]]`.
#[derive(Clone, Debug)]
pub struct PulseMap {
    pub nbar: BigReal,
    pub tau: BigReal,
    pub k: Option<PulseArea>,
    pub sums: BTreeMap<SumIndex, BigReal>,
    pub mxx: BigReal,
    pub m1: Mat2,
    pub shift: [BigReal; 3],
    prec: Precision,
}

impl PulseMap {
    /// Assembles the channel from precomputed `S1..S7`.
    pub fn from_sums(
        nbar: &BigReal,
        tau: &BigReal,
        k: Option<PulseArea>,
        sums: BTreeMap<SumIndex, BigReal>,
        prec: Precision,
    ) -> Result<Self> {
        let bits = prec.bits();
        let s = |i: SumIndex| -> Result<BigReal> {
            sums.get(&i)
                .map(|v| prec.real(v))
                .ok_or_else(|| Error::argument(format!("missing {i} for channel construction")))
        };
        let (s1, s2, s3, s4, s5, s6, s7) = (
            s(SumIndex::S1)?,
            s(SumIndex::S2)?,
            s(SumIndex::S3)?,
            s(SumIndex::S4)?,
            s(SumIndex::S5)?,
            s(SumIndex::S6)?,
            s(SumIndex::S7)?,
        );
        let mxx = Float::with_val(bits, &s3 + &s5);
        let a = Float::with_val(bits, &s5 - &s3);
        let b = -Float::with_val(bits, &s1 + &s7);
        let c = Float::with_val(bits, &s2 * 2u32);
        let d = Float::with_val(bits, &s4 + &s6) - 1u32;
        let shift = [
            prec.zero(),
            Float::with_val(bits, &s7 - &s1),
            Float::with_val(bits, &s4 - &s6),
        ];
        Ok(Self {
            nbar: prec.real(nbar),
            tau: prec.real(tau),
            k,
            sums,
            mxx,
            m1: Mat2::new(a, b, c, d),
            shift,
            prec,
        })
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn a(&self) -> &BigReal {
        &self.m1.m[0][0]
    }

    pub fn b(&self) -> &BigReal {
        &self.m1.m[0][1]
    }

    pub fn c(&self) -> &BigReal {
        &self.m1.m[1][0]
    }

    pub fn d(&self) -> &BigReal {
        &self.m1.m[1][1]
    }

    pub fn sum(&self, i: SumIndex) -> &BigReal {
        &self.sums[&i]
    }

    /// `M r + c`.
    pub fn apply(&self, r: &BlochState) -> BlochState {
        let bits = self.prec.bits();
        let x = Float::with_val(bits, &self.mxx * r.x());
        let [y, z] = self.m1.apply(&[r.y().clone(), r.z().clone()]);
        BlochState::raw([
            x,
            Float::with_val(bits, &y + &self.shift[1]),
            Float::with_val(bits, &z + &self.shift[2]),
        ])
    }

    pub fn decomposition(&self) -> PowerDecomposition {
        PowerDecomposition::new(&self.m1, self.prec)
    }

    /// `(a − d)² + 4 b c`.
    pub fn discriminant(&self) -> BigReal {
        self.decomposition().delta
    }
}

/// Channel for a `kπ` pulse at phase `φ = 0`.
pub fn build_pulse_map(
    nbar: &BigReal,
    k: PulseArea,
    strategy: Strategy,
    prec: Precision,
) -> Result<PulseMap> {
    build_pulse_map_with_phase(nbar, k, &prec.zero(), strategy, prec)
}

/// As [`build_pulse_map`], rejecting any beam phase other than zero: the
/// channel is only real-valued for `φ = 0`.
pub fn build_pulse_map_with_phase(
    nbar: &BigReal,
    k: PulseArea,
    phi: &BigReal,
    strategy: Strategy,
    prec: Precision,
) -> Result<PulseMap> {
    if !phi.is_zero() {
        return Err(Error::Unsupported(format!(
            "channel construction requires beam phase φ = 0, got {}",
            phi.to_f64()
        )));
    }
    let tau = k.tau(nbar, prec);
    let sums = compute_sums(nbar, &tau, &SumIndex::CHANNEL, strategy, prec)?;
    PulseMap::from_sums(nbar, &tau, Some(k), sums, prec)
}

/// Channel after coupling phase `τ`, not tied to a pulse area.
pub fn pulse_map_at_tau(
    nbar: &BigReal,
    tau: &BigReal,
    strategy: Strategy,
    prec: Precision,
) -> Result<PulseMap> {
    let sums = compute_sums(nbar, tau, &SumIndex::CHANNEL, strategy, prec)?;
    PulseMap::from_sums(nbar, tau, None, sums, prec)
}

/// `Δ(τ) = (a − d)² + 4 b c` of the channel after coupling phase `τ`.
pub fn discriminant(
    nbar: &BigReal,
    tau: &BigReal,
    strategy: Strategy,
    prec: Precision,
) -> Result<BigReal> {
    if *tau <= 0 {
        return Err(Error::argument(format!(
            "τ must be positive, got {}",
            tau.to_f64()
        )));
    }
    Ok(pulse_map_at_tau(nbar, tau, strategy, prec)?.discriminant())
}

/// Reduced atomic state after one `kπ` pulse acting on `α|0⟩ + β|1⟩`.
///
/// `ρ00 = |α|² S4 + i(αβ* e^{iφ} − α*β e^{−iφ}) S2 + |β|² (1 − S6)`,
/// `ρ01 = αβ* S5 + i(|α|² e^{iφ} S1 − |β|² e^{−iφ} S7) + α*β S3`,
/// with `ρ11 = 1 − ρ00` and `ρ10 = ρ01*`.
pub fn single_pulse_state(
    alpha: &Complex,
    beta: &Complex,
    nbar: &BigReal,
    k: PulseArea,
    phi: &BigReal,
    strategy: Strategy,
    prec: Precision,
) -> Result<DensityMatrix> {
    let tau = k.tau(nbar, prec);
    let sums = compute_sums(nbar, &tau, &SumIndex::CHANNEL, strategy, prec)?;
    density_after_pulse(alpha, beta, &sums, phi, prec)
}

/// [`single_pulse_state`] from precomputed `S1..S7`.
pub fn density_after_pulse(
    alpha: &Complex,
    beta: &Complex,
    sums: &BTreeMap<SumIndex, BigReal>,
    phi: &BigReal,
    prec: Precision,
) -> Result<DensityMatrix> {
    let input = DensityMatrix::pure(alpha, beta)?;
    let bits = prec.bits();
    let s = |i: SumIndex| -> Result<BigReal> {
        sums.get(&i)
            .map(|v| prec.real(v))
            .ok_or_else(|| Error::argument(format!("missing {i}")))
    };
    let e_pos = Complex::cis(&prec.real(phi));
    let e_neg = e_pos.conj();
    let aa = input.rho[0][0].re.clone();
    let bb = input.rho[1][1].re.clone();
    let ab = input.rho[0][1].clone(); // αβ*
    let ba = ab.conj(); // α*β

    let coherence = ab
        .mul(&e_pos)
        .sub(&ba.mul(&e_neg))
        .times_i()
        .scale(&s(SumIndex::S2)?);
    let one_minus_s6 = Float::with_val(bits, 1 - &s(SumIndex::S6)?);
    let rho00 = Complex::real(Float::with_val(bits, &aa * &s(SumIndex::S4)?))
        .add(&coherence)
        .add(&Complex::real(Float::with_val(bits, &bb * &one_minus_s6)));

    let drive = e_pos
        .scale(&Float::with_val(bits, &aa * &s(SumIndex::S1)?))
        .sub(&e_neg.scale(&Float::with_val(bits, &bb * &s(SumIndex::S7)?)))
        .times_i();
    let rho01 = ab
        .scale(&s(SumIndex::S5)?)
        .add(&drive)
        .add(&ba.scale(&s(SumIndex::S3)?));

    let rho11 = Complex::real(prec.one()).sub(&rho00);
    Ok(DensityMatrix {
        rho: [[rho00, rho01.clone()], [rho01.conj(), rho11]],
    })
}

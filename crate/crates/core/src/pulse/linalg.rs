//! Small dense types over [`BigReal`]: complex scalars, 2×2 matrices and
//! Bloch vectors.

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: BigReal,
    pub im: BigReal,
}

impl Complex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    /// `e^{iφ}`
    pub fn cis(phi: &BigReal) -> Self {
        let (s, c) = phi.clone().sin_cos(Float::new(phi.prec()));
        Self { re: c, im: s }
    }

    fn bits(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.bits(), -&self.im))
    }

    pub fn norm_sqr(&self) -> BigReal {
        let bits = self.bits();
        Float::with_val(bits, self.re.square_ref()) + Float::with_val(bits, self.im.square_ref())
    }

    pub fn add(&self, o: &Self) -> Self {
        let bits = self.bits();
        Self::new(
            Float::with_val(bits, &self.re + &o.re),
            Float::with_val(bits, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let bits = self.bits();
        Self::new(
            Float::with_val(bits, &self.re - &o.re),
            Float::with_val(bits, &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let bits = self.bits();
        let re = Float::with_val(bits, &self.re * &o.re) - Float::with_val(bits, &self.im * &o.im);
        let im = Float::with_val(bits, &self.re * &o.im) + Float::with_val(bits, &self.im * &o.re);
        Self::new(re, im)
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        let bits = self.bits();
        Self::new(
            Float::with_val(bits, &self.re * s),
            Float::with_val(bits, &self.im * s),
        )
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> Self {
        Self::new(Float::with_val(self.bits(), -&self.im), self.re.clone())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re.to_f64(), self.im.to_f64())
    }
}

/// Row-major 2×2 real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [[BigReal; 2]; 2],
}

impl Mat2 {
    pub fn new(a: BigReal, b: BigReal, c: BigReal, d: BigReal) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    pub fn identity(prec: Precision) -> Self {
        Self::new(prec.one(), prec.zero(), prec.zero(), prec.one())
    }

    pub fn zero(prec: Precision) -> Self {
        Self::new(prec.zero(), prec.zero(), prec.zero(), prec.zero())
    }

    fn bits(&self) -> u32 {
        self.m[0][0].prec()
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let bits = self.bits();
        let e = |i: usize, j: usize| {
            Float::with_val(bits, &self.m[i][0] * &o.m[0][j])
                + Float::with_val(bits, &self.m[i][1] * &o.m[1][j])
        };
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let bits = self.bits();
        let e = |i: usize, j: usize| Float::with_val(bits, &self.m[i][j] + &o.m[i][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, s: &BigReal) -> Mat2 {
        let bits = self.bits();
        let e = |i: usize, j: usize| Float::with_val(bits, &self.m[i][j] * s);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn apply(&self, v: &[BigReal; 2]) -> [BigReal; 2] {
        let bits = self.bits();
        let row = |i: usize| {
            Float::with_val(bits, &self.m[i][0] * &v[0])
                + Float::with_val(bits, &self.m[i][1] * &v[1])
        };
        [row(0), row(1)]
    }

    pub fn trace(&self) -> BigReal {
        Float::with_val(self.bits(), &self.m[0][0] + &self.m[1][1])
    }

    pub fn det(&self) -> BigReal {
        let bits = self.bits();
        Float::with_val(bits, &self.m[0][0] * &self.m[1][1])
            - Float::with_val(bits, &self.m[0][1] * &self.m[1][0])
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, o: &Mat2) -> BigReal {
        let bits = self.bits();
        let mut worst = Float::new(bits);
        for i in 0..2 {
            for j in 0..2 {
                let d = Float::with_val(bits, &self.m[i][j] - &o.m[i][j]).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// `self^m` by repeated squaring.
    pub fn pow(&self, mut m: u64, prec: Precision) -> Mat2 {
        let mut result = Mat2::identity(prec);
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// Tolerance on `‖r‖ ≤ 1` for Bloch vectors.
pub const BLOCH_NORM_SLACK: f64 = 1e-30;

/// Bloch vector `r` of `ρ = ½(I + r·σ)`; state `|1⟩` has `r_z = −1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochState {
    r: [BigReal; 3],
}

impl BlochState {
    pub fn new(x: BigReal, y: BigReal, z: BigReal) -> Result<Self> {
        let s = Self { r: [x, y, z] };
        let n2 = s.norm_sqr();
        let limit =
            Float::with_val(n2.prec(), 1 + Float::with_val(n2.prec(), BLOCH_NORM_SLACK)).square();
        if !n2.is_finite() || n2 > limit {
            return Err(Error::argument(format!(
                "Bloch vector norm {} exceeds 1",
                n2.to_f64().sqrt()
            )));
        }
        Ok(s)
    }

    /// Constructs without the norm check; used for channel outputs.
    pub(crate) fn raw(r: [BigReal; 3]) -> Self {
        Self { r }
    }

    /// The excited state `|1⟩`, `r = (0, 0, −1)`.
    pub fn excited(prec: Precision) -> Self {
        Self::raw([prec.zero(), prec.zero(), prec.int(-1)])
    }

    pub fn ground(prec: Precision) -> Self {
        Self::raw([prec.zero(), prec.zero(), prec.one()])
    }

    /// Pure state `α|0⟩ + β|1⟩`.
    pub fn from_amplitudes(alpha: &Complex, beta: &Complex) -> Result<Self> {
        let rho = DensityMatrix::pure(alpha, beta)?;
        Ok(rho.bloch())
    }

    pub fn x(&self) -> &BigReal {
        &self.r[0]
    }

    pub fn y(&self) -> &BigReal {
        &self.r[1]
    }

    pub fn z(&self) -> &BigReal {
        &self.r[2]
    }

    pub fn components(&self) -> &[BigReal; 3] {
        &self.r
    }

    pub fn dot(&self, o: &BlochState) -> BigReal {
        let bits = self.r[0].prec();
        let mut acc = Float::new(bits);
        for (a, b) in self.r.iter().zip(&o.r) {
            acc += Float::with_val(bits, a * b);
        }
        acc
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.dot(self)
    }

    pub fn norm(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs_diff(&self, o: &BlochState) -> BigReal {
        let bits = self.r[0].prec();
        let mut worst = Float::new(bits);
        for (a, b) in self.r.iter().zip(&o.r) {
            let d = Float::with_val(bits, a - b).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// 2×2 complex density matrix in the `{|0⟩, |1⟩}` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub rho: [[Complex; 2]; 2],
}

/// Tolerance on `|α|² + |β|² = 1`.
pub const AMPLITUDE_NORM_TOL: f64 = 1e-20;

impl DensityMatrix {
    pub fn pure(alpha: &Complex, beta: &Complex) -> Result<Self> {
        let total = Float::with_val(alpha.re.prec(), alpha.norm_sqr() + beta.norm_sqr());
        if (total.to_f64() - 1.0).abs() > AMPLITUDE_NORM_TOL {
            return Err(Error::argument(format!(
                "amplitudes are not normalized: |α|²+|β|² = {}",
                total.to_f64()
            )));
        }
        let r01 = alpha.mul(&beta.conj());
        Ok(Self {
            rho: [
                [Complex::real(alpha.norm_sqr()), r01.clone()],
                [r01.conj(), Complex::real(beta.norm_sqr())],
            ],
        })
    }

    pub fn trace(&self) -> Complex {
        self.rho[0][0].add(&self.rho[1][1])
    }

    /// `r_x = 2 Re ρ01`, `r_y = −2 Im ρ01`, `r_z = ρ00 − ρ11`.
    pub fn bloch(&self) -> BlochState {
        let bits = self.rho[0][0].re.prec();
        let x = Float::with_val(bits, &self.rho[0][1].re * 2u32);
        let y = Float::with_val(bits, &self.rho[0][1].im * -2i32);
        let z = Float::with_val(bits, &self.rho[0][0].re - &self.rho[1][1].re);
        BlochState::raw([x, y, z])
    }

    /// Largest deviation from Hermiticity, `max |ρ − ρ†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let d = self.rho[i][j]
                    .sub(&self.rho[j][i].conj())
                    .norm_sqr()
                    .to_f64()
                    .sqrt();
                worst = worst.max(d);
            }
        }
        worst
    }
}

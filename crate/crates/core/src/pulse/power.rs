//! Closed-form powers and geometric sums of the 2×2 block `M1`.
//!
//! With `Δ = (a−d)² + 4bc < 0` the eigenvalues are `|λ| e^{±iθ}` where
//! `|λ|² = ad − bc` and `θ = atan2(√(−Δ), a + d)`. Writing
//! `J = [[a−d, 2b], [2c, d−a]]` (so `J² = −det J · I`),
//!
//! `M1^m = |λ|^m [cos mθ I + sin mθ J/√det J]`,
//! `I + M1 + … + M1^{m−1} = B1 I + B2 J`.

use rug::ops::Pow;
use rug::Float;

use super::linalg::Mat2;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

#[derive(Clone, Debug)]
pub struct PowerDecomposition {
    pub a: BigReal,
    pub b: BigReal,
    pub c: BigReal,
    pub d: BigReal,
    /// `d − a`
    pub k: BigReal,
    pub delta: BigReal,
    /// `ad − bc = |λ|²`
    pub det_m1: BigReal,
    pub j: Mat2,
    /// `det J = −Δ`
    pub det_j: BigReal,
    /// Present only on the complex-eigenvalue branch `Δ < 0`.
    pub trig: Option<TrigParts>,
    m1: Mat2,
    prec: Precision,
}

#[derive(Clone, Debug)]
pub struct TrigParts {
    /// `|λ| = √(ad − bc)`
    pub modulus: BigReal,
    pub theta: BigReal,
    pub sqrt_det_j: BigReal,
}

/// How a power or geometric sum was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerBranch {
    /// Closed trigonometric form, `Δ < 0`.
    Trigonometric,
    /// Exact iterated multiplication, used when `Δ ≥ 0`.
    Iterated,
}

#[derive(Clone, Debug)]
pub struct MatrixPower {
    pub matrix: Mat2,
    pub branch: PowerBranch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricSumCoeffs {
    pub b1: BigReal,
    pub b2: BigReal,
}

impl PowerDecomposition {
    pub fn new(m1: &Mat2, prec: Precision) -> Self {
        let bits = prec.bits();
        let [[a, b], [c, d]] = m1.m.clone();
        let amd = Float::with_val(bits, &a - &d);
        let bc = Float::with_val(bits, &b * &c);
        let delta = Float::with_val(bits, amd.square_ref()) + Float::with_val(bits, &bc * 4u32);
        let det_m1 = m1.det();
        let j = Mat2::new(
            amd.clone(),
            Float::with_val(bits, &b * 2u32),
            Float::with_val(bits, &c * 2u32),
            Float::with_val(bits, -&amd),
        );
        let det_j = Float::with_val(bits, -&delta);
        let trig = if delta < 0 && det_m1 > 0 {
            let sqrt_det_j = Float::with_val(bits, det_j.sqrt_ref());
            let theta = Float::with_val(bits, sqrt_det_j.atan2_ref(&m1.trace()));
            Some(TrigParts {
                modulus: Float::with_val(bits, det_m1.sqrt_ref()),
                theta,
                sqrt_det_j,
            })
        } else {
            None
        };
        Self {
            k: Float::with_val(bits, &d - &a),
            a,
            b,
            c,
            d,
            delta,
            det_m1,
            j,
            det_j,
            trig,
            m1: m1.clone(),
            prec,
        }
    }

    pub fn m1(&self) -> &Mat2 {
        &self.m1
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn branch(&self) -> PowerBranch {
        if self.trig.is_some() {
            PowerBranch::Trigonometric
        } else {
            PowerBranch::Iterated
        }
    }

    /// `|λ|^m` and `(cos mθ, sin mθ)` on the trigonometric branch.
    fn rotation(&self, t: &TrigParts, m: i64) -> (BigReal, BigReal, BigReal) {
        let bits = self.prec.bits();
        let rho_m = Float::with_val(bits, (&t.modulus).pow(m));
        let angle = Float::with_val(bits, &t.theta * m);
        let (s, c) = angle.sin_cos(Float::new(bits));
        (rho_m, c, s)
    }

    /// `x I + y J`.
    fn combine(&self, x: &BigReal, y: &BigReal) -> Mat2 {
        Mat2::identity(self.prec).scale(x).add(&self.j.scale(y))
    }
}

/// `M1^m`: the closed form when `Δ < 0`, otherwise repeated squaring.
pub fn matrix_power(decomp: &PowerDecomposition, m: u64) -> MatrixPower {
    let prec = decomp.prec;
    match &decomp.trig {
        Some(t) => {
            let bits = prec.bits();
            let (rho_m, cos_m, sin_m) = decomp.rotation(t, m as i64);
            let x = Float::with_val(bits, &rho_m * &cos_m);
            let y = Float::with_val(bits, &rho_m * &sin_m) / &t.sqrt_det_j;
            MatrixPower {
                matrix: decomp.combine(&x, &y),
                branch: PowerBranch::Trigonometric,
            }
        }
        None => MatrixPower {
            matrix: decomp.m1.pow(m, prec),
            branch: PowerBranch::Iterated,
        },
    }
}

/// `B1, B2` with `I + M1 + … + M1^{m−1} = B1 I + B2 J`, for `m ≥ 1` and `Δ < 0`.
pub fn geometric_sum(decomp: &PowerDecomposition, m: u64) -> Result<GeometricSumCoeffs> {
    if m == 0 {
        return Err(Error::argument("geometric sum needs m ≥ 1"));
    }
    let t = decomp.trig.as_ref().ok_or_else(|| {
        Error::DegenerateChannel(format!(
            "closed-form geometric sum needs Δ < 0, got Δ = {}",
            decomp.delta.to_f64()
        ))
    })?;
    let prec = decomp.prec;
    let bits = prec.bits();
    let (cos1, sin1) = (
        Float::with_val(bits, t.theta.cos_ref()),
        Float::with_val(bits, t.theta.sin_ref()),
    );
    let lam = &t.modulus;
    let (rho_m, cos_m, sin_m) = decomp.rotation(t, m as i64);
    let (_, cos_m1, sin_m1) = decomp.rotation(t, m as i64 - 1);
    let rho_m1 = Float::with_val(bits, &rho_m * lam);
    let lam_cos = Float::with_val(bits, lam * &cos1);

    // 1 + |λ|² − 2|λ| cos θ
    let mut denom = Float::with_val(bits, lam.square_ref()) + 1u32;
    denom -= Float::with_val(bits, &lam_cos * 2u32);
    if denom <= prec.epsilon() {
        return Err(Error::DegenerateChannel(
            "geometric-sum denominator 1 + |λ|² − 2|λ|cos θ vanishes".into(),
        ));
    }
    let mut n1 = Float::with_val(bits, 1 - &lam_cos);
    n1 -= Float::with_val(bits, &rho_m * &cos_m);
    n1 += Float::with_val(bits, &rho_m1 * &cos_m1);
    let mut n2 = Float::with_val(bits, lam * &sin1);
    n2 -= Float::with_val(bits, &rho_m * &sin_m);
    n2 += Float::with_val(bits, &rho_m1 * &sin_m1);

    let b1 = Float::with_val(bits, &n1 / &denom);
    let b2 = Float::with_val(bits, n2 / &denom) / &t.sqrt_det_j;
    Ok(GeometricSumCoeffs { b1, b2 })
}

/// `I + M1 + … + M1^{m−1}` as a matrix on either branch (zero for `m = 0`).
pub fn geometric_sum_matrix(decomp: &PowerDecomposition, m: u64) -> Result<MatrixPower> {
    let prec = decomp.prec;
    if m == 0 {
        return Ok(MatrixPower {
            matrix: Mat2::zero(prec),
            branch: decomp.branch(),
        });
    }
    if decomp.trig.is_some() {
        let g = geometric_sum(decomp, m)?;
        return Ok(MatrixPower {
            matrix: decomp.combine(&g.b1, &g.b2),
            branch: PowerBranch::Trigonometric,
        });
    }
    // doubling: S(2n) = S(n)(I + M^n), S(n+1) = I + M S(n)
    let mut sum = Mat2::zero(prec);
    let mut power = Mat2::identity(prec);
    for bit in (0..64 - m.leading_zeros()).rev() {
        sum = sum.add(&sum.mul(&power));
        power = power.mul(&power);
        if (m >> bit) & 1 == 1 {
            sum = Mat2::identity(prec).add(&decomp.m1.mul(&sum));
            power = power.mul(&decomp.m1);
        }
    }
    Ok(MatrixPower {
        matrix: sum,
        branch: PowerBranch::Iterated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(prec: Precision) -> PowerDecomposition {
        // a rotation-contraction with Δ < 0
        let m1 = Mat2::new(
            prec.from_f64(0.9),
            prec.from_f64(-0.3),
            prec.from_f64(0.25),
            prec.from_f64(0.85),
        );
        PowerDecomposition::new(&m1, prec)
    }

    #[test]
    fn low_powers() {
        let p = Precision::default();
        let dec = sample(p);
        assert_eq!(dec.branch(), PowerBranch::Trigonometric);
        let tol = p.pow10(-30);
        assert!(
            matrix_power(&dec, 0)
                .matrix
                .max_abs_diff(&Mat2::identity(p))
                < tol
        );
        assert!(matrix_power(&dec, 1).matrix.max_abs_diff(dec.m1()) < tol);
    }

    #[test]
    fn geometric_sum_small_m() {
        let p = Precision::default();
        let dec = sample(p);
        let g1 = geometric_sum(&dec, 1).unwrap();
        assert!(g1.b1.clone() - 1u32 < p.pow10(-45) && g1.b2.clone().abs() < p.pow10(-45));
        let t = dec.trig.clone().unwrap();
        let g2 = geometric_sum(&dec, 2).unwrap();
        let want_b1 = Float::with_val(
            p.bits(),
            &t.modulus * Float::with_val(p.bits(), t.theta.cos_ref()),
        ) + 1u32;
        let want_b2 = Float::with_val(
            p.bits(),
            &t.modulus * Float::with_val(p.bits(), t.theta.sin_ref()),
        ) / &t.sqrt_det_j;
        assert!(Float::with_val(p.bits(), &g2.b1 - &want_b1).abs() < p.pow10(-45));
        assert!(Float::with_val(p.bits(), &g2.b2 - &want_b2).abs() < p.pow10(-45));
    }

    #[test]
    fn iterated_branch_when_discriminant_non_negative() {
        let p = Precision::default();
        let m1 = Mat2::new(
            p.from_f64(0.9),
            p.from_f64(0.1),
            p.from_f64(0.2),
            p.from_f64(0.5),
        );
        let dec = PowerDecomposition::new(&m1, p);
        assert!(dec.delta >= 0);
        let pw = matrix_power(&dec, 7);
        assert_eq!(pw.branch, PowerBranch::Iterated);
        assert!(matches!(
            geometric_sum(&dec, 3),
            Err(Error::DegenerateChannel(_))
        ));
        let mut acc = Mat2::zero(p);
        let mut term = Mat2::identity(p);
        for _ in 0..11 {
            acc = acc.add(&term);
            term = term.mul(&m1);
        }
        let got = geometric_sum_matrix(&dec, 11).unwrap();
        assert!(got.matrix.max_abs_diff(&acc) < p.pow10(-45));
    }

    #[test]
    fn trigonometric_geometric_sum_matrix_matches_accumulation() {
        let p = Precision::default();
        let dec = sample(p);
        let mut acc = Mat2::zero(p);
        let mut term = Mat2::identity(p);
        for m in 1..=40u64 {
            acc = acc.add(&term);
            term = term.mul(dec.m1());
            let got = geometric_sum_matrix(&dec, m).unwrap();
            assert!(got.matrix.max_abs_diff(&acc) < p.pow10(-40), "m={m}");
        }
    }
}

//! Truncated Taylor series ("jets") about `x = 0`.
//!
//! A [`Jet`] of order `p` stores the Maclaurin coefficients `c_0 .. c_p`.
//! Arithmetic truncates at the smaller order of its operands.

use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<BigReal>,
}

impl Jet {
    pub fn from_coeffs(coeffs: Vec<BigReal>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Self { coeffs }
    }

    pub fn constant(value: BigReal, order: usize) -> Self {
        let prec = value.prec();
        let mut coeffs = vec![Float::new(prec); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity jet `x`.
    pub fn variable(order: usize, prec: Precision) -> Self {
        let mut coeffs = vec![prec.zero(); order + 1];
        if order >= 1 {
            coeffs[1] = prec.one();
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigReal> {
        self.coeffs
    }

    pub fn constant_term(&self) -> &BigReal {
        &self.coeffs[0]
    }

    fn bits(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn scale(&self, factor: &BigReal) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Float::with_val(c.prec(), c * factor))
                .collect(),
        }
    }

    pub fn add_scalar(&self, value: &BigReal) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// Square root; requires a positive constant term.
    pub fn sqrt(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if a[0].is_nan() || a[0] <= 0 {
            return Err(Error::domain(format!(
                "sqrt of a jet with non-positive constant term {}",
                a[0].to_f64()
            )));
        }
        let bits = self.bits();
        let mut g: Vec<Float> = Vec::with_capacity(a.len());
        g.push(Float::with_val(bits, a[0].sqrt_ref()));
        let two_g0 = Float::with_val(bits, &g[0] * 2u32);
        for n in 1..a.len() {
            // g_n = (a_n − Σ_{k=1}^{n−1} g_k g_{n−k}) / (2 g_0)
            let mut acc = a[n].clone();
            for k in 1..n {
                acc -= Float::with_val(bits, &g[k] * &g[n - k]);
            }
            g.push(acc / &two_g0);
        }
        Ok(Jet { coeffs: g })
    }

    /// Multiplicative inverse; requires a non-zero constant term.
    pub fn recip(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if a[0].is_zero() {
            return Err(Error::domain("reciprocal of a jet with zero constant term"));
        }
        let bits = self.bits();
        let mut r: Vec<Float> = Vec::with_capacity(a.len());
        r.push(Float::with_val(bits, 1u32) / &a[0]);
        for n in 1..a.len() {
            // r_n = −(Σ_{k=1}^{n} a_k r_{n−k}) / a_0
            let mut acc = Float::new(bits);
            for k in 1..=n {
                acc += Float::with_val(bits, &a[k] * &r[n - k]);
            }
            r.push(-acc / &a[0]);
        }
        Ok(Jet { coeffs: r })
    }

    /// `(sin f, cos f)` from the coupled recurrences
    /// `n s_n = Σ k f_k c_{n−k}`, `n c_n = −Σ k f_k s_{n−k}`.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let f = &self.coeffs;
        let bits = self.bits();
        let (s0, c0) = f[0].clone().sin_cos(Float::new(bits));
        let mut s = vec![s0];
        let mut c = vec![c0];
        for n in 1..f.len() {
            let mut sn = Float::new(bits);
            let mut cn = Float::new(bits);
            for k in 1..=n {
                let kf = Float::with_val(bits, &f[k] * k as u32);
                sn += Float::with_val(bits, &kf * &c[n - k]);
                cn -= Float::with_val(bits, &kf * &s[n - k]);
            }
            s.push(sn / n as u32);
            c.push(cn / n as u32);
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Evaluate the truncated polynomial at `x` (Horner).
    pub fn eval(&self, x: &BigReal) -> BigReal {
        let mut acc = Float::new(self.bits());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(&Float, &Float) -> Float) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| Float::with_val(a.prec(), a + b))
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| Float::with_val(a.prec(), a - b))
    }
}

impl Mul for &Jet {
    type Output = Jet;
    /// Truncated Cauchy product.
    fn mul(self, rhs: &Jet) -> Jet {
        let order = self.order().min(rhs.order());
        let bits = self.bits();
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = Float::new(bits);
                for k in 0..=n {
                    acc += Float::with_val(bits, &self.coeffs[k] * &rhs.coeffs[n - k]);
                }
                acc
            })
            .collect();
        Jet { coeffs }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Float::with_val(c.prec(), -c))
                .collect(),
        }
    }
}

/// Composition descriptor for [`jet_expand`]: an expression tree in one
/// variable `x` built from constants, `+ − ×`, scalar multiples, reciprocal,
/// `sqrt`, `sin` and `cos`.
#[derive(Clone, Debug)]
pub enum JetExpr {
    Const(BigReal),
    X,
    Add(Box<JetExpr>, Box<JetExpr>),
    Sub(Box<JetExpr>, Box<JetExpr>),
    Mul(Box<JetExpr>, Box<JetExpr>),
    Scale(BigReal, Box<JetExpr>),
    Recip(Box<JetExpr>),
    Sqrt(Box<JetExpr>),
    Sin(Box<JetExpr>),
    Cos(Box<JetExpr>),
}

impl JetExpr {
    pub fn x() -> Self {
        JetExpr::X
    }

    pub fn constant(value: BigReal) -> Self {
        JetExpr::Const(value)
    }

    pub fn scaled(self, factor: BigReal) -> Self {
        JetExpr::Scale(factor, Box::new(self))
    }

    pub fn recip(self) -> Self {
        JetExpr::Recip(Box::new(self))
    }

    pub fn sqrt(self) -> Self {
        JetExpr::Sqrt(Box::new(self))
    }

    pub fn sin(self) -> Self {
        JetExpr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Self {
        JetExpr::Cos(Box::new(self))
    }

    /// Pointwise value of the expression at `x`.
    pub fn evaluate(&self, x: &BigReal) -> Result<BigReal> {
        let bits = x.prec();
        Ok(match self {
            JetExpr::Const(c) => Float::with_val(bits, c),
            JetExpr::X => x.clone(),
            JetExpr::Add(a, b) => a.evaluate(x)? + b.evaluate(x)?,
            JetExpr::Sub(a, b) => a.evaluate(x)? - b.evaluate(x)?,
            JetExpr::Mul(a, b) => a.evaluate(x)? * b.evaluate(x)?,
            JetExpr::Scale(s, a) => a.evaluate(x)? * s,
            JetExpr::Recip(a) => {
                let v = a.evaluate(x)?;
                if v.is_zero() {
                    return Err(Error::domain("reciprocal of zero"));
                }
                v.recip()
            }
            JetExpr::Sqrt(a) => {
                let v = a.evaluate(x)?;
                if v < 0 {
                    return Err(Error::domain("sqrt of a negative value"));
                }
                v.sqrt()
            }
            JetExpr::Sin(a) => a.evaluate(x)?.sin(),
            JetExpr::Cos(a) => a.evaluate(x)?.cos(),
        })
    }
}

macro_rules! jet_expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for JetExpr {
            type Output = JetExpr;
            fn $method(self, rhs: JetExpr) -> JetExpr {
                JetExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

jet_expr_binop!(Add, add, Add);
jet_expr_binop!(Sub, sub, Sub);
jet_expr_binop!(Mul, mul, Mul);

/// Order-`order` Maclaurin coefficients of `expr`.
pub fn jet_expand(expr: &JetExpr, order: usize, prec: Precision) -> Result<Jet> {
    Ok(match expr {
        JetExpr::Const(c) => Jet::constant(prec.real(c), order),
        JetExpr::X => Jet::variable(order, prec),
        JetExpr::Add(a, b) => &jet_expand(a, order, prec)? + &jet_expand(b, order, prec)?,
        JetExpr::Sub(a, b) => &jet_expand(a, order, prec)? - &jet_expand(b, order, prec)?,
        JetExpr::Mul(a, b) => &jet_expand(a, order, prec)? * &jet_expand(b, order, prec)?,
        JetExpr::Scale(s, a) => jet_expand(a, order, prec)?.scale(s),
        JetExpr::Recip(a) => jet_expand(a, order, prec)?.recip()?,
        JetExpr::Sqrt(a) => jet_expand(a, order, prec)?.sqrt()?,
        JetExpr::Sin(a) => jet_expand(a, order, prec)?.sin(),
        JetExpr::Cos(a) => jet_expand(a, order, prec)?.cos(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(60).unwrap()
    }

    fn close(a: &Float, b: &Float, tol: &Float) -> bool {
        Float::with_val(a.prec(), a - b).abs() <= *tol
    }

    #[test]
    fn sine_series() {
        let p = prec();
        let jet = jet_expand(&JetExpr::x().sin(), 4, p).unwrap();
        let expected = [p.zero(), p.one(), p.zero(), p.ratio(-1, 6), p.zero()];
        for (got, want) in jet.coeffs().iter().zip(&expected) {
            assert!(close(got, want, &p.pow10(-58)), "{got} vs {want}");
        }
    }

    #[test]
    fn sqrt_binomial_series() {
        let p = prec();
        let expr = (JetExpr::constant(p.one()) + JetExpr::x()).sqrt();
        let jet = jet_expand(&expr, 2, p).unwrap();
        assert_eq!(jet.coeffs()[0], 1);
        assert_eq!(jet.coeffs()[1], p.ratio(1, 2));
        assert_eq!(jet.coeffs()[2], p.ratio(-1, 8));
    }

    #[test]
    fn sqrt_domain_error() {
        let p = prec();
        let expr = (JetExpr::x() - JetExpr::constant(p.one())).sqrt();
        assert!(matches!(jet_expand(&expr, 3, p), Err(Error::Domain(_))));
        assert!(jet_expand(&JetExpr::x().sqrt(), 3, p).is_err());
    }

    #[test]
    fn recip_times_self_is_one() {
        let p = prec();
        let expr = JetExpr::constant(p.int(2)) + JetExpr::x().cos();
        let f = jet_expand(&expr, 8, p).unwrap();
        let prod = &f * &f.recip().unwrap();
        assert!(close(&prod.coeffs()[0], &p.one(), &p.pow10(-58)));
        for c in &prod.coeffs()[1..] {
            assert!(close(c, &p.zero(), &p.pow10(-58)));
        }
    }

    #[test]
    fn order_is_min_of_operands() {
        let p = prec();
        let a = Jet::variable(5, p);
        let b = Jet::variable(3, p);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn sin_cos_constant_terms() {
        let p = prec();
        let f = Jet::constant(p.from_f64(0.7), 4).add_scalar(&p.zero());
        let (s, c) = f.sin_cos();
        assert_eq!(*s.constant_term(), p.from_f64(0.7).sin());
        assert_eq!(*c.constant_term(), p.from_f64(0.7).cos());
    }

    #[test]
    fn pythagorean_identity() {
        let p = prec();
        let expr = (JetExpr::constant(p.one()) + JetExpr::x())
            .sqrt()
            .scaled(p.pi());
        let f = jet_expand(&expr, 10, p).unwrap();
        let (s, c) = f.sin_cos();
        let sum = &(&s * &s) + &(&c * &c);
        assert!(close(&sum.coeffs()[0], &p.one(), &p.pow10(-57)));
        for coeff in &sum.coeffs()[1..] {
            assert!(close(coeff, &p.zero(), &p.pow10(-56)));
        }
    }
}

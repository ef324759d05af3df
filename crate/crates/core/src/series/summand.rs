//! The ten summands written once over a small ring abstraction, so the direct
//! route (plain reals at each photon number `n`) and the expansion route
//! (jets in `x = n/n̄ − 1`) evaluate identical expressions.

use rug::Float;

use super::SumIndex;
use crate::jet::Jet;
use crate::precision::BigReal;

pub(crate) trait Ring: Clone {
    fn mul(&self, rhs: &Self) -> Self;
    fn double(&self) -> Self;
}

impl Ring for BigReal {
    fn mul(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self * rhs)
    }
    fn double(&self) -> Self {
        Float::with_val(self.prec(), self * 2u32)
    }
}

impl Ring for Jet {
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn double(&self) -> Self {
        self + self
    }
}

/// Building blocks shared by every summand, with `θ0 = τ√n`, `θ1 = τ√(n+1)`.
pub(crate) struct Basis<T> {
    pub sin0: T,
    pub cos0: T,
    pub sin1: T,
    pub cos1: T,
    /// `√(n/n̄)`
    pub u: T,
    /// `√(n̄/(n+1))`
    pub inv_v: T,
    /// `√(n/(n+1))`
    pub ratio: T,
}

pub(crate) fn summand<T: Ring>(index: SumIndex, b: &Basis<T>) -> T {
    match index {
        SumIndex::S1 => b.inv_v.mul(&b.cos0).mul(&b.sin1),
        SumIndex::S2 => b.inv_v.mul(&b.sin1).mul(&b.cos1),
        SumIndex::S3 => b.ratio.mul(&b.sin0).mul(&b.sin1),
        SumIndex::S4 | SumIndex::S8 => b.cos0.mul(&b.cos0),
        SumIndex::S5 => b.cos0.mul(&b.cos1),
        SumIndex::S6 => b.cos1.mul(&b.cos1),
        SumIndex::S7 => b.u.mul(&b.cos1).mul(&b.sin0),
        SumIndex::S9 => b.sin1.mul(&b.sin1),
        SumIndex::S10 => b.u.mul(&b.sin0).mul(&b.cos0).double(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    #[test]
    fn ring_ops_agree_on_constants() {
        let prec = Precision::default();
        let a = prec.from_f64(0.25);
        let b = prec.from_f64(3.0);
        let ja = Jet::constant(a.clone(), 3);
        let jb = Jet::constant(b.clone(), 3);
        assert_eq!(*Ring::mul(&ja, &jb).constant_term(), Ring::mul(&a, &b));
        assert_eq!(*ja.double().constant_term(), a.double());
    }
}

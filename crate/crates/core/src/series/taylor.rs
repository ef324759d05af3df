//! Mean-centred expansion: write `n = (1+x) n̄`, expand each summand to `x^p`
//! and replace `x^j` by the Poisson central moment `μ_j / n̄^j`.

use rug::Float;

use super::summand::{summand, Basis};
use super::SumIndex;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::moments::{poisson_central_moments, MAX_MOMENT_ORDER};
use crate::precision::{BigReal, Precision};

/// Smallest `n̄` for which the expansion route is offered.
pub const TAYLOR_MIN_NBAR: u32 = 100;

pub(crate) fn taylor_sums(
    nbar: &BigReal,
    tau: &BigReal,
    which: &[SumIndex],
    order: u32,
    prec: Precision,
) -> Result<Vec<BigReal>> {
    if *nbar < TAYLOR_MIN_NBAR {
        return Err(Error::Planner(format!(
            "expansion route needs n̄ ≥ {TAYLOR_MIN_NBAR}, got {}; use direct summation",
            nbar.to_f64()
        )));
    }
    if !(2..=MAX_MOMENT_ORDER).contains(&order) {
        return Err(Error::argument(format!(
            "Taylor order must be in 2..={MAX_MOMENT_ORDER}, got {order}"
        )));
    }
    let wide = prec.widened(10);
    let bits = wide.bits();
    let p = order as usize;
    let x = Float::with_val(bits, nbar);

    let one_plus_x = Jet::variable(p, wide).add_scalar(&wide.one());
    let u = one_plus_x.sqrt()?;
    let v = one_plus_x
        .add_scalar(&Float::with_val(bits, x.recip_ref()))
        .sqrt()?;
    let inv_v = v.recip()?;
    let ratio = &u * &inv_v;
    let phase = Float::with_val(bits, Float::with_val(bits, x.sqrt_ref()) * tau);
    let (sin0, cos0) = u.scale(&phase).sin_cos();
    let (sin1, cos1) = v.scale(&phase).sin_cos();
    let basis = Basis {
        sin0,
        cos0,
        sin1,
        cos1,
        u,
        inv_v,
        ratio,
    };

    // E[x^j] = μ_j / n̄^j
    let mu = poisson_central_moments(nbar, order, wide)?;
    let mut scale = wide.one();
    let mut ex = Vec::with_capacity(p + 1);
    for m in &mu {
        ex.push(Float::with_val(bits, m / &scale));
        scale *= &x;
    }

    Ok(which
        .iter()
        .map(|&index| {
            let jet = summand(index, &basis);
            let mut acc = Float::new(bits);
            for (c, e) in jet.coeffs().iter().zip(&ex) {
                acc += Float::with_val(bits, c * e);
            }
            prec.real(&acc)
        })
        .collect())
}

//! Truncated summation over photon numbers, walking outward from the mode.

use rug::Float;

use super::planner::truncation_cutoff;
use super::summand::{summand, Basis};
use super::SumIndex;
use crate::error::{Error, Result};
use crate::moments::{geometric_tail_bound, poisson_weight};
use crate::precision::{BigReal, Precision};

/// `√n` and `(sin, cos)(τ√n)` for one photon number.
struct Node {
    sqrt: Float,
    sin: Float,
    cos: Float,
}

impl Node {
    fn at(n: u64, tau: &Float) -> Node {
        let bits = tau.prec();
        let sqrt = Float::with_val(bits, n).sqrt();
        let (sin, cos) = Float::with_val(bits, tau * &sqrt).sin_cos(Float::new(bits));
        Node { sqrt, sin, cos }
    }
}

struct Accumulator<'a> {
    which: &'a [SumIndex],
    sums: Vec<Float>,
    sqrt_nbar: Float,
    terms: u64,
    max_terms: u64,
}

impl Accumulator<'_> {
    fn add(&mut self, weight: &Float, lo: &Node, hi: &Node) -> Result<()> {
        self.terms += 1;
        if self.terms > self.max_terms {
            return Err(Error::Resource(format!(
                "direct summation needs more than {} terms",
                self.max_terms
            )));
        }
        let bits = weight.prec();
        let basis = Basis {
            sin0: lo.sin.clone(),
            cos0: lo.cos.clone(),
            sin1: hi.sin.clone(),
            cos1: hi.cos.clone(),
            u: Float::with_val(bits, &lo.sqrt / &self.sqrt_nbar),
            inv_v: Float::with_val(bits, &self.sqrt_nbar / &hi.sqrt),
            ratio: Float::with_val(bits, &lo.sqrt / &hi.sqrt),
        };
        for (slot, &index) in self.sums.iter_mut().zip(self.which) {
            *slot += Float::with_val(bits, weight * summand(index, &basis));
        }
        Ok(())
    }
}

/// Direct sums for several indices sharing one pass over `n`.
///
/// The upper end runs at least to the cutoff `t(n̄, l)`; both ends also run
/// until the remaining Poisson mass times a bound on the summands falls
/// below the working resolution.
pub(crate) fn direct_sums(
    nbar: &BigReal,
    tau: &BigReal,
    which: &[SumIndex],
    l: u32,
    max_terms: u64,
    prec: Precision,
) -> Result<Vec<BigReal>> {
    let t = truncation_cutoff(nbar, l, prec)?;
    if t > max_terms {
        return Err(Error::Resource(format!(
            "cutoff t = {t} exceeds the configured maximum of {max_terms} terms"
        )));
    }
    let wide = prec.widened(10);
    let bits = wide.bits();
    let x = Float::with_val(bits, nbar);
    let tau = Float::with_val(bits, tau);
    let floor = Float::with_val(bits, 1) >> (prec.bits() as i32 + 16);
    let mode = nbar.to_f64().floor().max(0.0) as u64;

    let mut acc = Accumulator {
        which,
        sums: vec![Float::new(bits); which.len()],
        sqrt_nbar: Float::with_val(bits, x.sqrt_ref()),
        terms: 0,
        max_terms,
    };
    let w_mode = Float::with_val(bits, poisson_weight(nbar, mode, wide));

    // upward from the mode
    let mut w = w_mode.clone();
    let mut n = mode;
    let mut lo = Node::at(n, &tau);
    let mut hi = Node::at(n + 1, &tau);
    let mode_nodes = (Node::at(n, &tau), Node::at(n + 1, &tau));
    loop {
        acc.add(&w, &lo, &hi)?;
        if n >= t {
            // summands grow at most like 2(1 + √(n/n̄)) above the mode
            let amp =
                Float::with_val(bits, Float::with_val(bits, (n + 1) as f64) / &x).sqrt() + 1u32;
            if let Some(bound) = geometric_tail_bound(&w, &x, n, true) {
                if Float::with_val(bits, bound * amp) * 4u32 < floor {
                    break;
                }
            }
        }
        w *= &x;
        n += 1;
        w /= n;
        lo = hi;
        hi = Node::at(n + 1, &tau);
    }

    // downward from the mode
    let mut w = w_mode;
    let mut n = mode;
    let (mut lo, _) = mode_nodes;
    let below_amp =
        Float::with_val(bits, acc.sqrt_nbar.clone().max(&Float::with_val(bits, 1))) * 2u32;
    while n > 0 {
        if let Some(bound) = geometric_tail_bound(&w, &x, n, false) {
            if Float::with_val(bits, &bound * &below_amp) < floor {
                break;
            }
        }
        w *= n;
        w /= &x;
        n -= 1;
        let hi = lo;
        lo = Node::at(n, &tau);
        acc.add(&w, &lo, &hi)?;
    }

    Ok(acc.sums.iter().map(|s| prec.real(s)).collect())
}

//! Poisson-weighted trigonometric sums `S1 .. S10`.
//!
//! Every sum has the form `Σ_n e^{−n̄} n̄^n/n! · f(n)` with `f` built from
//! `θ0 = τ√n` and `θ1 = τ√(n+1)`:
//!
//! | index | summand |
//! |-------|---------|
//! | S1  | `√(n̄/(n+1)) cos θ0 sin θ1` |
//! | S2  | `√(n̄/(n+1)) sin θ1 cos θ1` |
//! | S3  | `√(n/(n+1)) sin θ0 sin θ1` |
//! | S4  | `cos² θ0` |
//! | S5  | `cos θ0 cos θ1` |
//! | S6  | `cos² θ1` |
//! | S7  | `√(n/n̄) cos θ1 sin θ0` |
//! | S8  | `cos² θ0` |
//! | S9  | `sin² θ1` |
//! | S10 | `√(n/n̄) sin 2θ0` |
//!
//! S1..S7 define the one-pulse channel at `τ = kπ/(2√n̄)`; S8..S10 give the
//! population at an arbitrary `τ` inside a pulse.

mod direct;
mod planner;
mod summand;
mod taylor;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use planner::{expansion_order, truncation_cutoff, window_bound_alpha, PrecisionPlan};
pub use taylor::TAYLOR_MIN_NBAR;

use crate::area::PulseArea;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumIndex {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
}

impl SumIndex {
    pub const ALL: [SumIndex; 10] = [
        SumIndex::S1,
        SumIndex::S2,
        SumIndex::S3,
        SumIndex::S4,
        SumIndex::S5,
        SumIndex::S6,
        SumIndex::S7,
        SumIndex::S8,
        SumIndex::S9,
        SumIndex::S10,
    ];

    /// The sums entering the one-pulse channel.
    pub const CHANNEL: [SumIndex; 7] = [
        SumIndex::S1,
        SumIndex::S2,
        SumIndex::S3,
        SumIndex::S4,
        SumIndex::S5,
        SumIndex::S6,
        SumIndex::S7,
    ];

    /// The sums entering the intra-pulse population.
    pub const PROFILE: [SumIndex; 3] = [SumIndex::S8, SumIndex::S9, SumIndex::S10];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl TryFrom<u8> for SumIndex {
    type Error = Error;

    fn try_from(i: u8) -> Result<Self> {
        match i {
            1..=10 => Ok(SumIndex::ALL[usize::from(i) - 1]),
            _ => Err(Error::argument(format!(
                "sum index must be in 1..=10, got {i}"
            ))),
        }
    }
}

impl fmt::Display for SumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.number())
    }
}

/// Parses index selections such as `"1-7"`, `"1,3,5"`, `"S8-S10"` or `"all"`.
pub fn parse_index_set(s: &str) -> Result<Vec<SumIndex>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(SumIndex::ALL.to_vec());
    }
    let one = |t: &str| -> Result<u8> {
        let t = t.trim().trim_start_matches(['S', 's']);
        t.parse::<u8>()
            .map_err(|_| Error::argument(format!("bad sum index {t:?}")))
    };
    let mut out = Vec::new();
    for part in s.split(',') {
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) => (one(a)?, one(b)?),
            None => {
                let i = one(part)?;
                (i, i)
            }
        };
        if lo > hi {
            return Err(Error::argument(format!("empty index range {part:?}")));
        }
        for i in lo..=hi {
            out.push(SumIndex::try_from(i)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl FromStr for SumIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_index_set(s)?.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::argument(format!(
                "expected a single sum index, got {s:?}"
            ))),
        }
    }
}

/// One sum at given `(n̄, τ)`.
#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub index: SumIndex,
    pub nbar: BigReal,
    pub tau: BigReal,
    pub k: Option<PulseArea>,
}

impl SeriesSpec {
    /// Sum at the end of a `kπ` pulse, `τ = kπ/(2√n̄)`.
    pub fn for_pulse(
        index: SumIndex,
        nbar: &BigReal,
        k: PulseArea,
        prec: Precision,
    ) -> Result<Self> {
        check_nbar(nbar)?;
        Ok(Self {
            index,
            nbar: prec.real(nbar),
            tau: k.tau(nbar, prec),
            k: Some(k),
        })
    }

    /// Sum at an arbitrary coupling phase `τ = g t`.
    pub fn at_tau(index: SumIndex, nbar: &BigReal, tau: &BigReal, prec: Precision) -> Result<Self> {
        check_nbar(nbar)?;
        if !tau.is_finite() {
            return Err(Error::argument("τ must be finite"));
        }
        Ok(Self {
            index,
            nbar: prec.real(nbar),
            tau: prec.real(tau),
            k: None,
        })
    }
}

pub(crate) fn check_nbar(nbar: &BigReal) -> Result<()> {
    if !nbar.is_finite() || *nbar <= 0 {
        return Err(Error::argument(format!(
            "mean photon number must be positive, got {}",
            nbar.to_f64()
        )));
    }
    Ok(())
}

/// Default target exponent for direct summation.
pub const DEFAULT_L: u32 = 12;
/// Default expansion order.
pub const DEFAULT_ORDER: u32 = 10;
/// Largest `n̄` routed to direct summation by [`Strategy::Auto`].
pub const DIRECT_MAX_NBAR: u32 = 2000;
/// Default cap on the number of terms visited by direct summation.
pub const DEFAULT_MAX_TERMS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Direct summation for `n̄ ≤ 2000`, expansion with the default order above.
    Auto,
    Direct {
        l: u32,
    },
    Taylor {
        order: u32,
    },
}

impl Strategy {
    pub fn resolve(self, nbar: &BigReal) -> Strategy {
        match self {
            Strategy::Auto if *nbar <= DIRECT_MAX_NBAR => Strategy::Direct { l: DEFAULT_L },
            Strategy::Auto => Strategy::Taylor {
                order: DEFAULT_ORDER,
            },
            other => other,
        }
    }
}

/// Direct truncated sum with the cutoff `t(n̄, l)`.
pub fn sum_direct(spec: &SeriesSpec, l: u32, prec: Precision) -> Result<BigReal> {
    sum_direct_limited(spec, l, DEFAULT_MAX_TERMS, prec)
}

pub fn sum_direct_limited(
    spec: &SeriesSpec,
    l: u32,
    max_terms: u64,
    prec: Precision,
) -> Result<BigReal> {
    let v = direct::direct_sums(&spec.nbar, &spec.tau, &[spec.index], l, max_terms, prec)?;
    Ok(v.into_iter().next().expect("one index requested"))
}

/// Expansion to order `p` about the mean.
pub fn sum_taylor(spec: &SeriesSpec, p: u32, prec: Precision) -> Result<BigReal> {
    let v = taylor::taylor_sums(&spec.nbar, &spec.tau, &[spec.index], p, prec)?;
    Ok(v.into_iter().next().expect("one index requested"))
}

/// Several sums at the same `(n̄, τ)` sharing one pass.
pub fn compute_sums(
    nbar: &BigReal,
    tau: &BigReal,
    which: &[SumIndex],
    strategy: Strategy,
    prec: Precision,
) -> Result<BTreeMap<SumIndex, BigReal>> {
    check_nbar(nbar)?;
    let mut which = which.to_vec();
    which.sort();
    which.dedup();
    let values = match strategy.resolve(nbar) {
        Strategy::Direct { l } => {
            direct::direct_sums(nbar, tau, &which, l, DEFAULT_MAX_TERMS, prec)?
        }
        Strategy::Taylor { order } => taylor::taylor_sums(nbar, tau, &which, order, prec)?,
        Strategy::Auto => unreachable!("resolved above"),
    };
    Ok(which.into_iter().zip(values).collect())
}

/// [`compute_sums`] at the end of a `kπ` pulse.
pub fn compute_pulse_sums(
    nbar: &BigReal,
    k: PulseArea,
    which: &[SumIndex],
    strategy: Strategy,
    prec: Precision,
) -> Result<BTreeMap<SumIndex, BigReal>> {
    check_nbar(nbar)?;
    compute_sums(nbar, &k.tau(nbar, prec), which, strategy, prec)
}

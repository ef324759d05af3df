//! Reproduction checks: reference table, planner, tail bounds, oracle
//! equivalences, channel closed forms, envelope fits, collapse shape,
//! failure headline and photon budget.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

use crate::budget::{
    nbar_upper_bound, PhysicalConstants, TrapScenario, REFERENCE_BE_COEFFICIENT,
    REFERENCE_COEFFICIENT,
};
use crate::error::{Error, Result};
use crate::fit::fit_envelope;
use crate::moments::poisson_tail;
use crate::precision::{BigReal, Precision};
use crate::pulse::{
    average_failure_probability, build_pulse_map, density_after_pulse, discriminant,
    inversion_sequence, local_maxima, matrix_power, AverageMode, BlochState, Complex, Evolution,
    Mat2, ProfileGrid,
};
use crate::series::{
    compute_pulse_sums, compute_sums, truncation_cutoff, window_bound_alpha, Strategy, SumIndex,
};
use crate::PulseArea;

/// `S1..S7` at `n̄ = 10⁴`, `k = 2`, expansion order 10.
pub const TABLE1_P10: [&str; 7] = [
    "0.000039303916656063668561519091",
    "0.000039265164255300772996074590",
    "0.000246659192761352167541307293",
    "0.999753309972685637856777333369",
    "0.999753316133881571308212070145",
    "0.999753322301165250291025614276",
    "0.000039226416698193975826600887",
];

/// `S1..S7` at `n̄ = 10⁴`, `k = 2`, expansion order 15.
pub const TABLE1_P15: [&str; 7] = [
    "0.000039303916656063668561194770",
    "0.000039265164255300772995750283",
    "0.000246659192761352167542402758",
    "0.999753309972685637856776237858",
    "0.999753316133881571308210974684",
    "0.999753322301165250291024518866",
    "0.000039226416698193975830095264",
];

/// Fitted envelopes `A e^{−b N_R}` for `k = ½, 1, 2` at `n̄ = 10⁴`.
pub const ENVELOPE_REFERENCE: [(&str, f64, f64); 3] = [
    ("1/2", 1.0031, 0.0002),
    ("1", 1.0193, 0.0003),
    ("2", 1.025, 0.0005),
];

/// Sample points per pulse used for the dual-maximum count.
pub const COLLAPSE_PROFILE_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    /// `measured ≤ t`
    AtMost(f64),
    /// `measured < t`
    Below(f64),
    /// `lo ≤ measured ≤ hi`
    Within(f64, f64),
}

impl Bound {
    fn scaled(self, s: f64) -> Bound {
        match self {
            Bound::AtMost(t) => Bound::AtMost(t * s),
            Bound::Below(t) => Bound::Below(t * s),
            Bound::Within(lo, hi) => {
                let (c, h) = ((lo + hi) / 2.0, (hi - lo) / 2.0 * s);
                Bound::Within(c - h, c + h)
            }
        }
    }

    pub fn holds(self, x: f64) -> bool {
        match self {
            Bound::AtMost(t) => x <= t,
            Bound::Below(t) => x < t,
            Bound::Within(lo, hi) => lo <= x && x <= hi,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(t) => write!(f, "<= {t:e}"),
            Bound::Below(t) => write!(f, "< {t:e}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub label: String,
    pub measured: f64,
    pub bound: Bound,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: &'static str,
    /// `None` for supplementary checks.
    pub number: Option<u8>,
    pub name: &'static str,
    pub clauses: Vec<Clause>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    /// One summary line, `PASS` or `FAIL` first.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let num = self.number.map_or("S".to_string(), |n| n.to_string());
        let failing: Vec<&str> = self
            .clauses
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.label.as_str())
            .collect();
        let tail = if failing.is_empty() {
            format!("{} clauses", self.clauses.len())
        } else {
            format!("failing: {}", failing.join("; "))
        };
        format!("{status} {num:>2} {:<14} {} ({tail})", self.id, self.name)
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for c in &self.clauses {
            let mark = if c.passed { "ok " } else { "BAD" };
            writeln!(
                f,
                "      {mark} {}: {:.6e} {}",
                c.label, c.measured, c.bound
            )?;
        }
        Ok(())
    }
}

/// Options shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Multiplies every tolerance; `1` runs the checks as stated.
    pub tolerance_scale: f64,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance_scale: 1.0,
            seed: crate::pulse::DEFAULT_SEED,
        }
    }
}

struct Ctx {
    opts: CheckOptions,
    clauses: Vec<Clause>,
}

impl Ctx {
    fn clause(&mut self, label: impl Into<String>, measured: f64, bound: Bound) {
        let bound = bound.scaled(self.opts.tolerance_scale);
        self.clauses.push(Clause {
            label: label.into(),
            measured,
            passed: bound.holds(measured),
            bound,
        });
    }
}

type Runner = fn(&mut Ctx) -> Result<()>;

pub struct Criterion {
    pub id: &'static str,
    pub number: Option<u8>,
    pub name: &'static str,
    run: Runner,
}

impl Criterion {
    pub fn run(&self, opts: CheckOptions) -> Result<CriterionOutcome> {
        if !(opts.tolerance_scale >= 0.0 && opts.tolerance_scale.is_finite()) {
            return Err(Error::argument(
                "tolerance scale must be finite and non-negative",
            ));
        }
        let mut ctx = Ctx {
            opts,
            clauses: Vec::new(),
        };
        (self.run)(&mut ctx)?;
        Ok(CriterionOutcome {
            id: self.id,
            number: self.number,
            name: self.name,
            clauses: ctx.clauses,
        })
    }
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: "table1",
        number: Some(1),
        name: "reference sums at n=1e4, k=2",
        run: table1,
    },
    Criterion {
        id: "cutoff",
        number: Some(2),
        name: "truncation cutoff at n=10, l=20",
        run: cutoff,
    },
    Criterion {
        id: "tails",
        number: Some(3),
        name: "Poisson tails outside the window",
        run: tails,
    },
    Criterion {
        id: "oracle",
        number: Some(4),
        name: "expansion vs direct summation",
        run: oracle,
    },
    Criterion {
        id: "powers",
        number: Some(5),
        name: "closed-form matrix powers",
        run: powers,
    },
    Criterion {
        id: "discriminant",
        number: Some(6),
        name: "discriminant sign at n=10",
        run: discriminant_sign,
    },
    Criterion {
        id: "envelope",
        number: Some(7),
        name: "envelope fits up to N_R=400",
        run: envelope,
    },
    Criterion {
        id: "collapse",
        number: Some(8),
        name: "collapse shape at n=10",
        run: collapse,
    },
    Criterion {
        id: "failure",
        number: Some(9),
        name: "failure probability reaches 1e-2",
        run: failure,
    },
    Criterion {
        id: "budget",
        number: Some(10),
        name: "photon budget coefficients",
        run: budget,
    },
    Criterion {
        id: "formulations",
        number: Some(11),
        name: "density matrix vs Bloch channel",
        run: formulations,
    },
    Criterion {
        id: "envelope-extended",
        number: None,
        name: "envelope fits up to N_R=7000",
        run: envelope_extended,
    },
];

pub fn criterion(id: &str) -> Option<&'static Criterion> {
    CRITERIA
        .iter()
        .find(|c| c.id == id || c.number.is_some_and(|n| n.to_string() == id))
}

/// Runs every check, or only the one named `only` (id or number).
pub fn run_checks(only: Option<&str>, opts: CheckOptions) -> Result<Vec<CriterionOutcome>> {
    match only {
        Some(id) => {
            let c = criterion(id).ok_or_else(|| {
                let ids: Vec<&str> = CRITERIA.iter().map(|c| c.id).collect();
                Error::argument(format!("unknown check {id:?}; known: {}", ids.join(", ")))
            })?;
            Ok(vec![c.run(opts)?])
        }
        None => CRITERIA.iter().map(|c| c.run(opts)).collect(),
    }
}

fn abs_diff(a: &BigReal, b: &BigReal) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

fn rel_dev(x: f64, reference: f64) -> f64 {
    (x / reference - 1.0).abs()
}

fn area(s: &str) -> PulseArea {
    s.parse().expect("pulse area literal")
}

fn table1(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::new(40)?;
    let nbar = p.int(10_000);
    let mut got = Vec::new();
    for (order, table) in [(10, TABLE1_P10), (15, TABLE1_P15)] {
        let s = compute_pulse_sums(
            &nbar,
            area("2"),
            &SumIndex::CHANNEL,
            Strategy::Taylor { order },
            p,
        )?;
        let worst = SumIndex::CHANNEL
            .iter()
            .zip(table)
            .map(|(i, lit)| Ok(abs_diff(&s[i], &p.parse(lit)?)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        ctx.clause(
            format!("order {order} vs printed table"),
            worst,
            Bound::AtMost(1e-20),
        );
        got.push(s);
    }
    let cross = SumIndex::CHANNEL
        .iter()
        .map(|i| abs_diff(&got[0][i], &got[1][i]))
        .fold(0.0, f64::max);
    ctx.clause("order 10 vs order 15", cross, Bound::AtMost(1e-20));
    Ok(())
}

fn cutoff(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    let t = truncation_cutoff(&p.int(10), 20, p)?;
    ctx.clause(
        format!("|t - 55| (t = {t})"),
        (t as f64 - 55.0).abs(),
        Bound::AtMost(0.0),
    );
    Ok(())
}

fn tails(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    for nbar_i in [1_000i64, 10_000] {
        let nbar = p.int(nbar_i);
        let alpha = window_bound_alpha(&nbar, 2, p)?;
        let half = Float::with_val(
            p.bits(),
            &alpha * Float::with_val(p.bits(), nbar.sqrt_ref()),
        );
        let lo_edge = Float::with_val(p.bits(), &nbar - &half);
        let hi_edge = Float::with_val(p.bits(), &nbar + &half);
        let bound = 1.0 / (nbar_i as f64).powi(2);
        // n < n̄ − α√n̄
        let lo = lo_edge.ceil().to_f64();
        let lower = if lo >= 1.0 {
            poisson_tail(&nbar, 0, Some(lo as u64 - 1), p)?.to_f64()
        } else {
            0.0
        };
        // n > n̄ + α√n̄
        let hi = hi_edge.floor().to_f64() as u64 + 1;
        let upper = poisson_tail(&nbar, hi, None, p)?.to_f64();
        ctx.clause(format!("lower tail n={nbar_i}"), lower, Bound::Below(bound));
        ctx.clause(format!("upper tail n={nbar_i}"), upper, Bound::Below(bound));
    }
    Ok(())
}

fn oracle(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    for nbar_i in [1_000i64, 10_000] {
        let nbar = p.int(nbar_i);
        for k in ["1/2", "1", "2"] {
            let tau = area(k).tau(&nbar, p);
            let a = compute_sums(
                &nbar,
                &tau,
                &SumIndex::ALL,
                Strategy::Taylor { order: 12 },
                p,
            )?;
            let b = compute_sums(&nbar, &tau, &SumIndex::ALL, Strategy::Direct { l: 12 }, p)?;
            let worst = SumIndex::ALL
                .iter()
                .map(|i| abs_diff(&a[i], &b[i]))
                .fold(0.0, f64::max);
            ctx.clause(format!("n={nbar_i} k={k}"), worst, Bound::AtMost(1e-8));
        }
    }
    Ok(())
}

fn powers(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::new(50)?;
    for k in ["1/2", "1", "2"] {
        let map = build_pulse_map(&p.int(10_000), area(k), Strategy::Auto, p)?;
        let dec = map.decomposition();
        let mut iter = Mat2::identity(p);
        let mut done = 0u64;
        let mut worst = 0.0f64;
        for target in [1u64, 10, 100, 1_000, 10_000] {
            while done < target {
                iter = iter.mul(&map.m1);
                done += 1;
            }
            worst = worst.max(
                matrix_power(&dec, target)
                    .matrix
                    .max_abs_diff(&iter)
                    .to_f64(),
            );
        }
        ctx.clause(format!("k={k}"), worst, Bound::AtMost(1e-25));
    }
    Ok(())
}

fn discriminant_sign(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    let nbar = p.int(10);
    let mut worst = f64::NEG_INFINITY;
    // 100 interior points of (0.01, 1)
    for i in 1..=100u32 {
        let tau = p.from_f64(0.01) + p.from_f64(0.99) * i / 101u32;
        worst = worst.max(discriminant(&nbar, &tau, Strategy::Auto, p)?.to_f64());
    }
    ctx.clause("max discriminant", worst, Bound::Below(0.0));
    Ok(())
}

fn envelope_fits(ctx: &mut Ctx, max_rabi: u64) -> Result<()> {
    let p = Precision::new(40)?;
    for (k, a_ref, b_ref) in ENVELOPE_REFERENCE {
        let map = build_pulse_map(&p.int(10_000), area(k), Strategy::Auto, p)?;
        let fit = fit_envelope(&map, max_rabi)?;
        let (a, b) = (fit.amplitude.to_f64(), fit.rate.to_f64());
        ctx.clause(
            format!("k={k} rate b={b:.4e} vs {b_ref}"),
            rel_dev(b, b_ref),
            Bound::AtMost(0.3),
        );
        ctx.clause(
            format!("k={k} amplitude A={a:.5} vs {a_ref}"),
            rel_dev(a, a_ref),
            Bound::AtMost(0.02),
        );
    }
    Ok(())
}

fn envelope(ctx: &mut Ctx) -> Result<()> {
    envelope_fits(ctx, 400)
}

fn envelope_extended(ctx: &mut Ctx) -> Result<()> {
    envelope_fits(ctx, 7_000)
}

fn collapse(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    let nbar = p.int(10);
    let k = area("2");
    let map = build_pulse_map(&nbar, k, Strategy::Auto, p)?;
    // with k = 2 every pulse is one Rabi period
    let seq = inversion_sequence(&map, 100)?;
    let w: Vec<f64> = seq.iter().map(|q| q.w.to_f64()).collect();
    let rise = (1..=20)
        .map(|m| w[m] - w[m - 1])
        .fold(f64::NEG_INFINITY, f64::max);
    ctx.clause("largest rise over periods 1..20", rise, Bound::AtMost(1e-6));
    let late = w[21..=100]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    ctx.clause(
        "largest W over periods 21..100 / W0",
        late / w[0],
        Bound::AtMost(0.5),
    );

    let grid = ProfileGrid::new(&nbar, k, COLLAPSE_PROFILE_SAMPLES, Strategy::Auto, p)?;
    let excited = BlochState::excited(p);
    for m in 0..3u64 {
        let r = Evolution::new(&map, m)?.apply(&excited);
        let prof: Vec<f64> = grid.inversion(&r).iter().map(BigReal::to_f64).collect();
        let count = local_maxima(&prof).len();
        ctx.clause(
            format!("maxima in period {} (found {count})", m + 1),
            (count as f64 - 2.0).abs(),
            Bound::AtMost(0.0),
        );
    }
    Ok(())
}

fn failure(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    let map = build_pulse_map(&p.int(10_000), area("1"), Strategy::Auto, p)?;
    // k = 1: the ideal gate sequence returns to the identity at even m
    let first = (2..=2_000u64)
        .step_by(2)
        .map(|m| {
            Ok((
                m,
                average_failure_probability(&map, m, AverageMode::Analytic)?.mean,
            ))
        })
        .find(|r: &Result<(u64, BigReal)>| r.as_ref().map_or(true, |(_, pf)| *pf >= p.pow10(-2)))
        .transpose()?;
    let m = first.map_or(f64::INFINITY, |(m, _)| m as f64);
    ctx.clause(
        "first m with average p_f >= 1e-2",
        m,
        Bound::Within(30.0, 300.0),
    );
    Ok(())
}

fn budget(ctx: &mut Ctx) -> Result<()> {
    let c = PhysicalConstants::new(Precision::default());
    let s = TrapScenario::reference(&c);
    let b = nbar_upper_bound(&c, &s.mass, s.k, &s.xi, &s.wavelength)?;
    let coef = b.coefficient.to_f64();
    let scen = b.scenario_coefficient.to_f64();
    let val = b.value.to_f64();
    ctx.clause(
        format!("prefactor {coef:.4e} vs {REFERENCE_COEFFICIENT:e}"),
        rel_dev(coef, REFERENCE_COEFFICIENT),
        Bound::AtMost(0.2),
    );
    ctx.clause(
        format!("M=9u k=2 coefficient {scen:.4e} vs {REFERENCE_BE_COEFFICIENT:e}"),
        rel_dev(scen, REFERENCE_BE_COEFFICIENT),
        Bound::AtMost(0.05),
    );
    ctx.clause(
        format!("bound at xi=2, 1 um: {val:.1} vs 2300"),
        rel_dev(val, 2.3e3),
        Bound::AtMost(0.05),
    );
    Ok(())
}

fn random_amplitudes(rng: &mut ChaCha8Rng, p: Precision) -> (Complex, Complex) {
    let v: Vec<BigReal> = (0..4)
        .map(|_| p.from_f64(rng.random_range(-1.0..1.0)))
        .collect();
    let mut n = p.zero();
    for c in &v {
        n += Float::with_val(p.bits(), c.square_ref());
    }
    let n = n.sqrt();
    let s = |c: &BigReal| Float::with_val(p.bits(), c / &n);
    (
        Complex::new(s(&v[0]), s(&v[1])),
        Complex::new(s(&v[2]), s(&v[3])),
    )
}

fn formulations(ctx: &mut Ctx) -> Result<()> {
    let p = Precision::default();
    let map = build_pulse_map(&p.int(10_000), area("2"), Strategy::Auto, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (a, b) = random_amplitudes(&mut rng, p);
        let rho = density_after_pulse(&a, &b, &map.sums, &p.zero(), p)?;
        let via_map = map.apply(&BlochState::from_amplitudes(&a, &b)?);
        worst = worst.max(rho.bloch().max_abs_diff(&via_map).to_f64());
    }
    ctx.clause(
        "max Bloch component difference",
        worst,
        Bound::AtMost(1e-20),
    );
    Ok(())
}

//! `pulsetrain` command line: parses a run configuration, calls the library
//! and emits CSV or JSON tables.
//!
//! Exit codes: 0 success, 1 numeric or domain failure (one JSON line on the
//! diagnostic stream), 2 usage error. No output file is written on failure.

mod output;
mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

pub use output::{read_csv, write_atomic, Format, Table};
pub use scenario::{Scalar, Scenario};

use crate::budget::{budget_report, PhysicalConstants, TrapScenario};
use crate::check::{run_checks, CheckOptions};
use crate::error::Error;
use crate::fit::{fit_exponential, EnvelopePoint};
use crate::precision::{format_sci, BigReal, Precision};
use crate::pulse::{
    average_failure_with, build_pulse_map, inversion_sequence, AverageMode, BlochState, Evolution,
    PowerBranch, ProfileGrid, DEFAULT_SEED,
};
use crate::series::{
    compute_sums, parse_index_set, Strategy, SumIndex, DEFAULT_L, DEFAULT_ORDER, DIRECT_MAX_NBAR,
};
use crate::PulseArea;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Direct,
    Taylor,
}

impl FromStr for StrategyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <StrategyArg as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pulsetrain",
    version,
    about = "Rabi oscillation under kπ pulse trains in a coherent field"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Mean photon number.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub nbar: Option<String>,
    /// Pulse area index k (a kπ pulse), e.g. 2, 1/2 or 0.5.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<String>,
    /// Phase τ = g t, instead of k.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tau: Option<String>,
    /// Largest pulse count.
    #[arg(long, global = true)]
    pub m_max: Option<u64>,
    /// Grid points per pulse for profiles.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Working precision in decimal digits (at least 30).
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// Target exponent for direct summation.
    #[arg(long, global = true)]
    pub l: Option<u32>,
    /// Expansion order.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true)]
    pub strategy: Option<StrategyArg>,
    /// Monte Carlo seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub count: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Significant digits in printed numbers.
    #[arg(long, global = true)]
    pub sig: Option<usize>,
    /// Flat TOML file supplying defaults for any of these options.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct BudgetArgs {
    /// Ion mass in atomic mass units.
    #[arg(long)]
    pub mass_amu: Option<String>,
    /// Ion separation in wavelengths.
    #[arg(long)]
    pub xi: Option<String>,
    /// Wavelength in metres.
    #[arg(long)]
    pub wavelength: Option<String>,
    /// Field amplitude in V/m; the upper bound when absent.
    #[arg(long)]
    pub field: Option<String>,
    /// Beam area in m² (continuous-mode estimate).
    #[arg(long)]
    pub beam_area: Option<String>,
    /// Beam power in W (continuous-mode estimate).
    #[arg(long)]
    pub power: Option<String>,
    /// Laser angular frequency in rad/s (continuous-mode estimate).
    #[arg(long)]
    pub omega_l: Option<String>,
    /// Coupling constant d (continuous-mode estimate).
    #[arg(long)]
    pub coupling: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pulse sums S1..S10: columns index,value.
    Sums {
        /// Index set such as 1-7, 1,3,8 or all.
        #[arg(long, default_value = "1-7")]
        which: String,
    },
    /// Affine Bloch channel of one pulse: columns quantity,value.
    Map,
    /// Inversion W at pulse boundaries from |1⟩: columns m,N_R,W.
    Inversion {
        /// Keep only whole Rabi periods.
        #[arg(long)]
        envelope: bool,
    },
    /// Inversion inside pulses m = 0..m-max-1: columns m,tau,W.
    Profile,
    /// Failure probability averaged over pure states: columns m,p_f_analytic,p_f_mc.
    Failprob,
    /// Photon budget of a trapped-ion gate: columns quantity,value,unit.
    Budget(BudgetArgs),
    /// Exponential fit of an envelope CSV (columns N_R and W).
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Reproduction checks with per-criterion PASS/FAIL.
    Check {
        /// Run a single check by id or number.
        #[arg(long)]
        only: Option<String>,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Resolved options, command line first, then scenario file, then defaults.
struct Config {
    prec: Precision,
    nbar: Option<BigReal>,
    k: Option<PulseArea>,
    tau: Option<BigReal>,
    m_max: Option<u64>,
    samples: usize,
    strategy: StrategyArg,
    l: Option<u32>,
    p: Option<u32>,
    seed: u64,
    count: u64,
    format: Format,
    sig: usize,
    output: Option<PathBuf>,
    scenario: Scenario,
}

fn pick<T: FromStr>(cli: Option<T>, file: &Option<Scalar>, name: &str) -> Outcome<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match (cli, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(s)) => s
            .text()
            .parse()
            .map(Some)
            .map_err(|e| usage(format!("scenario field {name}: {e}"))),
        (None, None) => Ok(None),
    }
}

fn positive_real(
    text: Option<String>,
    file: &Option<Scalar>,
    name: &str,
    prec: Precision,
) -> Outcome<Option<BigReal>> {
    let Some(s) = pick(text, file, name)? else {
        return Ok(None);
    };
    let v = prec
        .parse(&s)
        .map_err(|_| usage(format!("--{name}: cannot parse {s:?} as a number")))?;
    if !v.is_finite() || v <= 0 {
        return Err(usage(format!("--{name} must be positive, got {s}")));
    }
    Ok(Some(v))
}

impl Config {
    fn resolve(g: GlobalArgs) -> Outcome<Self> {
        let scenario = match &g.scenario {
            Some(path) => Scenario::load(path).map_err(|e| usage(e.to_string()))?,
            None => Scenario::default(),
        };
        let s = &scenario;
        let digits = pick(g.digits, &s.digits, "digits")?.unwrap_or(Precision::DEFAULT_DIGITS);
        let prec = Precision::new(digits).map_err(|e| usage(e.to_string()))?;
        let nbar = positive_real(g.nbar, &s.nbar, "nbar", prec)?;
        let tau = positive_real(g.tau, &s.tau, "tau", prec)?;
        let k = pick(g.k, &s.k, "k")?
            .map(|t| {
                t.parse::<PulseArea>()
                    .map_err(|e| usage(format!("--k: {e}")))
            })
            .transpose()?;
        let samples = pick(g.samples, &s.samples, "samples")?.unwrap_or(200);
        if samples < 2 {
            return Err(usage("--samples must be at least 2"));
        }
        let sig = pick(g.sig, &s.sig, "sig")?.unwrap_or(25);
        if sig == 0 {
            return Err(usage("--sig must be at least 1"));
        }
        let count = pick(g.count, &s.count, "count")?.unwrap_or(1000);
        if count < 2 {
            return Err(usage("--count must be at least 2"));
        }
        let l = pick(g.l, &s.l, "l")?;
        let p = pick(g.p, &s.p, "p")?;
        if p.is_some_and(|p| !(2..=crate::moments::MAX_MOMENT_ORDER).contains(&p)) {
            return Err(usage(format!(
                "--p must lie in 2..={}",
                crate::moments::MAX_MOMENT_ORDER
            )));
        }
        Ok(Self {
            prec,
            nbar,
            k,
            tau,
            m_max: pick(g.m_max, &s.m_max, "m_max")?,
            samples,
            strategy: pick(g.strategy, &s.strategy, "strategy")?.unwrap_or(StrategyArg::Auto),
            l,
            p,
            seed: pick(g.seed, &s.seed, "seed")?.unwrap_or(DEFAULT_SEED),
            count,
            format: pick(g.format, &s.format, "format")?.unwrap_or_default(),
            sig,
            output: g.output,
            scenario,
        })
    }

    fn nbar(&self) -> Outcome<&BigReal> {
        self.nbar
            .as_ref()
            .ok_or_else(|| usage("--nbar is required"))
    }

    fn k(&self) -> Outcome<PulseArea> {
        self.k.ok_or_else(|| usage("--k is required"))
    }

    /// `auto` chooses the route by `n̄`; `--l` and `--p` then adjust it.
    fn strategy(&self) -> Outcome<Strategy> {
        let direct = Strategy::Direct {
            l: self.l.unwrap_or(DEFAULT_L),
        };
        let taylor = Strategy::Taylor {
            order: self.p.unwrap_or(DEFAULT_ORDER),
        };
        Ok(match self.strategy {
            StrategyArg::Direct => direct,
            StrategyArg::Taylor => taylor,
            StrategyArg::Auto if *self.nbar()? <= DIRECT_MAX_NBAR => direct,
            StrategyArg::Auto => taylor,
        })
    }

    fn num(&self, v: &BigReal) -> String {
        format_sci(v, self.sig)
    }
}

fn ratio_text(r: Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn cmd_sums(cfg: &Config, which: &str) -> Outcome<Table> {
    let which = parse_index_set(which).map_err(|e| usage(format!("--which: {e}")))?;
    let nbar = cfg.nbar()?;
    let tau = match (cfg.k, &cfg.tau) {
        (Some(_), Some(_)) => return Err(usage("give either --k or --tau, not both")),
        (Some(k), None) => k.tau(nbar, cfg.prec),
        (None, Some(t)) => t.clone(),
        (None, None) => return Err(usage("--k or --tau is required")),
    };
    let sums = compute_sums(nbar, &tau, &which, cfg.strategy()?, cfg.prec)?;
    let mut t = Table::new(&["index", "value"]);
    for (i, v) in &sums {
        t.push(vec![i.to_string(), cfg.num(v)]);
    }
    Ok(t)
}

fn cmd_map(cfg: &Config) -> Outcome<Table> {
    let map = build_pulse_map(cfg.nbar()?, cfg.k()?, cfg.strategy()?, cfg.prec)?;
    let dec = map.decomposition();
    let mut t = Table::new(&["quantity", "value"]);
    let mut row = |q: &str, v: &BigReal| t.push(vec![q.to_string(), cfg.num(v)]);
    row("tau", &map.tau);
    for i in SumIndex::CHANNEL {
        row(&i.to_string(), map.sum(i));
    }
    row("mxx", &map.mxx);
    row("a", map.a());
    row("b", map.b());
    row("c", map.c());
    row("d", map.d());
    row("shift_y", &map.shift[1]);
    row("shift_z", &map.shift[2]);
    row("discriminant", &dec.delta);
    row("det_m1", &dec.det_m1);
    if let Some(tp) = &dec.trig {
        row("modulus", &tp.modulus);
        row("theta", &tp.theta);
    }
    let branch = match dec.branch() {
        PowerBranch::Trigonometric => "trigonometric",
        PowerBranch::Iterated => "iterated",
    };
    t.push(vec!["power_branch".into(), branch.into()]);
    Ok(t)
}

fn cmd_inversion(cfg: &Config, envelope: bool) -> Outcome<Table> {
    let k = cfg.k()?;
    let map = build_pulse_map(cfg.nbar()?, k, cfg.strategy()?, cfg.prec)?;
    let seq = inversion_sequence(&map, cfg.m_max.unwrap_or(100))?;
    let mut t = Table::new(&["m", "N_R", "W"]);
    for p in seq.iter().filter(|p| !envelope || k.completes_period(p.m)) {
        t.push(vec![p.m.to_string(), ratio_text(p.n_rabi), cfg.num(&p.w)]);
    }
    Ok(t)
}

fn cmd_profile(cfg: &Config) -> Outcome<Table> {
    let (nbar, k, strategy) = (cfg.nbar()?, cfg.k()?, cfg.strategy()?);
    let map = build_pulse_map(nbar, k, strategy, cfg.prec)?;
    let grid = ProfileGrid::new(nbar, k, cfg.samples, strategy, cfg.prec)?;
    let excited = BlochState::excited(cfg.prec);
    let decomp = map.decomposition();
    let mut t = Table::new(&["m", "tau", "W"]);
    for m in 0..cfg.m_max.unwrap_or(3) {
        let r = Evolution::with_decomposition(&map, &decomp, m)?.apply(&excited);
        for (tau, w) in grid.taus.iter().zip(grid.inversion(&r)) {
            t.push(vec![m.to_string(), cfg.num(tau), cfg.num(&w)]);
        }
    }
    Ok(t)
}

fn cmd_failprob(cfg: &Config) -> Outcome<Table> {
    let map = build_pulse_map(cfg.nbar()?, cfg.k()?, cfg.strategy()?, cfg.prec)?;
    let decomp = map.decomposition();
    let mc = AverageMode::MonteCarlo {
        seed: cfg.seed,
        count: cfg.count,
    };
    let mut t = Table::new(&["m", "p_f_analytic", "p_f_mc"]);
    for m in 0..=cfg.m_max.unwrap_or(100) {
        let ev = Evolution::with_decomposition(&map, &decomp, m)?;
        let exact = average_failure_with(&map, &ev, AverageMode::Analytic)?;
        let sampled = average_failure_with(&map, &ev, mc)?;
        t.push(vec![
            m.to_string(),
            cfg.num(&exact.mean),
            cfg.num(&sampled.mean),
        ]);
    }
    Ok(t)
}

fn cmd_budget(cfg: &Config, a: BudgetArgs, err: &mut dyn Write) -> Outcome<Table> {
    let consts = PhysicalConstants::new(cfg.prec);
    let s = &cfg.scenario;
    let prec = cfg.prec;
    let mut sc = TrapScenario::reference(&consts);
    if let Some(m) = positive_real(a.mass_amu, &s.mass_amu, "mass-amu", prec)? {
        sc.mass = consts.mass_from_amu(&m);
    }
    if let Some(v) = positive_real(a.xi, &s.xi, "xi", prec)? {
        sc.xi = v;
    }
    if let Some(v) = positive_real(a.wavelength, &s.wavelength, "wavelength", prec)? {
        sc.wavelength = v;
    }
    if let Some(k) = cfg.k {
        sc.k = k;
    }
    sc.field = positive_real(a.field, &s.field, "field", prec)?;
    sc.beam_area = positive_real(a.beam_area, &s.beam_area, "beam-area", prec)?;
    sc.power = positive_real(a.power, &s.power, "power", prec)?;
    sc.omega_l = positive_real(a.omega_l, &s.omega_l, "omega-l", prec)?;
    sc.coupling = positive_real(a.coupling, &s.coupling, "coupling", prec)?;
    let (rows, warnings) = budget_report(&consts, &sc)?;
    for w in warnings {
        let _ = writeln!(err, "{}", json!({ "warning": w }));
    }
    let mut t = Table::new(&["quantity", "value", "unit"]);
    for r in rows {
        t.push(vec![r.quantity.into(), cfg.num(&r.value), r.unit.into()]);
    }
    Ok(t)
}

fn cmd_fit(cfg: &Config, input: &PathBuf) -> Outcome<Table> {
    let text = std::fs::read_to_string(input).map_err(Error::from)?;
    let (header, rows) = read_csv(&text)?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Failure::Run(Error::argument(format!("input has no {name} column"))))
    };
    let (ni, wi) = (col("N_R")?, col("W")?);
    let prec = cfg.prec;
    let points = rows
        .iter()
        .map(|r| {
            let n_rabi = match r[ni].parse::<PulseArea>() {
                Ok(a) => a.to_real(prec),
                Err(_) => prec.parse(&r[ni])?,
            };
            Ok(EnvelopePoint::new(n_rabi, prec.parse(&r[wi])?))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let fit = fit_exponential(&points)?;
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec!["amplitude".into(), cfg.num(&fit.amplitude)]);
    t.push(vec!["rate".into(), cfg.num(&fit.rate)]);
    t.push(vec!["rms_residual".into(), cfg.num(&fit.rms_residual)]);
    t.push(vec!["n_used".into(), fit.n_used.to_string()]);
    t.push(vec!["n_excluded".into(), fit.n_excluded.to_string()]);
    Ok(t)
}

/// Returns the table and whether every check passed.
fn cmd_check(
    cfg: &Config,
    only: Option<&str>,
    scale: f64,
    out: &mut dyn Write,
) -> Outcome<(Table, bool)> {
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(usage("--tolerance-scale must be finite and non-negative"));
    }
    if let Some(id) = only {
        if crate::check::criterion(id).is_none() {
            return Err(usage(format!("--only: unknown check {id:?}")));
        }
    }
    let opts = CheckOptions {
        tolerance_scale: scale,
        seed: cfg.seed,
    };
    let outcomes = run_checks(only, opts)?;
    let mut t = Table::new(&["criterion", "clause", "measured", "bound", "status"]);
    let mut all = true;
    for o in &outcomes {
        let _ = write!(out, "{o}");
        all &= o.passed();
        for c in &o.clauses {
            let status = if c.passed { "PASS" } else { "FAIL" };
            t.push(vec![
                o.id.into(),
                c.label.clone(),
                format!("{:e}", c.measured),
                c.bound.to_string(),
                status.into(),
            ]);
        }
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.id)
        .collect();
    let _ = if failed.is_empty() {
        writeln!(out, "all {} checks passed", outcomes.len())
    } else {
        writeln!(
            out,
            "{} of {} checks failed: {}",
            failed.len(),
            outcomes.len(),
            failed.join(", ")
        )
    };
    Ok((t, all))
}

/// Runs the command line `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn execute_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match run(cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(
                err,
                "{}",
                json!({ "error": e.kind(), "message": e.to_string() })
            );
            1
        }
    }
}

/// [`execute_with`] on the process arguments and standard streams.
pub fn execute() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome<i32> {
    let cfg = Config::resolve(cli.global)?;
    let mut code = 0;
    let table = match cli.command {
        Command::Sums { which } => cmd_sums(&cfg, &which)?,
        Command::Map => cmd_map(&cfg)?,
        Command::Inversion { envelope } => cmd_inversion(&cfg, envelope)?,
        Command::Profile => cmd_profile(&cfg)?,
        Command::Failprob => cmd_failprob(&cfg)?,
        Command::Budget(a) => cmd_budget(&cfg, a, err)?,
        Command::Fit { input } => cmd_fit(&cfg, &input)?,
        Command::Check {
            only,
            tolerance_scale,
        } => {
            let (t, passed) = cmd_check(&cfg, only.as_deref(), tolerance_scale, out)?;
            if !passed {
                code = 1;
            }
            // the report already went to `out`; the table only to a file
            if cfg.output.is_none() {
                return Ok(code);
            }
            t
        }
    };
    let text = table.render(cfg.format);
    match &cfg.output {
        Some(path) => write_atomic(path, &text)?,
        None => out.write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(code)
}

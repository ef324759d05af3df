//! Photon-number estimates for driving a trapped-ion qubit with a laser pulse.
//!
//! All quantities are SI. Ion masses may be given in atomic mass units,
//! converted with `u = 1.66057e-27 kg`.

use rug::ops::Pow;
use rug::Float;

use crate::area::PulseArea;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

/// Rounded coefficient of `k M^{-1/4} ξ^{-9/4} λ^{7/4}` quoted in the literature.
pub const REFERENCE_COEFFICIENT: f64 = 6e7;
/// Rounded coefficient of `ξ^{-9/4} λ^{7/4}` for beryllium (`M = 9u`) at `k = 2`.
pub const REFERENCE_BE_COEFFICIENT: f64 = 3.4e14;

#[derive(Clone, Debug)]
pub struct PhysicalConstants {
    /// Vacuum permittivity, F/m.
    pub epsilon0: BigReal,
    /// Reduced Planck constant, J·s.
    pub hbar: BigReal,
    /// Elementary charge, C.
    pub e_charge: BigReal,
    /// Bohr radius, m.
    pub a0: BigReal,
    /// Speed of light, m/s.
    pub c_light: BigReal,
    /// Atomic mass unit, kg.
    pub amu: BigReal,
    prec: Precision,
}

impl PhysicalConstants {
    /// CODATA 2018 values with the four-digit atomic mass unit `1.66057e-27 kg`.
    pub fn new(prec: Precision) -> Self {
        let v = |s: &str| prec.parse(s).expect("constant literal");
        Self {
            epsilon0: v("8.8541878128e-12"),
            hbar: v("1.054571817e-34"),
            e_charge: v("1.602176634e-19"),
            a0: v("5.29177210903e-11"),
            c_light: v("299792458"),
            amu: v("1.66057e-27"),
            prec,
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    fn bits(&self) -> u32 {
        self.prec.bits()
    }

    /// Dipole moment scale `p = e a0`.
    pub fn dipole(&self) -> BigReal {
        Float::with_val(self.bits(), &self.e_charge * &self.a0)
    }

    pub fn mass_from_amu(&self, amu: &BigReal) -> BigReal {
        Float::with_val(self.bits(), amu * &self.amu)
    }

    /// `e² / (4π ε0)`
    fn coulomb(&self) -> BigReal {
        let bits = self.bits();
        let e2 = Float::with_val(bits, self.e_charge.square_ref());
        e2 / (self.prec.pi() * 4u32 * &self.epsilon0)
    }
}

fn positive(name: &str, v: &BigReal) -> Result<()> {
    if !v.is_finite() || *v <= 0 {
        return Err(Error::argument(format!(
            "{name} must be positive, got {}",
            v.to_f64()
        )));
    }
    Ok(())
}

/// Trap frequency `ω_t = √(e² / (4π ε0 M z_s³))` in rad/s.
pub fn trap_frequency(
    consts: &PhysicalConstants,
    mass: &BigReal,
    z_s: &BigReal,
) -> Result<BigReal> {
    positive("mass", mass)?;
    positive("ion separation", z_s)?;
    let bits = consts.bits();
    let z3 = Float::with_val(bits, z_s.pow(3u32));
    Ok((consts.coulomb() / mass / z3).sqrt())
}

/// Effective cross section `σ_eff = 3λ²/(8π)`.
pub fn effective_cross_section(consts: &PhysicalConstants, wavelength: &BigReal) -> BigReal {
    let bits = consts.bits();
    Float::with_val(bits, wavelength.square_ref()) * 3u32 / (consts.prec.pi() * 8u32)
}

/// `n̄_eff = (k/4)(ε0 σ_eff λ / p) E`.
pub fn effective_photon_number(
    consts: &PhysicalConstants,
    k: PulseArea,
    wavelength: &BigReal,
    field: &BigReal,
) -> Result<BigReal> {
    positive("wavelength", wavelength)?;
    positive("field", field)?;
    let bits = consts.bits();
    let sigma = effective_cross_section(consts, wavelength);
    let mut n = Float::with_val(bits, &consts.epsilon0 * &sigma) * wavelength / consts.dipole();
    n *= field;
    n *= k.to_real(consts.prec);
    Ok(n / 4u32)
}

/// `E < (2√(2ħ)/(p π)) (e²/4πε0)^{3/4} M^{-1/4} ξ^{-9/4} λ^{-5/4}` in V/m.
pub fn field_upper_bound(
    consts: &PhysicalConstants,
    mass: &BigReal,
    xi: &BigReal,
    wavelength: &BigReal,
) -> Result<BigReal> {
    positive("mass", mass)?;
    positive("ξ", xi)?;
    positive("wavelength", wavelength)?;
    let bits = consts.bits();
    let p = consts.precision();
    let two_sqrt = Float::with_val(bits, &consts.hbar * 2u32).sqrt() * 2u32;
    let mut e = two_sqrt / (consts.dipole() * p.pi());
    e *= Float::with_val(bits, consts.coulomb().pow(&p.ratio(3, 4)));
    e *= Float::with_val(bits, mass.pow(&p.ratio(-1, 4)));
    e *= Float::with_val(bits, xi.pow(&p.ratio(-9, 4)));
    e *= Float::with_val(bits, wavelength.pow(&p.ratio(-5, 4)));
    Ok(e)
}

/// Result of [`nbar_upper_bound`] together with its reference coefficients.
#[derive(Clone, Debug)]
pub struct NbarBound {
    /// The bound on `n̄` itself.
    pub value: BigReal,
    /// `(3 ε0^{1/4} / (32 a0² π^{11/4})) √(ħ/e)`, multiplying `k M^{-1/4} ξ^{-9/4} λ^{7/4}`.
    pub coefficient: BigReal,
    /// `coefficient · k · M^{-1/4}`, multiplying `ξ^{-9/4} λ^{7/4}`.
    pub scenario_coefficient: BigReal,
    pub reference_coefficient: f64,
    /// Non-fatal notes about parameters outside the range the bound was derived for.
    pub warnings: Vec<String>,
}

/// Symbolic prefactor `(3 ε0^{1/4} / (32 a0² π^{11/4})) √(ħ/e)`.
pub fn nbar_bound_coefficient(consts: &PhysicalConstants) -> BigReal {
    let bits = consts.bits();
    let p = consts.precision();
    let mut c = Float::with_val(bits, (&consts.epsilon0).pow(p.ratio(1, 4))) * 3u32;
    c /= Float::with_val(bits, consts.a0.square_ref()) * 32u32;
    c /= Float::with_val(bits, p.pi().pow(&p.ratio(11, 4)));
    c *= Float::with_val(bits, &consts.hbar / &consts.e_charge).sqrt();
    c
}

/// `n̄ < C k M^{-1/4} ξ^{-9/4} λ^{7/4}`.
pub fn nbar_upper_bound(
    consts: &PhysicalConstants,
    mass: &BigReal,
    k: PulseArea,
    xi: &BigReal,
    wavelength: &BigReal,
) -> Result<NbarBound> {
    positive("mass", mass)?;
    positive("ξ", xi)?;
    positive("wavelength", wavelength)?;
    let bits = consts.bits();
    let p = consts.precision();
    let mut warnings = Vec::new();
    let amu = Float::with_val(bits, mass / &consts.amu).to_f64();
    if !(9.0 - 1e-9..=200.0 + 1e-9).contains(&amu) {
        warnings.push(format!("ion mass {amu:.3} u is outside 9..200 u"));
    }
    let kf = k.to_f64();
    if kf <= 0.0 || kf > 2.0 {
        warnings.push(format!("pulse area index {k} is outside (0, 2]"));
    }
    if *xi < 1 {
        warnings.push(format!("ξ = {} is below 1", xi.to_f64()));
    }
    let coefficient = nbar_bound_coefficient(consts);
    let scenario_coefficient = Float::with_val(bits, &coefficient * k.to_real(p))
        * Float::with_val(bits, mass.pow(&p.ratio(-1, 4)));
    let mut value = scenario_coefficient.clone();
    value *= Float::with_val(bits, xi.pow(&p.ratio(-9, 4)));
    value *= Float::with_val(bits, wavelength.pow(&p.ratio(7, 4)));
    Ok(NbarBound {
        value,
        coefficient,
        scenario_coefficient,
        reference_coefficient: REFERENCE_COEFFICIENT,
        warnings,
    })
}

/// Photon count of a continuous beam, `n̄ ≈ (kπ/(ω_L d)) √(ε0 c A P / 2)`.
///
/// This counts every photon crossing the beam area and therefore greatly
/// overstates the number that actually couples to the ion.
pub fn nbar_continuous_mode(
    consts: &PhysicalConstants,
    k: PulseArea,
    omega_l: &BigReal,
    coupling: &BigReal,
    area: &BigReal,
    power: &BigReal,
) -> Result<BigReal> {
    positive("laser frequency", omega_l)?;
    positive("coupling constant", coupling)?;
    positive("beam area", area)?;
    positive("power", power)?;
    let bits = consts.bits();
    let p = consts.precision();
    let mut inner = Float::with_val(bits, &consts.epsilon0 * &consts.c_light);
    inner *= area;
    inner *= power;
    inner /= 2u32;
    let pre =
        Float::with_val(bits, k.to_real(p) * p.pi()) / Float::with_val(bits, omega_l * coupling);
    Ok(pre * inner.sqrt())
}

/// Inputs of a photon-budget evaluation.
#[derive(Clone, Debug)]
pub struct TrapScenario {
    /// Wavelength `λ`, m.
    pub wavelength: BigReal,
    /// Ion separation in wavelengths, `z_s = ξ λ`.
    pub xi: BigReal,
    /// Ion mass, kg.
    pub mass: BigReal,
    pub k: PulseArea,
    /// Field amplitude, V/m; the upper bound is used when absent.
    pub field: Option<BigReal>,
    /// Beam area, m².
    pub beam_area: Option<BigReal>,
    /// Beam power, W.
    pub power: Option<BigReal>,
    /// Laser angular frequency, rad/s.
    pub omega_l: Option<BigReal>,
    /// Coupling constant `d` of the continuous-mode estimate.
    pub coupling: Option<BigReal>,
}

impl TrapScenario {
    /// Beryllium ions two wavelengths apart driven at 1 µm with `k = 2`.
    pub fn reference(consts: &PhysicalConstants) -> Self {
        let p = consts.precision();
        Self {
            wavelength: p.parse("1e-6").expect("literal"),
            xi: p.int(2),
            mass: consts.mass_from_amu(&p.int(9)),
            k: PulseArea::integer(2).expect("k = 2"),
            field: None,
            beam_area: None,
            power: None,
            omega_l: None,
            coupling: None,
        }
    }
}

/// One `(quantity, value, unit)` row of a budget report.
#[derive(Clone, Debug)]
pub struct BudgetRow {
    pub quantity: &'static str,
    pub value: BigReal,
    pub unit: &'static str,
}

/// Trap frequency, field bound, effective photon number and `n̄` bound for a scenario.
pub fn budget_report(
    consts: &PhysicalConstants,
    s: &TrapScenario,
) -> Result<(Vec<BudgetRow>, Vec<String>)> {
    let bits = consts.bits();
    let z_s = Float::with_val(bits, &s.xi * &s.wavelength);
    let omega_t = trap_frequency(consts, &s.mass, &z_s)?;
    let e_bound = field_upper_bound(consts, &s.mass, &s.xi, &s.wavelength)?;
    let field = s.field.clone().unwrap_or_else(|| e_bound.clone());
    let n_eff = effective_photon_number(consts, s.k, &s.wavelength, &field)?;
    let bound = nbar_upper_bound(consts, &s.mass, s.k, &s.xi, &s.wavelength)?;
    let p = consts.precision();
    let mut rows = vec![
        BudgetRow {
            quantity: "trap_frequency",
            value: omega_t,
            unit: "rad/s",
        },
        BudgetRow {
            quantity: "field_upper_bound",
            value: e_bound,
            unit: "V/m",
        },
        BudgetRow {
            quantity: "field_used",
            value: field,
            unit: "V/m",
        },
        BudgetRow {
            quantity: "nbar_effective",
            value: n_eff,
            unit: "1",
        },
        BudgetRow {
            quantity: "nbar_upper_bound",
            value: bound.value,
            unit: "1",
        },
        BudgetRow {
            quantity: "bound_coefficient",
            value: bound.coefficient,
            unit: "kg^(1/4) m^(-7/4)",
        },
        BudgetRow {
            quantity: "bound_coefficient_reference",
            value: p.from_f64(REFERENCE_COEFFICIENT),
            unit: "kg^(1/4) m^(-7/4)",
        },
        BudgetRow {
            quantity: "scenario_coefficient",
            value: bound.scenario_coefficient,
            unit: "m^(-7/4)",
        },
    ];
    if let (Some(area), Some(power), Some(omega_l), Some(coupling)) =
        (&s.beam_area, &s.power, &s.omega_l, &s.coupling)
    {
        rows.push(BudgetRow {
            quantity: "nbar_continuous_mode",
            value: nbar_continuous_mode(consts, s.k, omega_l, coupling, area, power)?,
            unit: "1",
        });
    }
    Ok((rows, bound.warnings))
}

//! Photon-number bound for a two-ion gate and the continuous-beam estimate.

use pulsetrain::budget::{budget_report, nbar_upper_bound, PhysicalConstants, TrapScenario};
use pulsetrain::{format_sci, Precision};

fn main() -> pulsetrain::Result<()> {
    let c = PhysicalConstants::new(Precision::default());
    let p = c.precision();
    let mut s = TrapScenario::reference(&c);
    s.beam_area = Some(p.parse("1e-10")?);
    s.power = Some(p.parse("1e-3")?);
    s.omega_l = Some(p.parse("6.02e15")?);
    s.coupling = Some(p.parse("1e-29")?);

    let (rows, warnings) = budget_report(&c, &s)?;
    for r in rows {
        println!(
            "{:<28} {:>16} {}",
            r.quantity,
            format_sci(&r.value, 8),
            r.unit
        );
    }
    for w in warnings {
        println!("warning: {w}");
    }

    println!("bound versus separation at λ = 1 µm");
    for xi in [2, 5, 10, 50, 100] {
        let b = nbar_upper_bound(&c, &s.mass, s.k, &p.int(xi), &s.wavelength)?;
        println!("  ξ = {xi:>3}: n̄ < {:.4e}", b.value.to_f64());
    }
    Ok(())
}

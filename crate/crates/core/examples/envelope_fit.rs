//! Exponential fits A·exp(−b N_R) of the 2π-point envelope at n̄ = 10⁴.

use pulsetrain::fit::fit_envelope;
use pulsetrain::pulse::build_pulse_map;
use pulsetrain::series::Strategy;
use pulsetrain::Precision;

fn main() -> pulsetrain::Result<()> {
    let p = Precision::new(40)?;
    for k in ["1/2", "1", "2"] {
        let map = build_pulse_map(&p.int(10_000), k.parse()?, Strategy::Auto, p)?;
        for max in [400, 7000] {
            let fit = fit_envelope(&map, max)?;
            println!(
                "k = {k:<3} N_R <= {max:<4}: A = {:.5}  b = {:.3e}  rms = {:.1e}  ({} points)",
                fit.amplitude.to_f64(),
                fit.rate.to_f64(),
                fit.rms_residual.to_f64(),
                fit.n_used
            );
        }
    }
    Ok(())
}

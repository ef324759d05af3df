//! Gate failure probability averaged over pure input states, exactly and by
//! Monte Carlo, and the pulse count where it first reaches 1%.

use pulsetrain::pulse::{average_failure_probability, build_pulse_map, AverageMode, DEFAULT_SEED};
use pulsetrain::series::Strategy;
use pulsetrain::Precision;

fn main() -> pulsetrain::Result<()> {
    let p = Precision::default();
    let map = build_pulse_map(&p.int(10_000), "1".parse()?, Strategy::Auto, p)?;
    let mc = AverageMode::MonteCarlo {
        seed: DEFAULT_SEED,
        count: 2000,
    };
    for m in [2u64, 10, 50, 100, 200] {
        let exact = average_failure_probability(&map, m, AverageMode::Analytic)?;
        let sampled = average_failure_probability(&map, m, mc)?;
        println!(
            "m = {m:>3}: p_f = {:.6e}  (Monte Carlo {:.6e} ± {:.1e})",
            exact.mean.to_f64(),
            sampled.mean.to_f64(),
            sampled.std_error
        );
    }
    // π pulses: the ideal sequence is the identity only at even m
    for m in (2..).step_by(2) {
        if average_failure_probability(&map, m, AverageMode::Analytic)?.mean >= p.pow10(-2) {
            println!("first even m with p_f >= 1e-2: {m}");
            break;
        }
    }
    Ok(())
}

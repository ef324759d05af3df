//! Population inversion at n̄ = 10 under 2π pulses: the collapse at pulse
//! boundaries and the two maxima inside every pulse.

use pulsetrain::pulse::{
    build_pulse_map, inversion_sequence, local_maxima, BlochState, Evolution, ProfileGrid,
};
use pulsetrain::series::Strategy;
use pulsetrain::Precision;

fn main() -> pulsetrain::Result<()> {
    let p = Precision::default();
    let nbar = p.int(10);
    let k = "2".parse()?;
    let map = build_pulse_map(&nbar, k, Strategy::Auto, p)?;

    println!("inversion at pulse boundaries");
    for pt in inversion_sequence(&map, 30)?.iter().step_by(3) {
        println!(
            "  N_R = {:>3}  W = {:+.8}",
            pt.n_rabi.to_string(),
            pt.w.to_f64()
        );
    }

    let grid = ProfileGrid::new(&nbar, k, 200, Strategy::Auto, p)?;
    for m in 0..3 {
        let r = Evolution::new(&map, m)?.apply(&BlochState::excited(p));
        let w: Vec<f64> = grid.inversion(&r).iter().map(|v| v.to_f64()).collect();
        let peaks: Vec<String> = local_maxima(&w)
            .into_iter()
            .map(|i| format!("τ = {:.4} (W = {:+.4})", grid.taus[i].to_f64(), w[i]))
            .collect();
        println!("pulse {}: maxima at {}", m + 1, peaks.join(", "));
    }
    Ok(())
}

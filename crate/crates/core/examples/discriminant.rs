//! Sign of Δ(τ) = (a − d)² + 4bc across one pulse at n̄ = 10. Negative Δ
//! gives the rotating closed form for channel powers.

use pulsetrain::pulse::discriminant;
use pulsetrain::series::Strategy;
use pulsetrain::Precision;

fn main() -> pulsetrain::Result<()> {
    let p = Precision::default();
    let nbar = p.int(10);
    let n = 400;
    let mut positive = Vec::new();
    for i in 1..n {
        let tau = p.from_f64(i as f64 / n as f64);
        let d = discriminant(&nbar, &tau, Strategy::Auto, p)?.to_f64();
        if i % 40 == 0 {
            println!("τ = {:.3}  Δ = {d:+.5e}", i as f64 / n as f64);
        }
        if d >= 0.0 {
            positive.push(i as f64 / n as f64);
        }
    }
    println!("grid points with Δ >= 0: {positive:?}");
    Ok(())
}

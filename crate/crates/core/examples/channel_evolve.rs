//! Builds the affine Bloch channel of one pulse and applies it many times,
//! comparing the closed-form power with plain iteration.

use pulsetrain::pulse::{build_pulse_map, evolve, BlochState, Complex, PowerBranch};
use pulsetrain::series::Strategy;
use pulsetrain::{format_sci, Precision};

fn main() -> pulsetrain::Result<()> {
    let p = Precision::default();
    let map = build_pulse_map(&p.int(10_000), "1".parse()?, Strategy::Auto, p)?;
    let dec = map.decomposition();
    println!(
        "M1 = [[{}, {}], [{}, {}]]",
        format_sci(map.a(), 12),
        format_sci(map.b(), 12),
        format_sci(map.c(), 12),
        format_sci(map.d(), 12)
    );
    println!(
        "shift = (0, {}, {})",
        format_sci(&map.shift[1], 12),
        format_sci(&map.shift[2], 12)
    );
    println!("discriminant = {}", format_sci(&dec.delta, 12));
    assert_eq!(dec.branch(), PowerBranch::Trigonometric);

    // |+⟩ = (|0⟩ + |1⟩)/√2
    let h = p.ratio(1, 2).sqrt();
    let plus = BlochState::from_amplitudes(&Complex::real(h.clone()), &Complex::real(h))?;
    let mut r = plus.clone();
    for m in 1..=1000u64 {
        r = map.apply(&r);
        if [1, 10, 100, 1000].contains(&m) {
            let closed = evolve(&plus, &map, m)?;
            println!(
                "m = {m:>4}: r = ({:+.12}, {:+.12}, {:+.12})  |iterated - closed| = {:.1e}",
                closed.x().to_f64(),
                closed.y().to_f64(),
                closed.z().to_f64(),
                closed.max_abs_diff(&r).to_f64()
            );
        }
    }
    Ok(())
}

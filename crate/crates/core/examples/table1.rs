//! Channel sums S1..S7 at n̄ = 10⁴ for a 2π pulse, by the moment expansion
//! at two orders and by direct summation.
//!
//!     cargo run --release --example table1

use pulsetrain::series::{compute_pulse_sums, Strategy, SumIndex};
use pulsetrain::{format_sci, Precision, PulseArea};

fn main() -> pulsetrain::Result<()> {
    let prec = Precision::new(40)?;
    let nbar = prec.int(10_000);
    let k: PulseArea = "2".parse()?;

    let p10 = compute_pulse_sums(
        &nbar,
        k,
        &SumIndex::CHANNEL,
        Strategy::Taylor { order: 10 },
        prec,
    )?;
    let p15 = compute_pulse_sums(
        &nbar,
        k,
        &SumIndex::CHANNEL,
        Strategy::Taylor { order: 15 },
        prec,
    )?;
    let direct = compute_pulse_sums(
        &nbar,
        k,
        &SumIndex::CHANNEL,
        Strategy::Direct { l: 12 },
        prec,
    )?;

    println!(
        "{:<4} {:>34} {:>34} {:>34}",
        "sum", "order 10", "order 15", "direct"
    );
    for i in SumIndex::CHANNEL {
        println!(
            "{:<4} {:>34} {:>34} {:>34}",
            i.to_string(),
            format_sci(&p10[&i], 28),
            format_sci(&p15[&i], 28),
            format_sci(&direct[&i], 28)
        );
    }
    Ok(())
}

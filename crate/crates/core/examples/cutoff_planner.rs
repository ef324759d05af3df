//! Precision planning: truncation cutoff for direct sums, expansion order
//! and the Poisson window half-width.

use pulsetrain::series::{expansion_order, truncation_cutoff, window_bound_alpha};
use pulsetrain::Precision;

fn main() -> pulsetrain::Result<()> {
    let p = Precision::default();
    println!("truncation cutoff t(n̄, l)");
    for (nbar, l) in [(10, 20), (10, 5), (100, 12), (1000, 12)] {
        println!(
            "  n̄ = {nbar:>5}, l = {l:>2}: t = {}",
            truncation_cutoff(&p.int(nbar), l, p)?
        );
    }

    println!("expansion order p(n̄, l)");
    for (nbar, l) in [(10_000, 2), (1_000_000, 2), (1_000_000, 4)] {
        match expansion_order(&p.int(nbar), l, p) {
            Ok(order) => println!("  n̄ = {nbar:>8}, l = {l}: p = {order}"),
            Err(e) => println!("  n̄ = {nbar:>8}, l = {l}: {e}"),
        }
    }
    // too ambitious a target for this n̄
    if let Err(e) = expansion_order(&p.int(10_000), 20, p) {
        println!("  n̄ =    10000, l = 20: {e}");
    }

    println!("window half-width α₀(n̄, 2)");
    for nbar in [1_000, 10_000] {
        println!(
            "  n̄ = {nbar:>5}: α₀ = {:.6}",
            window_bound_alpha(&p.int(nbar), 2, p)?.to_f64()
        );
    }
    Ok(())
}

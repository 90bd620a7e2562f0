//! Finite-length Chernoff exponents of the TSB and of psi approaching the
//! closed-form exponent E(c) on the random ensemble.
//!
//! cargo run --release --example chernoff_convergence -- [rate] [c] [n...]

use std::time::Instant;

use tsbound::codes::{random_ensemble_spectrum, GrowthRate};
use tsbound::exponents::{chernoff_psi, chernoff_tsb, finite_n_exponent, tsb_exponent};

fn main() -> tsbound::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let rate = args.first().copied().unwrap_or(0.5);
    let c = args.get(1).copied().unwrap_or(0.8);
    let ns: Vec<usize> = if args.len() > 2 { args[2..].iter().map(|&x| x as usize).collect() } else { vec![64, 128, 256] };
    let e = tsb_exponent(&GrowthRate::RandomEnsemble { rate }, c)?;
    println!("R = {rate}, c = {c}: E(c) = {:.6} at delta* = {:.4}", e.exponent, e.delta_star);
    println!("{:>5} {:>12} {:>12} {:>12} {:>5} {:>8}", "n", "tsb", "psi", "psi - tsb", "w*", "secs");
    for n in ns {
        let spec = random_ensemble_spectrum(n, rate)?;
        let start = Instant::now();
        let t = chernoff_tsb(&spec, c)?;
        let p = chernoff_psi(&spec, c)?;
        let (et, ep) = (finite_n_exponent(t.log_value, n), finite_n_exponent(p.log_value, n));
        println!(
            "{n:>5} {et:>12.6} {ep:>12.6} {:>12.3e} {:>5} {:>8.2}",
            et - ep,
            p.layer.unwrap_or(0),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}

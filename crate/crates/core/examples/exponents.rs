//! Union-bound, TSB and random-coding exponents of random ensembles against
//! the reciprocal of Eb/N0.
//!
//! cargo run --release --example exponents

use tsbound::codes::GrowthRate;
use tsbound::exponents::{gallager_rce, tsb_exponent, union_exponent};

fn main() -> tsbound::Result<()> {
    for rate in [0.5, 0.9] {
        let growth = GrowthRate::RandomEnsemble { rate };
        println!("R = {rate}");
        println!("{:>9} {:>10} {:>10} {:>10} {:>10} {:>8}", "1/(Eb/N0)", "E_UB", "E_TSB", "E_RCE", "RCE-TSB", "delta*");
        let mut gap: f64 = 0.0;
        for i in 1..=16 {
            let inv = 0.05 * i as f64;
            let c = rate / inv;
            let u = union_exponent(&growth, c)?;
            let t = tsb_exponent(&growth, c)?;
            let r = gallager_rce(rate, c)?;
            gap = gap.max(r - t.exponent);
            println!(
                "{inv:>9.2} {:>10.6} {:>10.6} {:>10.6} {:>10.2e} {:>8.4}",
                u.exponent.max(0.0),
                t.exponent,
                r,
                r - t.exponent,
                t.delta_star
            );
        }
        println!("largest RCE - TSB gap: {gap:.5}\n");
    }
    Ok(())
}

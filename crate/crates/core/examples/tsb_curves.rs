//! TSB, ITSB, AHP and psi for Hamming(7,4) and Golay(23,12) over a dB grid.
//!
//! cargo run --release --example tsb_curves

use tsbound::bounds::{ahp, itsb, psi, tsb_block, ChannelPoint};
use tsbound::codes::{enumerate_spectrum, GeneratorMatrix};

fn main() -> tsbound::Result<()> {
    for (name, g) in [("hamming74", GeneratorMatrix::hamming74()), ("golay23", GeneratorMatrix::golay23())] {
        let (spec, _) = enumerate_spectrum(&g)?;
        println!("{name}: n = {}, k = {}, d_min = {}", g.n(), g.k(), spec.d_min());
        println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>4}", "Eb/N0", "tsb", "itsb", "ahp", "psi", "w*");
        for db in [0.0, 2.0, 4.0, 6.0, 8.0] {
            let ch = ChannelPoint::from_eb_n0_db(db, g.rate())?;
            let t = tsb_block(&spec, &ch)?;
            let i = itsb(&spec, &ch)?;
            let a = ahp(&spec, &ch)?;
            let p = psi(&spec, &ch)?;
            println!(
                "{db:>6.1} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>4}",
                t.value,
                i.value,
                a.value,
                p.value,
                a.ahp_layer.unwrap_or(0)
            );
        }
        println!();
    }
    Ok(())
}

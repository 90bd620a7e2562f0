//! Monte-Carlo ML decoding of Golay(23,12) next to the bounds it must
//! respect.
//!
//! cargo run --release --example simulate -- [trials]

use tsbound::bounds::{itsb, tsb_block, ChannelPoint};
use tsbound::codes::{enumerate_spectrum, GeneratorMatrix};
use tsbound::mcsim::simulate_ml;

fn main() -> tsbound::Result<()> {
    let trials = std::env::args().nth(1).map(|t| t.parse().expect("trial count")).unwrap_or(200_000);
    let g = GeneratorMatrix::golay23();
    let (spec, _) = enumerate_spectrum(&g)?;
    println!("{:>6} {:>12} {:>10} {:>12} {:>12}", "Eb/N0", "mc_wer", "mc_se", "tsb", "itsb");
    for db in [0.0, 1.0, 2.0, 3.0, 4.0] {
        let ch = ChannelPoint::from_eb_n0_db(db, g.rate())?;
        let mc = simulate_ml(&g, &ch, trials, 2024)?;
        println!(
            "{db:>6.1} {:>12.4e} {:>10.2e} {:>12.4e} {:>12.4e}",
            mc.block_error_rate,
            mc.block_std_error,
            tsb_block(&spec, &ch)?.value,
            itsb(&spec, &ch)?.value
        );
    }
    Ok(())
}

//! Bit-error TSB (spectrum reweighted by input weight) against the block
//! TSB and a Monte-Carlo bit error rate for Hamming(7,4).
//!
//! cargo run --release --example bit_error

use tsbound::bounds::{tsb_bit, tsb_block, ChannelPoint};
use tsbound::codes::{enumerate_spectrum, GeneratorMatrix};
use tsbound::mcsim::simulate_ml;

fn main() -> tsbound::Result<()> {
    let g = GeneratorMatrix::hamming74();
    let (spec, io) = enumerate_spectrum(&g)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "Eb/N0", "tsb_block", "tsb_bit", "mc_ber", "mc_se");
    for db in [0.0, 2.0, 4.0, 6.0] {
        let ch = ChannelPoint::from_eb_n0_db(db, g.rate())?;
        let block = tsb_block(&spec, &ch)?;
        let bit = tsb_bit(&io, &ch)?;
        let mc = simulate_ml(&g, &ch, 400_000, 11)?;
        println!(
            "{db:>6.1} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.2e}",
            block.value, bit.value, mc.bit_error_rate, mc.bit_std_error
        );
    }
    Ok(())
}

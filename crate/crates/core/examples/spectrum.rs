//! Distance spectrum, input-output weight enumerator and bit-weight
//! spectrum of a code given by its generator matrix.
//!
//! cargo run --example spectrum -- [generator file]   (default: Golay(23,12))

use tsbound::codes::{bit_weight_transform, enumerate_spectrum, spectrum_to_json, GeneratorMatrix};

fn main() -> tsbound::Result<()> {
    let g = match std::env::args().nth(1) {
        Some(path) => GeneratorMatrix::load(path)?,
        None => GeneratorMatrix::golay23(),
    };
    print!("generator:\n{}", g.to_text());
    let (spec, io) = enumerate_spectrum(&g)?;
    let bit = bit_weight_transform(&io)?;
    println!("\nn = {}, k = {}, R = {:.4}, d_min = {}", g.n(), g.k(), g.rate(), spec.d_min());
    println!("{:>4} {:>10} {:>14}", "h", "A_h", "A'_h");
    for h in 1..=spec.n() {
        if spec.ln_count(h) > f64::NEG_INFINITY {
            println!("{h:>4} {:>10} {:>14.6}", spec.count(h).round(), bit.count(h));
        }
    }
    println!("\ninput weights of the minimum-distance words:");
    for (w, h, ln_a) in io.entries().filter(|&(_, h, _)| h == spec.d_min()) {
        println!("  w = {w:>2}, h = {h}: {}", ln_a.exp().round());
    }
    println!("\n{}", spectrum_to_json(&spec));
    Ok(())
}

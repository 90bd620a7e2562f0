//! Optimal cone radius of the TSB for a few spectra, with a sign scan of
//! the optimality equation.
//!
//! cargo run --example cone_radius

use tsbound::bounds::{cone_equation, cone_radius_or_unbounded};
use tsbound::codes::{enumerate_spectrum, random_ensemble_spectrum, DistanceSpectrum, GeneratorMatrix};

fn report(name: &str, spec: &DistanceSpectrum) -> tsbound::Result<()> {
    let r = cone_radius_or_unbounded(spec)?;
    let n = spec.n() as f64;
    if r.is_infinite() {
        println!("{name:<16} no finite root: the cone degenerates to a half-space");
        return Ok(());
    }
    let residual = cone_equation(spec, r)?;
    let mut changes = 0;
    let mut prev = f64::NAN;
    for i in 1..=10_000 {
        let v = cone_equation(spec, 5.0 * r * i as f64 / 10_000.0)?;
        if prev.is_finite() && v.is_finite() && (prev < 0.0) != (v < 0.0) {
            changes += 1;
        }
        prev = v;
    }
    println!(
        "{name:<16} r* = {r:>10.6}  r*/sqrt(n) = {:>8.5}  theta = {:>7.4} rad  residual = {residual:>9.2e}  sign changes on (0, 5r*] = {changes}",
        r / n.sqrt(),
        (r / n.sqrt()).atan()
    );
    Ok(())
}

fn main() -> tsbound::Result<()> {
    report("hamming(7,4)", &enumerate_spectrum(&GeneratorMatrix::hamming74())?.0)?;
    report("golay(23,12)", &enumerate_spectrum(&GeneratorMatrix::golay23())?.0)?;
    report("repetition(5)", &enumerate_spectrum(&GeneratorMatrix::repetition(5)?)?.0)?;
    for n in [64, 256, 1024] {
        report(&format!("ensemble {n}, R=.5"), &random_ensemble_spectrum(n, 0.5)?)?;
    }
    Ok(())
}

//! Generator matrices, exhaustive weight enumeration, ensemble spectra and
//! spectrum files.

mod generator;
mod io;
mod spectrum;

pub use generator::{enumerate_spectrum, GeneratorMatrix, ENUMERATION_CAP};
pub use io::{load_spectrum, save_spectrum, spectrum_from_json, spectrum_to_json};
pub use spectrum::{
    binary_entropy, bit_weight_transform, growth_rate, ln_binomial, random_ensemble_spectrum, DistanceSpectrum,
    GrowthRate, Iowef, SpectrumKind,
};

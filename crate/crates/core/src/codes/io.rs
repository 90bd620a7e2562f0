use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spectrum::{DistanceSpectrum, SpectrumKind};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LogEntry {
    Value(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumFile {
    kind: SpectrumKind,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rate: Option<f64>,
    d_min: usize,
    log_a: Vec<LogEntry>,
}

/// Serialises a spectrum as
/// `{"kind", "n", "rate"?, "d_min", "log_a": [number | "-inf", ...]}`.
pub fn spectrum_to_json(spec: &DistanceSpectrum) -> String {
    let file = SpectrumFile {
        kind: spec.kind(),
        n: spec.n(),
        rate: spec.rate(),
        d_min: spec.d_min(),
        log_a: spec
            .log_a()
            .iter()
            .map(|&v| if v == f64::NEG_INFINITY { LogEntry::Text("-inf".into()) } else { LogEntry::Value(v) })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("spectrum serialises");
    s.push('\n');
    s
}

/// Parses and validates the JSON spectrum format.  Syntax errors carry the
/// offending line; semantic errors name the field.
pub fn spectrum_from_json(text: &str) -> Result<DistanceSpectrum> {
    let file: SpectrumFile =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let mut log_a = Vec::with_capacity(file.log_a.len());
    for (h, e) in file.log_a.into_iter().enumerate() {
        log_a.push(match e {
            LogEntry::Value(v) => v,
            LogEntry::Text(t) if t == "-inf" => f64::NEG_INFINITY,
            LogEntry::Text(t) => {
                return Err(Error::InvalidSpectrum(format!("log_a[{h}]: expected a number or \"-inf\", found {t:?}")))
            }
        });
    }
    let spec = DistanceSpectrum::from_log_counts(file.kind, file.n, file.rate, log_a)?;
    if spec.d_min() != file.d_min {
        return Err(Error::InvalidSpectrum(format!(
            "d_min: file says {}, spectrum implies {}",
            file.d_min,
            spec.d_min()
        )));
    }
    Ok(spec)
}

pub fn save_spectrum(spec: &DistanceSpectrum, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, spectrum_to_json(spec))?;
    Ok(())
}

pub fn load_spectrum(path: impl AsRef<Path>) -> Result<DistanceSpectrum> {
    spectrum_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{enumerate_spectrum, random_ensemble_spectrum, GeneratorMatrix};

    #[test]
    fn round_trip_is_bit_identical() {
        let (s, _) = enumerate_spectrum(&GeneratorMatrix::hamming74()).unwrap();
        let back = spectrum_from_json(&spectrum_to_json(&s)).unwrap();
        assert_eq!(back, s);
        for (a, b) in back.log_a().iter().zip(s.log_a()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let e = random_ensemble_spectrum(100, 0.3).unwrap();
        assert_eq!(spectrum_from_json(&spectrum_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn code_with_nonzero_a0_is_rejected() {
        let text = r#"{"kind":"code","n":3,"d_min":3,"log_a":[0.1,"-inf","-inf",0.0]}"#;
        assert!(matches!(spectrum_from_json(text), Err(Error::InvalidSpectrum(_))));
    }

    #[test]
    fn wrong_length_and_bad_tokens() {
        let text = r#"{"kind":"code","n":3,"d_min":3,"log_a":[0.0,"-inf",0.0]}"#;
        assert!(spectrum_from_json(text).is_err());
        let text = r#"{"kind":"code","n":3,"d_min":3,"log_a":[0.0,"inf","-inf",0.0]}"#;
        assert!(spectrum_from_json(text).is_err());
        let text = r#"{"kind":"code","n":3,"d_min":2,"log_a":[0.0,"-inf","-inf",0.0]}"#;
        assert!(spectrum_from_json(text).is_err());
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = "{\n\"kind\": \"code\",\n\"n\": 3,\n\"d_min\" 3\n}";
        match spectrum_from_json(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }
}

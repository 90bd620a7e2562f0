//! Command-line front end: `spectrum`, `bounds`, `exponent`, `simulate`.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numeric failure.
//!
//! CSV contracts:
//! * `bounds`: `eb_n0_db,c,<bound>,log_<bound>,...`; exponent-valued columns
//!   (`union-exp`, `tsb-exp`, `rce`) carry no `log_` column.  Failed cells are
//!   written as `nan` and explained in the diagnostics sidecar.
//! * `exponent`: `inv_eb_n0,e_ub,e_tsb,e_rce,delta_star`, with vacuous
//!   exponents written as 0 and flagged in the diagnostics.
//!
//! Floats are written with 17 significant digits.  Diagnostics go to
//! `<out>.diagnostics.txt` when `--out` is given and to stderr otherwise.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{ahp_with, itsb_with, psi_with, tsb_bit_with, tsb_block_with, BoundConfig, ChannelPoint};
use crate::codes::{
    enumerate_spectrum, load_spectrum, random_ensemble_spectrum, spectrum_to_json, DistanceSpectrum, GeneratorMatrix,
    GrowthRate, Iowef,
};
use crate::error::{Error, Result};
use crate::exponents::{chernoff_psi, chernoff_tsb, gallager_rce, tsb_exponent, union_exponent};
use crate::mcsim::{simulate_ml_with, McEstimate, Transmit};
use crate::numerics::Tolerance;

#[derive(Parser, Debug)]
#[command(name = "tsbound", version, about = "Tangential-sphere bounds and error exponents for binary linear codes on BPSK-AWGN")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute tolerance of the outer quadrature
    #[arg(long, global = true)]
    tol_abs: Option<f64>,
    /// Relative tolerance of the outer quadrature
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Random seed for simulations
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the distance spectrum of a generator matrix
    Spectrum {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Sweep finite-length bounds over an Eb/N0 grid
    Bounds(BoundsArgs),
    /// Sweep asymptotic exponents over an inverse-Eb/N0 grid
    Exponent(ExponentArgs),
    /// Monte-Carlo ML decoding
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Generator matrix file: "k n" then k rows of 0/1
    #[arg(long, conflicts_with = "builtin")]
    generator: Option<PathBuf>,
    /// Built-in code
    #[arg(long)]
    builtin: Option<Builtin>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Builtin {
    Hamming74,
    Golay23,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BoundKind {
    Tsb,
    TsbBit,
    Itsb,
    Ahp,
    Psi,
    ChernoffTsb,
    ChernoffPsi,
    UnionExp,
    TsbExp,
    Rce,
}

impl BoundKind {
    fn name(self) -> &'static str {
        match self {
            BoundKind::Tsb => "tsb",
            BoundKind::TsbBit => "tsb-bit",
            BoundKind::Itsb => "itsb",
            BoundKind::Ahp => "ahp",
            BoundKind::Psi => "psi",
            BoundKind::ChernoffTsb => "chernoff-tsb",
            BoundKind::ChernoffPsi => "chernoff-psi",
            BoundKind::UnionExp => "union-exp",
            BoundKind::TsbExp => "tsb-exp",
            BoundKind::Rce => "rce",
        }
    }

    fn is_exponent(self) -> bool {
        matches!(self, BoundKind::UnionExp | BoundKind::TsbExp | BoundKind::Rce)
    }
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Spectrum JSON file
    #[arg(long, conflicts_with_all = ["generator", "builtin", "ensemble"])]
    spectrum: Option<PathBuf>,
    /// Random-ensemble block length (use with --rate)
    #[arg(long, conflicts_with_all = ["generator", "builtin"], requires = "rate")]
    ensemble: Option<usize>,
    /// Code rate for --ensemble
    #[arg(long)]
    rate: Option<f64>,
    /// Eb/N0 grid in dB, start:stop:step or a single value
    #[arg(long)]
    snr: String,
    /// Comma-separated bounds
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    bounds: Vec<BoundKind>,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    /// Rate of the random ensemble
    #[arg(long, conflicts_with = "spectrum")]
    rate: Option<f64>,
    /// Spectrum JSON file, used through its growth rate ln(A_h)/n
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Grid of 1/(Eb/N0) (linear), start:stop:step or a single value
    #[arg(long)]
    grid: String,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Eb/N0 in dB
    #[arg(long)]
    snr: f64,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// Send a random codeword in each trial instead of the all-zero word
    #[arg(long)]
    random_codeword: bool,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::Bracket { .. } | Error::NoSolution(_) => 3,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let common = &cli.common;
    match &cli.cmd {
        Command::Spectrum { code } => cmd_spectrum(code, common),
        Command::Bounds(a) => cmd_bounds(a, common),
        Command::Exponent(a) => cmd_exponent(a, common),
        Command::Simulate(a) => cmd_simulate(a, common),
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

fn load_code(code: &CodeArgs) -> Result<(GeneratorMatrix, String)> {
    match (&code.generator, code.builtin) {
        (Some(p), _) => Ok((GeneratorMatrix::load(p)?, p.display().to_string())),
        (None, Some(Builtin::Hamming74)) => Ok((GeneratorMatrix::hamming74(), "hamming74".into())),
        (None, Some(Builtin::Golay23)) => Ok((GeneratorMatrix::golay23(), "golay23".into())),
        (None, None) => usage("a code source is required (--generator or --builtin)"),
    }
}

/// Parses `start:stop:step` (inclusive) or a single number.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Usage(format!("bad number {t:?} in grid {s:?}")));
    match parts.len() {
        1 => {
            let v = num(parts[0])?;
            if !v.is_finite() {
                return usage(format!("grid value must be finite: {s:?}"));
            }
            Ok(vec![v])
        }
        3 => {
            let (a, b, st) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(a.is_finite() && b.is_finite() && st.is_finite()) {
                return usage(format!("grid values must be finite: {s:?}"));
            }
            if !(st > 0.0) {
                return usage(format!("grid step must be positive: {s:?}"));
            }
            if b < a {
                return usage(format!("grid stop is below start: {s:?}"));
            }
            let count = ((b - a) / st + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| a + st * i as f64).collect())
        }
        _ => usage(format!("grid must be start:stop:step or a single value, got {s:?}")),
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_diagnostics(out: Option<&Path>, lines: &[String]) -> Result<()> {
    if lines.is_empty() {
        return Ok(());
    }
    let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".diagnostics.txt");
            std::fs::write(PathBuf::from(name), text)?;
        }
        None => eprint!("{text}"),
    }
    Ok(())
}

fn cmd_spectrum(code: &CodeArgs, common: &Common) -> Result<i32> {
    let (g, _) = load_code(code)?;
    let (spec, _) = enumerate_spectrum(&g)?;
    let json = spectrum_to_json(&spec);
    let mut table = format!("# n = {}, k = {}, d_min = {}\n{:>4}  {:>12}\n", g.n(), g.k(), spec.d_min(), "h", "A_h");
    for h in 0..=spec.n() {
        if spec.ln_count(h) > f64::NEG_INFINITY {
            let _ = writeln!(table, "{h:>4}  {:>12}", spec.count(h).round());
        }
    }
    match &common.out {
        Some(p) => {
            std::fs::write(p, json)?;
            print!("{table}");
        }
        None => {
            print!("{json}");
            eprint!("{table}");
        }
    }
    Ok(0)
}

struct Source {
    spec: DistanceSpectrum,
    io: Option<Iowef>,
    rate: f64,
    growth: GrowthRate,
}

fn bounds_source(a: &BoundsArgs) -> Result<Source> {
    if let Some(p) = &a.spectrum {
        let spec = load_spectrum(p)?;
        let Some(rate) = spec.rate() else {
            return usage("the spectrum file has no rate; add \"rate\" to use it for bounds");
        };
        return Ok(Source { growth: GrowthRate::Tabulated(spec.clone()), spec, io: None, rate });
    }
    if let Some(n) = a.ensemble {
        let rate = a.rate.unwrap_or(f64::NAN);
        let spec = random_ensemble_spectrum(n, rate)?;
        return Ok(Source { spec, io: None, rate, growth: GrowthRate::RandomEnsemble { rate } });
    }
    if a.code.generator.is_none() && a.code.builtin.is_none() {
        return usage("a code source is required (--generator, --builtin, --spectrum or --ensemble)");
    }
    let (g, _) = load_code(&a.code)?;
    let (spec, io) = enumerate_spectrum(&g)?;
    Ok(Source { growth: GrowthRate::Tabulated(spec.clone()), spec, io: Some(io), rate: g.rate() })
}

fn tolerances(common: &Common) -> Result<BoundConfig> {
    let mut cfg = BoundConfig::default();
    let outer = Tolerance {
        abs_tol: common.tol_abs.unwrap_or(cfg.outer.abs_tol),
        rel_tol: common.tol_rel.unwrap_or(cfg.outer.rel_tol),
        max_iter: cfg.outer.max_iter,
    };
    outer.validate().map_err(|e| Error::Usage(e.to_string()))?;
    cfg.outer = outer;
    Ok(cfg)
}

/// `(value, log value)` of one cell; exponents have no log column.
fn eval_cell(kind: BoundKind, src: &Source, ch: &ChannelPoint, cfg: &BoundConfig) -> Result<(f64, f64)> {
    let prob = |r: crate::bounds::BoundResult| Ok((r.value, r.log_value));
    let chern = |v: f64| Ok((v.exp(), v));
    match kind {
        BoundKind::Tsb => prob(tsb_block_with(&src.spec, ch, cfg)?),
        BoundKind::TsbBit => match &src.io {
            Some(io) => prob(tsb_bit_with(io, ch, cfg)?),
            None => usage("tsb-bit needs a generator matrix (--generator or --builtin)"),
        },
        BoundKind::Itsb => prob(itsb_with(&src.spec, ch, cfg)?),
        BoundKind::Ahp => prob(ahp_with(&src.spec, ch, cfg)?),
        BoundKind::Psi => prob(psi_with(&src.spec, ch, cfg)?),
        BoundKind::ChernoffTsb => chern(chernoff_tsb(&src.spec, ch.c())?.log_value),
        BoundKind::ChernoffPsi => chern(chernoff_psi(&src.spec, ch.c())?.log_value),
        BoundKind::UnionExp => Ok((union_exponent(&src.growth, ch.c())?.exponent, f64::NAN)),
        BoundKind::TsbExp => Ok((tsb_exponent(&src.growth, ch.c())?.exponent, f64::NAN)),
        BoundKind::Rce => Ok((gallager_rce(src.rate, ch.c())?, f64::NAN)),
    }
}

fn cmd_bounds(a: &BoundsArgs, common: &Common) -> Result<i32> {
    if a.bounds.is_empty() {
        return usage("--bounds must name at least one bound");
    }
    let grid = parse_grid(&a.snr)?;
    let cfg = tolerances(common)?;
    let src = bounds_source(a)?;
    if a.bounds.contains(&BoundKind::TsbBit) && src.io.is_none() {
        return usage("tsb-bit needs a generator matrix (--generator or --builtin)");
    }
    let channels = grid.iter().map(|&db| ChannelPoint::from_eb_n0_db(db, src.rate)).collect::<Result<Vec<_>>>()?;
    let cells: Vec<Vec<Result<(f64, f64)>>> = channels
        .par_iter()
        .map(|ch| a.bounds.iter().map(|&k| eval_cell(k, &src, ch, &cfg)).collect())
        .collect();

    let mut csv = String::from("eb_n0_db,c");
    for k in &a.bounds {
        let _ = write!(csv, ",{}", k.name());
        if !k.is_exponent() {
            let _ = write!(csv, ",log_{}", k.name());
        }
    }
    csv.push('\n');
    let mut diags = Vec::new();
    let mut failures = 0;
    for ((db, ch), row) in grid.iter().zip(&channels).zip(&cells) {
        let _ = write!(csv, "{},{}", fmt_num(*db), fmt_num(ch.c()));
        for (k, cell) in a.bounds.iter().zip(row) {
            let (v, lv) = match cell {
                Ok(x) => *x,
                Err(e) => {
                    failures += 1;
                    diags.push(format!("eb_n0_db={} bound={}: {e}", fmt_num(*db), k.name()));
                    (f64::NAN, f64::NAN)
                }
            };
            let _ = write!(csv, ",{}", fmt_num(v));
            if !k.is_exponent() {
                let _ = write!(csv, ",{}", fmt_num(lv));
            }
        }
        csv.push('\n');
    }
    write_output(common.out.as_deref(), &csv)?;
    write_diagnostics(common.out.as_deref(), &diags)?;
    Ok(if failures == grid.len() * a.bounds.len() { 3 } else { 0 })
}

fn cmd_exponent(a: &ExponentArgs, common: &Common) -> Result<i32> {
    let grid = parse_grid(&a.grid)?;
    if grid.iter().any(|&x| !(x > 0.0)) {
        return usage("inverse Eb/N0 values must be positive");
    }
    let (growth, rate) = match (a.rate, &a.spectrum) {
        (Some(r), _) => {
            if !(r > 0.0 && r < 1.0) {
                return usage(format!("rate must lie in (0, 1), got {r}"));
            }
            (GrowthRate::RandomEnsemble { rate: r }, r)
        }
        (None, Some(p)) => {
            let spec = load_spectrum(p)?;
            let Some(r) = spec.rate() else {
                return usage("the spectrum file has no rate");
            };
            (GrowthRate::Tabulated(spec), r)
        }
        (None, None) => return usage("--rate or --spectrum is required"),
    };
    let rows: Vec<Result<[f64; 5]>> = grid
        .par_iter()
        .map(|&inv| {
            let c = rate / inv;
            let u = union_exponent(&growth, c)?;
            let t = tsb_exponent(&growth, c)?;
            let r = gallager_rce(rate, c)?;
            Ok([inv, u.exponent, t.exponent, r, t.delta_star])
        })
        .collect();
    let mut csv = String::from("inv_eb_n0,e_ub,e_tsb,e_rce,delta_star\n");
    let mut diags = Vec::new();
    let mut failures = 0;
    for (&inv, row) in grid.iter().zip(rows) {
        match row {
            Ok([_, u, t, r, d]) => {
                for (name, v) in [("e_ub", u), ("e_tsb", t), ("e_rce", r)] {
                    if v <= 0.0 {
                        diags.push(format!("inv_eb_n0={} {name}: vacuous (objective {}), written as 0", fmt_num(inv), fmt_num(v)));
                    }
                }
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    fmt_num(inv),
                    fmt_num(u.max(0.0)),
                    fmt_num(t.max(0.0)),
                    fmt_num(r.max(0.0)),
                    fmt_num(d)
                );
            }
            Err(e) => {
                failures += 1;
                diags.push(format!("inv_eb_n0={}: {e}", fmt_num(inv)));
                let _ = writeln!(csv, "{},nan,nan,nan,nan", fmt_num(inv));
            }
        }
    }
    write_output(common.out.as_deref(), &csv)?;
    write_diagnostics(common.out.as_deref(), &diags)?;
    Ok(if failures == grid.len() { 3 } else { 0 })
}

#[derive(Serialize)]
struct SimulateConfig {
    code: String,
    n: usize,
    k: usize,
    rate: f64,
    eb_n0_db: f64,
    c: f64,
    trials: u64,
    seed: u64,
    transmit: Transmit,
}

#[derive(Serialize)]
struct SimulateReport {
    config: SimulateConfig,
    estimate: McEstimate,
}

fn cmd_simulate(a: &SimulateArgs, common: &Common) -> Result<i32> {
    if a.trials == 0 {
        return usage("--trials must be positive");
    }
    let (g, name) = load_code(&a.code)?;
    let ch = ChannelPoint::from_eb_n0_db(a.snr, g.rate())?;
    let transmit = if a.random_codeword { Transmit::Random } else { Transmit::AllZero };
    let estimate = simulate_ml_with(&g, &ch, a.trials, common.seed, transmit)?;
    let report = SimulateReport {
        config: SimulateConfig {
            code: name,
            n: g.n(),
            k: g.k(),
            rate: g.rate(),
            eb_n0_db: a.snr,
            c: ch.c(),
            trials: a.trials,
            seed: common.seed,
            transmit,
        },
        estimate,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_output(common.out.as_deref(), &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:8:2").unwrap(), vec![0.0, 2.0, 4.0, 6.0, 8.0]);
        assert_eq!(parse_grid("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_grid("3").unwrap(), vec![3.0]);
        assert!(parse_grid("0:8:0").is_err());
        assert!(parse_grid("8:0:1").is_err());
        assert!(parse_grid("a:b").is_err());
    }

    #[test]
    fn lossless_numbers() {
        let v = 0.1f64 + 0.2;
        assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        assert_eq!(fmt_num(f64::NAN), "nan");
    }
}

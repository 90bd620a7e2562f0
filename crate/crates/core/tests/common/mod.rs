#![allow(dead_code)]

use std::path::PathBuf;

use tsbound::numerics::{chi2_pdf, integrate_to_infinity, IncGamma, ln_sin_power_integral, Tolerance};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn read_rows(name: &str) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture present");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(|v| v.trim().parse::<f64>().expect("numeric fixture")).collect())
        .collect()
}

fn log_close(got: f64, want: f64, tol: f64) -> bool {
    if want == 0.0 || want.is_infinite() {
        return got == want || (got - want).abs() <= tol;
    }
    (got - want).abs() <= tol * want.abs().max(1.0)
}

/// Worst scaled log error against the incomplete-gamma fixture, and the
/// number of rows outside `tol`.
pub fn check_inc_gamma(tol: f64) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for row in read_rows("inc_gamma.csv") {
        let (a, x, lp, lq) = (row[0], row[1], row[2], row[3]);
        let (gp, gq) = IncGamma::new(a).unwrap().logs(x);
        for (g, w) in [(gp, lp), (gq, lq)] {
            let e = (g - w).abs() / w.abs().max(1.0);
            worst = worst.max(e);
            if !log_close(g, w, tol) {
                bad += 1;
            }
        }
    }
    (worst, bad)
}

pub fn check_sin_power(tol: f64) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for row in read_rows("sin_power.csv") {
        let (m, theta, want) = (row[0] as u32, row[1], row[2]);
        let got = ln_sin_power_integral(m, theta).unwrap();
        worst = worst.max((got - want).abs() / want.abs().max(1.0));
        if !log_close(got, want, tol) {
            bad += 1;
        }
    }
    (worst, bad)
}

/// `int_0^inf` of the chi-square density, through `y = u^2` so that one degree
/// of freedom stays integrable.
pub fn chi2_mass(dof: f64, scale: f64) -> f64 {
    let tol = Tolerance { abs_tol: 1e-15, rel_tol: 1e-13, max_iter: 2000 };
    integrate_to_infinity(|u| if u == 0.0 { 0.0 } else { 2.0 * u * chi2_pdf(dof, scale, u * u).unwrap() }, 0.0, &tol).value
}

/// Worst `|mass - 1|` over dof `n-1, n-2, n-3` for `n = 4..=64`.
pub fn check_chi2(scale: f64) -> f64 {
    let mut worst = 0.0f64;
    for n in 4..=64usize {
        for dof in [n - 1, n - 2, n - 3] {
            worst = worst.max((chi2_mass(dof as f64, scale) - 1.0).abs());
        }
    }
    worst
}

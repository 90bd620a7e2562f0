use std::f64::consts::{FRAC_PI_2, LN_2, PI, SQRT_2};

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// `ln(1 - e^l)` for `l <= 0`, accurate on both sides of `-ln 2`.
pub fn ln_1m_exp(l: f64) -> f64 {
    if l > -LN_2 {
        (-l.exp_m1()).ln()
    } else {
        (-l.exp()).ln_1p()
    }
}

/// `ln(e^a + e^b)` without overflow.
pub fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(sum(exp(x_i)))`; an empty slice or all `-inf` entries give `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m == f64::INFINITY || m.is_nan() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Regularised incomplete gamma functions for a fixed shape `a`, with
/// `ln Gamma(a)` computed once.
///
/// `a = 0` is accepted as the degenerate chi-square law with zero degrees of
/// freedom (a point mass at the origin), for which `P(0, x) = 1` whenever
/// `x > 0`.
#[derive(Debug, Clone, Copy)]
pub struct IncGamma {
    a: f64,
    ln_gamma_a: f64,
}

impl IncGamma {
    pub fn new(a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return domain(format!("incomplete gamma shape must be finite and >= 0, got {a}"));
        }
        let ln_gamma_a = if a > 0.0 { ln_gamma(a) } else { 0.0 };
        Ok(IncGamma { a, ln_gamma_a })
    }

    pub fn shape(&self) -> f64 {
        self.a
    }

    /// `(ln P(a, x), ln Q(a, x))`.  Series below `x = a + 1`, continued
    /// fraction above; the complementary value is derived in log space.
    pub fn logs(&self, x: f64) -> (f64, f64) {
        let a = self.a;
        if x.is_nan() {
            return (f64::NAN, f64::NAN);
        }
        if x <= 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        if a == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if x == f64::INFINITY {
            return (0.0, f64::NEG_INFINITY);
        }
        let ln_pref = a * x.ln() - x - self.ln_gamma_a;
        if x < a + 1.0 {
            let mut ap = a;
            let mut del = 1.0 / a;
            let mut sum = del;
            for _ in 0..MAX_ITER {
                ap += 1.0;
                del *= x / ap;
                sum += del;
                if del.abs() < sum.abs() * EPS {
                    break;
                }
            }
            let ln_p = ln_pref + sum.ln();
            (ln_p.min(0.0), ln_1m_exp(ln_p.min(0.0)))
        } else {
            let mut b = x + 1.0 - a;
            let mut c = 1.0 / FPMIN;
            let mut d = 1.0 / b;
            let mut h = d;
            for i in 1..MAX_ITER {
                let an = -(i as f64) * (i as f64 - a);
                b += 2.0;
                d = an * d + b;
                if d.abs() < FPMIN {
                    d = FPMIN;
                }
                c = b + an / c;
                if c.abs() < FPMIN {
                    c = FPMIN;
                }
                d = 1.0 / d;
                let del = d * c;
                h *= del;
                if (del - 1.0).abs() < EPS {
                    break;
                }
            }
            let ln_q = ln_pref + h.ln();
            (ln_1m_exp(ln_q.min(0.0)), ln_q.min(0.0))
        }
    }

    pub fn p(&self, x: f64) -> f64 {
        self.logs(x).0.exp()
    }

    pub fn q(&self, x: f64) -> f64 {
        self.logs(x).1.exp()
    }

    pub fn ln_p(&self, x: f64) -> f64 {
        self.logs(x).0
    }

    pub fn ln_q(&self, x: f64) -> f64 {
        self.logs(x).1
    }
}

fn checked_gamma(a: f64, x: f64) -> Result<IncGamma> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("incomplete gamma requires a > 0, got a = {a}"));
    }
    if !(x >= 0.0) {
        return domain(format!("incomplete gamma requires x >= 0, got x = {x}"));
    }
    IncGamma::new(a)
}

/// Regularised lower incomplete gamma `P(a, x) = gamma(a, x) / Gamma(a)`.
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(checked_gamma(a, x)?.p(x))
}

/// Regularised upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_upper_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(checked_gamma(a, x)?.q(x))
}

pub fn ln_reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(checked_gamma(a, x)?.ln_p(x))
}

pub fn ln_reg_upper_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(checked_gamma(a, x)?.ln_q(x))
}

/// CDF of a chi-square variable with `dof` degrees of freedom scaled by
/// `scale` (the per-component variance), evaluated at `y`.
pub fn chi2_cdf(dof: f64, scale: f64, y: f64) -> Result<f64> {
    Ok(IncGamma::new(dof / 2.0)?.p(y / (2.0 * scale)))
}

pub fn chi2_sf(dof: f64, scale: f64, y: f64) -> Result<f64> {
    Ok(IncGamma::new(dof / 2.0)?.q(y / (2.0 * scale)))
}

/// Density matching [`chi2_cdf`].
pub fn chi2_pdf(dof: f64, scale: f64, y: f64) -> Result<f64> {
    if !(dof > 0.0 && scale > 0.0) {
        return domain(format!("chi-square needs dof > 0 and scale > 0 (dof = {dof}, scale = {scale})"));
    }
    if y < 0.0 {
        return Ok(0.0);
    }
    let k = dof / 2.0;
    let x = y / (2.0 * scale);
    if x == 0.0 {
        return Ok(if k < 1.0 { f64::INFINITY } else if k == 1.0 { 0.5 / scale } else { 0.0 });
    }
    Ok(((k - 1.0) * x.ln() - x - ln_gamma(k)).exp() / (2.0 * scale))
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `ln Q(x)`, accurate far into the upper tail.
pub fn ln_q_function(x: f64) -> f64 {
    if x < -8.0 {
        return (-q_function(-x)).ln_1p();
    }
    if x <= 8.0 {
        return q_function(x).ln();
    }
    if x == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    // Q(x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...))))
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for i in 1..MAX_ITER {
        let ai = i as f64;
        d = x + ai * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = x + ai / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    -0.5 * x * x - 0.5 * (2.0 * PI).ln() - f.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

fn betacf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `ln I_x(a, b)` with both `x` and `1 - x` supplied so that neither has to be
/// formed by subtraction.
fn ln_reg_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if y <= 0.0 {
        return 0.0;
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front + betacf(a, b, x).ln() - a.ln()
    } else {
        let ln_comp = ln_front + betacf(b, a, y).ln() - b.ln();
        ln_1m_exp(ln_comp.min(0.0))
    }
}

/// `ln` of the integral of `sin^m` over `[0, theta]`, with the angle given by
/// `sin^2 theta` and `cos^2 theta` (`theta` in `[0, pi/2]`).
///
/// For `m >= 2` this is `ln(B(a, 1/2) I_{sin^2 theta}(a, 1/2) / 2)` with
/// `a = (m + 1) / 2`.
pub fn ln_sin_power_integral_sc(m: u32, sin2: f64, cos2: f64) -> f64 {
    if sin2 <= 0.0 {
        return f64::NEG_INFINITY;
    }
    match m {
        0 => sin2.sqrt().atan2(cos2.max(0.0).sqrt()).ln(),
        1 => (sin2 / (1.0 + cos2.max(0.0).sqrt())).ln(),
        _ => {
            let a = (m as f64 + 1.0) / 2.0;
            -LN_2 + ln_beta(a, 0.5) + ln_reg_beta(a, 0.5, sin2, cos2.max(0.0))
        }
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return domain(format!("angle must lie in [0, pi/2], got {theta}"));
    }
    Ok(())
}

/// `ln` of the integral of `sin^m phi` over `[0, theta]`.
pub fn ln_sin_power_integral(m: u32, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    if m == 0 {
        return Ok(theta.ln());
    }
    let (s, c) = theta.sin_cos();
    Ok(ln_sin_power_integral_sc(m, s * s, c * c))
}

/// Integral of `sin^m phi` over `[0, theta]`, `theta` in `[0, pi/2]`.
pub fn sin_power_integral(m: u32, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    match m {
        0 => Ok(theta),
        1 => {
            let s = (0.5 * theta).sin();
            Ok(2.0 * s * s)
        }
        _ => Ok(ln_sin_power_integral(m, theta)?.exp()),
    }
}

/// `ln` of the full-quadrant integral of `sin^m`, `(sqrt(pi)/2) Gamma((m+1)/2) / Gamma(m/2 + 1)`.
pub fn ln_wallis(m: u32) -> f64 {
    let m = m as f64;
    0.5 * PI.ln() - LN_2 + ln_gamma((m + 1.0) / 2.0) - ln_gamma(m / 2.0 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_trivial_values() {
        assert_eq!(reg_lower_gamma(2.5, 0.0).unwrap(), 0.0);
        for &x in &[0.0, 1e-8, 0.3, 1.0, 2.0, 5.0, 30.0, 200.0] {
            let p = reg_lower_gamma(1.0, x).unwrap();
            let want = -(-x as f64).exp_m1();
            assert!((p - want).abs() <= 1e-13 * want.max(1e-300) + 1e-300, "x={x}: {p} vs {want}");
        }
        assert!(reg_lower_gamma(0.0, 1.0).is_err());
        assert!(reg_lower_gamma(1.0, -1.0).is_err());
    }

    #[test]
    fn gamma_tends_to_one() {
        for &a in &[0.5f64, 1.0, 3.5, 10.0, 61.0, 255.5] {
            let x = a + 40.0 * a.sqrt();
            let p = reg_lower_gamma(a, x).unwrap();
            assert!((1.0 - p).abs() < 1e-9, "a={a}: {p}");
        }
    }

    #[test]
    fn gamma_complements_sum_to_one() {
        for &a in &[0.5, 2.0, 9.5, 100.0] {
            for &x in &[0.1, a * 0.5, a, a + 1.0, 2.0 * a + 3.0] {
                let p = reg_lower_gamma(a, x).unwrap();
                let q = reg_upper_gamma(a, x).unwrap();
                assert!((p + q - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gamma_agrees_with_statrs() {
        for &a in &[0.5, 1.5, 7.5, 20.0, 63.5] {
            for i in 0..40 {
                let x = 0.05 + i as f64 * a / 10.0;
                let ours = reg_lower_gamma(a, x).unwrap();
                let theirs = statrs::function::gamma::gamma_lr(a, x);
                assert!((ours - theirs).abs() <= 1e-12 * theirs.max(1e-200), "a={a} x={x}");
            }
        }
    }

    #[test]
    fn degenerate_shape_is_a_step() {
        let g = IncGamma::new(0.0).unwrap();
        assert_eq!(g.p(0.0), 0.0);
        assert_eq!(g.p(1e-30), 1.0);
    }

    #[test]
    fn q_function_values() {
        assert_eq!(q_function(0.0), 0.5);
        assert!(q_function(40.0) < 1e-300);
        for i in 0..=160 {
            let x = -8.0 + i as f64 * 0.1;
            assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ln_q_is_continuous_at_the_branch_points() {
        for &x in &[-8.0f64, 8.0] {
            let lo = ln_q_function(x - 1e-9);
            let hi = ln_q_function(x + 1e-9);
            let slope = (hi - lo) / 2e-9;
            assert!(slope.is_finite() && slope < 0.0);
            assert!((hi - lo).abs() < 1e-6);
        }
        // Mills ratio asymptotics far in the tail.
        let x = 100.0f64;
        let approx = -0.5 * x * x - (x * (2.0 * PI).sqrt()).ln() + (1.0 - 1.0 / (x * x)).ln();
        assert!((ln_q_function(x) - approx).abs() < 1e-7);
    }

    #[test]
    fn sin_power_closed_forms() {
        for &t in &[0.0, 0.1, 0.7, 1.2, FRAC_PI_2] {
            assert_eq!(sin_power_integral(0, t).unwrap(), t);
            let v = sin_power_integral(1, t).unwrap();
            assert!((v - (1.0 - t.cos())).abs() < 1e-15);
        }
        assert!(sin_power_integral(3, -0.1).is_err());
        assert!(sin_power_integral(3, 1.6).is_err());
    }

    #[test]
    fn sin_power_wallis() {
        for m in 0..=200u32 {
            let v = sin_power_integral(m, FRAC_PI_2).unwrap();
            let w = ln_wallis(m).exp();
            assert!((v - w).abs() <= 1e-9 * w, "m={m}: {v} vs {w}");
        }
    }

    #[test]
    fn sin_power_two_and_three() {
        for &t in &[0.05f64, 0.5, 1.0, 1.5] {
            let two = 0.5 * t - 0.25 * (2.0 * t).sin();
            let three = (t.cos().powi(3)) / 3.0 - t.cos() + 2.0 / 3.0;
            assert!((sin_power_integral(2, t).unwrap() - two).abs() < 1e-14);
            assert!((sin_power_integral(3, t).unwrap() - three).abs() < 1e-14);
        }
    }

    #[test]
    fn log_sum_exp_basics() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - 1000.0 - LN_2).abs() < 1e-12);
        assert!((ln_add(0.0, f64::NEG_INFINITY)).abs() < 1e-300);
    }
}

use super::Tolerance;
use crate::error::{domain, Error, Result};

/// Result of a quadrature: the estimate, an error estimate, and whether the
/// requested tolerance was met within the subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

// Gauss-Kronrod 10/21 pair on [-1, 1]; abscissae with odd index are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_584_271,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
    splittable: bool,
}

struct Rule<'f, F> {
    f: &'f mut F,
    dim: usize,
    fc: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
}

impl<F: FnMut(f64, &mut [f64])> Rule<'_, F> {
    fn panel(&mut self, a: f64, b: f64) -> Panel {
        let dim = self.dim;
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut kron = vec![0.0; dim];
        let mut gauss = vec![0.0; dim];
        let mut resabs = vec![0.0; dim];
        (self.f)(c, &mut self.fc);
        for i in 0..dim {
            kron[i] = WGK[10] * self.fc[i];
            resabs[i] = WGK[10] * self.fc[i].abs();
        }
        for j in 0..10 {
            let dx = h * XGK[j];
            (self.f)(c - dx, &mut self.f1);
            (self.f)(c + dx, &mut self.f2);
            for i in 0..dim {
                let s = self.f1[i] + self.f2[i];
                kron[i] += WGK[j] * s;
                resabs[i] += WGK[j] * (self.f1[i].abs() + self.f2[i].abs());
                if j % 2 == 1 {
                    gauss[i] += WG[j / 2] * s;
                }
            }
        }
        let mut error = vec![0.0; dim];
        for i in 0..dim {
            kron[i] *= h;
            gauss[i] *= h;
            resabs[i] *= h.abs();
            error[i] = (kron[i] - gauss[i]).abs().max(ROUNDOFF * resabs[i]);
        }
        let width_floor = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        Panel { a, b, value: kron, error, splittable: (b - a) > width_floor }
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of a vector-valued integrand.
///
/// `f(x, out)` writes the `dim` components at `x`.  The interval is first cut
/// at the supplied `breakpoints`; afterwards the panel whose worst component
/// error is largest relative to that component's tolerance is bisected until
/// every component meets `tol` or `tol.max_iter` panels exist.  Evaluation
/// order depends only on `f` and `tol`, so results are deterministic.
pub fn integrate_vec<F>(mut f: F, dim: usize, a: f64, b: f64, breakpoints: &[f64], tol: &Tolerance) -> Vec<Integral>
where
    F: FnMut(f64, &mut [f64]),
{
    if a == b || dim == 0 {
        return vec![Integral { value: 0.0, error: 0.0, converged: true }; dim];
    }
    if a > b {
        return integrate_vec(f, dim, b, a, breakpoints, tol)
            .into_iter()
            .map(|r| Integral { value: -r.value, ..r })
            .collect();
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b && p.is_finite()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut rule = Rule { f: &mut f, dim, fc: vec![0.0; dim], f1: vec![0.0; dim], f2: vec![0.0; dim] };
    let mut panels: Vec<Panel> = edges.windows(2).map(|w| rule.panel(w[0], w[1])).collect();
    let mut totals = vec![0.0; dim];
    let mut errors = vec![0.0; dim];
    let max_panels = tol.max_iter.max(panels.len());
    loop {
        totals.iter_mut().for_each(|t| *t = 0.0);
        errors.iter_mut().for_each(|e| *e = 0.0);
        for p in &panels {
            for i in 0..dim {
                totals[i] += p.value[i];
                errors[i] += p.error[i];
            }
        }
        let bounds: Vec<f64> = totals.iter().map(|&t| tol.bound(t).max(f64::MIN_POSITIVE)).collect();
        let done = (0..dim).all(|i| errors[i] <= bounds[i]);
        if done || panels.len() >= max_panels {
            return (0..dim)
                .map(|i| Integral { value: totals[i], error: errors[i], converged: errors[i] <= bounds[i] })
                .collect();
        }
        let mut worst = None;
        let mut worst_ratio = 0.0;
        for (k, p) in panels.iter().enumerate() {
            if !p.splittable {
                continue;
            }
            let ratio = (0..dim).map(|i| p.error[i] / bounds[i]).fold(0.0, f64::max);
            if ratio > worst_ratio || (worst.is_none() && ratio.is_nan()) {
                worst_ratio = ratio;
                worst = Some(k);
            }
        }
        let Some(k) = worst else {
            return (0..dim)
                .map(|i| Integral { value: totals[i], error: errors[i], converged: errors[i] <= bounds[i] })
                .collect();
        };
        let old = panels.swap_remove(k);
        let mid = 0.5 * (old.a + old.b);
        let left = rule.panel(old.a, mid);
        let right = rule.panel(mid, old.b);
        panels.push(left);
        panels.push(right);
    }
}

/// Adaptive quadrature of a scalar integrand over `[a, b]` with interior
/// breakpoints where the integrand has kinks.
pub fn integrate_points<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breakpoints: &[f64], tol: &Tolerance) -> Integral {
    integrate_vec(|x, out: &mut [f64]| out[0] = f(x), 1, a, b, breakpoints, tol)[0]
}

/// Adaptive quadrature of a scalar integrand over `[a, b]`; never fails, the
/// `converged` flag reports whether `tol` was met.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: &Tolerance) -> Integral {
    integrate_points(f, a, b, &[], tol)
}

/// Integral over `[a, inf)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: &Tolerance) -> Integral {
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        tol,
    )
}

/// Checked front end: rejects `a > b` and invalid tolerances, and turns an
/// exhausted subdivision budget into [`Error::NonConvergence`] carrying the
/// best estimate.  An infinite `b` is handled by the mapped transform.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Integral> {
    tol.validate()?;
    if !(a <= b) || a.is_infinite() {
        return domain(format!("integration interval [{a}, {b}] is not valid"));
    }
    let r = if b == f64::INFINITY { integrate_to_infinity(f, a, tol) } else { integrate(f, a, b, tol) };
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NonConvergence { estimate: r.value, error: r.error })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rel: f64) -> Tolerance {
        Tolerance { abs_tol: 1e-300, rel_tol: rel, max_iter: 2000 }
    }

    #[test]
    fn constant_and_polynomial() {
        let r = adaptive_integrate(|_| 1.0, 0.0, 1.0, &tol(1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        let r = adaptive_integrate(|x| x.powi(7), -1.0, 2.0, &tol(1e-12)).unwrap();
        assert!((r.value - (256.0 - 1.0) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn mapped_exponential() {
        let r = adaptive_integrate(|x| (-x).exp(), 0.0, f64::INFINITY, &tol(1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let r = adaptive_integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &tol(1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn kink_with_breakpoint() {
        let r = integrate_points(|x| (x - 0.3).abs(), 0.0, 1.0, &[0.3], &tol(1e-13));
        assert!(r.converged);
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let t = Tolerance { abs_tol: 0.0, rel_tol: 1e-15, max_iter: 3 };
        match adaptive_integrate(|x| (1.0 / x).sin(), 1e-3, 1.0, &t) {
            Err(Error::NonConvergence { estimate, error }) => {
                assert!(estimate.is_finite() && error > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn vector_components_share_nodes() {
        let r = integrate_vec(
            |x, out: &mut [f64]| {
                out[0] = x.exp();
                out[1] = 1e-40 * x.cos();
            },
            2,
            0.0,
            1.0,
            &[],
            &tol(1e-12),
        );
        assert!((r[0].value - (1f64.exp() - 1.0)).abs() < 1e-13);
        assert!((r[1].value / 1e-40 - 1f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn reversed_interval_rejected() {
        assert!(adaptive_integrate(|x| x, 1.0, 0.0, &tol(1e-10)).is_err());
    }
}

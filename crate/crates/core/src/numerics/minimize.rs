use super::Tolerance;

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Brent's derivative-free minimiser on `[lo, hi]` (golden section with
/// parabolic steps).  Returns `(argmin, min)`.
pub fn brent_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> (f64, f64) {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..tol.max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = tol.rel_tol.max(1e-15) * x.abs() + tol.abs_tol.max(1e-300);
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) && q != 0.0 {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Grid scan over `grid` equally spaced points of `[lo, hi]` (endpoints
/// included) followed by Brent refinement between the neighbours of the best
/// grid point.  Ties on the grid go to the smallest argument; the refined
/// point replaces the grid point only if strictly better.
pub fn minimize_1d_grid<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, grid: usize, tol: &Tolerance) -> (f64, f64) {
    let grid = grid.max(3);
    let step = (hi - lo) / (grid - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..grid {
        let x = if i == grid - 1 { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let xg = if best_i == grid - 1 { hi } else { lo + step * best_i as f64 };
    if !(step > 0.0) {
        return (xg, best);
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = if best_i + 1 >= grid - 1 { hi } else { lo + step * (best_i + 1) as f64 };
    let (xr, fr) = brent_min(&mut f, a, b, tol);
    if fr < best {
        (xr, fr)
    } else {
        (xg, best)
    }
}

/// [`minimize_1d_grid`] with a 101-point grid.
pub fn minimize_1d<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: &Tolerance) -> (f64, f64) {
    minimize_1d_grid(f, lo, hi, 101, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance { abs_tol: 1e-12, rel_tol: 1e-12, max_iter: 500 }
    }

    #[test]
    fn parabola() {
        let (x, v) = minimize_1d(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, &tol());
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v < 1e-12);
    }

    #[test]
    fn flat_function_returns_lo() {
        let (x, v) = minimize_1d(|_| 2.0, -1.0, 4.0, &tol());
        assert_eq!(x, -1.0);
        assert_eq!(v, 2.0);
    }

    #[test]
    fn boundary_minimum() {
        let (x, _) = minimize_1d(|x| x, 0.5, 2.0, &tol());
        assert_eq!(x, 0.5);
        let (x, _) = minimize_1d(|x| -x, 0.5, 2.0, &tol());
        assert_eq!(x, 2.0);
    }

    #[test]
    fn picks_global_grid_minimum() {
        let f = |x: f64| (x - 0.8).powi(2) * (x - 0.1).powi(2) - 0.01 * x;
        let (x, _) = minimize_1d(f, 0.0, 1.0, &tol());
        assert!((x - 0.8).abs() < 0.05, "x = {x}");
    }
}

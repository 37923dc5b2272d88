//! Minimal derivative-free minimizers used by the MLE fits.

/// Brent-style bounded 1-D minimization (golden section with parabolic
/// interpolation). Returns `(x, f(x))`.
pub fn brent_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105; // (3 - sqrt(5)) / 2
    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabola through (v, fv), (w, fw), (x, fx).
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_old = e;
            e = d;
            if p.abs() < (0.5 * q * e_old).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if m > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { b - x } else { a - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
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

/// Nelder–Mead in two dimensions. Returns `(x, f(x))`.
pub fn nelder_mead2<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    start: [f64; 2],
    step: [f64; 2],
    ftol: f64,
    max_eval: usize,
) -> ([f64; 2], f64) {
    let mut pts = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];
    let mut evals = 3;

    while evals < max_eval {
        // Order: pts[0] best, pts[2] worst.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
        pts = [pts[order[0]], pts[order[1]], pts[order[2]]];
        vals = [vals[order[0]], vals[order[1]], vals[order[2]]];

        if (vals[2] - vals[0]).abs() <= ftol * (1.0 + vals[0].abs()) {
            break;
        }

        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let refl = [
            centroid[0] + (centroid[0] - pts[2][0]),
            centroid[1] + (centroid[1] - pts[2][1]),
        ];
        let f_refl = f(refl);
        evals += 1;

        if f_refl < vals[0] {
            let exp = [
                centroid[0] + 2.0 * (centroid[0] - pts[2][0]),
                centroid[1] + 2.0 * (centroid[1] - pts[2][1]),
            ];
            let f_exp = f(exp);
            evals += 1;
            if f_exp < f_refl {
                pts[2] = exp;
                vals[2] = f_exp;
            } else {
                pts[2] = refl;
                vals[2] = f_refl;
            }
        } else if f_refl < vals[1] {
            pts[2] = refl;
            vals[2] = f_refl;
        } else {
            let contr = [
                centroid[0] + 0.5 * (pts[2][0] - centroid[0]),
                centroid[1] + 0.5 * (pts[2][1] - centroid[1]),
            ];
            let f_contr = f(contr);
            evals += 1;
            if f_contr < vals[2] {
                pts[2] = contr;
                vals[2] = f_contr;
            } else {
                // Shrink toward the best point.
                for i in 1..3 {
                    pts[i] = [
                        pts[0][0] + 0.5 * (pts[i][0] - pts[0][0]),
                        pts[0][1] + 0.5 * (pts[i][1] - pts[0][1]),
                    ];
                    vals[i] = f(pts[i]);
                }
                evals += 2;
            }
        }
    }

    let mut best = 0;
    for i in 1..3 {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    (pts[best], vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_quadratic_minimum() {
        let (x, fx) = brent_min(|x| (x - 2.3) * (x - 2.3) + 1.0, 0.0, 10.0, 1e-10, 200);
        assert!((x - 2.3).abs() < 1e-7, "x = {x}");
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_finds_rosenbrock_like_minimum() {
        let (p, _) = nelder_mead2(
            |[x, y]| (x - 1.0).powi(2) + 10.0 * (y + 0.5).powi(2),
            [4.0, 4.0],
            [0.5, 0.5],
            1e-12,
            500,
        );
        assert!((p[0] - 1.0).abs() < 1e-4 && (p[1] + 0.5).abs() < 1e-4, "{p:?}");
    }
}

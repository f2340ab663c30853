//! Derivative-free Nelder-Mead minimisation in two dimensions.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Initial edge length of the simplex.
    pub step: f64,
    /// Stop when every vertex lies within this distance of the best one...
    pub x_tol: f64,
    /// ...and the spread of function values is below this.
    pub f_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexResult {
    pub x: [f64; 2],
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn minimize<F>(f: F, x0: [f64; 2], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn([f64; 2]) -> f64,
{
    let mut pts = [x0, [x0[0] + opts.step, x0[1]], [x0[0], x0[1] + opts.step]];
    let mut vals = pts.map(&f);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        sort(&mut pts, &mut vals);
        let diameter = pts[1..]
            .iter()
            .map(|p| (p[0] - pts[0][0]).hypot(p[1] - pts[0][1]))
            .fold(0.0, f64::max);
        if diameter < opts.x_tol && (vals[2] - vals[0]).abs() < opts.f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid = [0.5 * (pts[0][0] + pts[1][0]), 0.5 * (pts[0][1] + pts[1][1])];
        let along = |t: f64| {
            [
                centroid[0] + t * (pts[2][0] - centroid[0]),
                centroid[1] + t * (pts[2][1] - centroid[1]),
            ]
        };

        let xr = along(-1.0);
        let fr = f(xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
            continue;
        }
        if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[2] {
            let xc = along(-0.5);
            (xc, f(xc))
        } else {
            let xc = along(0.5);
            (xc, f(xc))
        };
        if fc < vals[2].min(fr) {
            pts[2] = xc;
            vals[2] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for i in 1..3 {
            pts[i] = [
                pts[0][0] + 0.5 * (pts[i][0] - pts[0][0]),
                pts[0][1] + 0.5 * (pts[i][1] - pts[0][1]),
            ];
            vals[i] = f(pts[i]);
        }
    }
    sort(&mut pts, &mut vals);
    SimplexResult {
        x: pts[0],
        fx: vals[0],
        iterations,
        converged,
    }
}

/// Newton refinement of a smooth local minimum with central-difference
/// derivatives of step `h`. Steps are taken only while the Hessian is
/// positive definite and the value does not increase beyond rounding.
pub fn newton_polish<F>(f: F, x0: [f64; 2], h: f64, max_iter: usize) -> ([f64; 2], f64)
where
    F: Fn([f64; 2]) -> f64,
{
    let mut x = x0;
    let mut fx = f(x);
    for _ in 0..max_iter {
        let at = |dx: f64, dy: f64| f([x[0] + dx, x[1] + dy]);
        let (fpx, fmx, fpy, fmy) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
        let gx = (fpx - fmx) / (2.0 * h);
        let gy = (fpy - fmy) / (2.0 * h);
        let hxx = (fpx - 2.0 * fx + fmx) / (h * h);
        let hyy = (fpy - 2.0 * fx + fmy) / (h * h);
        let hxy = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        let det = hxx * hyy - hxy * hxy;
        if !(hxx > 0.0 && det > 0.0) {
            break;
        }
        let dx = -(hyy * gx - hxy * gy) / det;
        let dy = -(hxx * gy - hxy * gx) / det;
        if !(dx.is_finite() && dy.is_finite()) || dx.hypot(dy) > 10.0 * h {
            break;
        }
        let xn = [x[0] + dx, x[1] + dy];
        let fnew = f(xn);
        // Near the minimum the decrease is below rounding; tolerate that.
        if fnew > fx + 8.0 * f64::EPSILON * fx.abs() {
            break;
        }
        x = xn;
        fx = fnew;
        if dx.hypot(dy) < 1e-6 * h {
            break;
        }
    }
    (x, fx)
}

fn sort(pts: &mut [[f64; 2]; 3], vals: &mut [f64; 3]) {
    let mut idx = [0, 1, 2];
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let (p, v) = (*pts, *vals);
    for (k, &i) in idx.iter().enumerate() {
        pts[k] = p[i];
        vals[k] = v[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SimplexOptions {
        SimplexOptions {
            step: 0.5,
            x_tol: 1e-10,
            f_tol: 1e-14,
            max_iter: 10_000,
        }
    }

    #[test]
    fn quadratic_bowl() {
        let r = minimize(|x| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.25).powi(2), [0.0, 0.0], &opts());
        assert!(r.converged);
        assert!((r.x[0] - 1.5).abs() < 1e-9 && (r.x[1] + 0.25).abs() < 1e-9);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            &opts(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-7 && (r.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn reports_budget_exhaustion() {
        let mut o = opts();
        o.max_iter = 3;
        let r = minimize(|x| x[0].powi(2) + x[1].powi(2), [5.0, 5.0], &o);
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn newton_polish_refines_a_rough_minimum() {
        let f = |x: [f64; 2]| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.1).powi(2) + 0.5 * x[0] * x[1] + (x[0] - 0.3).powi(4);
        let r = minimize(f, [0.0, 0.0], &SimplexOptions { x_tol: 1e-4, f_tol: 1e-6, ..opts() });
        let (x, fx) = newton_polish(f, r.x, 1e-5, 50);
        assert!(fx <= r.fx);
        let g = |x: [f64; 2]| [2.0 * (x[0] - 0.3) + 0.5 * x[1] + 4.0 * (x[0] - 0.3).powi(3), 4.0 * (x[1] + 0.1) + 0.5 * x[0]];
        let gr = g(x);
        assert!(gr[0].abs() < 1e-9 && gr[1].abs() < 1e-9, "{gr:?}");
    }
}

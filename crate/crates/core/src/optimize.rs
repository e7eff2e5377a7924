//! Small dense local optimizers: Nelder–Mead simplex descent and a
//! Levenberg–Marquardt least-squares polish.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub max_iterations: usize,
    /// Stop once the spread of objective values over the simplex drops below this.
    pub convergence: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_iterations: 500,
            convergence: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Nelder–Mead from `x0` with an axis-aligned initial simplex of edge `step`.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: &[f64], opts: &SimplexOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let d = x0.len();
    assert_eq!(step.len(), d);
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for k in 0..d {
        let mut p = x0.to_vec();
        p[k] += step[k];
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p)).collect();
    let mut iterations = 0;
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    while iterations < opts.max_iterations {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if vals[d] - vals[0] <= opts.convergence {
            break;
        }
        iterations += 1;
        let mut centroid = vec![0.0; d];
        for p in &pts[..d] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / d as f64;
            }
        }
        let worst = pts[d].clone();
        let xr = lerp(&centroid, &worst, -opts.reflection);
        let fr = eval(&xr);
        if fr < vals[0] {
            let xe = lerp(&centroid, &worst, -opts.reflection * opts.expansion);
            let fe = eval(&xe);
            if fe < fr {
                pts[d] = xe;
                vals[d] = fe;
            } else {
                pts[d] = xr;
                vals[d] = fr;
            }
            continue;
        }
        if fr < vals[d - 1] {
            pts[d] = xr;
            vals[d] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[d] {
            let xc = lerp(&centroid, &xr, opts.contraction);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = lerp(&centroid, &worst, opts.contraction);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < vals[d].min(fr) {
            pts[d] = xc;
            vals[d] = fc;
            continue;
        }
        let best = pts[0].clone();
        for k in 1..=d {
            pts[k] = lerp(&best, &pts[k], opts.shrink);
            vals[k] = eval(&pts[k]);
        }
    }
    let best = (0..=d)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)))
        .expect("nonempty simplex");
    Minimum { x: pts[best].clone(), value: vals[best], iterations }
}

/// Levenberg–Marquardt on `Σ r_i(x)²` with a forward-difference Jacobian.
pub fn levenberg_marquardt<R>(residuals: R, x0: &[f64], max_iterations: usize) -> Minimum
where
    R: Fn(&[f64]) -> Vec<f64>,
{
    let d = x0.len();
    let cost = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = x0.to_vec();
    let mut r = residuals(&x);
    let mut c = cost(&r);
    let mut mu = 1e-3;
    let mut iterations = 0;
    while iterations < max_iterations && c > 1e-32 {
        iterations += 1;
        let m = r.len();
        let mut jac = DMatrix::<f64>::zeros(m, d);
        for k in 0..d {
            let h = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x.clone();
            xp[k] += h;
            let rp = residuals(&xp);
            for i in 0..m {
                jac[(i, k)] = (rp[i] - r[i]) / h;
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * rv;
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..d {
                a[(k, k)] += mu * jtj[(k, k)].max(1e-12);
            }
            let Some(delta) = a.lu().solve(&(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let xn: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            let rn = residuals(&xn);
            let cn = cost(&rn);
            if cn.is_finite() && cn < c {
                let small = delta.norm() <= 1e-16 * (1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt());
                x = xn;
                r = rn;
                c = cn;
                mu = (mu / 3.0).max(1e-15);
                improved = !small;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Minimum { x, value: c, iterations }
}

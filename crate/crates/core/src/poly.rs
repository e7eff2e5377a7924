//! Dense complex polynomials in ascending coefficient order.

use nalgebra::{DMatrix, Schur};

use crate::error::{Error, Result};
use crate::C64;

pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|&c| c * s).collect()
}

/// Monic `∏(z − r)`.
pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    roots
        .iter()
        .fold(vec![C64::new(1.0, 0.0)], |acc, &r| mul(&acc, &[-r, C64::new(1.0, 0.0)]))
}

/// Drops leading coefficients that are negligible relative to the largest one.
pub fn trim(coeffs: &[C64], rel_tol: f64) -> Vec<C64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out = coeffs.to_vec();
    while out.len() > 1 && out.last().unwrap().norm() <= rel_tol * scale {
        out.pop();
    }
    out
}

/// Eigenvalues of the companion matrix, read from the diagonal of a complex
/// Schur form and refined by Newton steps on the polynomial.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let mut p = trim(coeffs, 1e-14);
    // exact zero roots make the companion matrix nilpotent, which stalls Schur
    let mut zeros = 0;
    while p.len() > 1 && p[0] == C64::new(0.0, 0.0) {
        p.remove(0);
        zeros += 1;
    }
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![C64::new(0.0, 0.0); zeros]);
    }
    let lead = p[n];
    let mut comp = DMatrix::<C64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i] / lead;
    }
    let schur = Schur::try_new(comp, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::RootFinder(format!("Schur iteration did not converge (degree {n})")))?;
    let (_, t) = schur.unpack();
    let dp = derivative(&p);
    let mut out: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    for r in out.iter_mut() {
        *r = newton(|z| (eval(&p, z), eval(&dp, z)), *r, 8);
    }
    out.extend(std::iter::repeat_n(C64::new(0.0, 0.0), zeros));
    Ok(out)
}

/// Newton iteration that only accepts steps reducing `|f|`.
pub fn newton<F>(f: F, z0: C64, iters: usize) -> C64
where
    F: Fn(C64) -> (C64, C64),
{
    let mut z = z0;
    let (mut fz, mut dfz) = f(z);
    for _ in 0..iters {
        if fz.norm() == 0.0 || dfz.norm() == 0.0 {
            break;
        }
        let cand = z - fz / dfz;
        let (fc, dc) = f(cand);
        if fc.norm() >= fz.norm() || fc.norm().is_nan() {
            break;
        }
        z = cand;
        fz = fc;
        dfz = dc;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_and_mul() {
        let p = [c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0)];
        let z = c(0.5, -0.25);
        assert!((eval(&p, z) - (p[0] + p[1] * z + p[2] * z * z)).norm() < 1e-15);
        let q = [c(-1.0, 1.0), c(2.0, 0.0)];
        let pq = mul(&p, &q);
        assert!((eval(&pq, z) - eval(&p, z) * eval(&q, z)).norm() < 1e-14);
        let dp = derivative(&p);
        assert!((eval(&dp, z) - (p[1] + 2.0 * p[2] * z)).norm() < 1e-15);
    }

    #[test]
    fn roots_of_unity() {
        let mut p = vec![c(0.0, 0.0); 6];
        p[0] = c(-1.0, 0.0);
        p[5] = c(1.0, 0.0);
        let r = roots(&p).unwrap();
        assert_eq!(r.len(), 5);
        for z in &r {
            assert!((z.powu(5) - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn roots_round_trip() {
        let rts = [c(0.3, 0.1), c(-0.5, 0.2), c(0.0, -0.7), c(1.5, 0.0)];
        let p = from_roots(&rts);
        let mut found = roots(&p).unwrap();
        assert_eq!(found.len(), 4);
        for r in rts {
            let (k, _) = found
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - r).norm().partial_cmp(&(b.1 - r).norm()).unwrap())
                .unwrap();
            assert!((found[k] - r).norm() < 1e-12);
            found.remove(k);
        }
    }

    #[test]
    fn degenerate_leading_coefficient_deflates() {
        let p = [c(-1.0, 0.0), c(1.0, 0.0), c(1e-18, 0.0)];
        let r = roots(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).norm() < 1e-15);
    }
}

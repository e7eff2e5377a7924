//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Largest singular value by power iteration on `A*A`.
///
/// `A*A` is squared repeatedly (renormalizing each time) so that the dominant
/// eigendirection separates after a fixed number of steps; the column of
/// largest norm then seeds a few plain power steps and a Rayleigh quotient.
pub fn operator_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let a = a / C64::new(scale, 0.0);
    let b = a.adjoint() * &a;
    let mut p = b.clone();
    for _ in 0..64 {
        let f = p.norm();
        if f == 0.0 {
            break;
        }
        p /= C64::new(f, 0.0);
        let next = &p * &p;
        if (&next / C64::new(next.norm().max(f64::MIN_POSITIVE), 0.0) - &p).norm() < 1e-15 {
            p = next;
            break;
        }
        p = next;
    }
    let col = (0..p.ncols())
        .max_by(|&i, &j| p.column(i).norm().partial_cmp(&p.column(j).norm()).unwrap())
        .unwrap();
    let mut v: CVec = p.column(col).into_owned();
    if v.norm() == 0.0 {
        v = CVec::from_element(b.ncols(), C64::new(1.0, 0.0));
    }
    v /= C64::new(v.norm(), 0.0);
    for _ in 0..16 {
        let w = &b * &v;
        let nw = w.norm();
        if nw == 0.0 {
            break;
        }
        v = w / C64::new(nw, 0.0);
    }
    scale * (&a * &v).norm()
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = SVD::new(a.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Orthonormal basis of the nullspace, ordered by increasing singular value.
/// Singular values at or below `threshold` count as zero.
pub fn nullspace(a: &CMat, threshold: f64) -> Vec<CVec> {
    let n = a.ncols();
    // pad to a square system so that V is complete
    let sq = if a.nrows() < n {
        let mut m = CMat::zeros(n, n);
        m.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        m
    } else {
        a.clone()
    };
    let svd = SVD::new(sq, false, true);
    let vt = svd.v_t.expect("requested V");
    let mut idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].partial_cmp(&svd.singular_values[j]).unwrap());
    idx.into_iter().map(|i| vt.row(i).adjoint()).collect()
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Returns the
/// orthonormal vectors and, for each input, whether it was independent.
pub fn orthonormalize(vectors: &[CVec], rel_tol: f64) -> (Vec<CVec>, Vec<bool>) {
    let mut basis: Vec<CVec> = Vec::new();
    let mut kept = Vec::with_capacity(vectors.len());
    for v in vectors {
        let norm0 = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&w);
                w -= q * c;
            }
        }
        let nw = w.norm();
        if norm0 > 0.0 && nw > rel_tol * norm0 {
            basis.push(w / C64::new(nw, 0.0));
            kept.push(true);
        } else {
            kept.push(false);
        }
    }
    (basis, kept)
}

/// `‖x − QQ*x‖` for an orthonormal family `Q`.
pub fn span_residual(basis: &[CVec], x: &CVec) -> f64 {
    let mut r = x.clone();
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(&r);
            r -= q * c;
        }
    }
    r.norm()
}

/// Dimension of the intersection of two spans given by orthonormal families,
/// counted as principal angles with cosine above `1 − tol`.
pub fn intersection_dimension(a: &[CVec], b: &[CVec], tol: f64) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let m = CMat::from_fn(a.len(), b.len(), |i, j| a[i].dotc(&b[j]));
    singular_values(&m).into_iter().filter(|&s| s > 1.0 - tol).count()
}

/// Returns `(G^{1/2}, G^{-1/2})` for a Hermitian positive definite `G`.
pub fn hermitian_sqrt_pair(g: &CMat, max_condition: f64) -> Result<(CMat, CMat)> {
    let h = (g + g.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let lmax = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lmin = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if lmin <= 0.0 || lmax / lmin > max_condition {
        return Err(Error::IllConditioned(if lmin > 0.0 { lmax / lmin } else { f64::INFINITY }));
    }
    let q = &eig.eigenvectors;
    let d = |f: fn(f64) -> f64| {
        CMat::from_diagonal(&DVector::from_iterator(
            eig.eigenvalues.len(),
            eig.eigenvalues.iter().map(|&l| C64::new(f(l), 0.0)),
        ))
    };
    let sqrt = q * d(f64::sqrt) * q.adjoint();
    let inv_sqrt = q * d(|l| 1.0 / l.sqrt()) * q.adjoint();
    Ok((sqrt, inv_sqrt))
}

/// Eigenvalues of a square complex matrix from its Schur form.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    let schur = nalgebra::Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::RootFinder("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Column-major flattening of a matrix.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Greedy matching distance between two multisets of complex numbers.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut rest: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = rest
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        worst = worst.max(d);
        rest.swap_remove(k);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMat {
        CMat::from_fn(r, c, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    #[test]
    fn power_norm_matches_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..9 {
            let a = random_matrix(&mut rng, n, n);
            let s = singular_values(&a)[0];
            assert!((operator_norm(&a) - s).abs() < 1e-12 * s.max(1.0), "n={n}");
        }
        let mut jordan = CMat::zeros(4, 4);
        for i in 1..4 {
            jordan[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        assert!((operator_norm(&jordan) - 1.0).abs() < 1e-14);
        let u = CMat::identity(3, 3) * C64::new(0.0, 2.0);
        assert!((operator_norm(&u) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = random_matrix(&mut rng, 5, 3);
        let a = &b * b.adjoint();
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&a * v).norm() < 1e-12);
        }
    }

    #[test]
    fn intersection_of_planes() {
        let e = |i: usize| {
            let mut v = CVec::zeros(3);
            v[i] = C64::new(1.0, 0.0);
            v
        };
        let (p, _) = orthonormalize(&[e(0), e(1)], 1e-12);
        let (q, _) = orthonormalize(&[e(1) + e(0) * C64::new(0.0, 0.0), e(2)], 1e-12);
        assert_eq!(intersection_dimension(&p, &q, 1e-9), 1);
        assert!(span_residual(&p, &e(2)) > 0.99);
    }

    #[test]
    fn sqrt_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_matrix(&mut rng, 4, 4);
        let g = &b * b.adjoint() + CMat::identity(4, 4);
        let (s, si) = hermitian_sqrt_pair(&g, 1e12).unwrap();
        assert!(max_abs(&(&s * &s - &g)) < 1e-12);
        assert!(max_abs(&(&s * &si - CMat::identity(4, 4))) < 1e-12);
    }
}

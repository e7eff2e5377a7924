//! Closed-form oracles shared by the integration tests. Nothing here calls
//! into the library's numerics except to read zeros and matrices.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use ttolab::{ExtendedParameter, FiniteBlaschkeProduct, OperatorMatrix, C64};

pub type M = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `γ ∏ (z − z_j)/(1 − z̄_j z)` from the zeros.
pub fn blaschke(theta: &FiniteBlaschkeProduct, z: C64) -> C64 {
    theta
        .zero_values()
        .iter()
        .fold(theta.gamma().value(), |acc, &a| acc * (z - a) / (1.0 - a.conj() * z))
}

/// `Θ′` through the logarithmic derivative.
pub fn blaschke_derivative(theta: &FiniteBlaschkeProduct, z: C64) -> C64 {
    let zs = theta.zero_values();
    let mut total = c(0.0, 0.0);
    for (k, &a) in zs.iter().enumerate() {
        let mut term = theta.gamma().value() * (1.0 - a.norm_sqr()) / ((1.0 - a.conj() * z) * (1.0 - a.conj() * z));
        for (j, &b) in zs.iter().enumerate() {
            if j != k {
                term *= (z - b) / (1.0 - b.conj() * z);
            }
        }
        total += term;
    }
    total
}

/// `Θ^#(z) = conj(Θ(z̄))`.
pub fn sharp(theta: &FiniteBlaschkeProduct, z: C64) -> C64 {
    blaschke(theta, z.conj()).conj()
}

/// `k_w(z) = (1 − conj(Θ(w))Θ(z))/(1 − w̄z)`.
pub fn kernel(theta: &FiniteBlaschkeProduct, w: C64, z: C64) -> C64 {
    (1.0 - blaschke(theta, w).conj() * blaschke(theta, z)) / (1.0 - w.conj() * z)
}

/// `b_a(z)`.
pub fn factor(a: C64, z: C64) -> C64 {
    (z - a) / (1.0 - a.conj() * z)
}

/// Solutions of `Θ(ζ) = α` on the circle by scanning the argument and bisecting.
pub fn circle_level_set(theta: &FiniteBlaschkeProduct, alpha: C64) -> Vec<C64> {
    let m = 1 << 14;
    let g = |t: f64| blaschke(theta, C64::from_polar(1.0, t)) * alpha.conj();
    let mut out = Vec::new();
    for k in 0..m {
        let (mut lo, mut hi) = (std::f64::consts::TAU * k as f64 / m as f64, std::f64::consts::TAU * (k + 1) as f64 / m as f64);
        let (gl, gh) = (g(lo), g(hi));
        if !(gl.im <= 0.0 && gh.im > 0.0 && gl.re > 0.0 && gh.re > 0.0) {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid).im <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(C64::from_polar(1.0, 0.5 * (lo + hi)));
    }
    out
}

/// Largest nearest-neighbour distance between two multisets of equal size.
pub fn multiset_gap(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn spectral_norm(m: &M) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn identity(n: usize) -> M {
    M::identity(n, n)
}

fn vectorize(m: &M) -> DVector<C64> {
    DVector::from_iterator(m.len(), m.iter().copied())
}

/// Column-stacked vectorisations.
pub fn stack(ms: &[M]) -> M {
    let cols: Vec<DVector<C64>> = ms.iter().map(vectorize).collect();
    M::from_columns(&cols)
}

/// Orthonormal basis of the column span, dropping singular values below `tol`.
pub fn orth(a: &M, tol: f64) -> M {
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<DVector<C64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol * smax.max(1.0))
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    M::from_columns(&keep)
}

pub fn rank(a: &M, tol: f64) -> usize {
    orth(a, tol).ncols()
}

/// Largest relative distance of the matrices `xs` from the span of `basis`.
pub fn span_residual(basis: &[M], xs: &[M]) -> f64 {
    let q = orth(&stack(basis), 1e-10);
    xs.iter()
        .map(|x| {
            let v = vectorize(x);
            let p = &q * (q.adjoint() * &v);
            (v.clone() - p).norm() / v.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

pub fn mutual_span_residual(a: &[M], b: &[M]) -> f64 {
    span_residual(a, b).max(span_residual(b, a))
}

/// Basis of `{X : GX = XG}` from the null space of `I⊗G − Gᵀ⊗I`.
pub fn commutant(g: &M) -> Vec<M> {
    let n = g.nrows();
    let id = identity(n);
    let k = id.kronecker(g) - g.transpose().kronecker(&id);
    let svd = k.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    (0..vt.nrows())
        .filter(|&r| svd.singular_values.get(r).map(|s| *s <= 1e-9 * smax.max(1.0)).unwrap_or(true))
        .map(|r| {
            let v: Vec<C64> = vt.row(r).iter().map(|x| x.conj()).collect();
            M::from_column_slice(n, n, &v)
        })
        .collect()
}

pub fn entries(ms: &[OperatorMatrix]) -> Vec<M> {
    ms.iter().map(|m| m.entries.clone()).collect()
}

/// `a ↦ 1/ā`.
pub fn conj_flip(a: ExtendedParameter) -> ExtendedParameter {
    match a.value() {
        None => ExtendedParameter::from_complex(c(0.0, 0.0)),
        Some(z) if z.norm() == 0.0 => ExtendedParameter::Infinity,
        Some(z) => ExtendedParameter::from_complex(1.0 / z.conj()),
    }
}

/// `ℓ_c(a) = (a − c)/(1 − c̄a)`.
pub fn ell(cc: C64, a: ExtendedParameter) -> ExtendedParameter {
    match a.value() {
        None => ExtendedParameter::from_complex(-1.0 / cc.conj()),
        Some(z) => {
            let den = 1.0 - cc.conj() * z;
            if den.norm() < 1e-15 {
                ExtendedParameter::Infinity
            } else {
                ExtendedParameter::from_complex((z - cc) / den)
            }
        }
    }
}

/// `a ↦ 1/a`.
pub fn reciprocal(a: ExtendedParameter) -> ExtendedParameter {
    match a.value() {
        None => ExtendedParameter::from_complex(c(0.0, 0.0)),
        Some(z) if z.norm() == 0.0 => ExtendedParameter::Infinity,
        Some(z) => ExtendedParameter::from_complex(1.0 / z),
    }
}

/// Largest singular value of the Hankel operator with symbol `conj(Θ)φ`,
/// from FFT-free Fourier sums on `m` nodes and an `size × size` truncation.
pub fn hankel_norm(theta: &FiniteBlaschkeProduct, phi: impl Fn(C64) -> C64, m: usize, size: usize) -> f64 {
    let nodes: Vec<C64> = (0..m).map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64)).collect();
    let g: Vec<C64> = nodes.iter().map(|&x| phi(x) * blaschke(theta, x).conj()).collect();
    // ĝ(−k) = mean of g(ξ)ξ^k
    let coeff: Vec<C64> = (1..=2 * size)
        .map(|k| nodes.iter().zip(&g).map(|(x, v)| v * x.powi(k as i32)).sum::<C64>() / m as f64)
        .collect();
    let h = M::from_fn(size, size, |i, j| coeff[i + j]);
    spectral_norm(&h)
}

/// The zero sets used by the fixture set, for writing JSON inputs.
pub fn zeros_json(theta: &FiniteBlaschkeProduct) -> String {
    let zs: Vec<String> = theta.zero_values().iter().map(|z| format!("[{:?}, {:?}]", z.re, z.im)).collect();
    format!("{{\"zeros\": [{}]}}", zs.join(", "))
}

//! The model space `K_Θ` in the Takenaka–Malmquist basis
//! `e_k(z) = √(1 − |z_k|²)/(1 − z̄_k z) · ∏_{j<k} b_{z_j}(z)`.
//!
//! Inner products are discrete means over `M` uniform circle nodes. The
//! integrands are rational with poles at `1/z̄_j`, so the aliasing error decays
//! like `r^M` with `r = max |z_j|`; `M` is chosen to push that below rounding.

use std::f64::consts::TAU;

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat, CVec};
use crate::moebius::factor;
use crate::tto::BasisTag;
use crate::C64;

/// Largest quadrature size chosen automatically.
pub const MAX_QUADRATURE: usize = 1 << 16;

/// Gram deviations above this are reported as an error.
pub const GRAM_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct ModelSpace {
    theta: FiniteBlaschkeProduct,
    tag: BasisTag,
    nodes: Vec<C64>,
    /// `samples[(m, k)] = e_k(ξ_m)`.
    samples: CMat,
    theta_vals: Vec<C64>,
    gram_deviation: f64,
}

/// Coordinates of an element of `K_Θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelVector {
    pub coords: CVec,
    pub tag: BasisTag,
}

impl ModelVector {
    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    /// `⟨self, other⟩`, linear in the first slot.
    pub fn inner(&self, other: &ModelVector) -> Result<C64> {
        if self.tag != other.tag {
            return Err(Error::BasisMismatch(format!("{} vs {}", self.tag, other.tag)));
        }
        Ok(other.coords.dotc(&self.coords))
    }
}

/// Matrix `J` of the conjugation, acting as `C(v) = J·conj(v)`.
#[derive(Clone, Debug)]
pub struct ConjugationMatrix {
    pub j: CMat,
    pub tag: BasisTag,
}

impl ConjugationMatrix {
    pub fn apply(&self, v: &ModelVector) -> Result<ModelVector> {
        if v.tag != self.tag {
            return Err(Error::BasisMismatch(format!("{} vs {}", v.tag, self.tag)));
        }
        Ok(ModelVector { coords: &self.j * v.coords.conjugate(), tag: self.tag })
    }

    /// `max |J·conj(J) − I|`.
    pub fn involution_residual(&self) -> f64 {
        let n = self.j.nrows();
        max_abs(&(&self.j * self.j.conjugate() - CMat::identity(n, n)))
    }
}

/// Default quadrature size for a zero set.
pub fn default_quadrature(theta: &FiniteBlaschkeProduct) -> usize {
    let n = theta.degree();
    let mut m = 256.max(16 * n);
    let r = theta.max_zero_modulus();
    if r > 0.0 {
        let need = (39.2 / -r.ln()).ceil();
        if need > m as f64 {
            m = (need as usize).min(MAX_QUADRATURE);
        }
    }
    m
}

pub fn quadrature_nodes(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(1.0, TAU * (k as f64 + 0.5) / m as f64))
        .collect()
}

impl ModelSpace {
    pub fn new(theta: &FiniteBlaschkeProduct) -> Result<Self> {
        Self::with_quadrature(theta, default_quadrature(theta))
    }

    pub fn with_quadrature(theta: &FiniteBlaschkeProduct, m: usize) -> Result<Self> {
        let n = theta.degree();
        if m < 2 * n + 2 {
            return Err(Error::QuadratureResolution(format!(
                "{m} nodes cannot resolve a degree-{n} model space (need at least {})",
                2 * n + 2
            )));
        }
        let nodes = quadrature_nodes(m);
        let tag = BasisTag::from_zeros(theta.zeros());
        let mut space = Self {
            theta: theta.clone(),
            tag,
            samples: CMat::zeros(0, 0),
            theta_vals: nodes.iter().map(|&z| theta.eval_unchecked(z)).collect(),
            nodes,
            gram_deviation: 0.0,
        };
        space.samples = space.sample_matrix(&space.nodes);
        let gram = space.samples.adjoint() * &space.samples / C64::new(m as f64, 0.0);
        space.gram_deviation = max_abs(&(gram - CMat::identity(n, n)));
        if space.gram_deviation > GRAM_TOL {
            return Err(Error::QuadratureResolution(format!(
                "Gram deviation {:e} with {m} nodes",
                space.gram_deviation
            )));
        }
        Ok(space)
    }

    pub fn theta(&self) -> &FiniteBlaschkeProduct {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.degree()
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn quadrature_size(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn samples(&self) -> &CMat {
        &self.samples
    }

    pub fn theta_values(&self) -> &[C64] {
        &self.theta_vals
    }

    pub fn gram_deviation(&self) -> f64 {
        self.gram_deviation
    }

    /// `(e_1(z), …, e_n(z))`.
    pub fn basis_values(&self, z: C64) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim());
        let mut prefix = C64::new(1.0, 0.0);
        for a in self.theta.zeros() {
            let a = a.value();
            out.push(prefix * (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z));
            prefix *= factor(a, z);
        }
        out
    }

    /// Rows are the basis values at the given points.
    pub fn sample_matrix(&self, points: &[C64]) -> CMat {
        let n = self.dim();
        let mut e = CMat::zeros(points.len(), n);
        for (m, &z) in points.iter().enumerate() {
            for (k, v) in self.basis_values(z).into_iter().enumerate() {
                e[(m, k)] = v;
            }
        }
        e
    }

    pub fn vector(&self, coords: CVec) -> ModelVector {
        assert_eq!(coords.len(), self.dim(), "coordinate length");
        ModelVector { coords, tag: self.tag }
    }

    pub fn unit(&self, k: usize) -> ModelVector {
        let mut v = CVec::zeros(self.dim());
        v[k] = C64::new(1.0, 0.0);
        self.vector(v)
    }

    pub fn eval_vector(&self, v: &ModelVector, z: C64) -> C64 {
        self.basis_values(z).iter().zip(v.coords.iter()).map(|(e, c)| e * c).sum()
    }

    /// Values of `v` at the quadrature nodes.
    pub fn boundary_values(&self, v: &ModelVector) -> CVec {
        &self.samples * &v.coords
    }

    /// Coordinates `⟨f, e_k⟩` of a function sampled at this space's nodes.
    pub fn project_values(&self, values: &CVec) -> ModelVector {
        assert_eq!(values.len(), self.nodes.len(), "sample count");
        let coords = self.samples.adjoint() * values / C64::new(self.nodes.len() as f64, 0.0);
        self.vector(coords)
    }

    pub fn project<F: Fn(C64) -> C64>(&self, f: F) -> ModelVector {
        let vals = CVec::from_iterator(self.nodes.len(), self.nodes.iter().map(|&z| f(z)));
        self.project_values(&vals)
    }

    /// `k_λ`, with coordinates `conj(e_j(λ))`.
    pub fn kernel_coords(&self, lambda: C64) -> ModelVector {
        let v = self.basis_values(lambda);
        self.vector(CVec::from_iterator(v.len(), v.into_iter().map(|x| x.conj())))
    }

    /// `Ck_λ = (Θ(z) − Θ(λ))/(z − λ)`, projected by quadrature.
    pub fn conjugate_kernel_coords(&self, lambda: C64) -> ModelVector {
        let tl = self.theta.eval_unchecked(lambda);
        let dl = self.theta.derivative_unchecked(lambda);
        let vals = CVec::from_iterator(
            self.nodes.len(),
            self.nodes.iter().zip(&self.theta_vals).map(|(&z, &t)| {
                let d = z - lambda;
                if d.norm() < 1e-7 {
                    // second-order Taylor correction keeps the quotient accurate
                    dl + 0.5 * d * self.second_derivative(lambda)
                } else {
                    (t - tl) / d
                }
            }),
        );
        self.project_values(&vals)
    }

    fn second_derivative(&self, z: C64) -> C64 {
        let h = 1e-5;
        (self.theta.derivative_unchecked(z + h) - self.theta.derivative_unchecked(z - h)) / (2.0 * h)
    }

    /// `J_{kl} = ⟨C e_l, e_k⟩` with `Cf = conj(f·z)·Θ` on the circle.
    pub fn conjugation_matrix(&self) -> Result<ConjugationMatrix> {
        if self.gram_deviation > GRAM_TOL {
            return Err(Error::QuadratureResolution(format!("Gram deviation {:e}", self.gram_deviation)));
        }
        let m = self.nodes.len();
        let n = self.dim();
        let mut ce = CMat::zeros(m, n);
        for i in 0..m {
            let w = self.nodes[i].conj() * self.theta_vals[i];
            for l in 0..n {
                ce[(i, l)] = self.samples[(i, l)].conj() * w;
            }
        }
        let j = self.samples.adjoint() * ce / C64::new(m as f64, 0.0);
        Ok(ConjugationMatrix { j, tag: self.tag })
    }

    /// `‖k_λ‖² = (1 − |Θ(λ)|²)/(1 − |λ|²)`, or `|Θ′(λ)|` on the circle.
    pub fn kernel_norm_sq(&self, lambda: C64) -> f64 {
        if (lambda.norm() - 1.0).abs() < 1e-12 {
            self.theta.derivative_unchecked(lambda).norm()
        } else {
            (1.0 - self.theta.eval_unchecked(lambda).norm_sqr()) / (1.0 - lambda.norm_sqr())
        }
    }

    /// Transition matrix `T_{kl} = ⟨e_l^{self}, e_k^{to}⟩` between two bases
    /// of the same subspace. Errors unless `T` is unitary to `1e-9`.
    pub fn transition_to(&self, to: &ModelSpace) -> Result<CMat> {
        if self.dim() != to.dim() {
            return Err(Error::BasisMismatch(format!("dimension {} vs {}", self.dim(), to.dim())));
        }
        if self.tag == to.tag {
            return Ok(CMat::identity(self.dim(), self.dim()));
        }
        let m = self.quadrature_size().max(to.quadrature_size());
        let nodes = quadrature_nodes(m);
        let a = self.sample_matrix(&nodes);
        let b = to.sample_matrix(&nodes);
        let t = b.adjoint() * a / C64::new(m as f64, 0.0);
        let n = self.dim();
        let dev = max_abs(&(t.adjoint() * &t - CMat::identity(n, n)));
        if dev > 1e-9 {
            return Err(Error::BasisMismatch(format!(
                "model spaces {} and {} differ (transition deviation {dev:e})",
                self.tag, to.tag
            )));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::DiskPoint;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_space(rng: &mut ChaCha8Rng, n: usize) -> ModelSpace {
        let zs: Vec<C64> = (0..n)
            .map(|_| C64::from_polar(0.75 * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * TAU))
            .collect();
        ModelSpace::new(&FiniteBlaschkeProduct::from_zeros(&zs).unwrap()).unwrap()
    }

    fn random_vector(rng: &mut ChaCha8Rng, s: &ModelSpace) -> ModelVector {
        s.vector(CVec::from_fn(s.dim(), |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)))
    }

    #[test]
    fn monomial_basis() {
        let s = ModelSpace::new(&FiniteBlaschkeProduct::monomial(3)).unwrap();
        let z = c(0.3, -0.2);
        let v = s.basis_values(z);
        assert!((v[0] - 1.0).norm() < 1e-16 && (v[1] - z).norm() < 1e-16 && (v[2] - z * z).norm() < 1e-16);
        assert!(s.gram_deviation() < 1e-14);
    }

    #[test]
    fn quadrature_grows_with_zero_modulus() {
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.97, 0.0)]).unwrap();
        assert!(default_quadrature(&t) > 256);
        assert!(ModelSpace::new(&t).unwrap().gram_deviation() < 1e-10);
        assert!(ModelSpace::with_quadrature(&FiniteBlaschkeProduct::monomial(4), 6).is_err());
        let bad = FiniteBlaschkeProduct::from_zeros(&[c(0.99, 0.0), c(-0.99, 0.0)]).unwrap();
        assert!(matches!(ModelSpace::with_quadrature(&bad, 16), Err(Error::QuadratureResolution(_))));
    }

    #[test]
    fn kernel_examples() {
        let s = ModelSpace::new(&FiniteBlaschkeProduct::monomial(2)).unwrap();
        let k0 = s.kernel_coords(c(0.0, 0.0));
        assert!((k0.coords[0] - 1.0).norm() < 1e-16 && k0.coords[1].norm() < 1e-16);
        let k1 = s.kernel_coords(c(1.0, 0.0));
        assert!((k1.norm().powi(2) - 2.0).abs() < 1e-14);
        // the same value through quadrature of the boundary function
        let direct = s.project(|z| (1.0 - z * z) / (1.0 - z));
        assert!((direct.coords - &k1.coords).norm() < 1e-12);
        let ck0 = s.conjugate_kernel_coords(c(0.0, 0.0));
        assert!(ck0.coords[0].norm() < 1e-14 && (ck0.coords[1] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn conjugation_on_z_squared() {
        let s = ModelSpace::new(&FiniteBlaschkeProduct::monomial(2)).unwrap();
        let j = s.conjugation_matrix().unwrap();
        let expected = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(max_abs(&(&j.j - expected)) < 1e-14);
    }

    #[test]
    fn project_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_space(&mut rng, 4);
        let e1 = s.project(|z| s.basis_values(z)[0]);
        assert!((e1.coords - s.unit(0).coords).norm() < 1e-12);
        let th = s.theta().clone();
        assert!(s.project(|z| th.eval_unchecked(z) * z).norm() < 1e-9);
        let lam = c(0.2, 0.4);
        let tl = th.eval_unchecked(lam);
        let k = s.project(|z| (1.0 - tl.conj() * th.eval_unchecked(z)) / (1.0 - lam.conj() * z));
        assert!((k.coords - s.kernel_coords(lam).coords).norm() < 1e-9);
    }

    #[test]
    fn pick_gram_matches_cauchy_kernel() {
        let zs = [c(0.1, 0.2), c(-0.5, 0.3), c(0.4, -0.4)];
        let s = ModelSpace::new(&FiniteBlaschkeProduct::from_zeros(&zs).unwrap()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let g = s.kernel_coords(zs[k]).inner(&s.kernel_coords(zs[j])).unwrap();
                let expected = 1.0 / (1.0 - zs[j] * zs[k].conj());
                assert!((g - expected).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn transition_between_orderings() {
        let zs = [c(0.1, 0.2), c(-0.5, 0.3), c(0.4, -0.4)];
        let rev: Vec<C64> = zs.iter().rev().copied().collect();
        let a = ModelSpace::new(&FiniteBlaschkeProduct::from_zeros(&zs).unwrap()).unwrap();
        let b = ModelSpace::new(&FiniteBlaschkeProduct::from_zeros(&rev).unwrap()).unwrap();
        let t = a.transition_to(&b).unwrap();
        let lam = c(0.3, 0.1);
        let ka = a.kernel_coords(lam).coords;
        assert!((&t * ka - b.kernel_coords(lam).coords).norm() < 1e-12);
        let other = ModelSpace::new(&FiniteBlaschkeProduct::from_zeros(&[c(0.0, 0.0), c(0.5, 0.0), c(0.2, 0.0)]).unwrap()).unwrap();
        assert!(a.transition_to(&other).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn kernel_calculus(seed in 0u64..10_000, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_space(&mut rng, n);
            let j = s.conjugation_matrix().unwrap();
            prop_assert!(j.involution_residual() < 1e-10);
            let f = random_vector(&mut rng, &s);
            prop_assert!((j.apply(&f).unwrap().norm() - f.norm()).abs() < 1e-10);
            let lam = C64::from_polar(0.95 * rng.gen::<f64>(), rng.gen::<f64>() * TAU);
            let mu = C64::from_polar(0.95 * rng.gen::<f64>(), rng.gen::<f64>() * TAU);
            let k = s.kernel_coords(lam);
            prop_assert!((f.inner(&k).unwrap() - s.eval_vector(&f, lam)).norm() < 1e-9);
            prop_assert!((k.norm().powi(2) - s.kernel_norm_sq(lam)).abs() < 1e-9);
            let km = s.kernel_coords(mu);
            let th = s.theta();
            let expected = (1.0 - th.eval_unchecked(lam).conj() * th.eval_unchecked(mu)) / (1.0 - lam.conj() * mu);
            prop_assert!((k.inner(&km).unwrap() - expected).norm() < 1e-9);
            let ck = s.conjugate_kernel_coords(lam);
            prop_assert!((j.apply(&k).unwrap().coords - &ck.coords).norm() < 1e-9);
            prop_assert!((s.eval_vector(&ck, lam) - th.derivative_unchecked(lam)).norm() < 1e-9);
        }
    }

    #[test]
    fn disk_point_basis_tag_depends_on_zeros_only() {
        let z = [DiskPoint::new(c(0.1, 0.0)).unwrap()];
        assert_eq!(BasisTag::from_zeros(&z), BasisTag::from_zeros(&z));
        assert_ne!(BasisTag::from_zeros(&z), BasisTag::from_zeros(&[DiskPoint::new(c(0.2, 0.0)).unwrap()]));
    }
}

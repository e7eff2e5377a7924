//! Sedlock algebras `B^a_Θ`: the generalized shifts `S^a`, their commutants,
//! and the idempotent resolutions attached to a level set of `Θ`.

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::modelspace::{ModelSpace, ModelVector};
use crate::moebius::{conj_flip, DiskPoint, ExtendedParameter, UnimodularConstant};
use crate::tto::{rank_one, tto_matrix, BasisTag, BoundarySymbol, OperatorMatrix};
use crate::C64;

/// Relative threshold for independence of the power basis.
pub const POWER_RANK_TOL: f64 = 1e-10;

/// Principal-angle tolerance for span intersections.
pub const INTERSECTION_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct SedlockAlgebra {
    pub theta: FiniteBlaschkeProduct,
    pub a: ExtendedParameter,
    pub tag: BasisTag,
    pub generator: OperatorMatrix,
    /// Frobenius-orthonormal basis; the first element is a multiple of `I`.
    pub basis: Vec<OperatorMatrix>,
}

/// `S^a = A_z + a/(1 − conj(Θ(0))a) · k_0 ⊗ Ck_0` for `|a| ≤ 1`, and
/// `(S^{1/ā})*` otherwise.
pub fn generator(space: &ModelSpace, a: ExtendedParameter) -> Result<OperatorMatrix> {
    match a {
        ExtendedParameter::Disk(_) | ExtendedParameter::Circle(_) => {
            let a = a.value().expect("finite");
            let t0 = space.theta().eval_unchecked(C64::new(0.0, 0.0));
            let den = 1.0 - t0.conj() * a;
            if den.norm() < 1e-12 {
                return Err(Error::ResonantParameter);
            }
            let az = tto_matrix(space, &BoundarySymbol::z_power(1))?;
            let zero = C64::new(0.0, 0.0);
            let k0 = space.kernel_coords(zero);
            let ck0 = space.conjugate_kernel_coords(zero);
            az.add(&rank_one(&k0, &ck0)?.scale(a / den))
        }
        ExtendedParameter::Exterior(_) | ExtendedParameter::Infinity => {
            Ok(generator(space, conj_flip(a))?.adjoint())
        }
    }
}

fn flatten(m: &OperatorMatrix) -> CVec {
    linalg::vectorize(&m.entries)
}

/// `span{I, S, …, S^{n−1}}`, orthonormalized in the Frobenius inner product.
pub fn algebra(space: &ModelSpace, a: ExtendedParameter) -> Result<SedlockAlgebra> {
    let s = generator(space, a)?;
    let n = space.dim();
    let mut powers = Vec::with_capacity(n);
    let mut p = CMat::identity(n, n);
    for _ in 0..n {
        powers.push(linalg::vectorize(&p));
        p = &p * &s.entries;
    }
    let (q, kept) = linalg::orthonormalize(&powers, POWER_RANK_TOL);
    if q.len() < n {
        return Err(Error::RankDeficient { found: kept.iter().filter(|k| **k).count(), expected: n });
    }
    let dim_commutant = commutant(&s).len();
    if dim_commutant != n {
        return Err(Error::RankDeficient { found: n, expected: dim_commutant });
    }
    let basis = q
        .iter()
        .map(|v| OperatorMatrix::on(space, linalg::unvectorize(v, n, n)))
        .collect();
    Ok(SedlockAlgebra { theta: space.theta().clone(), a, tag: space.tag(), generator: s, basis })
}

/// Orthonormal basis of `{X : MX = XM}`, ordered by increasing singular
/// value of the commutation map.
pub fn commutant(m: &OperatorMatrix) -> Vec<OperatorMatrix> {
    let n = m.rows();
    let id = CMat::identity(n, n);
    // vec(MX − XM) = (I ⊗ M − Mᵀ ⊗ I) vec(X)
    let map = id.kronecker(&m.entries) - m.entries.transpose().kronecker(&id);
    let scale = linalg::operator_norm(&m.entries).max(1.0);
    linalg::nullspace(&map, 1e-9 * scale)
        .into_iter()
        .map(|v| OperatorMatrix::new(linalg::unvectorize(&v, n, n), m.source, m.target))
        .collect()
}

impl SedlockAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn flat_basis(&self) -> Vec<CVec> {
        self.basis.iter().map(flatten).collect()
    }

    /// `‖x − proj(x)‖ / max(1, ‖x‖)` in the Frobenius norm.
    pub fn membership(&self, x: &OperatorMatrix) -> f64 {
        debug_assert_eq!(x.rows(), self.generator.rows());
        let v = flatten(x);
        linalg::span_residual(&self.flat_basis(), &v) / v.norm().max(1.0)
    }

    /// Largest membership residual over a family of matrices.
    pub fn contains_all(&self, xs: &[OperatorMatrix]) -> f64 {
        xs.iter().map(|x| self.membership(x)).fold(0.0, f64::max)
    }

    /// Symmetric containment residual between two spans.
    pub fn span_distance(&self, other: &SedlockAlgebra) -> f64 {
        self.contains_all(&other.basis).max(other.contains_all(&self.basis))
    }

    pub fn intersection_dimension(&self, other: &SedlockAlgebra) -> usize {
        linalg::intersection_dimension(&self.flat_basis(), &other.flat_basis(), INTERSECTION_TOL)
    }

    /// Largest `‖AB − BA‖` (max entry) over pairs of basis elements.
    pub fn commutator_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let (a, b) = (&self.basis[i].entries, &self.basis[j].entries);
                worst = worst.max(linalg::max_abs(&(a * b - b * a)));
            }
        }
        worst
    }

    /// Products of basis elements measured against the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            for b in &self.basis {
                let p = OperatorMatrix::new(&a.entries * &b.entries, a.source, a.target);
                worst = worst.max(self.membership(&p));
            }
        }
        worst
    }

    /// The element with coefficient vector `coeffs` in the orthonormal basis.
    pub fn element(&self, coeffs: &[C64]) -> OperatorMatrix {
        let n = self.generator.rows();
        let mut acc = CMat::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            acc += &b.entries * *c;
        }
        OperatorMatrix::new(acc, self.tag, self.tag)
    }
}

/// `A_ψ` with `ψ = φ₀(1 + a·conj(Θ)) + c`, where `φ₀ ∈ K_Θ` and `φ₀(0) = 0`.
pub fn symbol_member(space: &ModelSpace, a: ExtendedParameter, phi0: &ModelVector, c: C64) -> Result<OperatorMatrix> {
    let Some(a) = a.value() else {
        return Err(Error::InvalidInput("symbol form needs a finite parameter".into()));
    };
    if phi0.tag != space.tag() {
        return Err(Error::BasisMismatch(format!("{} vs {}", phi0.tag, space.tag())));
    }
    let at0 = space.eval_vector(phi0, C64::new(0.0, 0.0));
    if at0.norm() > 1e-10 {
        return Err(Error::InvalidInput(format!("φ₀(0) = {at0} is not zero")));
    }
    let vals = space.boundary_values(phi0);
    let m = space.quadrature_size();
    let mut weighted = space.samples().clone();
    for i in 0..m {
        let f = vals[i] * (1.0 + a * space.theta_values()[i].conj()) + c;
        for l in 0..space.dim() {
            weighted[(i, l)] *= f;
        }
    }
    let entries = space.samples().adjoint() * weighted / C64::new(m as f64, 0.0);
    Ok(OperatorMatrix::on(space, entries))
}

/// `Q_j = Ck_{w_j} ⊗ k_{w_j} / Θ′(w_j)` over the level set `Θ(w_j) = a`.
pub fn idempotents(space: &ModelSpace, a: DiskPoint) -> Result<Vec<OperatorMatrix>> {
    let pts = space.theta().simple_level_set(a.value())?;
    pts.into_iter()
        .map(|w| {
            let k = space.kernel_coords(w);
            let ck = space.conjugate_kernel_coords(w);
            let d = space.theta().derivative_unchecked(w);
            Ok(rank_one(&ck, &k)?.scale(d.inv()))
        })
        .collect()
}

/// `P_j = k_{ζ_j} ⊗ k_{ζ_j} / ‖k_{ζ_j}‖²` over the boundary level set.
pub fn clark_projections(space: &ModelSpace, a: UnimodularConstant) -> Result<Vec<OperatorMatrix>> {
    let pts = space.theta().simple_level_set(a.value())?;
    pts.into_iter()
        .map(|z| {
            let k = space.kernel_coords(z);
            let nk = k.norm().powi(2);
            Ok(rank_one(&k, &k)?.scale(C64::new(1.0 / nk, 0.0)))
        })
        .collect()
}

/// The canonical idempotent resolution of `B^a`: `Q_j` inside the disk,
/// `P_j` on the circle, adjoints of `Q_j` at `1/ā` outside.
pub fn canonical_idempotents(space: &ModelSpace, a: ExtendedParameter) -> Result<Vec<OperatorMatrix>> {
    match a {
        ExtendedParameter::Disk(d) => idempotents(space, d),
        ExtendedParameter::Circle(u) => clark_projections(space, u),
        ExtendedParameter::Exterior(_) | ExtendedParameter::Infinity => match conj_flip(a) {
            ExtendedParameter::Disk(d) => Ok(idempotents(space, d)?.iter().map(|q| q.adjoint()).collect()),
            _ => unreachable!("conj_flip maps the exterior into the disk"),
        },
    }
}

/// Residuals of the resolution laws: `(max ‖Q²−Q‖, max ‖QᵢQⱼ‖, ‖ΣQ − I‖)`.
pub fn resolution_residuals(qs: &[OperatorMatrix]) -> (f64, f64, f64) {
    let n = qs.first().map_or(0, |q| q.rows());
    let mut idem: f64 = 0.0;
    let mut orth: f64 = 0.0;
    let mut sum = CMat::zeros(n, n);
    for (i, q) in qs.iter().enumerate() {
        idem = idem.max(linalg::max_abs(&(&q.entries * &q.entries - &q.entries)));
        for (j, p) in qs.iter().enumerate() {
            if i != j {
                orth = orth.max(linalg::max_abs(&(&q.entries * &p.entries)));
            }
        }
        sum += &q.entries;
    }
    (idem, orth, linalg::max_abs(&(sum - CMat::identity(n, n))))
}

//! The Crofoot, composition and sharp unitaries between model spaces and the
//! parameter maps they induce on Sedlock algebras.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::modelspace::{quadrature_nodes, ModelSpace};
use crate::moebius::{ell, DiskPoint, ExtendedParameter, MoebiusAutomorphism};
use crate::sedlock::{self, SedlockAlgebra};
use crate::tto::{tto_matrix, BoundarySymbol, OperatorMatrix};
use crate::C64;

/// Unitarity residual accepted for constructed unitaries.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitaryKind {
    Crofoot(DiskPoint),
    Composition(MoebiusAutomorphism),
    Sharp,
}

impl fmt::Display for UnitaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Crofoot(a) => write!(f, "crofoot({a})"),
            Self::Composition(psi) => write!(f, "composition({psi})"),
            Self::Sharp => write!(f, "sharp"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpatialUnitary {
    pub matrix: OperatorMatrix,
    pub kind: UnitaryKind,
    pub target: ModelSpace,
}

impl SpatialUnitary {
    /// `A ↦ UAU*`.
    pub fn conjugate(&self, a: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.matrix.compose(a)?.compose(&self.matrix.adjoint())
    }

    /// Images of the algebra basis under `A ↦ UAU*`.
    pub fn conjugate_algebra(&self, alg: &SedlockAlgebra) -> Result<Vec<OperatorMatrix>> {
        alg.basis.iter().map(|b| self.conjugate(b)).collect()
    }
}

/// Builds the matrix of a map given by its action on boundary values:
/// column `l` projects `f_l` sampled on a common grid into `target`.
fn boundary_map<F>(source: &ModelSpace, target: &ModelSpace, action: F) -> CMat
where
    F: Fn(C64, &dyn Fn(C64) -> Vec<C64>) -> Vec<C64>,
{
    let m = source.quadrature_size().max(target.quadrature_size());
    let nodes = quadrature_nodes(m);
    let n_in = source.dim();
    let n_out = target.dim();
    let src_vals = |z: C64| source.basis_values(z);
    let mut image = CMat::zeros(m, n_in);
    for (i, &xi) in nodes.iter().enumerate() {
        for (l, v) in action(xi, &src_vals).into_iter().enumerate() {
            image[(i, l)] = v;
        }
    }
    let e = target.sample_matrix(&nodes);
    let out = e.adjoint() * image / C64::new(m as f64, 0.0);
    debug_assert_eq!(out.shape(), (n_out, n_in));
    out
}

fn finish(source: &ModelSpace, target: ModelSpace, entries: CMat, kind: UnitaryKind) -> Result<SpatialUnitary> {
    let matrix = OperatorMatrix::new(entries, source.tag(), target.tag());
    let res = matrix.unitarity_residual();
    if res > UNITARY_TOL {
        return Err(Error::Unitarity(res));
    }
    Ok(SpatialUnitary { matrix, kind, target })
}

/// `U_a f = √(1 − |a|²)/(1 − āΘ) · f`, from `K_Θ` onto `K_{b_a∘Θ}`.
pub fn crofoot(space: &ModelSpace, a: DiskPoint) -> Result<SpatialUnitary> {
    let theta = space.theta();
    let target_theta = theta.post_compose(&MoebiusAutomorphism::factor(a))?;
    let target = ModelSpace::new(&target_theta)?;
    let av = a.value();
    let s = (1.0 - av.norm_sqr()).sqrt();
    let entries = boundary_map(space, &target, |xi, f| {
        let w = s / (1.0 - av.conj() * theta.eval_unchecked(xi));
        f(xi).into_iter().map(|v| v * w).collect()
    });
    finish(space, target, entries, UnitaryKind::Crofoot(a))
}

/// `U_ψ f = √ψ′ · (f∘ψ)`, from `K_Θ` onto `K_{Θ∘ψ}`.
pub fn composition(space: &ModelSpace, psi: &MoebiusAutomorphism) -> Result<SpatialUnitary> {
    let target_theta = space.theta().pre_compose(psi)?;
    let target = ModelSpace::new(&target_theta)?;
    let entries = boundary_map(space, &target, |xi, f| {
        let w = psi.sqrt_derivative(xi);
        f(psi.eval(xi)).into_iter().map(|v| v * w).collect()
    });
    finish(space, target, entries, UnitaryKind::Composition(*psi))
}

/// `U_# f(ξ) = ξ̄ · f(ξ̄) · Θ^#(ξ)`, from `K_Θ` onto `K_{Θ^#}`.
pub fn sharp_unitary(space: &ModelSpace) -> Result<SpatialUnitary> {
    let target_theta = space.theta().sharp();
    let target = ModelSpace::new(&target_theta)?;
    let th = target_theta.clone();
    let entries = boundary_map(space, &target, |xi, f| {
        let w = xi.conj() * th.eval_unchecked(xi);
        f(xi.conj()).into_iter().map(|v| v * w).collect()
    });
    finish(space, target, entries, UnitaryKind::Sharp)
}

/// The parameter `g(a)` with `Λ(B^a_Θ) = B^{g(a)}`.
pub fn lambda_image(kind: &UnitaryKind, a: ExtendedParameter) -> ExtendedParameter {
    match kind {
        UnitaryKind::Sharp => a.reciprocal(),
        UnitaryKind::Composition(_) => a,
        UnitaryKind::Crofoot(c) => ell(*c, a),
    }
}

/// `min_ω ‖A − ωB‖` over unimodular `ω`, in operator norm.
pub fn phase_insensitive_distance(a: &CMat, b: &CMat) -> f64 {
    let ip: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let w = if ip.norm() > 0.0 { ip / ip.norm() } else { C64::new(1.0, 0.0) };
    linalg::operator_norm(&(a - b * w))
}

/// Re-expresses an operator on `from` in the basis of `to` (same subspace).
pub fn rebase(m: &OperatorMatrix, from_source: &ModelSpace, to_source: &ModelSpace, from_target: &ModelSpace, to_target: &ModelSpace) -> Result<OperatorMatrix> {
    if m.source != from_source.tag() || m.target != from_target.tag() {
        return Err(Error::BasisMismatch("operator tags differ from the given spaces".into()));
    }
    let ts = from_source.transition_to(to_source)?;
    let tt = from_target.transition_to(to_target)?;
    Ok(OperatorMatrix::new(&tt * &m.entries * ts.adjoint(), to_source.tag(), to_target.tag()))
}

/// Residual tables for the word relations between basic unitaries.
#[derive(Clone, Debug)]
pub struct WordResiduals {
    pub entries: Vec<(String, f64)>,
}

impl WordResiduals {
    pub fn max(&self) -> f64 {
        self.entries.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// Parameters for [`word_relation_residuals`].
#[derive(Clone, Copy, Debug)]
pub struct WordParameters {
    pub a: DiskPoint,
    pub b: DiskPoint,
    pub psi: MoebiusAutomorphism,
    pub phi: MoebiusAutomorphism,
}

/// Residuals of
/// (i) `U_b U_a = (|1 + b̄a|/(1 + b̄a)) U_{(a+b)/(1+bā)}`,
/// (ii) `U_a* = U_{−a}`, (iii) `U_φ U_ψ = U_{ψ∘φ}`, (iv) `U_φ* = U_{φ⁻¹}`,
/// (v) `U_ψ U_b = U_b U_ψ`, (vi) `U_# U_a = U_ā U_#`, (vii) `U_# U_ψ = U_{ψ^#} U_#`.
///
/// Relations involving `U_ψ` or `U_#` are compared up to a unimodular factor
/// since the branch of `√ψ′` is a convention.
pub fn word_relation_residuals(space: &ModelSpace, p: &WordParameters) -> Result<WordResiduals> {
    let mut out = Vec::new();
    let (a, b) = (p.a.value(), p.b.value());

    // (i)
    let ua = crofoot(space, p.a)?;
    let ub_after = crofoot(&ua.target, p.b)?;
    let lhs = ub_after.matrix.compose(&ua.matrix)?;
    let ab = DiskPoint::with_tolerance((a + b) / (1.0 + b * a.conj()), 0.0)?;
    let uab = crofoot(space, ab)?;
    let factor = (1.0 + b.conj() * a).norm() / (1.0 + b.conj() * a);
    let rhs = rebase(&uab.matrix, space, space, &uab.target, &ub_after.target)?.scale(factor);
    out.push(("(i) U_b U_a".to_string(), lhs.sub(&rhs)?.norm()));

    // (ii)
    let uma = crofoot(&ua.target, p.a.neg())?;
    let back = rebase(&uma.matrix, &ua.target, &ua.target, &uma.target, space)?;
    out.push(("(ii) U_a* = U_-a".to_string(), back.sub(&ua.matrix.adjoint())?.norm()));

    // (iii)
    let upsi = composition(space, &p.psi)?;
    let uphi = composition(&upsi.target, &p.phi)?;
    let lhs = uphi.matrix.compose(&upsi.matrix)?;
    let comp = p.psi.compose(&p.phi);
    let ucomp = composition(space, &comp)?;
    let rhs = rebase(&ucomp.matrix, space, space, &ucomp.target, &uphi.target)?;
    out.push(("(iii) U_phi U_psi".to_string(), phase_insensitive_distance(&lhs.entries, &rhs.entries)));

    // (iv)
    let uinv = composition(&upsi.target, &p.psi.inverse())?;
    let back = rebase(&uinv.matrix, &upsi.target, &upsi.target, &uinv.target, space)?;
    out.push((
        "(iv) U_psi* = U_psi^-1".to_string(),
        phase_insensitive_distance(&back.entries, &upsi.matrix.adjoint().entries),
    ));

    // (v): both sides map K_Θ onto K_{b_b∘Θ∘ψ}
    let ub = crofoot(space, p.b)?;
    let upsi_after_b = composition(&ub.target, &p.psi)?;
    let lhs = upsi_after_b.matrix.compose(&ub.matrix)?;
    let ub_after_psi = crofoot(&upsi.target, p.b)?;
    let rhs0 = ub_after_psi.matrix.compose(&upsi.matrix)?;
    let rhs = rebase(&rhs0, space, space, &ub_after_psi.target, &upsi_after_b.target)?;
    out.push(("(v) U_psi U_b".to_string(), phase_insensitive_distance(&lhs.entries, &rhs.entries)));

    // (vi)
    let us = sharp_unitary(space)?;
    let us_after_a = sharp_unitary(&ua.target)?;
    let lhs = us_after_a.matrix.compose(&ua.matrix)?;
    let uabar = crofoot(&us.target, p.a.conj())?;
    let rhs0 = uabar.matrix.compose(&us.matrix)?;
    let rhs = rebase(&rhs0, space, space, &uabar.target, &us_after_a.target)?;
    out.push(("(vi) U_# U_a".to_string(), phase_insensitive_distance(&lhs.entries, &rhs.entries)));

    // (vii)
    let us_after_psi = sharp_unitary(&upsi.target)?;
    let lhs = us_after_psi.matrix.compose(&upsi.matrix)?;
    let upsis = composition(&us.target, &p.psi.sharp())?;
    let rhs0 = upsis.matrix.compose(&us.matrix)?;
    let rhs = rebase(&rhs0, space, space, &upsis.target, &us_after_psi.target)?;
    out.push(("(vii) U_# U_psi".to_string(), phase_insensitive_distance(&lhs.entries, &rhs.entries)));

    Ok(WordResiduals { entries: out })
}

/// `‖U_a S^a U_a* − S^0_{Θ_a}‖`.
pub fn crofoot_conjugation_residual(space: &ModelSpace, a: DiskPoint) -> Result<f64> {
    let u = crofoot(space, a)?;
    let s = sedlock::generator(space, ExtendedParameter::Disk(a))?;
    let s0 = sedlock::generator(&u.target, ExtendedParameter::Disk(DiskPoint::origin()))?;
    Ok(u.conjugate(&s)?.sub(&s0)?.norm())
}

/// `‖U_c k_0^Θ − (1 − c·conj(Θ(0)))/√(1 − |c|²) · k_0^{Θ_c}‖`.
pub fn crofoot_kernel_residual(space: &ModelSpace, c: DiskPoint) -> Result<f64> {
    let u = crofoot(space, c)?;
    let zero = C64::new(0.0, 0.0);
    let k0 = space.kernel_coords(zero);
    let t0 = space.theta().eval_unchecked(zero);
    let cv = c.value();
    let scale = (1.0 - cv * t0.conj()) / (1.0 - cv.norm_sqr()).sqrt();
    let expected = u.target.kernel_coords(zero).coords * scale;
    Ok((u.matrix.apply(&k0)?.coords - expected).norm())
}

/// `‖U_ψ A_φ U_ψ* − A^{Θ∘ψ}_{φ∘ψ}‖`.
pub fn composition_intertwining_residual(space: &ModelSpace, psi: &MoebiusAutomorphism, phi: &BoundarySymbol) -> Result<f64> {
    let u = composition(space, psi)?;
    let a = tto_matrix(space, phi)?;
    let (ph, ps) = (phi.clone(), *psi);
    let target_sym = BoundarySymbol::sampled(move |z| ph.eval(ps.eval(z)));
    let b = tto_matrix(&u.target, &target_sym)?;
    Ok(u.conjugate(&a)?.sub(&b)?.norm())
}

/// `‖U_# A_φ U_#* − A^{Θ^#}_{conj(φ^#)}‖`, where `conj(φ^#)(ξ) = φ(ξ̄)`.
pub fn sharp_intertwining_residual(space: &ModelSpace, phi: &BoundarySymbol) -> Result<f64> {
    let u = sharp_unitary(space)?;
    let a = tto_matrix(space, phi)?;
    let b = tto_matrix(&u.target, &phi.reflect())?;
    Ok(u.conjugate(&a)?.sub(&b)?.norm())
}

/// Symmetric span residual between `U B^a_Θ U*` and `B^{g(a)}` on the target.
pub fn image_span_residual(space: &ModelSpace, u: &SpatialUnitary, a: ExtendedParameter) -> Result<f64> {
    let alg = sedlock::algebra(space, a)?;
    let image = u.conjugate_algebra(&alg)?;
    let target_alg = sedlock::algebra(&u.target, lambda_image(&u.kind, a))?;
    Ok(span_match_residual(&image, &target_alg))
}

/// Largest relative residual of `image` in the span of `alg` and of the
/// basis of `alg` in the span of `image`.
pub fn span_match_residual(image: &[OperatorMatrix], alg: &SedlockAlgebra) -> f64 {
    let fwd = alg.contains_all(image);
    let (q, _) = linalg::orthonormalize(&image.iter().map(|m| linalg::vectorize(&m.entries)).collect::<Vec<CVec>>(), 1e-12);
    let back = alg
        .basis
        .iter()
        .map(|m| {
            let v = linalg::vectorize(&m.entries);
            linalg::span_residual(&q, &v) / v.norm().max(1.0)
        })
        .fold(0.0, f64::max);
    fwd.max(back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::FiniteBlaschkeProduct;
    use crate::moebius::UnimodularConstant;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_space(rng: &mut ChaCha8Rng, n: usize) -> ModelSpace {
        let zs: Vec<C64> = (0..n)
            .map(|_| C64::from_polar(0.7 * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * TAU))
            .collect();
        ModelSpace::new(&FiniteBlaschkeProduct::with_gamma(C64::from_polar(1.0, rng.gen::<f64>() * TAU), &zs).unwrap())
            .unwrap()
    }

    fn random_auto(rng: &mut ChaCha8Rng) -> MoebiusAutomorphism {
        MoebiusAutomorphism::new(
            UnimodularConstant::from_angle(rng.gen::<f64>() * TAU),
            DiskPoint::new(C64::from_polar(0.5 * rng.gen::<f64>(), rng.gen::<f64>() * TAU)).unwrap(),
        )
    }

    #[test]
    fn identities_are_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_space(&mut rng, 3);
        let u = crofoot(&s, DiskPoint::origin()).unwrap();
        let t = rebase(&u.matrix, &s, &s, &u.target, &s).unwrap();
        assert!(t.sub(&OperatorMatrix::identity(&s)).unwrap().max_abs() < 1e-12);
        let u = composition(&s, &MoebiusAutomorphism::identity()).unwrap();
        let t = rebase(&u.matrix, &s, &s, &u.target, &s).unwrap();
        assert!(t.sub(&OperatorMatrix::identity(&s)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn sharp_on_z_squared_swaps_basis() {
        let s = ModelSpace::new(&FiniteBlaschkeProduct::monomial(2)).unwrap();
        let u = sharp_unitary(&s).unwrap();
        assert_eq!(u.target.tag(), s.tag());
        let expected = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(linalg::max_abs(&(&u.matrix.entries - expected)) < 1e-14);
        let sq = u.matrix.compose(&u.matrix).unwrap();
        assert!(sq.sub(&OperatorMatrix::identity(&s)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn sharp_kernel_image_by_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_space(&mut rng, 3);
        let u = sharp_unitary(&s).unwrap();
        let k0 = s.kernel_coords(c(0.0, 0.0));
        let th = s.theta().clone();
        let ths = th.sharp();
        let t0 = th.eval_unchecked(c(0.0, 0.0));
        let direct = u.target.project(|z| {
            let w = z.conj();
            z.conj() * (1.0 - t0.conj() * th.eval_unchecked(w)) * ths.eval_unchecked(z)
        });
        assert!((u.matrix.apply(&k0).unwrap().coords - direct.coords).norm() < 1e-10);
    }

    #[test]
    fn lambda_image_examples() {
        assert_eq!(lambda_image(&UnitaryKind::Sharp, ExtendedParameter::from_complex(c(0.0, 0.0))), ExtendedParameter::Infinity);
        let cc = DiskPoint::new(c(0.3, 0.2)).unwrap();
        match lambda_image(&UnitaryKind::Crofoot(cc), ExtendedParameter::Disk(cc)) {
            ExtendedParameter::Disk(d) => assert!(d.value().norm() < 1e-15),
            other => panic!("{other}"),
        }
        let p = ExtendedParameter::from_complex(c(0.1, -0.6));
        assert_eq!(lambda_image(&UnitaryKind::Composition(MoebiusAutomorphism::identity()), p), p);
    }

    #[test]
    fn word_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..4 {
            let s = random_space(&mut rng, n);
            let p = WordParameters {
                a: DiskPoint::new(c(0.3, 0.0)).unwrap(),
                b: DiskPoint::new(c(0.0, 0.2)).unwrap(),
                psi: random_auto(&mut rng),
                phi: random_auto(&mut rng),
            };
            let r = word_relation_residuals(&s, &p).unwrap();
            assert_eq!(r.entries.len(), 7);
            for (name, v) in &r.entries {
                assert!(*v < 1e-9, "{name}: {v:e}");
            }
        }
    }

    #[test]
    fn intertwining_and_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_space(&mut rng, 3);
        let a = DiskPoint::new(c(-0.2, 0.45)).unwrap();
        assert!(crofoot_conjugation_residual(&s, a).unwrap() < 1e-9);
        assert!(crofoot_kernel_residual(&s, a).unwrap() < 1e-9);
        let psi = random_auto(&mut rng);
        for phi in [BoundarySymbol::z_power(1), BoundarySymbol::z_power(2)] {
            assert!(composition_intertwining_residual(&s, &psi, &phi).unwrap() < 1e-9);
            assert!(sharp_intertwining_residual(&s, &phi).unwrap() < 1e-9);
        }
        let z2 = ModelSpace::new(&FiniteBlaschkeProduct::monomial(2)).unwrap();
        let rot = MoebiusAutomorphism::rotation(UnimodularConstant::from_angle(0.7));
        assert!(composition_intertwining_residual(&z2, &rot, &BoundarySymbol::z_power(1)).unwrap() < 1e-10);
        let kinds = [
            crofoot(&s, a).unwrap(),
            composition(&s, &psi).unwrap(),
            sharp_unitary(&s).unwrap(),
        ];
        for u in &kinds {
            for p in [c(0.0, 0.0), c(0.5, -0.1), c(0.0, 1.0), c(2.0, 0.5)] {
                let r = image_span_residual(&s, u, ExtendedParameter::from_complex(p)).unwrap();
                assert!(r < 1e-8, "{}: {p}: {r:e}", u.kind);
            }
            let r = image_span_residual(&s, u, ExtendedParameter::Infinity).unwrap();
            assert!(r < 1e-8);
        }
    }
}

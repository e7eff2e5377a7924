//! Deciding spatial isomorphism `B^{a₁}_{Θ₁} ≅ B^{a₂}_{Θ₂}`.
//!
//! Circle parameters give algebras of normal operators, classified by the
//! atom count of the Clark measure. A circle parameter is never equivalent
//! to an off-circle one. Off the circle, exterior parameters are moved into
//! the disk through `(Θ, a) ↦ (Θ^#, 1/a)` and the functional equation
//! `Θ₁ = b_{−a₁}(ζ b_{a₂}) ∘ Θ₂ ∘ ψ` is solved.

pub mod rigidity;
mod solve;

use std::fmt;

use crate::blaschke::{ClarkMeasure, FiniteBlaschkeProduct, KappaInvariant};
use crate::error::Result;
use crate::linalg::{self, CMat};
use crate::modelspace::ModelSpace;
use crate::moebius::{DiskPoint, ExtendedParameter, MoebiusAutomorphism, UnimodularConstant};
use crate::optimize::SimplexOptions;
use crate::sedlock;
use crate::tto::OperatorMatrix;
use crate::unitaries::{self, SpatialUnitary};

pub use rigidity::{rigidity_check, rigidity_check_with, Rigidity, Symmetry};
pub use solve::{equation_residual, fresh_samples, functional_equation_solve_with};

pub const TOL_ACCEPT: f64 = 1e-8;
pub const TOL_REJECT: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct IsoQuery {
    pub theta1: FiniteBlaschkeProduct,
    pub a1: ExtendedParameter,
    pub theta2: FiniteBlaschkeProduct,
    pub a2: ExtendedParameter,
}

impl IsoQuery {
    pub fn new(
        theta1: FiniteBlaschkeProduct,
        a1: ExtendedParameter,
        theta2: FiniteBlaschkeProduct,
        a2: ExtendedParameter,
    ) -> Self {
        Self { theta1, a1, theta2, a2 }
    }

    /// Same inner function on both sides.
    pub fn same(theta: &FiniteBlaschkeProduct, a1: ExtendedParameter, a2: ExtendedParameter) -> Self {
        Self::new(theta.clone(), a1, theta.clone(), a2)
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.theta2.clone(), self.a2, self.theta1.clone(), self.a1)
    }
}

/// Start grid of the simplex multistart: `angles² · radii²` starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub angles: usize,
    pub radii: usize,
}

impl GridSpec {
    /// `density` angle steps with radial steps scaled as in the default `8 × 5`.
    pub fn with_density(density: usize) -> Self {
        Self { angles: density, radii: (5 * density).div_ceil(8) }
    }

    pub fn starts(&self) -> usize {
        self.angles * self.angles * self.radii * self.radii
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { angles: 8, radii: 5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecideOptions {
    pub tol_accept: f64,
    pub tol_reject: f64,
    pub grid: GridSpec,
    /// Circle samples in the objective.
    pub samples: usize,
    pub simplex: SimplexOptions,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            tol_accept: TOL_ACCEPT,
            tol_reject: TOL_REJECT,
            grid: GridSpec::default(),
            samples: 64,
            simplex: SimplexOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    DegreeMismatch,
    NormalVsNonnormal,
    KappaMismatch,
    /// `zⁿ` with `|a₁| ≠ |a₂|`.
    ModulusLaw,
    /// No disk automorphism carries one level set onto the other.
    LevelSetInvariant,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Self::DegreeMismatch => "degree-mismatch",
            Self::NormalVsNonnormal => "normal-vs-nonnormal",
            Self::KappaMismatch => "kappa-mismatch",
            Self::ModulusLaw => "modulus-law",
            Self::LevelSetInvariant => "level-set-invariant",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// `(ζ, ψ)` solving the reduced functional equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub zeta: UnimodularConstant,
    pub psi: MoebiusAutomorphism,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Witness(Witness),
    /// Both parameters on the circle with equal Clark invariants.
    Kappa(KappaInvariant),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equivalent(Certificate),
    NotEquivalent(Reason),
    Undetermined { best_residual: f64, starts: usize },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Equivalent(_) => "equivalent",
            Self::NotEquivalent(_) => "not-equivalent",
            Self::Undetermined { .. } => "undetermined",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Equivalent(_) => 0,
            Self::NotEquivalent(_) => 1,
            Self::Undetermined { .. } => 2,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Self::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Self::Equivalent(Certificate::Witness(w)) => Some(w),
            _ => None,
        }
    }

    /// Agreement of the three-valued outcome, ignoring certificates.
    pub fn same_outcome(&self, other: &Verdict) -> bool {
        self.label() == other.label()
    }
}

/// Which sides were replaced by `(Θ^#, 1/a)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Reduction {
    pub sharp1: bool,
    pub sharp2: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsoDecision {
    pub verdict: Verdict,
    pub reduction: Reduction,
    /// Disk parameters of the reduced equation, when one was solved.
    pub reduced: Option<(DiskPoint, DiskPoint)>,
}

impl IsoDecision {
    pub(crate) fn new(verdict: Verdict) -> Self {
        Self { verdict, reduction: Reduction::default(), reduced: None }
    }
}

pub fn kappa(m: &ClarkMeasure) -> KappaInvariant {
    m.kappa()
}

fn circle_kappa(theta: &FiniteBlaschkeProduct, a: UnimodularConstant) -> KappaInvariant {
    theta
        .clark_measure(a)
        .map(|m| kappa(&m))
        .unwrap_or(KappaInvariant { epsilon: 0, n: Some(theta.degree()) })
}

/// `(Θ, a)` for `a` in the disk, `(Θ^#, 1/a)` for exterior `a`.
fn reduce(theta: &FiniteBlaschkeProduct, a: ExtendedParameter) -> (FiniteBlaschkeProduct, DiskPoint, bool) {
    match a {
        ExtendedParameter::Disk(p) => (theta.clone(), p, false),
        ExtendedParameter::Infinity => (theta.sharp(), DiskPoint::origin(), true),
        ExtendedParameter::Exterior(z) => {
            let p = DiskPoint::with_tolerance(z.inv(), 0.0).expect("reciprocal of an exterior point");
            (theta.sharp(), p, true)
        }
        ExtendedParameter::Circle(_) => unreachable!("circle parameters are not reduced"),
    }
}

pub fn decide(q: &IsoQuery) -> IsoDecision {
    decide_with(q, &DecideOptions::default())
}

pub fn decide_with(q: &IsoQuery, opts: &DecideOptions) -> IsoDecision {
    match (q.a1, q.a2) {
        (ExtendedParameter::Circle(u1), ExtendedParameter::Circle(u2)) => {
            let k1 = circle_kappa(&q.theta1, u1);
            let k2 = circle_kappa(&q.theta2, u2);
            let v = if k1 == k2 {
                Verdict::Equivalent(Certificate::Kappa(k1))
            } else {
                Verdict::NotEquivalent(Reason::KappaMismatch)
            };
            return IsoDecision::new(v);
        }
        (ExtendedParameter::Circle(_), _) | (_, ExtendedParameter::Circle(_)) => {
            return IsoDecision::new(Verdict::NotEquivalent(Reason::NormalVsNonnormal));
        }
        _ => {}
    }
    if q.theta1.degree() != q.theta2.degree() {
        return IsoDecision::new(Verdict::NotEquivalent(Reason::DegreeMismatch));
    }
    let (t1, p1, s1) = reduce(&q.theta1, q.a1);
    let (t2, p2, s2) = reduce(&q.theta2, q.a2);
    let mut d = functional_equation_solve_with(&t1, &t2, p1, p2, opts);
    d.reduction = Reduction { sharp1: s1, sharp2: s2 };
    d.reduced = Some((p1, p2));
    d
}

/// Disk-parameter solve with default options.
pub fn functional_equation_solve(
    theta1: &FiniteBlaschkeProduct,
    theta2: &FiniteBlaschkeProduct,
    a1: DiskPoint,
    a2: DiskPoint,
) -> IsoDecision {
    let mut d = functional_equation_solve_with(theta1, theta2, a1, a2, &DecideOptions::default());
    d.reduced = Some((a1, a2));
    d
}

/// The reduced inner functions of a query, as used by its witness.
pub fn reduced_pair(q: &IsoQuery) -> Option<(FiniteBlaschkeProduct, DiskPoint, FiniteBlaschkeProduct, DiskPoint)> {
    if q.a1.is_circle() || q.a2.is_circle() {
        return None;
    }
    let (t1, p1, _) = reduce(&q.theta1, q.a1);
    let (t2, p2, _) = reduce(&q.theta2, q.a2);
    Some((t1, p1, t2, p2))
}

/// Functional-equation residual of the decision's witness at 256 points
/// disjoint from the optimisation samples.
pub fn reverify(q: &IsoQuery, d: &IsoDecision) -> Option<f64> {
    let w = d.verdict.witness()?;
    let (t1, p1, t2, p2) = reduced_pair(q)?;
    Some(equation_residual(&t1, p1, &t2, p2, w.zeta, &w.psi, &fresh_samples(256)))
}

/// Witness for `q₁ → q₃` from witnesses for `q₁ → q₂` and `q₂ → q₃`:
/// `ζ₁₃ = ζ₁₂ζ₂₃` and `ψ₁₃ = ψ₂₃ ∘ ψ₁₂`.
pub fn compose_witnesses(w12: &Witness, w23: &Witness) -> Witness {
    Witness {
        zeta: w12.zeta.mul(w23.zeta),
        psi: w23.psi.compose(&w12.psi),
        residual: f64::NAN,
    }
}

/// Builds the spatial unitary `V: K_{Θ₂} → K_{Θ₁}` realising an Equivalent
/// verdict and returns it with the symmetric span residual between
/// `V B^{a₂}_{Θ₂} V*` and `B^{a₁}_{Θ₁}`.
pub fn spatial_unitary(q: &IsoQuery, d: &IsoDecision) -> Result<Option<(OperatorMatrix, f64)>> {
    let space1 = ModelSpace::new(&q.theta1)?;
    let space2 = ModelSpace::new(&q.theta2)?;
    let v = match &d.verdict {
        Verdict::Equivalent(Certificate::Witness(w)) => witness_chain(&space1, q.a1, &space2, q.a2, w)?,
        Verdict::Equivalent(Certificate::Kappa(_)) => {
            let (ExtendedParameter::Circle(u1), ExtendedParameter::Circle(u2)) = (q.a1, q.a2) else {
                return Ok(None);
            };
            clark_chain(&space1, u1, &space2, u2)?
        }
        _ => return Ok(None),
    };
    let source = sedlock::algebra(&space2, q.a2)?;
    let target = sedlock::algebra(&space1, q.a1)?;
    let image = source
        .basis
        .iter()
        .map(|b| v.compose(b)?.compose(&v.adjoint()))
        .collect::<Result<Vec<_>>>()?;
    let res = unitaries::span_match_residual(&image, &target);
    Ok(Some((v, res)))
}

fn optional_sharp(space: &ModelSpace, sharp: bool) -> Result<Option<SpatialUnitary>> {
    if sharp {
        unitaries::sharp_unitary(space).map(Some)
    } else {
        Ok(None)
    }
}

/// `V = S₁* U_{ã₁}* T U_ψ U_{ã₂} S₂`, where `S` are sharp unitaries of the
/// reduction, `U_a` Crofoot transforms and `T` the change of basis between
/// two orthonormal bases of the same model space.
fn witness_chain(
    space1: &ModelSpace,
    a1: ExtendedParameter,
    space2: &ModelSpace,
    a2: ExtendedParameter,
    w: &Witness,
) -> Result<OperatorMatrix> {
    let (_, p1, s1) = reduce(space1.theta(), a1);
    let (_, p2, s2) = reduce(space2.theta(), a2);
    let sh1 = optional_sharp(space1, s1)?;
    let sh2 = optional_sharp(space2, s2)?;
    let hat1 = sh1.as_ref().map(|u| &u.target).unwrap_or(space1);
    let hat2 = sh2.as_ref().map(|u| &u.target).unwrap_or(space2);
    let c2 = unitaries::crofoot(hat2, p2)?;
    let comp = unitaries::composition(&c2.target, &w.psi)?;
    let c1 = unitaries::crofoot(hat1, p1)?;
    let t = OperatorMatrix::new(comp.target.transition_to(&c1.target)?, comp.target.tag(), c1.target.tag());
    let mut v = t.compose(&comp.matrix)?.compose(&c2.matrix)?;
    if let Some(s) = &sh2 {
        v = v.compose(&s.matrix)?;
    }
    v = c1.matrix.adjoint().compose(&v)?;
    if let Some(s) = &sh1 {
        v = s.matrix.adjoint().compose(&v)?;
    }
    Ok(v)
}

/// Sends the normalised Clark eigenvectors of `B^{u₂}_{Θ₂}` to those of `B^{u₁}_{Θ₁}`.
fn clark_chain(
    space1: &ModelSpace,
    u1: UnimodularConstant,
    space2: &ModelSpace,
    u2: UnimodularConstant,
) -> Result<OperatorMatrix> {
    let l1 = space1.theta().simple_level_set(u1.value())?;
    let l2 = space2.theta().simple_level_set(u2.value())?;
    let unit = |space: &ModelSpace, z| {
        let k = space.kernel_coords(z).coords;
        let n = k.norm();
        k / crate::C64::new(n, 0.0)
    };
    let mut m = CMat::zeros(space1.dim(), space2.dim());
    for (&x, &y) in l1.iter().zip(&l2) {
        m += unit(space1, x) * unit(space2, y).adjoint();
    }
    let v = OperatorMatrix::new(m, space2.tag(), space1.tag());
    let res = v.unitarity_residual();
    if res > unitaries::UNITARY_TOL {
        return Err(crate::Error::Unitarity(res));
    }
    Ok(v)
}

/// Largest distance between the conjugated idempotents of `B^{a₂}` and the
/// idempotents of `B^{a₁}`, matched greedily; used to compare norm profiles.
pub fn idempotent_transport_residual(q: &IsoQuery, v: &OperatorMatrix) -> Result<f64> {
    let space1 = ModelSpace::new(&q.theta1)?;
    let space2 = ModelSpace::new(&q.theta2)?;
    let src = sedlock::canonical_idempotents(&space2, q.a2)?;
    let dst = sedlock::canonical_idempotents(&space1, q.a1)?;
    let mut worst: f64 = 0.0;
    let mut free = vec![true; dst.len()];
    for s in &src {
        let img = v.compose(s)?.compose(&v.adjoint())?;
        let (k, d) = dst
            .iter()
            .enumerate()
            .filter(|(k, _)| free[*k])
            .map(|(k, t)| (k, linalg::operator_norm(&(&img.entries - &t.entries))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("same dimension");
        free[k] = false;
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;

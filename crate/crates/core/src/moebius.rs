//! Disk automorphisms and points of the extended complex plane.
//!
//! Automorphisms are kept in the canonical form `ψ(z) = λ·b_c(z)` with
//! `b_c(z) = (z − c)/(1 − c̄z)`, never as 2×2 matrices, so that equality is a
//! parameter-wise comparison.

use std::fmt;

use crate::error::{Error, Result};
use crate::C64;

/// Points closer than this to the unit circle are classified as lying on it.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// Tolerance for parameter-wise equality of automorphisms.
pub const AUTOMORPHISM_EQ_TOL: f64 = 1e-10;

/// A point of the open unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(z: C64) -> Result<Self> {
        Self::with_tolerance(z, BOUNDARY_EPS)
    }

    pub fn with_tolerance(z: C64, eps: f64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite disk point {z}")));
        }
        if z.norm() >= 1.0 - eps {
            return Err(Error::InvalidInput(format!(
                "|{z}| = {} is not inside the open unit disk",
                z.norm()
            )));
        }
        Ok(Self(z))
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im))
    }

    pub fn origin() -> Self {
        Self(C64::new(0.0, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Self(-self.0)
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A complex number of modulus one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnimodularConstant(C64);

impl UnimodularConstant {
    /// Accepts values within `1e-9` of the circle and renormalizes them.
    pub fn new(z: C64) -> Result<Self> {
        let r = z.norm();
        if !r.is_finite() || (r - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("|{z}| = {r} is not unimodular")));
        }
        Ok(Self(z / r))
    }

    /// Projects any nonzero value onto the circle.
    pub fn normalize(z: C64) -> Self {
        let r = z.norm();
        if r == 0.0 || !r.is_finite() {
            Self::one()
        } else {
            Self(z / r)
        }
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(C64::from_polar(1.0, theta))
    }

    pub fn one() -> Self {
        Self(C64::new(1.0, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        Self::normalize(self.0 * other.0)
    }

    pub fn arg(self) -> f64 {
        self.0.arg()
    }
}

impl fmt::Display for UnimodularConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of the Riemann sphere, classified relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedParameter {
    Disk(DiskPoint),
    Circle(UnimodularConstant),
    /// Finite point with modulus greater than one.
    Exterior(C64),
    Infinity,
}

impl ExtendedParameter {
    /// Classifies a finite complex number, snapping values within
    /// [`BOUNDARY_EPS`] of the circle onto it.
    pub fn from_complex(z: C64) -> Self {
        Self::from_complex_with(z, BOUNDARY_EPS)
    }

    pub fn from_complex_with(z: C64, eps: f64) -> Self {
        let r = z.norm();
        if !r.is_finite() {
            return Self::Infinity;
        }
        if (r - 1.0).abs() <= eps {
            Self::Circle(UnimodularConstant::normalize(z))
        } else if r < 1.0 {
            Self::Disk(DiskPoint(z))
        } else {
            Self::Exterior(z)
        }
    }

    pub fn value(self) -> Option<C64> {
        match self {
            Self::Disk(d) => Some(d.value()),
            Self::Circle(u) => Some(u.value()),
            Self::Exterior(z) => Some(z),
            Self::Infinity => None,
        }
    }

    pub fn is_circle(self) -> bool {
        matches!(self, Self::Circle(_))
    }

    pub fn is_disk(self) -> bool {
        matches!(self, Self::Disk(_))
    }

    /// `a ↦ 1/a` on the sphere (`0 ↔ ∞`).
    pub fn reciprocal(self) -> Self {
        match self.value() {
            None => Self::from_complex(C64::new(0.0, 0.0)),
            Some(z) if z == C64::new(0.0, 0.0) => Self::Infinity,
            Some(z) => match self {
                Self::Circle(u) => Self::Circle(u.conj()),
                _ => Self::from_complex(z.inv()),
            },
        }
    }

    /// Distance used to compare parameters; infinity only matches infinity.
    pub fn distance(self, other: Self) -> f64 {
        match (self.value(), other.value()) {
            (None, None) => 0.0,
            (Some(a), Some(b)) => (a - b).norm(),
            _ => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disk(d) => write!(f, "disk({})", d.value()),
            Self::Circle(u) => write!(f, "circle({})", u.value()),
            Self::Exterior(z) => write!(f, "exterior({z})"),
            Self::Infinity => write!(f, "infinity"),
        }
    }
}

/// `b_a(z) = (z − a)/(1 − āz)`.
pub fn blaschke_factor_eval(a: DiskPoint, z: C64) -> Result<C64> {
    let a = a.value();
    let den = C64::new(1.0, 0.0) - a.conj() * z;
    if den.norm() <= f64::EPSILON * (1.0 + z.norm()) {
        return Err(Error::Pole(z));
    }
    Ok((z - a) / den)
}

#[inline]
pub(crate) fn factor(a: C64, z: C64) -> C64 {
    (z - a) / (1.0 - a.conj() * z)
}

/// `ψ(z) = λ(z − c)/(1 − c̄z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusAutomorphism {
    pub lambda: UnimodularConstant,
    pub c: DiskPoint,
}

impl MoebiusAutomorphism {
    pub fn new(lambda: UnimodularConstant, c: DiskPoint) -> Self {
        Self { lambda, c }
    }

    pub fn identity() -> Self {
        Self::new(UnimodularConstant::one(), DiskPoint::origin())
    }

    pub fn rotation(lambda: UnimodularConstant) -> Self {
        Self::new(lambda, DiskPoint::origin())
    }

    /// The factor `b_c`.
    pub fn factor(c: DiskPoint) -> Self {
        Self::new(UnimodularConstant::one(), c)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.lambda.value() * factor(self.c.value(), z)
    }

    pub fn try_eval(&self, z: C64) -> Result<C64> {
        Ok(self.lambda.value() * blaschke_factor_eval(self.c, z)?)
    }

    /// `ψ'(z) = λ(1 − |c|²)/(1 − c̄z)²`.
    pub fn derivative(&self, z: C64) -> C64 {
        let c = self.c.value();
        let den = 1.0 - c.conj() * z;
        self.lambda.value() * (1.0 - c.norm_sqr()) / (den * den)
    }

    /// The branch `√λ·√(1 − |c|²)/(1 − c̄z)` of `√ψ'`, principal `√λ`.
    pub fn sqrt_derivative(&self, z: C64) -> C64 {
        let c = self.c.value();
        self.lambda.value().sqrt() * (1.0 - c.norm_sqr()).sqrt() / (1.0 - c.conj() * z)
    }

    /// `ψ⁻¹ = λ̄·b_{−λc}`.
    pub fn inverse(&self) -> Self {
        let lam = self.lambda.value();
        Self::new(self.lambda.conj(), DiskPoint(-lam * self.c.value()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        // λ₁ b_{c₁}(λ₂ b_{c₂}) = λ₁λ₂ b_{c₁λ̄₂}∘b_{c₂}
        let (rot, inner) = rotate_inside_factor(self.c, other.lambda);
        let (u, d) = compose_factors(inner, other.c);
        Self::new(self.lambda.mul(rot).mul(u), d)
    }

    /// `ψ^#(z) = conj(ψ(z̄)) = λ̄·b_{c̄}`.
    pub fn sharp(&self) -> Self {
        Self::new(self.lambda.conj(), self.c.conj())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::identity(), tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.lambda.value() - other.lambda.value()).norm() <= tol
            && (self.c.value() - other.c.value()).norm() <= tol
    }

    /// Maximum of `|self(ξ) − other(ξ)|` over `m` circle points.
    pub fn circle_distance(&self, other: &Self, m: usize) -> f64 {
        (0..m)
            .map(|k| {
                let z = C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / m as f64);
                (self.eval(z) - other.eval(z)).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for MoebiusAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·b_{{{}}}", self.lambda, self.c)
    }
}

/// `b_a ∘ b_c = u·b_d` with `u = (1 + ac̄)/(1 + āc)` and `d = (a + c)/(1 + ac̄)`.
pub fn compose_factors(a: DiskPoint, c: DiskPoint) -> (UnimodularConstant, DiskPoint) {
    let (a, c) = (a.value(), c.value());
    let num = 1.0 + a * c.conj();
    let u = UnimodularConstant::normalize(num / (1.0 + a.conj() * c));
    (u, DiskPoint((a + c) / num))
}

/// `b_a(ζz) = ζ·b_{aζ̄}(z)`.
pub fn rotate_inside_factor(
    a: DiskPoint,
    zeta: UnimodularConstant,
) -> (UnimodularConstant, DiskPoint) {
    (zeta, DiskPoint(a.value() * zeta.value().conj()))
}

/// `ℓ_c(a) = (a − c)/(1 − c̄a)`, with the pole `a = 1/c̄` sent to infinity.
pub fn ell(c: DiskPoint, a: ExtendedParameter) -> ExtendedParameter {
    let c = c.value();
    let out = match a.value() {
        None => {
            if c == C64::new(0.0, 0.0) {
                return ExtendedParameter::Infinity;
            }
            -c.conj().inv()
        }
        Some(z) => {
            let den = 1.0 - c.conj() * z;
            if den.norm() <= 1e-14 * (1.0 + z.norm()) {
                return ExtendedParameter::Infinity;
            }
            (z - c) / den
        }
    };
    // circle is preserved exactly; keep the class of the input there
    match a {
        ExtendedParameter::Circle(_) => ExtendedParameter::Circle(UnimodularConstant::normalize(out)),
        _ => ExtendedParameter::from_complex(out),
    }
}

/// `b_{−a}∘(ζ b_{a'}) = μ·b_d` with
/// `μ = (ζ − aā')/(1 − āa'ζ)` and `d = (ζa' − a)/(ζ − aā')`.
pub fn twisted_composition(
    a: DiskPoint,
    a_prime: DiskPoint,
    zeta: UnimodularConstant,
) -> MoebiusAutomorphism {
    let (a, ap, z) = (a.value(), a_prime.value(), zeta.value());
    let num = z - a * ap.conj();
    let mu = UnimodularConstant::normalize(num / (1.0 - a.conj() * ap * z));
    MoebiusAutomorphism::new(mu, DiskPoint((z * ap - a) / num))
}

/// Writes `ψ = b_{−a}∘(ζ b_{a'})`, returning `(ζ, a')`.
pub fn decompose_with_prefix(
    a: DiskPoint,
    psi: &MoebiusAutomorphism,
) -> (UnimodularConstant, DiskPoint) {
    let (a, lam, c) = (a.value(), psi.lambda.value(), psi.c.value());
    let zeta = lam * (1.0 + a * lam.conj() * c.conj()) / (1.0 + a.conj() * lam * c);
    let ap = (a * lam.conj() + c) / (1.0 + c.conj() * a * lam.conj());
    (UnimodularConstant::normalize(zeta), DiskPoint(ap))
}

/// The map `c ↦ μ̄(c + dμ)/(1 + c·conj(μd))` on the sphere, where
/// `μ·b_d = b_{−a}∘(ζ b_{a'})`. It sends `a` to `a'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitMap {
    pub mu: UnimodularConstant,
    pub d: DiskPoint,
}

impl OrbitMap {
    pub fn apply(&self, c: ExtendedParameter) -> ExtendedParameter {
        let (mu, d) = (self.mu.value(), self.d.value());
        let out = match c.value() {
            None => {
                if d == C64::new(0.0, 0.0) {
                    return ExtendedParameter::Infinity;
                }
                mu.conj() / (mu * d).conj()
            }
            Some(z) => {
                let den = 1.0 + z * (mu * d).conj();
                if den.norm() <= 1e-14 * (1.0 + z.norm()) {
                    return ExtendedParameter::Infinity;
                }
                mu.conj() * (z + d * mu) / den
            }
        };
        match c {
            ExtendedParameter::Circle(_) => ExtendedParameter::Circle(UnimodularConstant::normalize(out)),
            _ => ExtendedParameter::from_complex(out),
        }
    }

    pub fn apply_disk(&self, c: DiskPoint) -> DiskPoint {
        let (mu, d) = (self.mu.value(), self.d.value());
        let z = c.value();
        DiskPoint(mu.conj() * (z + d * mu) / (1.0 + z * (mu * d).conj()))
    }
}

pub fn orbit_automorphism(a: DiskPoint, a_prime: DiskPoint, zeta: UnimodularConstant) -> OrbitMap {
    let phi = twisted_composition(a, a_prime, zeta);
    OrbitMap { mu: phi.lambda, d: phi.c }
}

/// `a ↦ 1/ā`; fixes the circle and swaps `0` with `∞`.
pub fn conj_flip(a: ExtendedParameter) -> ExtendedParameter {
    match a {
        ExtendedParameter::Circle(_) => a,
        ExtendedParameter::Infinity => ExtendedParameter::Disk(DiskPoint::origin()),
        _ => {
            let z = a.value().expect("finite");
            if z == C64::new(0.0, 0.0) {
                ExtendedParameter::Infinity
            } else {
                ExtendedParameter::from_complex(z.conj().inv())
            }
        }
    }
}

/// Pseudo-hyperbolic distance `|b_z(w)|`.
pub fn pseudo_hyperbolic(z: C64, w: C64) -> f64 {
    factor(z, w).norm()
}

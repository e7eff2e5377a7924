//! Truncated Toeplitz operators `A_φ f = P_Θ(φf)` as matrices.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::modelspace::{ModelSpace, ModelVector};
use crate::moebius::DiskPoint;
use crate::{poly, C64};

/// Identity of an orthonormal basis, derived from the ordered zero list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisTag(u64);

impl BasisTag {
    pub fn from_zeros(zeros: &[DiskPoint]) -> Self {
        let mut h = DefaultHasher::new();
        for z in zeros {
            // adding 0.0 maps −0.0 to +0.0
            (z.value().re + 0.0).to_bits().hash(&mut h);
            (z.value().im + 0.0).to_bits().hash(&mut h);
        }
        Self(h.finish())
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "basis:{:016x}", self.0)
    }
}

/// A matrix between two tagged bases.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMat,
    pub source: BasisTag,
    pub target: BasisTag,
}

impl OperatorMatrix {
    pub fn new(entries: CMat, source: BasisTag, target: BasisTag) -> Self {
        Self { entries, source, target }
    }

    pub fn on(space: &ModelSpace, entries: CMat) -> Self {
        Self::new(entries, space.tag(), space.tag())
    }

    pub fn identity(space: &ModelSpace) -> Self {
        Self::on(space, CMat::identity(space.dim(), space.dim()))
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// `self · rhs`, requiring `rhs.target == self.source`.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.source != rhs.target {
            return Err(Error::BasisMismatch(format!(
                "cannot compose {} → {} after {} → {}",
                self.source, self.target, rhs.source, rhs.target
            )));
        }
        Ok(Self::new(&self.entries * &rhs.entries, rhs.source, self.target))
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        Self::new(self.entries.adjoint(), self.target, self.source)
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.same_tags(rhs)?;
        Ok(Self::new(&self.entries + &rhs.entries, self.source, self.target))
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.same_tags(rhs)?;
        Ok(Self::new(&self.entries - &rhs.entries, self.source, self.target))
    }

    pub fn scale(&self, s: C64) -> OperatorMatrix {
        Self::new(&self.entries * s, self.source, self.target)
    }

    pub fn apply(&self, v: &ModelVector) -> Result<ModelVector> {
        if v.tag != self.source {
            return Err(Error::BasisMismatch(format!("vector in {} applied to map from {}", v.tag, self.source)));
        }
        Ok(ModelVector { coords: &self.entries * &v.coords, tag: self.target })
    }

    fn same_tags(&self, rhs: &OperatorMatrix) -> Result<()> {
        if self.source != rhs.source || self.target != rhs.target {
            return Err(Error::BasisMismatch("operands act between different bases".into()));
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        operator_norm(self)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.norm()
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.entries)
    }

    /// `‖U*U − I‖` and `‖UU* − I‖` in max norm.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.cols();
        let m = self.rows();
        let a = linalg::max_abs(&(self.entries.adjoint() * &self.entries - CMat::identity(n, n)));
        let b = linalg::max_abs(&(&self.entries * self.entries.adjoint() - CMat::identity(m, m)));
        a.max(b)
    }

    pub fn to_dump(&self) -> MatrixDump {
        MatrixDump {
            rows: self.rows(),
            cols: self.cols(),
            entries: (0..self.rows())
                .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
                .map(|(i, j)| [self.entries[(i, j)].re, self.entries[(i, j)].im])
                .collect(),
        }
    }
}

/// `{"rows": n, "cols": n, "entries": [[re, im], ...]}` in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDump {
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::InvalidInput(format!(
                "matrix dump has {} entries for a {}×{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.entries[i * self.cols + j];
            C64::new(re, im)
        }))
    }
}

/// A symbol on the unit circle.
#[derive(Clone)]
pub enum BoundarySymbol {
    /// `Σ_{k} c_k ξ^{lowest + k}`.
    Trig { lowest: i64, coeffs: Vec<C64> },
    /// `num(ξ)/den(ξ)` with `den` free of zeros on the closed disk.
    Rational { num: Vec<C64>, den: Vec<C64> },
    Sampled(Arc<dyn Fn(C64) -> C64 + Send + Sync>),
}

impl fmt::Debug for BoundarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trig { lowest, coeffs } => write!(f, "Trig(lowest={lowest}, {coeffs:?})"),
            Self::Rational { num, den } => write!(f, "Rational({num:?} / {den:?})"),
            Self::Sampled(_) => write!(f, "Sampled(..)"),
        }
    }
}

impl BoundarySymbol {
    pub fn constant(c: C64) -> Self {
        Self::Trig { lowest: 0, coeffs: vec![c] }
    }

    pub fn z_power(k: i64) -> Self {
        Self::Trig { lowest: k, coeffs: vec![C64::new(1.0, 0.0)] }
    }

    /// Analytic polynomial with ascending coefficients.
    pub fn polynomial(coeffs: &[C64]) -> Self {
        Self::Trig { lowest: 0, coeffs: coeffs.to_vec() }
    }

    pub fn rational(num: &[C64], den: &[C64]) -> Result<Self> {
        let d = poly::trim(den, 0.0);
        if d.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if let Ok(r) = poly::roots(&d) {
            if let Some(bad) = r.iter().find(|z| z.norm() <= 1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!("denominator vanishes at {bad} in the closed disk")));
            }
        }
        Ok(Self::Rational { num: num.to_vec(), den: d })
    }

    pub fn sampled<F: Fn(C64) -> C64 + Send + Sync + 'static>(f: F) -> Self {
        Self::Sampled(Arc::new(f))
    }

    /// Evaluation on the circle.
    pub fn eval(&self, xi: C64) -> C64 {
        match self {
            Self::Trig { lowest, coeffs } => {
                let base = if *lowest >= 0 { xi.powi(*lowest as i32) } else { xi.conj().powi((-lowest) as i32) };
                base * poly::eval(coeffs, xi)
            }
            Self::Rational { num, den } => poly::eval(num, xi) / poly::eval(den, xi),
            Self::Sampled(f) => f(xi),
        }
    }

    /// Highest `|k|` with a nonzero Fourier coefficient, when finite.
    pub fn trig_degree(&self) -> Option<usize> {
        match self {
            Self::Trig { lowest, coeffs } => {
                let hi = lowest + coeffs.len() as i64 - 1;
                Some(lowest.abs().max(hi.abs()) as usize)
            }
            _ => None,
        }
    }

    /// `ξ ↦ conj(φ(ξ))`.
    pub fn conj(&self) -> Self {
        match self {
            Self::Trig { lowest, coeffs } => {
                let hi = lowest + coeffs.len() as i64 - 1;
                Self::Trig { lowest: -hi, coeffs: coeffs.iter().rev().map(|c| c.conj()).collect() }
            }
            _ => {
                let me = self.clone();
                Self::sampled(move |z| me.eval(z).conj())
            }
        }
    }

    /// `ξ ↦ φ(ξ̄)`.
    pub fn reflect(&self) -> Self {
        match self {
            Self::Trig { lowest, coeffs } => {
                let hi = lowest + coeffs.len() as i64 - 1;
                Self::Trig { lowest: -hi, coeffs: coeffs.iter().rev().copied().collect() }
            }
            _ => {
                let me = self.clone();
                Self::sampled(move |z| me.eval(z.conj()))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Trig { lowest: l1, coeffs: c1 }, Self::Trig { lowest: l2, coeffs: c2 }) => {
                let lo = (*l1).min(*l2);
                let hi = (l1 + c1.len() as i64).max(l2 + c2.len() as i64);
                let mut out = vec![C64::new(0.0, 0.0); (hi - lo) as usize];
                for (k, c) in c1.iter().enumerate() {
                    out[(l1 - lo) as usize + k] += c;
                }
                for (k, c) in c2.iter().enumerate() {
                    out[(l2 - lo) as usize + k] += c;
                }
                Self::Trig { lowest: lo, coeffs: out }
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Self::sampled(move |z| a.eval(z) + b.eval(z))
            }
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        match self {
            Self::Trig { lowest, coeffs } => Self::Trig { lowest: *lowest, coeffs: poly::scale(coeffs, s) },
            Self::Rational { num, den } => Self::Rational { num: poly::scale(num, s), den: den.clone() },
            Self::Sampled(_) => {
                let a = self.clone();
                Self::sampled(move |z| s * a.eval(z))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Trig { lowest: l1, coeffs: c1 }, Self::Trig { lowest: l2, coeffs: c2 }) => {
                Self::Trig { lowest: l1 + l2, coeffs: poly::mul(c1, c2) }
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Self::sampled(move |z| a.eval(z) * b.eval(z))
            }
        }
    }

    /// Taylor coefficients of an analytic symbol, expanded until they fall
    /// below `tol`.
    pub fn taylor_coefficients(&self, tol: f64, max_terms: usize) -> Result<Vec<C64>> {
        match self {
            Self::Trig { lowest, coeffs } if *lowest >= 0 => {
                let mut out = vec![C64::new(0.0, 0.0); *lowest as usize];
                out.extend_from_slice(coeffs);
                Ok(out)
            }
            Self::Rational { num, den } => {
                // long division of power series
                let d0 = den[0];
                let mut out: Vec<C64> = Vec::new();
                let mut small_run = 0;
                for k in 0..max_terms {
                    let mut acc = num.get(k).copied().unwrap_or_default();
                    for j in 1..den.len().min(k + 1) {
                        acc -= den[j] * out[k - j];
                    }
                    let ck = acc / d0;
                    out.push(ck);
                    small_run = if ck.norm() < tol { small_run + 1 } else { 0 };
                    if k >= num.len() && small_run > den.len() + 4 {
                        return Ok(out);
                    }
                }
                Err(Error::NonDecaying { index: max_terms, magnitude: out.last().map_or(0.0, |c| c.norm()) })
            }
            _ => Err(Error::InvalidInput("symbol is not a polynomial or rational analytic function".into())),
        }
    }
}

/// Entries `⟨φ e_l, e_k⟩` by quadrature.
pub fn tto_matrix(space: &ModelSpace, phi: &BoundarySymbol) -> Result<OperatorMatrix> {
    let m = space.quadrature_size();
    if let Some(k) = phi.trig_degree() {
        let need = 2 * (k + space.dim()) + 1;
        if m < need {
            return Err(Error::QuadratureResolution(format!(
                "symbol of degree {k} needs at least {need} nodes, have {m}"
            )));
        }
    }
    let e = space.samples();
    let mut weighted = e.clone();
    for (i, &xi) in space.nodes().iter().enumerate() {
        let f = phi.eval(xi);
        for l in 0..space.dim() {
            weighted[(i, l)] *= f;
        }
    }
    let a = e.adjoint() * weighted / C64::new(m as f64, 0.0);
    Ok(OperatorMatrix::on(space, a))
}

/// Whether `A_{φ₁} = A_{φ₂}` (max entry difference below `1e-9`).
pub fn symbol_equivalent(space: &ModelSpace, phi1: &BoundarySymbol, phi2: &BoundarySymbol) -> Result<bool> {
    let a = tto_matrix(space, phi1)?;
    let b = tto_matrix(space, phi2)?;
    Ok(a.sub(&b)?.max_abs() < 1e-9)
}

/// `max_j ‖A_{φ̄} k_{z_j} − conj(φ(z_j)) k_{z_j}‖` for analytic `φ`.
pub fn coanalytic_eigencheck(space: &ModelSpace, phi: &BoundarySymbol) -> Result<f64> {
    space.theta().require_distinct_zeros()?;
    let a = tto_matrix(space, &phi.conj())?;
    let coeffs = phi.taylor_coefficients(1e-16, 100_000).ok();
    let mut worst: f64 = 0.0;
    for z in space.theta().zero_values() {
        let k = space.kernel_coords(z);
        let val = match &coeffs {
            Some(c) => poly::eval(c, z),
            None => phi.eval(z),
        };
        let r = (&a.entries * &k.coords - &k.coords * val.conj()).norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `dist(φ·conj(Θ), H^∞)` as the norm of the Hankel matrix of the negative
/// Fourier coefficients of `φ·conj(Θ)`.
pub fn nehari_distance(theta: &FiniteBlaschkeProduct, phi: &BoundarySymbol) -> Result<f64> {
    let h = hankel_matrix(theta, phi)?;
    if h.is_empty() {
        return Ok(0.0);
    }
    Ok(linalg::singular_values(&h)[0])
}

/// The Hankel matrix `H_{ij} = ĝ(−(i + j + 1))` for `g = φ·conj(Θ)`,
/// truncated where the coefficients fall below `1e-14`.
pub fn hankel_matrix(theta: &FiniteBlaschkeProduct, phi: &BoundarySymbol) -> Result<CMat> {
    const MAX_TERMS: usize = 20_000;
    let p = phi.taylor_coefficients(1e-17, MAX_TERMS)?;
    let t = theta.taylor_coefficients(MAX_TERMS)?;
    // ĝ(−m) = Σ_j p_j conj(θ_{j+m})
    let g = |m: usize| -> C64 {
        p.iter()
            .enumerate()
            .filter(|(j, _)| j + m < t.len())
            .map(|(j, &pj)| pj * t[j + m].conj())
            .sum()
    };
    let coeffs: Vec<C64> = (1..t.len()).map(g).collect();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let last = coeffs.iter().rposition(|c| c.norm() >= 1e-14 * scale.max(1.0));
    let Some(last) = last else {
        return Ok(CMat::zeros(0, 0));
    };
    let size = last + 1;
    if size > 4096 {
        return Err(Error::NonDecaying { index: size, magnitude: coeffs[last].norm() });
    }
    Ok(CMat::from_fn(size, size, |i, j| coeffs.get(i + j).copied().unwrap_or_default()))
}

pub fn operator_norm(m: &OperatorMatrix) -> f64 {
    linalg::operator_norm(&m.entries)
}

/// `(u ⊗ v)w = ⟨w, v⟩u`.
pub fn rank_one(u: &ModelVector, v: &ModelVector) -> Result<OperatorMatrix> {
    if u.tag != v.tag {
        return Err(Error::BasisMismatch(format!("{} vs {}", u.tag, v.tag)));
    }
    Ok(OperatorMatrix::new(&u.coords * v.coords.adjoint(), v.tag, u.tag))
}

/// Matrix of `p(A)` by Horner's scheme.
pub fn polynomial_of(a: &OperatorMatrix, coeffs: &[C64]) -> OperatorMatrix {
    let n = a.rows();
    let mut acc = CMat::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = &acc * &a.entries + CMat::identity(n, n) * c;
    }
    OperatorMatrix::new(acc, a.source, a.target)
}

pub fn vector_from_coords(space: &ModelSpace, coords: &[C64]) -> ModelVector {
    space.vector(CVec::from_column_slice(coords))
}

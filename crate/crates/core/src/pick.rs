//! The Pick-space model: `ℂⁿ` with the Cauchy-kernel inner product
//! `(u, v)_z = Σ u_j v̄_k /(1 − z_j z̄_k)`, on which diagonal operators form
//! the Pick algebra.
//!
//! For `Θ` with distinct zeros `z_j` the kernels `k_{z_j}` form a basis of
//! `K_Θ`, and `Σ a_j k_{z_j} ↦ (a_j)` is unitary onto the Pick space at the
//! nodes `z̄_j`. Co-analytic truncated Toeplitz operators become diagonal.

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::modelspace::ModelSpace;
use crate::moebius::DiskPoint;
use crate::sedlock::{self, SedlockAlgebra};
use crate::tto::{tto_matrix, BoundarySymbol};
use crate::C64;

/// Largest accepted condition number of the Gram matrix.
pub const MAX_CONDITION: f64 = 1e12;
/// Smallest accepted node separation.
pub const MIN_SEPARATION: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct PickSpace {
    nodes: Vec<DiskPoint>,
    /// `G_{jk} = 1/(1 − z_j z̄_k)`.
    gram: CMat,
    /// `(Gᵀ)^{1/2}` and its inverse; `(u, v)_z = v* Gᵀ u`.
    sqrt: CMat,
    inv_sqrt: CMat,
}

impl PickSpace {
    pub fn new(nodes: Vec<DiskPoint>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::InvalidInput("a Pick space needs at least one node".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let d = (nodes[i].value() - nodes[j].value()).norm();
                if d <= MIN_SEPARATION {
                    return Err(Error::RepeatedZeros(d));
                }
            }
        }
        let gram = CMat::from_fn(n, n, |j, k| {
            C64::new(1.0, 0.0) / (1.0 - nodes[j].value() * nodes[k].value().conj())
        });
        let (sqrt, inv_sqrt) = linalg::hermitian_sqrt_pair(&gram.transpose(), MAX_CONDITION)?;
        Ok(Self { nodes, gram, sqrt, inv_sqrt })
    }

    pub fn from_complex(nodes: &[C64]) -> Result<Self> {
        Self::new(nodes.iter().map(|&z| DiskPoint::new(z)).collect::<Result<Vec<_>>>()?)
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[DiskPoint] {
        &self.nodes
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// Smallest eigenvalue of the Gram matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.gram + self.gram.adjoint()) * C64::new(0.5, 0.0);
        nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Operator norm of a matrix acting on the Pick space.
    pub fn operator_norm(&self, m: &CMat) -> f64 {
        linalg::operator_norm(&(&self.sqrt * m * &self.inv_sqrt))
    }
}

pub fn pick_inner(space: &PickSpace, u: &CVec, v: &CVec) -> Result<C64> {
    let n = space.dim();
    if u.len() != n || v.len() != n {
        return Err(Error::InvalidInput(format!("vectors of length {} and {} on a {n}-point Pick space", u.len(), v.len())));
    }
    let mut s = C64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            s += u[j] * v[k].conj() * space.gram[(j, k)];
        }
    }
    Ok(s)
}

/// `R_w u = (u_1 w_1, …, u_n w_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOperator {
    pub w: Vec<C64>,
}

impl DiagonalOperator {
    pub fn new(w: Vec<C64>) -> Result<Self> {
        if w.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::InvalidInput("diagonal weights must be finite".into()));
        }
        Ok(Self { w })
    }

    pub fn apply(&self, u: &CVec) -> CVec {
        CVec::from_iterator(u.len(), u.iter().zip(&self.w).map(|(a, b)| a * b))
    }

    /// `R_{w₁}R_{w₂} = R_{w₁w₂}`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { w: self.w.iter().zip(&other.w).map(|(a, b)| a * b).collect() }
    }

    pub fn matrix(&self) -> CMat {
        CMat::from_diagonal(&CVec::from_column_slice(&self.w))
    }
}

/// `‖R_w‖` on the Pick space.
pub fn diagonal_norm(space: &PickSpace, w: &DiagonalOperator) -> Result<f64> {
    if w.w.len() != space.dim() {
        return Err(Error::InvalidInput("weight count differs from the node count".into()));
    }
    Ok(space.operator_norm(&w.matrix()))
}

/// The unitary `K_Θ → PickSpace(z̄)` in orthonormal model-space coordinates.
#[derive(Clone, Debug)]
pub struct PickUnitary {
    /// Inverse of the matrix whose columns are the coordinates of `k_{z_j}`.
    pub matrix: CMat,
    pub space: PickSpace,
    pub zeros: Vec<C64>,
}

impl PickUnitary {
    pub fn apply(&self, x: &CVec) -> CVec {
        &self.matrix * x
    }

    /// `‖U* Gᵀ U − I‖`.
    pub fn unitarity_residual(&self) -> f64 {
        let gt = self.space.gram.transpose();
        let n = self.matrix.ncols();
        linalg::operator_norm(&(self.matrix.adjoint() * gt * &self.matrix - CMat::identity(n, n)))
    }

    /// `U A U⁻¹` for an operator `A` on `K_Θ`.
    pub fn transport(&self, a: &CMat) -> Result<CMat> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::IllConditioned(f64::INFINITY))?;
        Ok(&self.matrix * a * inv)
    }

    /// Pick-space norm of `U A_{φ̄} U* − diag(conj φ(z_j))`.
    pub fn intertwining_residual(&self, model: &ModelSpace, phi: &BoundarySymbol) -> Result<f64> {
        let a = tto_matrix(model, &phi.conj())?;
        let t = self.transport(&a.entries)?;
        let d = DiagonalOperator::new(self.zeros.iter().map(|&z| phi.eval(z).conj()).collect())?;
        Ok(self.space.operator_norm(&(t - d.matrix())))
    }
}

/// Sends `Σ a_j k_{z_j}` to `(a_1, …, a_n)`.
pub fn sedlock_to_pick(model: &ModelSpace) -> Result<PickUnitary> {
    let theta: &FiniteBlaschkeProduct = model.theta();
    theta.require_distinct_zeros()?;
    let zeros = theta.zero_values();
    let n = zeros.len();
    let mut k = CMat::zeros(n, n);
    for (j, &z) in zeros.iter().enumerate() {
        k.set_column(j, &model.kernel_coords(z).coords);
    }
    let matrix = k.try_inverse().ok_or(Error::IllConditioned(f64::INFINITY))?;
    let space = PickSpace::from_complex(&zeros.iter().map(|z| z.conj()).collect::<Vec<_>>())?;
    Ok(PickUnitary { matrix, space, zeros })
}

/// `‖A_φ‖` computed in the Pick model as the norm of `diag(conj φ(z_j))`.
pub fn pick_norm_of_symbol(model: &ModelSpace, phi: &BoundarySymbol) -> Result<f64> {
    let u = sedlock_to_pick(model)?;
    let d = DiagonalOperator::new(u.zeros.iter().map(|&z| phi.eval(z).conj()).collect())?;
    diagonal_norm(&u.space, &d)
}

/// Sorted operator norms of the canonical idempotent resolution of the algebra.
pub fn idempotent_norm_profile(algebra: &SedlockAlgebra) -> Result<Vec<f64>> {
    let space = ModelSpace::new(&algebra.theta)?;
    let qs = sedlock::canonical_idempotents(&space, algebra.a)?;
    let mut norms: Vec<f64> = qs.iter().map(|q| q.norm()).collect();
    norms.sort_by(f64::total_cmp);
    Ok(norms)
}

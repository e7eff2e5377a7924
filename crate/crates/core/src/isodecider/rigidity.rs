//! Searching for nontrivial pairs `(φ, ψ)` with `φ∘Θ = Θ∘ψ` or `φ∘Θ = Θ^#∘ψ`.
//!
//! If `φ∘Θ = T∘ψ` then `ψ` maps the critical points of `Θ` in the disk onto
//! those of `T`, so candidates for `ψ` come from matching the two critical
//! sets. `φ` is then recovered from `φ(0) = T(ψ(z₀))` at a zero `z₀` of `Θ`
//! and one boundary value.

use rayon::prelude::*;

use super::solve::{cluster, moebius_matches};
use crate::blaschke::{circle_samples, FiniteBlaschkeProduct};
use crate::moebius::{factor, DiskPoint, MoebiusAutomorphism, UnimodularConstant};
use crate::optimize::{levenberg_marquardt, nelder_mead, SimplexOptions};
use crate::{poly, C64};

const ACCEPT: f64 = 1e-8;
/// Critical points closer than this are merged.
const CRIT_CLUSTER: f64 = 1e-2;
/// Distinct critical clusters must be at least this far apart to certify.
const CRIT_SEPARATION: f64 = 5e-2;
const CRIT_MATCH: f64 = 1e-6;
/// `φ` within this of the identity counts as trivial.
const TRIVIAL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Symmetry {
    pub phi: MoebiusAutomorphism,
    pub psi: MoebiusAutomorphism,
    /// Whether the right-hand side is `Θ^#∘ψ`.
    pub sharp: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rigidity {
    Rigid,
    Symmetric(Symmetry),
    Unknown { best_residual: f64 },
}

impl Rigidity {
    /// `Some(true)` when rigid, `Some(false)` with a symmetry, `None` when unknown.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Self::Rigid => Some(true),
            Self::Symmetric(_) => Some(false),
            Self::Unknown { .. } => None,
        }
    }
}

fn symmetry_residual(theta: &FiniteBlaschkeProduct, target: &FiniteBlaschkeProduct, phi: &MoebiusAutomorphism, psi: &MoebiusAutomorphism, pts: &[C64]) -> f64 {
    pts.iter()
        .map(|&z| (phi.eval(theta.eval_unchecked(z)) - target.eval_unchecked(psi.eval(z))).norm())
        .fold(0.0, f64::max)
}

/// The `φ` forced by `ψ` through `φ∘Θ = T∘ψ`.
fn recover_phi(theta: &FiniteBlaschkeProduct, target: &FiniteBlaschkeProduct, psi: &MoebiusAutomorphism, pts: &[C64]) -> Option<MoebiusAutomorphism> {
    let p = target.eval_unchecked(psi.eval(theta.zeros()[0].value()));
    let pd = DiskPoint::with_tolerance(p, 1e-12).ok()?;
    let s: C64 = pts
        .iter()
        .map(|&z| factor(p, target.eval_unchecked(psi.eval(z))) * theta.eval_unchecked(z).conj())
        .sum();
    let mu = UnimodularConstant::normalize(s);
    Some(MoebiusAutomorphism::factor(pd.neg()).compose(&MoebiusAutomorphism::rotation(mu)))
}

/// Critical points of `Θ` in the disk, from the numerator of `Θ′`.
pub fn critical_points(theta: &FiniteBlaschkeProduct) -> crate::Result<Vec<C64>> {
    let (p, q) = theta.polynomials();
    let w = poly::add(&poly::mul(&poly::derivative(&p), &q), &poly::scale(&poly::mul(&p, &poly::derivative(&q)), C64::new(-1.0, 0.0)));
    if w.iter().all(|c| c.norm() == 0.0) {
        return Ok(Vec::new());
    }
    Ok(poly::roots(&w)?.into_iter().filter(|z| z.norm() < 1.0).collect())
}

fn is_trivial(phi: &MoebiusAutomorphism) -> bool {
    phi.is_identity(TRIVIAL)
}

/// Candidate-based search; `Err(())` when the critical set is not cleanly resolved.
fn algebraic(theta: &FiniteBlaschkeProduct) -> Result<Option<Symmetry>, ()> {
    let pts: Vec<C64> = circle_samples(64).collect();
    let n = theta.degree();
    let crit = critical_points(theta).map_err(|_| ())?;
    if crit.len() != n - 1 {
        return Err(());
    }
    let c = cluster(&crit, CRIT_CLUSTER);
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if (c[i].0 - c[j].0).norm() < CRIT_SEPARATION {
                return Err(());
            }
        }
    }
    let sharp = theta.sharp();
    // a single critical point (or none) leaves a circle of rotations about it
    if c.len() <= 1 {
        let centre = c.first().map(|x| x.0).unwrap_or_default();
        let d = DiskPoint::with_tolerance(centre, 0.0).map_err(|_| ())?;
        let psi = MoebiusAutomorphism::factor(d)
            .inverse()
            .compose(&MoebiusAutomorphism::rotation(UnimodularConstant::from_angle(1.0)))
            .compose(&MoebiusAutomorphism::factor(d));
        let phi = recover_phi(theta, theta, &psi, &pts).ok_or(())?;
        let residual = symmetry_residual(theta, theta, &phi, &psi, &pts);
        if residual < ACCEPT && !is_trivial(&phi) {
            return Ok(Some(Symmetry { phi, psi, sharp: false, residual }));
        }
        return Err(());
    }
    let c_sharp: Vec<(C64, usize)> = c.iter().map(|&(z, m)| (z.conj(), m)).collect();
    for (target, cs, is_sharp) in [(theta, &c, false), (&sharp, &c_sharp, true)] {
        for (psi, _) in moebius_matches(&c, cs, CRIT_MATCH) {
            let Some(phi) = recover_phi(theta, target, &psi, &pts) else { continue };
            let residual = symmetry_residual(theta, target, &phi, &psi, &pts);
            if residual < ACCEPT && !is_trivial(&phi) {
                return Ok(Some(Symmetry { phi, psi, sharp: is_sharp, residual }));
            }
        }
    }
    Ok(None)
}

fn automorphism(angle: f64, w: C64) -> MoebiusAutomorphism {
    let r = w.norm();
    let c = if r == 0.0 { w } else { w * (r.tanh() / r) };
    let c = DiskPoint::with_tolerance(c, 0.0).unwrap_or_else(|_| DiskPoint::with_tolerance(c * (1.0 - 1e-15), 0.0).expect("inside"));
    MoebiusAutomorphism::new(UnimodularConstant::from_angle(angle), c)
}

/// Six-parameter multistart over `(φ, ψ)` penalising `φ` near the identity.
fn search(theta: &FiniteBlaschkeProduct, angles: usize, radii: usize) -> (Option<Symmetry>, f64) {
    let pts: Vec<C64> = circle_samples(64).collect();
    let sharp = theta.sharp();
    let ang: Vec<f64> = (0..angles).map(|k| std::f64::consts::TAU * (k as f64 + 0.5) / angles as f64).collect();
    let rad: Vec<f64> = if radii <= 1 { vec![0.0] } else { (0..radii).map(|k| -1.0 + 2.0 * k as f64 / (radii - 1) as f64).collect() };
    let mut starts: Vec<[f64; 6]> = Vec::new();
    for &t in &ang {
        for &x in &rad {
            for &y in &rad {
                for &a in &ang {
                    for &u in &rad {
                        for &v in &rad {
                            starts.push([t, x, y, a, u, v]);
                        }
                    }
                }
            }
        }
    }
    let step = [0.4, 0.3, 0.3, 0.4, 0.3, 0.3];
    let opts = SimplexOptions::default();
    let mut best: (Option<Symmetry>, f64) = (None, f64::INFINITY);
    for (target, is_sharp) in [(theta, false), (&sharp, true)] {
        let results: Vec<(Vec<f64>, f64)> = starts
            .par_iter()
            .map(|s| {
                let f = |x: &[f64]| {
                    let phi = automorphism(x[0], C64::new(x[1], x[2]));
                    let psi = automorphism(x[3], C64::new(x[4], x[5]));
                    let mse = pts
                        .iter()
                        .map(|&z| (phi.eval(theta.eval_unchecked(z)) - target.eval_unchecked(psi.eval(z))).norm_sqr())
                        .sum::<f64>()
                        / pts.len() as f64;
                    let dist = (phi.lambda.value() - 1.0).norm() + phi.c.value().norm();
                    mse + if dist < 1e-2 { 1e-2 - dist } else { 0.0 }
                };
                let m = nelder_mead(f, s, &step, &opts);
                (m.x, m.value)
            })
            .collect();
        let mut order: Vec<usize> = (0..results.len()).collect();
        order.sort_by(|&i, &j| results[i].1.total_cmp(&results[j].1).then(i.cmp(&j)));
        for (rank, &i) in order.iter().enumerate() {
            let mut x = results[i].0.clone();
            if rank < 4 {
                let r = |x: &[f64]| -> Vec<f64> {
                    let phi = automorphism(x[0], C64::new(x[1], x[2]));
                    let psi = automorphism(x[3], C64::new(x[4], x[5]));
                    pts.iter()
                        .flat_map(|&z| {
                            let d = phi.eval(theta.eval_unchecked(z)) - target.eval_unchecked(psi.eval(z));
                            [d.re, d.im]
                        })
                        .collect()
                };
                x = levenberg_marquardt(r, &x, 60).x;
            }
            let phi = automorphism(x[0], C64::new(x[1], x[2]));
            let psi = automorphism(x[3], C64::new(x[4], x[5]));
            if is_trivial(&phi) {
                continue;
            }
            let r = symmetry_residual(theta, target, &phi, &psi, &pts);
            if r < best.1 {
                best = (Some(Symmetry { phi, psi, sharp: is_sharp, residual: r }), r);
            }
        }
    }
    let found = best.0.filter(|s| s.residual < ACCEPT);
    (found, best.1)
}

/// Whether `Θ` admits no nontrivial `(φ, ψ)`; see [`Rigidity`].
pub fn rigidity_check(theta: &FiniteBlaschkeProduct) -> Rigidity {
    rigidity_check_with(theta, 4, 3)
}

/// As [`rigidity_check`], with the fallback search grid given explicitly.
pub fn rigidity_check_with(theta: &FiniteBlaschkeProduct, angles: usize, radii: usize) -> Rigidity {
    match algebraic(theta) {
        Ok(Some(s)) => Rigidity::Symmetric(s),
        Ok(None) => Rigidity::Rigid,
        Err(()) => match search(theta, angles, radii) {
            (Some(s), _) => Rigidity::Symmetric(s),
            (None, r) => Rigidity::Unknown { best_residual: r },
        },
    }
}

#[cfg(test)]
pub(crate) fn fallback_search(theta: &FiniteBlaschkeProduct, angles: usize, radii: usize) -> (Option<Symmetry>, f64) {
    search(theta, angles, radii)
}

//! Solving `Θ₁ = b_{−a₁}(ζ b_{a₂}) ∘ Θ₂ ∘ ψ` for `(ζ, ψ)`.
//!
//! Composing with `b_{a₁}` turns the equation into
//! `b_{a₁}∘Θ₁ = ζ·(b_{a₂}∘Θ₂)∘ψ`, so a solution exists exactly when `ψ`
//! carries the level set `Θ₁ = a₁` onto the level set `Θ₂ = a₂` with
//! multiplicities. Matching those finite point sets under disk
//! automorphisms yields candidate witnesses and, when no candidate exists,
//! an obstruction. The simplex multistart over `(θ, α, c)` runs whenever the
//! matching stage does not already produce an accepted witness.

use rayon::prelude::*;

use super::{DecideOptions, IsoDecision, Reason, Verdict, Witness};
use crate::blaschke::{circle_samples, FiniteBlaschkeProduct};
use crate::moebius::{factor, DiskPoint, MoebiusAutomorphism, UnimodularConstant};
use crate::optimize::{levenberg_marquardt, nelder_mead};
use crate::C64;

/// Level-set points closer than this are treated as one point of higher multiplicity.
pub(crate) const CLUSTER_RADIUS: f64 = 1e-5;
/// Matching tolerance below which no candidate means a certified obstruction.
const OBSTRUCTION_TOL: f64 = 1e-3;

/// `|Θ₁(z) − [b_{−a₁}(ζ b_{a₂})](Θ₂(ψ(z)))|` maximised over `points`.
pub fn equation_residual(
    theta1: &FiniteBlaschkeProduct,
    a1: DiskPoint,
    theta2: &FiniteBlaschkeProduct,
    a2: DiskPoint,
    zeta: UnimodularConstant,
    psi: &MoebiusAutomorphism,
    points: &[C64],
) -> f64 {
    points
        .iter()
        .map(|&z| (theta1.eval_unchecked(z) - outer(a1, a2, zeta.value(), theta2.eval_unchecked(psi.eval(z)))).norm())
        .fold(0.0, f64::max)
}

#[inline]
fn outer(a1: DiskPoint, a2: DiskPoint, zeta: C64, w: C64) -> C64 {
    factor(-a1.value(), zeta * factor(a2.value(), w))
}

/// Groups nearby points, returning cluster means with multiplicities.
pub(crate) fn cluster(points: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for &p in points {
        match groups.iter_mut().find(|g| (g[0] - p).norm() < radius) {
            Some(g) => g.push(p),
            None => groups.push(vec![p]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            (g.iter().sum::<C64>() / n as f64, n)
        })
        .collect()
}

fn profile(p: &[(C64, usize)]) -> Vec<usize> {
    let mut m: Vec<usize> = p.iter().map(|x| x.1).collect();
    m.sort_unstable();
    m
}

/// Largest pseudo-hyperbolic mismatch of `ψ(p)` against `q`, respecting multiplicities.
fn match_error(psi: &MoebiusAutomorphism, p: &[(C64, usize)], q: &[(C64, usize)]) -> f64 {
    let mut free: Vec<bool> = vec![true; q.len()];
    let mut worst: f64 = 0.0;
    for &(z, m) in p {
        let w = psi.eval(z);
        let best = q
            .iter()
            .enumerate()
            .filter(|(k, x)| free[*k] && x.1 == m)
            .map(|(k, x)| (k, factor(x.0, w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((k, d)) => {
                free[k] = false;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// Disk automorphisms `ψ` with `ψ(p) = q` as multisets, up to `tol`.
///
/// When `p` has a single distinct point the solutions form a circle of
/// rotations about it; the member with trivial rotation is returned.
pub(crate) fn moebius_matches(
    p: &[(C64, usize)],
    q: &[(C64, usize)],
    tol: f64,
) -> Vec<(MoebiusAutomorphism, f64)> {
    if p.len() != q.len() || profile(p) != profile(q) || p.is_empty() {
        return Vec::new();
    }
    let to_zero = |c: C64| MoebiusAutomorphism::factor(DiskPoint::with_tolerance(c, 0.0).expect("inside disk"));
    let from_zero = |c: C64| to_zero(c).inverse();
    if p.len() == 1 {
        let psi = from_zero(q[0].0).compose(&to_zero(p[0].0));
        return vec![(psi, match_error(&psi, p, q))];
    }
    let (z0, m0) = p[0];
    let (z1, m1) = p[1];
    let u = factor(z0, z1);
    let mut out: Vec<(MoebiusAutomorphism, f64)> = Vec::new();
    for &(w0, n0) in q.iter().filter(|x| x.1 == m0) {
        for &(w1, n1) in q.iter().filter(|x| x.1 == m1) {
            if n0 != m0 || n1 != m1 || (w1 - w0).norm() == 0.0 {
                continue;
            }
            let v = factor(w0, w1);
            if (v.norm() - u.norm()).abs() > tol {
                continue;
            }
            let lam = UnimodularConstant::normalize(v / u);
            let psi = from_zero(w0).compose(&MoebiusAutomorphism::rotation(lam)).compose(&to_zero(z0));
            let err = match_error(&psi, p, q);
            if err <= tol && !out.iter().any(|(x, _)| x.approx_eq(&psi, 1e-8)) {
                out.push((psi, err));
            }
        }
    }
    out
}

/// Best unimodular `ζ` for a fixed `ψ`, from the phase of the sample ratios.
fn fit_zeta(
    theta1: &FiniteBlaschkeProduct,
    a1: DiskPoint,
    theta2: &FiniteBlaschkeProduct,
    a2: DiskPoint,
    psi: &MoebiusAutomorphism,
    points: &[C64],
) -> UnimodularConstant {
    let s: C64 = points
        .iter()
        .map(|&z| {
            let l = factor(a1.value(), theta1.eval_unchecked(z));
            let r = factor(a2.value(), theta2.eval_unchecked(psi.eval(z)));
            l * r.conj()
        })
        .sum();
    UnimodularConstant::normalize(s)
}

fn split(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Parameters `(θ, α, Re c, Im c)` with `c` taken directly.
fn witness_from_direct(x: &[f64]) -> Option<(UnimodularConstant, MoebiusAutomorphism)> {
    let c = C64::new(x[2], x[3]);
    let c = DiskPoint::with_tolerance(c, 1e-9).ok()?;
    Some((UnimodularConstant::from_angle(x[0]), MoebiusAutomorphism::new(UnimodularConstant::from_angle(x[1]), c)))
}

/// Parameters `(θ, α, w)` with `c = w·tanh|w|/|w|`, so every `w ∈ ℝ²` is admissible.
fn witness_from_free(x: &[f64]) -> (UnimodularConstant, MoebiusAutomorphism) {
    let w = C64::new(x[2], x[3]);
    let r = w.norm();
    let c = if r == 0.0 { w } else { w * (r.tanh() / r) };
    let c = DiskPoint::with_tolerance(c, 0.0).unwrap_or_else(|_| DiskPoint::with_tolerance(c * (1.0 - 1e-15), 0.0).expect("inside"));
    (UnimodularConstant::from_angle(x[0]), MoebiusAutomorphism::new(UnimodularConstant::from_angle(x[1]), c))
}

struct Problem<'a> {
    theta1: &'a FiniteBlaschkeProduct,
    a1: DiskPoint,
    theta2: &'a FiniteBlaschkeProduct,
    a2: DiskPoint,
    points: Vec<C64>,
}

impl Problem<'_> {
    fn residual_vector(&self, zeta: UnimodularConstant, psi: &MoebiusAutomorphism) -> Vec<f64> {
        self.points
            .iter()
            .flat_map(|&z| {
                let d = self.theta1.eval_unchecked(z)
                    - outer(self.a1, self.a2, zeta.value(), self.theta2.eval_unchecked(psi.eval(z)));
                split(d)
            })
            .collect()
    }

    fn max_residual(&self, zeta: UnimodularConstant, psi: &MoebiusAutomorphism) -> f64 {
        equation_residual(self.theta1, self.a1, self.theta2, self.a2, zeta, psi, &self.points)
    }

    fn mse(&self, zeta: UnimodularConstant, psi: &MoebiusAutomorphism) -> f64 {
        let r = self.residual_vector(zeta, psi);
        r.iter().map(|v| v * v).sum::<f64>() / self.points.len() as f64
    }

    /// Levenberg–Marquardt polish; keeps the input when polishing does not help.
    fn polish(&self, zeta: UnimodularConstant, psi: MoebiusAutomorphism) -> (UnimodularConstant, MoebiusAutomorphism, f64) {
        let start = self.max_residual(zeta, &psi);
        let x0 = [zeta.arg(), psi.lambda.arg(), psi.c.value().re, psi.c.value().im];
        let n_res = 2 * self.points.len();
        let m = levenberg_marquardt(
            |x| match witness_from_direct(x) {
                Some((z, p)) => self.residual_vector(z, &p),
                None => vec![1e3; n_res],
            },
            &x0,
            60,
        );
        match witness_from_direct(&m.x) {
            Some((z, p)) => {
                let r = self.max_residual(z, &p);
                if r < start {
                    (z, p, r)
                } else {
                    (zeta, psi, start)
                }
            }
            None => (zeta, psi, start),
        }
    }
}

/// Outcome of the level-set matching stage.
pub(crate) struct AlgebraicStage {
    pub accepted: Option<Witness>,
    /// No automorphism even roughly matches the level sets.
    pub obstruction: bool,
}

fn algebraic_stage(pb: &Problem<'_>, tol_accept: f64) -> AlgebraicStage {
    let (Ok(l1), Ok(l2)) = (pb.theta1.level_set(pb.a1.value()), pb.theta2.level_set(pb.a2.value())) else {
        return AlgebraicStage { accepted: None, obstruction: false };
    };
    let p = cluster(&l1, CLUSTER_RADIUS);
    let q = cluster(&l2, CLUSTER_RADIUS);
    let loose = moebius_matches(&p, &q, OBSTRUCTION_TOL);
    let mut accepted: Vec<Witness> = Vec::new();
    for (psi, _) in &loose {
        let zeta = fit_zeta(pb.theta1, pb.a1, pb.theta2, pb.a2, psi, &pb.points);
        let (zeta, psi, residual) = pb.polish(zeta, *psi);
        if residual < tol_accept {
            accepted.push(Witness { zeta, psi, residual });
        }
    }
    // every accepted witness is valid; prefer the one nearest the identity
    let best = accepted.into_iter().min_by(|x, y| {
        let dx = (x.psi.lambda.value() - 1.0).norm() + x.psi.c.value().norm() + (x.zeta.value() - 1.0).norm();
        let dy = (y.psi.lambda.value() - 1.0).norm() + y.psi.c.value().norm() + (y.zeta.value() - 1.0).norm();
        dx.total_cmp(&dy)
    });
    AlgebraicStage { accepted: best, obstruction: loose.is_empty() }
}

/// Deterministic start grid in `(θ, α, Re w, Im w)`.
pub(crate) fn start_grid(angles: usize, radii: usize) -> Vec<[f64; 4]> {
    let ang: Vec<f64> = (0..angles).map(|k| std::f64::consts::TAU * k as f64 / angles as f64).collect();
    let rad: Vec<f64> = if radii <= 1 {
        vec![0.0]
    } else {
        (0..radii).map(|k| -1.5 + 3.0 * k as f64 / (radii - 1) as f64).collect()
    };
    let mut out = Vec::with_capacity(angles * angles * rad.len() * rad.len());
    for &t in &ang {
        for &a in &ang {
            for &x in &rad {
                for &y in &rad {
                    out.push([t, a, x, y]);
                }
            }
        }
    }
    out
}

struct StartResult {
    x: [f64; 4],
    mse: f64,
}

fn multistart(pb: &Problem<'_>, opts: &DecideOptions) -> (Option<Witness>, f64, usize) {
    let starts = start_grid(opts.grid.angles, opts.grid.radii);
    let n = starts.len();
    if n == 0 {
        return (None, f64::INFINITY, 0);
    }
    let step = [
        std::f64::consts::PI / opts.grid.angles.max(1) as f64,
        std::f64::consts::PI / opts.grid.angles.max(1) as f64,
        0.375,
        0.375,
    ];
    let results: Vec<StartResult> = starts
        .par_iter()
        .map(|s| {
            let f = |x: &[f64]| {
                let (z, p) = witness_from_free(x);
                pb.mse(z, &p)
            };
            let m = nelder_mead(f, s, &step, &opts.simplex);
            StartResult { x: [m.x[0], m.x[1], m.x[2], m.x[3]], mse: m.value }
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        results[i]
            .mse
            .total_cmp(&results[j].mse)
            .then_with(|| results[i].x.iter().zip(&results[j].x).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut best_res = f64::INFINITY;
    let mut best: Option<Witness> = None;
    for (rank, &i) in order.iter().enumerate() {
        let (z, p) = witness_from_free(&results[i].x);
        let (z, p, r) = if rank < 4 { pb.polish(z, p) } else { (z, p, pb.max_residual(z, &p)) };
        if r < best_res {
            best_res = r;
            best = Some(Witness { zeta: z, psi: p, residual: r });
        }
    }
    let accepted = best.filter(|w| w.residual < opts.tol_accept);
    (accepted, best_res, n)
}

/// Solves the functional equation for disk parameters with the given options.
pub fn functional_equation_solve_with(
    theta1: &FiniteBlaschkeProduct,
    theta2: &FiniteBlaschkeProduct,
    a1: DiskPoint,
    a2: DiskPoint,
    opts: &DecideOptions,
) -> IsoDecision {
    if theta1.degree() != theta2.degree() {
        return IsoDecision::new(Verdict::NotEquivalent(Reason::DegreeMismatch));
    }
    let pb = Problem { theta1, a1, theta2, a2, points: circle_samples(opts.samples).collect() };
    if let Some(d) = monomial_fast_path(&pb, opts) {
        return d;
    }
    let stage = algebraic_stage(&pb, opts.tol_accept);
    if let Some(w) = stage.accepted {
        return IsoDecision::new(Verdict::Equivalent(super::Certificate::Witness(w)));
    }
    let (found, best, starts) = multistart(&pb, opts);
    if let Some(w) = found {
        return IsoDecision::new(Verdict::Equivalent(super::Certificate::Witness(w)));
    }
    if stage.obstruction && best > opts.tol_reject {
        return IsoDecision::new(Verdict::NotEquivalent(Reason::LevelSetInvariant));
    }
    IsoDecision::new(Verdict::Undetermined { best_residual: best, starts })
}

fn is_plain_monomial(t: &FiniteBlaschkeProduct) -> bool {
    t.gamma().value() == C64::new(1.0, 0.0) && t.zero_values().iter().all(|z| z.norm() == 0.0)
}

/// `zⁿ = b_{−a}(ζ̄ b_{ζa}) ∘ zⁿ ∘ (ζ^{1/n} z)`, and no solution when `|a₁| ≠ |a₂|`.
fn monomial_fast_path(pb: &Problem<'_>, opts: &DecideOptions) -> Option<IsoDecision> {
    if !(is_plain_monomial(pb.theta1) && is_plain_monomial(pb.theta2)) {
        return None;
    }
    let n = pb.theta1.degree();
    let (a1, a2) = (pb.a1.value(), pb.a2.value());
    let zeta = if a1.norm() == 0.0 || a2.norm() == 0.0 {
        UnimodularConstant::one()
    } else {
        UnimodularConstant::normalize(a2 / a1)
    };
    let root = UnimodularConstant::from_angle(zeta.arg() / n as f64);
    let psi = MoebiusAutomorphism::rotation(root);
    let w = zeta.conj();
    let residual = pb.max_residual(w, &psi);
    let verdict = if residual < opts.tol_accept {
        Verdict::Equivalent(super::Certificate::Witness(Witness { zeta: w, psi, residual }))
    } else {
        Verdict::NotEquivalent(Reason::ModulusLaw)
    };
    Some(IsoDecision::new(verdict))
}

/// Samples `exp(2πi(k + s)/m)` with an irrational shift `s`, disjoint from
/// the optimisation grid.
pub fn fresh_samples(m: usize) -> Vec<C64> {
    let s = 0.381_966_011_250_105_1;
    (0..m)
        .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + s) / m as f64))
        .collect()
}

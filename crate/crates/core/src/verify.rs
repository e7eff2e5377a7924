//! The invariant suite run by `ttolab verify`.
//!
//! Every check reports a residual and the tolerance it must meet. Random
//! inputs are drawn from a seeded ChaCha stream, so a report depends only on
//! `(Θ, config)`.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::{herglotz_mass, FiniteBlaschkeProduct};
use crate::error::{Error, Result};
use crate::modelspace::ModelSpace;
use crate::moebius::{conj_flip, DiskPoint, ExtendedParameter, MoebiusAutomorphism, UnimodularConstant};
use crate::sedlock::{self, SedlockAlgebra};
use crate::tto::{nehari_distance, operator_norm, tto_matrix, BoundarySymbol, OperatorMatrix};
use crate::unitaries::{self, WordParameters};
use crate::{linalg, pick, C64};

/// Default largest degree accepted by [`run`].
pub const DEFAULT_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, passed: residual <= tolerance }
    }

    fn from_result(name: impl Into<String>, r: Result<f64>, tolerance: f64) -> Self {
        Self::new(name, r.unwrap_or(f64::INFINITY), tolerance)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub quadrature: Option<usize>,
    pub max_degree: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, quadrature: None, max_degree: DEFAULT_MAX_DEGREE }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub degree: usize,
    pub seed: u64,
    pub quadrature: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// The parameter set `{0, 0.3, 0.5i, 1, e^{iπ/4}, 2, ∞}`.
pub fn parameters() -> Vec<(&'static str, ExtendedParameter)> {
    vec![
        ("0", ExtendedParameter::from_complex(C64::new(0.0, 0.0))),
        ("0.3", ExtendedParameter::from_complex(C64::new(0.3, 0.0))),
        ("0.5i", ExtendedParameter::from_complex(C64::new(0.0, 0.5))),
        ("1", ExtendedParameter::Circle(UnimodularConstant::one())),
        ("e^{i pi/4}", ExtendedParameter::Circle(UnimodularConstant::from_angle(FRAC_PI_4))),
        ("2", ExtendedParameter::from_complex(C64::new(2.0, 0.0))),
        ("inf", ExtendedParameter::Infinity),
    ]
}

fn random_disk(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_auto(rng: &mut ChaCha8Rng) -> MoebiusAutomorphism {
    let c = DiskPoint::new(random_disk(rng, 0.6)).expect("inside");
    MoebiusAutomorphism::new(UnimodularConstant::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)), c)
}

/// `k_λ(ξ) = (1 − conj(Θ(λ))Θ(ξ))/(1 − λ̄ξ)`.
fn kernel_value(theta: &FiniteBlaschkeProduct, lambda: C64, xi: C64) -> C64 {
    (1.0 - theta.eval_unchecked(lambda).conj() * theta.eval_unchecked(xi)) / (1.0 - lambda.conj() * xi)
}

fn kernel_checks(space: &ModelSpace, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let n = space.dim();
    let theta = space.theta();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let coords: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = space.vector(linalg::CVec::from_vec(coords));
        let lambda = random_disk(rng, 0.8);
        let fb = space.boundary_values(&f);
        let inner: C64 = space
            .nodes()
            .iter()
            .zip(fb.iter())
            .map(|(&xi, &v)| v * kernel_value(theta, lambda, xi).conj())
            .sum::<C64>()
            / space.nodes().len() as f64;
        worst = worst.max((inner - space.eval_vector(&f, lambda)).norm());
    }
    out.push(Check::new("kernel/reproducing", worst, 1e-9));

    match space.conjugation_matrix() {
        Ok(c) => {
            out.push(Check::new("conjugation/involution", c.involution_residual(), 1e-10));
            out.push(Check::new("conjugation/isometry", linalg::max_abs(&(c.j.adjoint() * &c.j - linalg::CMat::identity(n, n))), 1e-10));
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let lambda = random_disk(rng, 0.8);
                let ck = c.apply(&space.kernel_coords(lambda)).expect("same basis");
                worst = worst.max((ck.coords - space.conjugate_kernel_coords(lambda).coords).norm());
            }
            out.push(Check::new("conjugation/kernel", worst, 1e-9));
        }
        Err(_) => {
            out.push(Check::new("conjugation/involution", f64::INFINITY, 1e-10));
        }
    }
}

fn sedlock_checks(space: &ModelSpace, out: &mut Vec<Check>) -> Vec<SedlockAlgebra> {
    let n = space.dim();
    let mut algebras = Vec::new();
    for (label, a) in parameters() {
        let alg = match sedlock::algebra(space, a) {
            Ok(alg) => alg,
            Err(_) => {
                out.push(Check::new(format!("sedlock[{label}]/dimension"), f64::INFINITY, 0.0));
                continue;
            }
        };
        let comm = sedlock::commutant(&alg.generator);
        let dim_gap = (alg.dim() as f64 - n as f64).abs().max((comm.len() as f64 - n as f64).abs());
        out.push(Check::new(format!("sedlock[{label}]/dimension"), dim_gap, 0.0));
        out.push(Check::new(format!("sedlock[{label}]/commutators"), alg.commutator_residual(), 1e-9));
        out.push(Check::new(format!("sedlock[{label}]/commutant-span"), unitaries::span_match_residual(&comm, &alg), 1e-9));
        let adj: Vec<OperatorMatrix> = alg.basis.iter().map(|x| x.adjoint()).collect();
        let flip = sedlock::algebra(space, conj_flip(a)).map(|f| f.contains_all(&adj));
        out.push(Check::from_result(format!("sedlock[{label}]/adjoint-flip"), flip, 1e-9));
        algebras.push(alg);
    }
    let mut gap: f64 = 0.0;
    for i in 0..algebras.len() {
        for j in i + 1..algebras.len() {
            gap = gap.max((algebras[i].intersection_dimension(&algebras[j]) as f64 - 1.0).abs());
        }
    }
    out.push(Check::new("sedlock/pairwise-intersection", gap, 0.0));
    algebras
}

fn clark_checks(space: &ModelSpace, out: &mut Vec<Check>) {
    for (label, a) in parameters() {
        let ExtendedParameter::Circle(u) = a else { continue };
        let Ok(g) = sedlock::generator(space, a) else {
            out.push(Check::new(format!("clark[{label}]/unitary"), f64::INFINITY, 1e-10));
            continue;
        };
        out.push(Check::new(format!("clark[{label}]/unitary"), g.unitarity_residual(), 1e-10));
        let spectrum = linalg::eigenvalues(&g.entries)
            .and_then(|ev| space.theta().level_set(u.value()).map(|ls| linalg::multiset_distance(&ev, &ls)));
        out.push(Check::from_result(format!("clark[{label}]/eigenvalues"), spectrum, 1e-8));
        let mass = space
            .theta()
            .clark_measure(u)
            .map(|m| (m.total_mass() - herglotz_mass(space.theta(), u)).abs());
        out.push(Check::from_result(format!("clark[{label}]/mass"), mass, 1e-8));
    }
}

fn unitary_checks(space: &ModelSpace, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let p = WordParameters {
        a: DiskPoint::new(C64::new(0.3, 0.0)).expect("inside"),
        b: DiskPoint::new(C64::new(0.0, 0.2)).expect("inside"),
        psi: random_auto(rng),
        phi: random_auto(rng),
    };
    match unitaries::word_relation_residuals(space, &p) {
        Ok(w) => {
            for (name, r) in w.entries {
                out.push(Check::new(format!("words/{name}"), r, 1e-9));
            }
        }
        Err(_) => out.push(Check::new("words", f64::INFINITY, 1e-9)),
    }
    let c = DiskPoint::new(random_disk(rng, 0.6)).expect("inside");
    out.push(Check::from_result("crofoot/conjugation", unitaries::crofoot_conjugation_residual(space, c), 1e-9));
    out.push(Check::from_result("crofoot/kernel", unitaries::crofoot_kernel_residual(space, c), 1e-9));
    let psi = random_auto(rng);
    for k in 1..=2 {
        let phi = BoundarySymbol::z_power(k);
        out.push(Check::from_result(
            format!("composition/intertwining[z^{k}]"),
            unitaries::composition_intertwining_residual(space, &psi, &phi),
            1e-9,
        ));
        out.push(Check::from_result(format!("sharp/intertwining[z^{k}]"), unitaries::sharp_intertwining_residual(space, &phi), 1e-9));
    }
    let kinds = [
        ("crofoot", unitaries::crofoot(space, c)),
        ("composition", unitaries::composition(space, &psi)),
        ("sharp", unitaries::sharp_unitary(space)),
    ];
    for (kind, u) in kinds {
        let worst = u.and_then(|u| {
            parameters()
                .into_iter()
                .map(|(_, a)| unitaries::image_span_residual(space, &u, a))
                .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
        });
        out.push(Check::from_result(format!("images/{kind}"), worst, 1e-8));
    }
}

fn idempotent_checks(space: &ModelSpace, out: &mut Vec<Check>) {
    let a = DiskPoint::new(C64::new(0.3, 0.0)).expect("inside");
    match sedlock::idempotents(space, a) {
        Ok(qs) => {
            let (i, m, s) = sedlock::resolution_residuals(&qs);
            out.push(Check::new("idempotents[0.3]/laws", i.max(m).max(s), 1e-9));
            let min = qs.iter().map(|q| q.norm()).fold(f64::INFINITY, f64::min);
            out.push(Check::new("idempotents[0.3]/norms-exceed-one", (1.0 + 1e-6 - min).max(0.0), 0.0));
        }
        Err(_) => out.push(Check::new("idempotents[0.3]/laws", f64::INFINITY, 1e-9)),
    }
    for (label, p) in parameters() {
        let ExtendedParameter::Circle(u) = p else { continue };
        match sedlock::clark_projections(space, u) {
            Ok(ps) => {
                let (i, m, s) = sedlock::resolution_residuals(&ps);
                out.push(Check::new(format!("projections[{label}]/laws"), i.max(m).max(s), 1e-9));
                let dev = ps.iter().map(|q| (q.norm() - 1.0).abs()).fold(0.0, f64::max);
                out.push(Check::new(format!("projections[{label}]/norms"), dev, 1e-9));
            }
            Err(_) => out.push(Check::new(format!("projections[{label}]/laws"), f64::INFINITY, 1e-9)),
        }
    }
}

fn nehari_checks(space: &ModelSpace, out: &mut Vec<Check>) {
    let one = C64::new(1.0, 0.0);
    let symbols = [
        ("z", BoundarySymbol::z_power(1)),
        ("z^2", BoundarySymbol::z_power(2)),
        ("1+z", BoundarySymbol::polynomial(&[one, one])),
    ];
    for (label, phi) in symbols {
        let r = tto_matrix(space, &phi)
            .and_then(|a| nehari_distance(space.theta(), &phi).map(|d| (operator_norm(&a) - d).abs()));
        out.push(Check::from_result(format!("nehari[{label}]"), r, 1e-8));
    }
}

fn pick_checks(space: &ModelSpace, out: &mut Vec<Check>) {
    if !space.theta().has_distinct_zeros() {
        return;
    }
    match pick::sedlock_to_pick(space) {
        Ok(u) => {
            out.push(Check::new("pick/unitarity", u.unitarity_residual(), 1e-9));
            let worst = (0..=space.dim() as i64)
                .try_fold(0.0f64, |m, k| u.intertwining_residual(space, &BoundarySymbol::z_power(k)).map(|r| m.max(r)));
            out.push(Check::from_result("pick/intertwining", worst, 1e-8));
        }
        Err(_) => out.push(Check::new("pick/unitarity", f64::INFINITY, 1e-9)),
    }
    let circle = ExtendedParameter::Circle(UnimodularConstant::from_angle(0.3));
    let disk = ExtendedParameter::from_complex(C64::new(0.2, 0.1));
    let profile = |a| sedlock::algebra(space, a).and_then(|alg| pick::idempotent_norm_profile(&alg));
    let gap = profile(circle).and_then(|pc| {
        profile(disk).map(|pd| {
            let circle_dev = pc.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
            let disk_min = pd.iter().copied().fold(f64::INFINITY, f64::min);
            circle_dev.max((1.0 + 1e-6 - disk_min).max(0.0))
        })
    });
    out.push(Check::from_result("pick/profile-separation", gap, 1e-9));
}

/// Run the full suite on `theta`.
pub fn run(theta: &FiniteBlaschkeProduct, config: &VerifyConfig) -> Result<VerifyReport> {
    if theta.degree() > config.max_degree {
        return Err(Error::DegreeLimit { degree: theta.degree(), limit: config.max_degree });
    }
    let space = match config.quadrature {
        Some(m) => ModelSpace::with_quadrature(theta, m)?,
        None => ModelSpace::new(theta)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = vec![Check::new("modelspace/gram", space.gram_deviation(), 1e-10)];
    kernel_checks(&space, &mut rng, &mut checks);
    sedlock_checks(&space, &mut checks);
    clark_checks(&space, &mut checks);
    unitary_checks(&space, &mut rng, &mut checks);
    idempotent_checks(&space, &mut checks);
    nehari_checks(&space, &mut checks);
    pick_checks(&space, &mut checks);
    Ok(VerifyReport { degree: theta.degree(), seed: config.seed, quadrature: space.quadrature_size(), checks })
}

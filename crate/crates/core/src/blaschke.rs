//! Finite Blaschke products `Θ(z) = γ ∏ b_{z_j}(z)`.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{factor, DiskPoint, MoebiusAutomorphism, UnimodularConstant};
use crate::{poly, C64};

/// Residual bound for front-constant recovery after composition.
pub const RECOMBINATION_TOL: f64 = 1e-10;
const CLUSTER_RADIUS: f64 = 1e-3;

/// Replaces each group of `m` roots of `p` within `radius` of one another by
/// `m` copies of one point, refined as a simple root of `p^(m−1)`.
fn merge_clusters(pts: &[C64], radius: f64, p: &[C64]) -> Vec<C64> {
    let n = pts.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (pts[i] - pts[j]).norm() < radius {
                let (li, lj) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == lj {
                        *l = li;
                    }
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let members: Vec<C64> = (0..n).filter(|&j| label[j] == label[i]).map(|j| pts[j]).collect();
            let centroid = members.iter().sum::<C64>() / members.len() as f64;
            if members.len() == 1 {
                return centroid;
            }
            let d = (1..members.len()).fold(p.to_vec(), |acc, _| poly::derivative(&acc));
            let dd = poly::derivative(&d);
            poly::newton(|z| (poly::eval(&d, z), poly::eval(&dd, z)), centroid, 8)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteBlaschkeProduct {
    gamma: UnimodularConstant,
    zeros: Vec<DiskPoint>,
}

impl FiniteBlaschkeProduct {
    pub fn new(gamma: UnimodularConstant, zeros: Vec<DiskPoint>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidInput("a Blaschke product needs at least one zero".into()));
        }
        Ok(Self { gamma, zeros })
    }

    pub fn from_zeros(zeros: &[C64]) -> Result<Self> {
        Self::with_gamma(C64::new(1.0, 0.0), zeros)
    }

    pub fn with_gamma(gamma: C64, zeros: &[C64]) -> Result<Self> {
        let zeros = zeros
            .iter()
            .enumerate()
            .map(|(k, &z)| {
                DiskPoint::new(z).map_err(|_| {
                    Error::InvalidInput(format!("zeros[{k}] = {z} lies outside the open unit disk"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(UnimodularConstant::new(gamma)?, zeros)
    }

    /// `zⁿ`.
    pub fn monomial(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Self { gamma: UnimodularConstant::one(), zeros: vec![DiskPoint::origin(); n] }
    }

    pub fn gamma(&self) -> UnimodularConstant {
        self.gamma
    }

    pub fn zeros(&self) -> &[DiskPoint] {
        &self.zeros
    }

    pub fn zero_values(&self) -> Vec<C64> {
        self.zeros.iter().map(|z| z.value()).collect()
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.value().norm()).fold(0.0, f64::max)
    }

    /// Smallest distance between two listed zeros (infinite for degree one).
    pub fn min_zero_separation(&self) -> f64 {
        let z = self.zero_values();
        let mut best = f64::INFINITY;
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                best = best.min((z[i] - z[j]).norm());
            }
        }
        best
    }

    pub fn has_distinct_zeros(&self) -> bool {
        self.min_zero_separation() > 1e-8
    }

    pub fn require_distinct_zeros(&self) -> Result<()> {
        if self.has_distinct_zeros() {
            Ok(())
        } else {
            Err(Error::RepeatedZeros(self.min_zero_separation()))
        }
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        for a in &self.zeros {
            if (1.0 - a.value().conj() * z).norm() <= f64::EPSILON * (1.0 + z.norm()) {
                return Err(Error::Pole(z));
            }
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the pole check; callers guarantee `|z| ≤ 1`.
    pub fn eval_unchecked(&self, z: C64) -> C64 {
        self.zeros
            .iter()
            .fold(self.gamma.value(), |acc, a| acc * factor(a.value(), z))
    }

    pub fn derivative_eval(&self, z: C64) -> Result<C64> {
        self.eval(z)?;
        Ok(self.derivative_unchecked(z))
    }

    /// `Θ′` by the logarithmic derivative, or the product rule near a zero.
    pub fn derivative_unchecked(&self, z: C64) -> C64 {
        let near_zero = self.zeros.iter().any(|a| (z - a.value()).norm() < 1e-8);
        if !near_zero {
            let th = self.eval_unchecked(z);
            let s: C64 = self
                .zeros
                .iter()
                .map(|a| {
                    let a = a.value();
                    (1.0 - a.norm_sqr()) / ((z - a) * (1.0 - a.conj() * z))
                })
                .sum();
            return th * s;
        }
        let vals: Vec<C64> = self.zeros.iter().map(|a| factor(a.value(), z)).collect();
        let mut total = C64::new(0.0, 0.0);
        for (k, a) in self.zeros.iter().enumerate() {
            let a = a.value();
            let den = 1.0 - a.conj() * z;
            let mut term = (1.0 - a.norm_sqr()) / (den * den);
            for (j, v) in vals.iter().enumerate() {
                if j != k {
                    term *= v;
                }
            }
            total += term;
        }
        self.gamma.value() * total
    }

    /// Numerator `γ∏(z − z_j)` and denominator `∏(1 − z̄_j z)` coefficients.
    pub fn polynomials(&self) -> (Vec<C64>, Vec<C64>) {
        let num = poly::scale(&poly::from_roots(&self.zero_values()), self.gamma.value());
        let den = self.zeros.iter().fold(vec![C64::new(1.0, 0.0)], |acc, a| {
            poly::mul(&acc, &[C64::new(1.0, 0.0), -a.value().conj()])
        });
        (num, den)
    }

    /// Solutions of `Θ(z) = a` with multiplicity, ordered by argument and
    /// then modulus.
    pub fn level_set(&self, a: C64) -> Result<Vec<C64>> {
        if a.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!("level {a} lies outside the closed disk")));
        }
        let (num, den) = self.polynomials();
        let p = poly::add(&num, &poly::scale(&den, -a));
        let mut roots = poly::roots(&p)?;
        if roots.len() != self.degree() {
            return Err(Error::RootFinder(format!(
                "found {} of {} solutions of Θ(z) = {a}",
                roots.len(),
                self.degree()
            )));
        }
        let on_circle = (a.norm() - 1.0).abs() <= 1e-12;
        for r in roots.iter_mut() {
            *r = poly::newton(
                |z| (self.eval_unchecked(z) - a, self.derivative_unchecked(z)),
                *r,
                6,
            );
            if on_circle && (r.norm() - 1.0).abs() < 1e-6 {
                *r /= r.norm();
            }
        }
        roots.sort_by(|x, y| {
            let ax = x.arg().rem_euclid(TAU);
            let ay = y.arg().rem_euclid(TAU);
            ax.partial_cmp(&ay).unwrap().then(x.norm().partial_cmp(&y.norm()).unwrap())
        });
        Ok(roots)
    }

    /// Level set whose points are pairwise separated by more than `1e-6`.
    pub fn simple_level_set(&self, a: C64) -> Result<Vec<C64>> {
        let pts = self.level_set(a)?;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if (pts[i] - pts[j]).norm() < 1e-6 {
                    return Err(Error::LevelSetNotSimple);
                }
            }
        }
        Ok(pts)
    }

    pub fn clark_measure(&self, a: UnimodularConstant) -> Result<ClarkMeasure> {
        let pts = self.simple_level_set(a.value()).map_err(|e| match e {
            Error::LevelSetNotSimple => {
                Error::RootFinder("repeated point in a boundary level set".into())
            }
            other => other,
        })?;
        let atoms = pts
            .into_iter()
            .map(|z| (UnimodularConstant::normalize(z), 1.0 / self.derivative_unchecked(z).norm()))
            .collect();
        Ok(ClarkMeasure { parameter: a, atoms })
    }

    /// `φ∘Θ`.
    pub fn post_compose(&self, phi: &MoebiusAutomorphism) -> Result<Self> {
        let target = phi.inverse().eval(C64::new(0.0, 0.0));
        let roots = self.level_set(target)?;
        let to_disk = |rs: &[C64]| {
            rs.iter()
                .map(|&z| DiskPoint::with_tolerance(z, 0.0))
                .collect::<Result<Vec<_>>>()
        };
        let f = |z| phi.eval(self.eval_unchecked(z));
        match Self::recombine(to_disk(&roots)?, f) {
            Err(Error::Recombination(res)) => {
                // multiple roots come back as small clusters; their centroid is accurate
                let (num, den) = self.polynomials();
                let p = poly::add(&num, &poly::scale(&den, -target));
                let merged = merge_clusters(&roots, CLUSTER_RADIUS, &p);
                if merged == roots {
                    return Err(Error::Recombination(res));
                }
                Self::recombine(to_disk(&merged)?, f)
            }
            other => other,
        }
    }

    /// `Θ∘ψ`.
    pub fn pre_compose(&self, psi: &MoebiusAutomorphism) -> Result<Self> {
        let inv = psi.inverse();
        let zeros = self
            .zeros
            .iter()
            .map(|z| DiskPoint::with_tolerance(inv.eval(z.value()), 0.0))
            .collect::<Result<Vec<_>>>()?;
        Self::recombine(zeros, |z| self.eval_unchecked(psi.eval(z)))
    }

    fn recombine<F: Fn(C64) -> C64>(zeros: Vec<DiskPoint>, target: F) -> Result<Self> {
        let mut out = Self { gamma: UnimodularConstant::one(), zeros };
        let one = C64::new(1.0, 0.0);
        out.gamma = UnimodularConstant::normalize(target(one) / out.eval_unchecked(one));
        let res = circle_samples(64)
            .map(|z| (out.eval_unchecked(z) - target(z)).norm())
            .fold(0.0, f64::max);
        if res > RECOMBINATION_TOL {
            return Err(Error::Recombination(res));
        }
        Ok(out)
    }

    /// `Θ^#(z) = conj(Θ(z̄))`.
    pub fn sharp(&self) -> Self {
        Self {
            gamma: self.gamma.conj(),
            zeros: self.zeros.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn with_gamma_value(&self, gamma: UnimodularConstant) -> Self {
        Self { gamma, zeros: self.zeros.clone() }
    }

    /// Pairs `(u, v)` with `Θ(uz) = vΘ(z)`, always starting with `(1, 1)`.
    ///
    /// When every zero sits at the origin the symmetry group is the whole
    /// circle; the roots of unity of order up to `n` are returned.
    pub fn rotational_symmetry(&self) -> Vec<(UnimodularConstant, UnimodularConstant)> {
        let zs = self.zero_values();
        let nonzero: Vec<C64> = zs.iter().copied().filter(|z| z.norm() > 1e-12).collect();
        let mut cands: Vec<C64> = Vec::new();
        if nonzero.is_empty() {
            for order in 1..=zs.len() {
                for k in 0..order {
                    cands.push(C64::from_polar(1.0, TAU * k as f64 / order as f64));
                }
            }
        } else {
            let z0 = nonzero[0];
            for w in &nonzero {
                if (w.norm() - z0.norm()).abs() < 1e-10 {
                    cands.push(*w / z0);
                }
            }
        }
        let mut out: Vec<(UnimodularConstant, UnimodularConstant)> =
            vec![(UnimodularConstant::one(), UnimodularConstant::one())];
        for u in cands {
            let u = UnimodularConstant::normalize(u);
            if out.iter().any(|(x, _)| (x.value() - u.value()).norm() < 1e-9) {
                continue;
            }
            // Θ(uz) has zeros ū z_j
            let rotated: Vec<C64> = zs.iter().map(|z| z * u.value().conj()).collect();
            if crate::linalg::multiset_distance(&rotated, &zs) > 1e-9 {
                continue;
            }
            let one = C64::new(1.0, 0.0);
            let v = UnimodularConstant::normalize(
                self.eval_unchecked(u.value()) / self.eval_unchecked(one),
            );
            let ok = circle_samples(32).all(|z| {
                (self.eval_unchecked(u.value() * z) - v.value() * self.eval_unchecked(z)).norm() < 1e-9
            });
            if ok {
                out.push((u, v));
            }
        }
        out
    }

    /// If the nonzero zeros all share one argument `θ`, returns `e^{iθ}`.
    pub fn same_argument_zeros(&self) -> Option<UnimodularConstant> {
        let nonzero: Vec<C64> = self.zero_values().into_iter().filter(|z| z.norm() > 1e-12).collect();
        let Some(first) = nonzero.first() else {
            return Some(UnimodularConstant::one());
        };
        let v = UnimodularConstant::normalize(*first);
        let aligned = nonzero.iter().all(|z| {
            let w = z * v.value().conj();
            w.re > 0.0 && w.im.abs() <= 1e-10 * z.norm().max(1.0)
        });
        aligned.then_some(v)
    }

    /// Taylor coefficients at the origin, truncated once they drop below
    /// `1e-17` relative to the leading mass. Errors when more than
    /// `max_terms` would be required.
    pub fn taylor_coefficients(&self, max_terms: usize) -> Result<Vec<C64>> {
        let r = self.max_zero_modulus();
        let len = if r < 1e-300 {
            self.degree() + 1
        } else {
            let need = (17.0 * std::f64::consts::LN_10 / -r.ln()).ceil() as usize + 2 * self.degree() + 2;
            if need > max_terms {
                return Err(Error::NonDecaying { index: max_terms, magnitude: r.powi(max_terms as i32) });
            }
            need
        };
        let mut series = vec![C64::new(0.0, 0.0); len];
        series[0] = self.gamma.value();
        for a in &self.zeros {
            let a = a.value();
            // b_a(z) = (z − a)·Σ (āz)^k
            let mut fac = vec![C64::new(0.0, 0.0); len];
            let mut g = C64::new(1.0, 0.0);
            for k in 0..len {
                fac[k] += -a * g;
                if k + 1 < len {
                    fac[k + 1] += g;
                }
                g *= a.conj();
            }
            let prod = poly::mul(&series, &fac);
            series = prod.into_iter().take(len).collect();
        }
        Ok(series)
    }
}

impl fmt::Display for FiniteBlaschkeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gamma)?;
        for z in &self.zeros {
            write!(f, "·b_{{{}}}", z.value())?;
        }
        Ok(())
    }
}

/// Uniform circle points `exp(2πi(k + 1/2)/m)`.
pub fn circle_samples(m: usize) -> impl Iterator<Item = C64> {
    (0..m).map(move |k| C64::from_polar(1.0, TAU * (k as f64 + 0.5) / m as f64))
}

/// Atomic Clark measure `μ_a = Σ δ_{ζ_j}/|Θ′(ζ_j)|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClarkMeasure {
    #[serde(with = "unimodular_serde")]
    pub parameter: UnimodularConstant,
    #[serde(with = "atoms_serde")]
    pub atoms: Vec<(UnimodularConstant, f64)>,
}

impl ClarkMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn kappa(&self) -> KappaInvariant {
        KappaInvariant { epsilon: 0, n: Some(self.atoms.len()) }
    }
}

/// `κ(μ) = (ε, n)`; `n = None` encodes infinitely many atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaInvariant {
    pub epsilon: u8,
    pub n: Option<usize>,
}

impl fmt::Display for KappaInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "({}, {n})", self.epsilon),
            None => write!(f, "({}, ∞)", self.epsilon),
        }
    }
}

/// `Re((a + Θ(0))/(a − Θ(0)))`, the total Clark mass.
pub fn herglotz_mass(theta: &FiniteBlaschkeProduct, a: UnimodularConstant) -> f64 {
    let t0 = theta.eval_unchecked(C64::new(0.0, 0.0));
    ((a.value() + t0) / (a.value() - t0)).re
}

mod unimodular_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(u: &UnimodularConstant, s: S) -> std::result::Result<S::Ok, S::Error> {
        [u.value().re, u.value().im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<UnimodularConstant, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        UnimodularConstant::new(C64::new(re, im)).map_err(serde::de::Error::custom)
    }
}

mod atoms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Atom {
        location: [f64; 2],
        weight: f64,
    }

    pub fn serialize<S: Serializer>(
        atoms: &[(UnimodularConstant, f64)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Atom> = atoms
            .iter()
            .map(|(u, w)| Atom { location: [u.value().re, u.value().im], weight: *w })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(UnimodularConstant, f64)>, D::Error> {
        let v = Vec::<Atom>::deserialize(d)?;
        v.into_iter()
            .map(|a| {
                UnimodularConstant::new(C64::new(a.location[0], a.location[1]))
                    .map(|u| (u, a.weight))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::multiset_distance;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn disk_strategy(rmax: f64) -> impl Strategy<Value = C64> {
        (0.0..rmax, 0.0..TAU).prop_map(|(r, t)| C64::from_polar(r, t))
    }

    fn theta_strategy() -> impl Strategy<Value = FiniteBlaschkeProduct> {
        (prop::collection::vec(disk_strategy(0.8), 1..6), 0.0..TAU).prop_map(|(zs, t)| {
            FiniteBlaschkeProduct::with_gamma(C64::from_polar(1.0, t), &zs).unwrap()
        })
    }

    #[test]
    fn eval_examples() {
        let z2 = FiniteBlaschkeProduct::monomial(2);
        assert!((z2.eval(c(0.0, 1.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((z2.eval(c(0.5, 0.0)).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!((t.eval(c(0.0, 0.0)).unwrap() - c(-0.25, 0.0)).norm() < 1e-15);
        assert!(matches!(t.eval(c(2.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn derivative_examples() {
        for n in 1..6 {
            let t = FiniteBlaschkeProduct::monomial(n);
            for z in circle_samples(8) {
                assert!((t.derivative_eval(z).unwrap().norm() - n as f64).abs() < 1e-12);
            }
        }
        let b = FiniteBlaschkeProduct::from_zeros(&[c(0.5, 0.0)]).unwrap();
        assert!((b.derivative_eval(c(1.0, 0.0)).unwrap() - c(3.0, 0.0)).norm() < 1e-14);
        // at a zero the product rule applies
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.5, 0.0), c(0.0, 0.3)]).unwrap();
        let h = 1e-6;
        for z in [c(0.5, 0.0), c(0.1, 0.2), c(0.0, 0.3)] {
            let fd = (t.eval(z + h).unwrap() - t.eval(z - h).unwrap()) / (2.0 * h);
            assert!((t.derivative_eval(z).unwrap() - fd).norm() < 1e-6);
        }
    }

    #[test]
    fn post_compose_recovers_multiple_zero() {
        let t = FiniteBlaschkeProduct::from_zeros(&[C64::new(0.0, 0.0); 3]).unwrap();
        let a = DiskPoint::new(C64::new(0.078, 0.544)).unwrap();
        let ta = t.post_compose(&MoebiusAutomorphism::new(UnimodularConstant::one(), a)).unwrap();
        let back = ta.post_compose(&MoebiusAutomorphism::new(UnimodularConstant::one(), a.neg())).unwrap();
        for z in back.zero_values() {
            assert!(z.norm() < 1e-9, "{z}");
        }
    }

    #[test]
    fn level_set_examples() {
        let z3 = FiniteBlaschkeProduct::monomial(3);
        let r = z3.level_set(c(1.0, 0.0)).unwrap();
        let expected: Vec<C64> = (0..3).map(|k| C64::from_polar(1.0, TAU * k as f64 / 3.0)).collect();
        assert!(multiset_distance(&r, &expected) < 1e-12);
        let r = FiniteBlaschkeProduct::monomial(2).level_set(c(0.25, 0.0)).unwrap();
        assert!(multiset_distance(&r, &[c(0.5, 0.0), c(-0.5, 0.0)]) < 1e-12);
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(multiset_distance(&t.level_set(c(0.0, 0.0)).unwrap(), &[c(0.5, 0.0), c(-0.5, 0.0)]) < 1e-12);
        assert!(matches!(FiniteBlaschkeProduct::monomial(2).simple_level_set(c(0.0, 0.0)), Err(Error::LevelSetNotSimple)));
    }

    #[test]
    fn clark_examples() {
        let z2 = FiniteBlaschkeProduct::monomial(2);
        let m = z2.clark_measure(UnimodularConstant::one()).unwrap();
        let locs: Vec<C64> = m.atoms.iter().map(|(u, _)| u.value()).collect();
        assert!(multiset_distance(&locs, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-14);
        for (_, w) in &m.atoms {
            assert!((w - 0.5).abs() < 1e-14);
        }
        assert!((m.total_mass() - 1.0).abs() < 1e-14);
        assert_eq!(m.kappa(), KappaInvariant { epsilon: 0, n: Some(2) });
    }

    #[test]
    fn composition_examples() {
        let z2 = FiniteBlaschkeProduct::monomial(2);
        assert_eq!(z2.post_compose(&MoebiusAutomorphism::identity()).unwrap().zero_values(), z2.zero_values());
        let phi = MoebiusAutomorphism::factor(DiskPoint::new(c(0.25, 0.0)).unwrap());
        let t = z2.post_compose(&phi).unwrap();
        assert!(multiset_distance(&t.zero_values(), &[c(0.5, 0.0), c(-0.5, 0.0)]) < 1e-12);

        let rot = MoebiusAutomorphism::rotation(UnimodularConstant::new(c(0.0, 1.0)).unwrap());
        let t = z2.pre_compose(&rot).unwrap();
        assert!(multiset_distance(&t.zero_values(), &[c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
        assert!((t.gamma().value() - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sharp_examples() {
        let z4 = FiniteBlaschkeProduct::monomial(4);
        assert_eq!(z4.sharp(), z4);
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.0, 0.5)]).unwrap();
        assert!((t.sharp().zero_values()[0] - c(0.0, -0.5)).norm() < 1e-16);
        assert_eq!(t.sharp().sharp(), t);
    }

    #[test]
    fn symmetry_examples() {
        let z3 = FiniteBlaschkeProduct::monomial(3);
        let s = z3.rotational_symmetry();
        assert!(s.len() > 1);
        for (u, v) in &s {
            assert!((v.value() - u.value().powu(3)).norm() < 1e-12);
        }
        let z0 = c(0.2, 0.3);
        let mut zs = vec![c(0.0, 0.0)];
        for k in 0..3 {
            zs.push(z0.powf(1.0 / 3.0) * C64::from_polar(1.0, TAU * k as f64 / 3.0));
        }
        let t = FiniteBlaschkeProduct::from_zeros(&zs).unwrap();
        let w = C64::from_polar(1.0, TAU / 3.0);
        assert!(t
            .rotational_symmetry()
            .iter()
            .any(|(u, v)| (u.value() - w).norm() < 1e-9 && (v.value() - w).norm() < 1e-9));
        let g = FiniteBlaschkeProduct::from_zeros(&[c(0.1, 0.5), c(-0.4, 0.2), c(0.3, -0.6)]).unwrap();
        assert_eq!(g.rotational_symmetry().len(), 1);
    }

    #[test]
    fn same_argument_examples() {
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.3, 0.0), c(0.7, 0.0)]).unwrap();
        assert!((t.same_argument_zeros().unwrap().value() - 1.0).norm() < 1e-15);
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.0, 0.3), c(0.0, 0.7)]).unwrap();
        let v = t.same_argument_zeros().unwrap();
        for z in t.zero_values() {
            assert!((z * v.value().conj()).im.abs() < 1e-15);
        }
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.3, 0.0), c(0.0, 0.5)]).unwrap();
        assert!(t.same_argument_zeros().is_none());
    }

    #[test]
    fn taylor_coefficients_match_eval() {
        let t = FiniteBlaschkeProduct::from_zeros(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.0, 0.0)]).unwrap();
        let coeffs = t.taylor_coefficients(10_000).unwrap();
        for z in [c(0.1, 0.2), c(-0.4, 0.3), c(0.0, 0.0)] {
            assert!((poly::eval(&coeffs, z) - t.eval(z).unwrap()).norm() < 1e-13);
        }
        assert_eq!(FiniteBlaschkeProduct::monomial(3).taylor_coefficients(10).unwrap().len(), 4);
    }

    #[test]
    fn serde_round_trip() {
        let t = FiniteBlaschkeProduct::monomial(2);
        let m = t.clark_measure(UnimodularConstant::one()).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: ClarkMeasure = serde_json::from_str(&s).unwrap();
        assert_eq!(back.atoms.len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn unimodular_on_circle_contractive_inside(t in theta_strategy(), z in disk_strategy(0.99)) {
            for xi in circle_samples(64) {
                prop_assert!((t.eval(xi).unwrap().norm() - 1.0).abs() < 1e-12);
            }
            prop_assert!(t.eval(z).unwrap().norm() < 1.0);
        }

        #[test]
        fn level_sets(t in theta_strategy(), a in disk_strategy(1.0), ang in 0.0..TAU) {
            let r = t.level_set(a).unwrap();
            prop_assert_eq!(r.len(), t.degree());
            // near-critical levels are ill-conditioned; bound by root accuracy
            for z in &r {
                prop_assert!((t.eval(*z).unwrap() - a).norm() < 1e-9);
            }
            let u = C64::from_polar(1.0, ang);
            for z in t.level_set(u).unwrap() {
                prop_assert!((z.norm() - 1.0).abs() < 1e-10);
                prop_assert!((t.eval(z).unwrap() - u).norm() < 1e-9);
            }
        }

        #[test]
        fn clark_mass(t in theta_strategy(), ang in 0.0..TAU) {
            let a = UnimodularConstant::from_angle(ang);
            let m = t.clark_measure(a).unwrap();
            prop_assert!((m.total_mass() - herglotz_mass(&t, a)).abs() < 1e-8 * herglotz_mass(&t, a).max(1.0));
        }

        #[test]
        fn compositions(t in theta_strategy(), a in disk_strategy(0.9), lam in 0.0..TAU, cc in disk_strategy(0.9)) {
            let ba = MoebiusAutomorphism::factor(DiskPoint::new(a).unwrap());
            let back = t.post_compose(&ba).unwrap().post_compose(&ba.inverse()).unwrap();
            for xi in circle_samples(64) {
                prop_assert!((back.eval(xi).unwrap() - t.eval(xi).unwrap()).norm() < 1e-10);
            }
            let psi = MoebiusAutomorphism::new(UnimodularConstant::from_angle(lam), DiskPoint::new(cc).unwrap());
            let lhs = t.pre_compose(&psi).unwrap().sharp();
            let rhs = t.sharp().pre_compose(&psi.sharp()).unwrap();
            for xi in circle_samples(64) {
                prop_assert!((lhs.eval(xi).unwrap() - rhs.eval(xi).unwrap()).norm() < 1e-12);
                prop_assert!((t.sharp().eval(xi).unwrap() - t.eval(xi.conj()).unwrap().conj()).norm() < 1e-12);
            }
        }

        #[test]
        fn derivative_finite_difference(t in theta_strategy(), z in disk_strategy(0.9)) {
            let h = 1e-6;
            let fd = (t.eval(z + h).unwrap() - t.eval(z - h).unwrap()) / (2.0 * h);
            prop_assert!((t.derivative_eval(z).unwrap() - fd).norm() < 1e-6);
        }
    }
}

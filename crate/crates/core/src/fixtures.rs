//! Named inner functions used by tests, examples and `ttolab verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::FiniteBlaschkeProduct;
use crate::C64;

/// Zero modulus bound for random fixtures.
pub const MAX_RANDOM_MODULUS: f64 = 0.7;

/// `n` zeros drawn uniformly from the disk of radius `0.7`, pairwise at least `0.1` apart.
pub fn random_zeros(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<C64> = Vec::with_capacity(n);
    while out.len() < n {
        let r = MAX_RANDOM_MODULUS * rng.gen::<f64>().sqrt();
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = C64::from_polar(r, t);
        if out.iter().all(|w| (w - z).norm() > 0.1) {
            out.push(z);
        }
    }
    out
}

pub fn random(n: usize, seed: u64) -> FiniteBlaschkeProduct {
    FiniteBlaschkeProduct::from_zeros(&random_zeros(n, seed)).expect("zeros inside the disk")
}

/// `z·b_{0.4}·b_{−0.4}`, an odd function.
pub fn odd() -> FiniteBlaschkeProduct {
    FiniteBlaschkeProduct::from_zeros(&[C64::new(0.0, 0.0), C64::new(0.4, 0.0), C64::new(-0.4, 0.0)])
        .expect("valid zeros")
}

/// Zeros `0.3` and `0.6`, sharing one argument.
pub fn same_argument() -> FiniteBlaschkeProduct {
    FiniteBlaschkeProduct::from_zeros(&[C64::new(0.3, 0.0), C64::new(0.6, 0.0)]).expect("valid zeros")
}

/// `z·∏ b_{a_k}` over the cube roots `a_k` of `z₀ = 0.125·e^{0.6i}`.
pub fn cube_roots() -> FiniteBlaschkeProduct {
    let z0 = C64::from_polar(0.125, 0.6);
    let mut zeros = vec![C64::new(0.0, 0.0)];
    for k in 0..3 {
        zeros.push(C64::from_polar(z0.norm().cbrt(), (z0.arg() + std::f64::consts::TAU * k as f64) / 3.0));
    }
    FiniteBlaschkeProduct::from_zeros(&zeros).expect("valid zeros")
}

/// The standard set `{z², z³, two random degree 3, one degree 5}`.
pub fn standard() -> Vec<(&'static str, FiniteBlaschkeProduct)> {
    vec![
        ("z^2", FiniteBlaschkeProduct::monomial(2)),
        ("z^3", FiniteBlaschkeProduct::monomial(3)),
        ("random3-a", random(3, 11)),
        ("random3-b", random(3, 23)),
        ("random5", random(5, 37)),
    ]
}

/// Fixtures with pairwise distinct zeros.
pub fn distinct() -> Vec<(&'static str, FiniteBlaschkeProduct)> {
    standard().into_iter().filter(|(_, t)| t.has_distinct_zeros()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_fixtures_are_reproducible_and_bounded() {
        assert_eq!(random_zeros(5, 37), random_zeros(5, 37));
        for (_, t) in standard() {
            assert!(t.max_zero_modulus() <= MAX_RANDOM_MODULUS);
        }
        assert!(random(5, 37).has_distinct_zeros());
    }

    #[test]
    fn special_fixtures_have_their_symmetries() {
        let z = C64::new(0.2, 0.35);
        let odd = odd();
        assert!((odd.eval_unchecked(-z) + odd.eval_unchecked(z)).norm() < 1e-14);
        let u = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let t = cube_roots();
        assert!((t.eval_unchecked(u * z) - u * t.eval_unchecked(z)).norm() < 1e-13);
        assert!(same_argument().same_argument_zeros().is_some());
    }
}

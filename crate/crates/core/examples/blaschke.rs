//! Level sets, Clark measures and symmetries of a finite Blaschke product.

use ttolab::blaschke::herglotz_mass;
use ttolab::{fixtures, FiniteBlaschkeProduct, UnimodularConstant, C64};

fn main() -> ttolab::Result<()> {
    let theta = FiniteBlaschkeProduct::from_zeros(&[C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, -0.4)])?;
    let z = C64::new(0.2, 0.3);
    println!("Theta(z) = {:.6}, Theta'(z) = {:.6}", theta.eval(z)?, theta.derivative_eval(z)?);

    let a = C64::new(0.1, 0.2);
    for w in theta.level_set(a)? {
        println!("level set point {w:.6}: Theta = {:.6}", theta.eval(w)?);
    }

    let alpha = UnimodularConstant::from_angle(1.0);
    let mu = theta.clark_measure(alpha)?;
    for (zeta, weight) in &mu.atoms {
        println!("atom at {:.6} with weight {weight:.6}", zeta.value());
    }
    println!("mass {:.12}, Herglotz value {:.12}, kappa {}", mu.total_mass(), herglotz_mass(&theta, alpha), mu.kappa());

    let odd = fixtures::cube_roots();
    for (u, v) in odd.rotational_symmetry() {
        println!("Theta(u z) = v Theta(z) for u = {:.4}, v = {:.4}", u.value(), v.value());
    }
    if let Some(v) = fixtures::same_argument().same_argument_zeros() {
        println!("same-argument zeros along {:.4}", v.value());
    }
    Ok(())
}

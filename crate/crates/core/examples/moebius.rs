//! Disk automorphisms and the parameter bookkeeping behind Crofoot transforms.

use ttolab::moebius::{compose_factors, conj_flip, ell, pseudo_hyperbolic};
use ttolab::{DiskPoint, ExtendedParameter, MoebiusAutomorphism, UnimodularConstant, C64};

fn main() -> ttolab::Result<()> {
    let a = DiskPoint::new(C64::new(0.3, 0.1))?;
    let c = DiskPoint::new(C64::new(-0.2, 0.4))?;
    let psi = MoebiusAutomorphism::new(UnimodularConstant::from_angle(0.7), c);
    let z = C64::new(0.1, -0.5);

    let w = psi.eval(z);
    let back = psi.inverse().eval(w);
    println!("psi(z) = {w:.6}, psi^-1(psi(z)) - z = {:.2e}", (back - z).norm());

    // pseudo-hyperbolic distance is automorphism invariant
    let u = C64::new(-0.6, 0.2);
    println!(
        "rho(z, u) = {:.12}, rho(psi z, psi u) = {:.12}",
        pseudo_hyperbolic(z, u),
        pseudo_hyperbolic(psi.eval(z), psi.eval(u))
    );

    let (lambda, d) = compose_factors(a, c);
    println!("b_a o b_c = {:.6} * b_d with d = {:.6}", lambda.value(), d.value());

    for p in [C64::new(0.0, 0.0), C64::new(0.5, 0.5), C64::new(3.0, 0.0)] {
        let p = ExtendedParameter::from_complex(p);
        println!("ell_c({p}) = {}, conj_flip({p}) = {}", ell(c, p), conj_flip(p));
    }
    println!("ell_c(inf) = {}", ell(c, ExtendedParameter::Infinity));
    Ok(())
}

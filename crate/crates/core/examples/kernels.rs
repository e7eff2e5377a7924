//! Reproducing kernels and the conjugation on a model space.

use ttolab::{fixtures, ModelSpace, C64};

fn main() -> ttolab::Result<()> {
    let theta = fixtures::random(4, 7);
    let space = ModelSpace::new(&theta)?;
    println!("dim K_Theta = {}, quadrature {} nodes, Gram deviation {:.2e}", space.dim(), space.quadrature_size(), space.gram_deviation());

    // f = k_mu, so <f, k_lambda> = k_mu(lambda)
    let (lambda, mu) = (C64::new(0.3, -0.2), C64::new(-0.1, 0.5));
    let k_l = space.kernel_coords(lambda);
    let k_m = space.kernel_coords(mu);
    let inner = k_m.inner(&k_l)?;
    println!("<k_mu, k_lambda> = {inner:.12}, k_mu(lambda) = {:.12}", space.eval_vector(&k_m, lambda));
    println!("||k_lambda||^2 = {:.12} (closed form {:.12})", k_l.norm().powi(2), space.kernel_norm_sq(lambda));

    let c = space.conjugation_matrix()?;
    println!("C^2 - I: {:.2e}", c.involution_residual());
    let ck = c.apply(&k_l)?;
    let expected = space.conjugate_kernel_coords(lambda);
    println!("C k_lambda vs (Theta(z) - Theta(lambda))/(z - lambda): {:.2e}", (ck.coords - expected.coords).norm());
    Ok(())
}

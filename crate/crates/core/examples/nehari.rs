//! Truncated Toeplitz matrices and the Nehari distance.

use ttolab::tto::{nehari_distance, operator_norm, tto_matrix};
use ttolab::{fixtures, BoundarySymbol, ModelSpace, C64};

fn main() -> ttolab::Result<()> {
    let one = C64::new(1.0, 0.0);
    for (name, theta) in fixtures::standard() {
        let space = ModelSpace::new(&theta)?;
        for (label, phi) in [
            ("z", BoundarySymbol::z_power(1)),
            ("z^2", BoundarySymbol::z_power(2)),
            ("1+z", BoundarySymbol::polynomial(&[one, one])),
        ] {
            let a = tto_matrix(&space, &phi)?;
            let norm = operator_norm(&a);
            let dist = nehari_distance(&theta, &phi)?;
            println!("{name:>10} {label:>4}: ||A_phi|| = {norm:.12}, dist(phi/Theta, H^inf) = {dist:.12}");
        }
    }
    Ok(())
}

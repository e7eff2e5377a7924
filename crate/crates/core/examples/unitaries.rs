//! Crofoot, composition and sharp unitaries acting on Sedlock algebras.

use ttolab::unitaries::{composition, crofoot, image_span_residual, lambda_image, sharp_unitary, word_relation_residuals, WordParameters};
use ttolab::{fixtures, DiskPoint, ExtendedParameter, ModelSpace, MoebiusAutomorphism, UnimodularConstant, C64};

fn main() -> ttolab::Result<()> {
    let space = ModelSpace::new(&fixtures::random(3, 23))?;
    let c = DiskPoint::new(C64::new(0.2, -0.35))?;
    let psi = MoebiusAutomorphism::new(UnimodularConstant::from_angle(2.0), DiskPoint::new(C64::new(-0.3, 0.1))?);
    let a = ExtendedParameter::from_complex(C64::new(0.4, 0.2));
    for u in [crofoot(&space, c)?, composition(&space, &psi)?, sharp_unitary(&space)?] {
        println!(
            "{:<40} unitary {:.1e}; U B^a U* = B^{} up to {:.1e}",
            u.kind.to_string(),
            u.matrix.unitarity_residual(),
            lambda_image(&u.kind, a),
            image_span_residual(&space, &u, a)?
        );
    }
    let p = WordParameters { a: DiskPoint::new(C64::new(0.3, 0.0))?, b: DiskPoint::new(C64::new(0.0, 0.2))?, psi, phi: psi.inverse() };
    for (name, r) in word_relation_residuals(&space, &p)?.entries {
        println!("relation {name}: {r:.1e}");
    }
    Ok(())
}

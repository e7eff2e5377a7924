//! The co-analytic Sedlock algebra as diagonal operators on a Pick space.

use ttolab::pick::{diagonal_norm, idempotent_norm_profile, pick_norm_of_symbol, sedlock_to_pick, DiagonalOperator, PickSpace};
use ttolab::sedlock::algebra;
use ttolab::tto::nehari_distance;
use ttolab::{fixtures, BoundarySymbol, ExtendedParameter, ModelSpace, UnimodularConstant, C64};

fn main() -> ttolab::Result<()> {
    let nodes = PickSpace::from_complex(&[C64::new(0.0, 0.0), C64::new(0.5, 0.0)])?;
    let q = DiagonalOperator::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])?;
    println!("Pick nodes (0, 1/2): ||diag(1, 0)|| = {:.12}", diagonal_norm(&nodes, &q)?);

    let theta = fixtures::random(4, 3);
    let model = ModelSpace::new(&theta)?;
    let u = sedlock_to_pick(&model)?;
    println!("unitarity residual {:.1e}", u.unitarity_residual());
    for k in 1..=3 {
        let phi = BoundarySymbol::z_power(k);
        println!(
            "z^{k}: intertwining {:.1e}, Pick norm {:.10}, Nehari distance {:.10}",
            u.intertwining_residual(&model, &phi)?,
            pick_norm_of_symbol(&model, &phi)?,
            nehari_distance(&theta, &phi)?
        );
    }
    for a in [ExtendedParameter::Circle(UnimodularConstant::from_angle(0.3)), ExtendedParameter::from_complex(C64::new(0.2, 0.1))] {
        let profile = idempotent_norm_profile(&algebra(&model, a)?)?;
        let s: Vec<String> = profile.iter().map(|x| format!("{x:.6}")).collect();
        println!("idempotent norms at a = {a}: [{}]", s.join(", "));
    }
    Ok(())
}

//! Sedlock algebras: generators, commutants and canonical idempotents.

use ttolab::moebius::conj_flip;
use ttolab::sedlock::{algebra, canonical_idempotents, commutant, resolution_residuals};
use ttolab::{fixtures, ExtendedParameter, ModelSpace, OperatorMatrix, UnimodularConstant, C64};

fn main() -> ttolab::Result<()> {
    let theta = fixtures::random(3, 11);
    let space = ModelSpace::new(&theta)?;
    let params = [
        ExtendedParameter::from_complex(C64::new(0.0, 0.0)),
        ExtendedParameter::from_complex(C64::new(0.3, 0.0)),
        ExtendedParameter::Circle(UnimodularConstant::from_angle(0.8)),
        ExtendedParameter::from_complex(C64::new(2.0, 0.0)),
        ExtendedParameter::Infinity,
    ];
    let algebras = params.iter().map(|&a| algebra(&space, a)).collect::<ttolab::Result<Vec<_>>>()?;
    for alg in &algebras {
        let comm = commutant(&alg.generator);
        let adj: Vec<OperatorMatrix> = alg.basis.iter().map(|x| x.adjoint()).collect();
        let flip = algebra(&space, conj_flip(alg.a))?;
        println!(
            "a = {:<24} dim {} commutant dim {} commutators {:.1e} adjoints in B^(1/conj a) {:.1e}",
            alg.a.to_string(),
            alg.dim(),
            comm.len(),
            alg.commutator_residual(),
            flip.contains_all(&adj)
        );
    }
    println!("dim(B^0 ∩ B^0.3) = {}", algebras[0].intersection_dimension(&algebras[1]));

    for a in [params[1], params[2]] {
        let qs = canonical_idempotents(&space, a)?;
        let (idem, orth, sum) = resolution_residuals(&qs);
        let norms: Vec<String> = qs.iter().map(|q| format!("{:.6}", q.norm())).collect();
        println!("a = {a}: laws {idem:.1e} {orth:.1e} {sum:.1e}, norms [{}]", norms.join(", "));
    }
    Ok(())
}

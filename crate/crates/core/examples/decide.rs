//! Deciding spatial isomorphism of Sedlock algebras.

use ttolab::isodecider::{decide, reverify, spatial_unitary, IsoQuery};
use ttolab::{fixtures, ExtendedParameter, FiniteBlaschkeProduct, UnimodularConstant, C64};

fn report(label: &str, q: &IsoQuery) -> ttolab::Result<()> {
    let d = decide(q);
    print!("{label:<34} {:<15}", d.verdict.label());
    if let Some(w) = d.verdict.witness() {
        print!(" zeta = {:.4}, psi = ({:.4}, {:.4})", w.zeta.value(), w.psi.lambda.value(), w.psi.c.value());
        print!(", fresh residual {:.1e}", reverify(q, &d).unwrap_or(f64::NAN));
    }
    if let Some((_, r)) = spatial_unitary(q, &d)? {
        print!(", span residual {r:.1e}");
    }
    if let ttolab::isodecider::Verdict::NotEquivalent(reason) = d.verdict {
        print!(" ({reason})");
    }
    println!();
    Ok(())
}

fn main() -> ttolab::Result<()> {
    let p = |re: f64, im: f64| ExtendedParameter::from_complex(C64::new(re, im));
    let z3 = FiniteBlaschkeProduct::monomial(3);
    report("z^3, 0.3 vs 0.3i", &IsoQuery::same(&z3, p(0.3, 0.0), p(0.0, 0.3)))?;
    report("z^3, 0.3 vs 0.5", &IsoQuery::same(&z3, p(0.3, 0.0), p(0.5, 0.0)))?;
    let circle = |t: f64| ExtendedParameter::Circle(UnimodularConstant::from_angle(t));
    report("random3, two circle parameters", &IsoQuery::same(&fixtures::random(3, 11), circle(0.2), circle(2.0)))?;
    report("z^2, circle vs disk", &IsoQuery::same(&FiniteBlaschkeProduct::monomial(2), circle(0.0), p(0.5, 0.0)))?;
    report("odd, a vs -a", &IsoQuery::same(&fixtures::odd(), p(0.2, 0.1), p(-0.2, -0.1)))?;
    report("same-argument zeros, 0 vs inf", &IsoQuery::same(&fixtures::same_argument(), p(0.0, 0.0), ExtendedParameter::Infinity))?;
    report("random3, 0.1+0.2i vs -0.3", &IsoQuery::same(&fixtures::random(3, 23), p(0.1, 0.2), p(-0.3, 0.0)))?;
    Ok(())
}

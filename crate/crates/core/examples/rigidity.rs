//! Searching for pairs `(phi, psi)` with `phi ∘ Theta = Theta ∘ psi`.

use ttolab::isodecider::{rigidity::critical_points, rigidity_check, Rigidity};
use ttolab::{fixtures, FiniteBlaschkeProduct};

fn main() -> ttolab::Result<()> {
    let cases = [
        ("z^3", FiniteBlaschkeProduct::monomial(3)),
        ("odd", fixtures::odd()),
        ("cube roots", fixtures::cube_roots()),
        ("random degree 3", fixtures::random(3, 23)),
        ("random degree 5", fixtures::random(5, 37)),
    ];
    for (name, theta) in cases {
        let crit = critical_points(&theta)?;
        print!("{name:<16} {} critical points: ", crit.len());
        match rigidity_check(&theta) {
            Rigidity::Rigid => println!("rigid"),
            Rigidity::Symmetric(s) => println!(
                "symmetric{} with phi = ({:.4}, {:.4}), residual {:.1e}",
                if s.sharp { " (sharp)" } else { "" },
                s.phi.lambda.value(),
                s.phi.c.value(),
                s.residual
            ),
            Rigidity::Unknown { best_residual } => println!("unknown, best residual {best_residual:.1e}"),
        }
    }
    Ok(())
}

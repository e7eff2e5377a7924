//! Running the invariant suite programmatically.

use ttolab::verify::{run, VerifyConfig};
use ttolab::fixtures;

fn main() -> ttolab::Result<()> {
    for (name, theta) in fixtures::standard() {
        let report = run(&theta, &VerifyConfig { seed: 1, ..Default::default() })?;
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        let worst = report
            .checks
            .iter()
            .filter(|c| c.tolerance > 0.0)
            .map(|c| c.residual / c.tolerance)
            .fold(0.0, f64::max);
        println!("{name:>10}: {} checks, worst residual/tolerance {worst:.1e}, failed {failed:?}", report.checks.len());
    }
    Ok(())
}

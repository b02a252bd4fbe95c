//! Builds and verifies a differential equation whose parameterized Galois
//! group is SL2, at four points and precision 16.

use std::time::Instant;

use galois_patch::forge::{build, default_points, CheckStatus};
use galois_patch::rootdata::RootDatum;

fn main() -> galois_patch::Result<()> {
    let rd = RootDatum::from_label("A1")?;
    let start = Instant::now();
    let bundle = build(&rd, &default_points(&rd), 16)?;
    println!("built {} in {:.2?}", rd.label(), start.elapsed());
    for c in &bundle.report.checks {
        let order = c.verified_order.map(|o| o.to_string()).unwrap_or_default();
        println!("{:<26} {:<12} {}", c.name, format!("{:?}", c.status), order);
        if c.status != CheckStatus::Pass {
            for n in &c.notes {
                println!("    {n}");
            }
        }
    }
    println!("A[0][1] mod t^3:");
    for (e, c) in bundle.a.get(0, 1).truncate(3).terms() {
        println!("  t^{e}: {c:?}");
    }
    println!("overall: {}", bundle.report.overall_pass);
    Ok(())
}

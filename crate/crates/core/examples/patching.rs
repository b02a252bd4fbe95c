//! Simultaneous factorization Y_i = Z_i^-1 Y for two unipotent local matrices.

use galois_patch::patcher::{factor_simultaneous, sl2_unipotent, verify_patch, PatchProblem};
use galois_patch::tower::PointSet;
use galois_patch::{Rat, RatFunc, TSeries};

fn main() -> galois_patch::Result<()> {
    let (q1, q2) = (Rat::int(0), Rat::int(1));
    let n = 6;
    let c1 = TSeries::monomial(RatFunc::pole(&q1, 1, Rat::one()), 1).truncate(n);
    let c2 = TSeries::monomial(RatFunc::pole(&q2, 1, Rat::one()), 1).truncate(n);
    let ps = PointSet::new(vec![q1, q2])?;
    let problem = PatchProblem::new(ps, vec![sl2_unipotent(true, &c1), sl2_unipotent(false, &c2)], n)?;
    let sol = factor_simultaneous(&problem)?;
    for i in 0..2 {
        for j in 0..2 {
            println!("Y[{i}][{j}]:");
            for (e, c) in sol.y.get(i, j).truncate(4).terms() {
                println!("  t^{e}: {c:?}");
            }
        }
    }
    let rep = verify_patch(&problem, &sol);
    for p in &rep.points {
        println!(
            "point {}: residual vanishes to order {}, Z regular there: {}",
            p.index, p.residual_order, p.z_in_fi_ring
        );
    }
    println!("Y has poles only at the points: {}; all checks: {}", rep.y_in_f0_ring, rep.pass());
    Ok(())
}

//! The four local seeds at one point, their equations and Galois actions.

use galois_patch::rootdata::RootDatum;
use galois_patch::seed::{certify_nonrational, check_seed, galois_action_check, make_seed, Family, LocalModel2x2};
use galois_patch::Rat;

fn main() -> galois_patch::Result<()> {
    let rd = RootDatum::from_label("A1")?;
    let alpha = rd.positive_roots()[0].clone();
    let q = Rat::new(1, 2);
    for fam in Family::ALL {
        let s = make_seed(&rd, &alpha, fam, &q, 8)?;
        let c = check_seed(&rd, &s);
        println!(
            "{fam:?}: root {}, group {}, Y = I mod t: {}, solves dY = A Y: {}, det 1: {}, action verified: {}",
            s.root,
            s.descriptor(),
            c.identity_mod_t,
            c.solves_equation,
            c.det_one,
            galois_action_check(&rd, &s)?
        );
        let v = s.a_local.valuation().unwrap_or(0);
        println!("  A_local = t^{v} * {:?} + ...", s.a_local.coeff(v));
    }
    let model = LocalModel2x2::new(&q, 8);
    println!("2x2 model: {:?}", model.check());
    println!("f is not in k((t))(x) (residues +1 at q-t and -1 at q): {}", certify_nonrational(&q));
    Ok(())
}

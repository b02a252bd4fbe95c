//! Root subgroups, the Springer identity and the generation hypotheses.

use galois_patch::rootdata::{GroupDescriptor, RootDatum};
use galois_patch::seed::Family;
use galois_patch::{Rat, RatFunc};

fn main() -> galois_patch::Result<()> {
    for label in ["A1", "A2", "C2"] {
        let rd = RootDatum::from_label(label)?;
        println!("{label}: rank {}, {}x{} matrices, {} positive roots", rd.rank(), rd.dim(), rd.dim(), rd.m());
        for r in rd.roots() {
            let ok = rd.springer_identity_check(&r)?;
            let wrong_sign = rd.springer_plus_sign_holds(&r)?;
            println!("  root {r}: u(f) u_-(-1/f) u(f) = coroot(f) n holds: {ok}; with +1/f: {wrong_sign}");
        }
        let all: Vec<GroupDescriptor> = rd
            .positive_roots()
            .iter()
            .flat_map(|a| {
                Family::ALL.map(|f| GroupDescriptor {
                    root: if f.uses_negative_root() { a.neg() } else { a.clone() },
                    multiplier: f.multiplier(),
                })
            })
            .collect();
        println!("  hypotheses with all four families: {}", rd.propgen_hypothesis_check(&all).pass);
        let partial: Vec<GroupDescriptor> = all.iter().filter(|d| rd.is_positive(&d.root).unwrap_or(false)).cloned().collect();
        let rep = rd.propgen_hypothesis_check(&partial);
        println!("  positive roots only: {} ({} missing)", rep.pass, rep.missing.len());
    }
    let rd = RootDatum::from_label("A2")?;
    let u = rd.u_matrix(&rd.positive_roots()[2], &RatFunc::<Rat>::x())?;
    println!("u for the highest root of A2: {u:?}");
    Ok(())
}

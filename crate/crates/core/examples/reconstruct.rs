//! Recovering a closed form in x and t from a truncated expansion, and the
//! logarithmic series for which no small certificate exists.

use galois_patch::seed::make_f;
use galois_patch::tower::{reconstruct, reconstruct_scheduled};
use galois_patch::{Rat, TSeries};

fn main() -> galois_patch::Result<()> {
    let q = Rat::int(3);
    let n = 12;
    // expansion of 1/(x - 3 + 2t)
    let a: TSeries<Rat> = TSeries::inv_linear_shift(&q, &Rat::int(2), n);
    let r = reconstruct(&a, 1, n)?;
    println!("1/(x-3+2t): success = {}, verified to t^{}", r.success, r.verified_order);
    for (e, c) in r.denominator.terms() {
        println!("  Q: t^{e} * {c:?}");
    }
    for (e, c) in r.numerator.terms() {
        println!("  P: t^{e} * {c:?}");
    }

    let f = make_f(&q, 24);
    for d in 1..=4 {
        let r = reconstruct(&f, d, 24)?;
        println!("f with d_x = {d}: success = {}", r.success);
    }
    println!("f on the full schedule: {}", if reconstruct_scheduled(&f, 24).is_some() { "found" } else { "inconclusive at bounds" });
    Ok(())
}

//! Truncated t-series with rational-function coefficients and precision tracking.

use galois_patch::seed::make_f;
use galois_patch::{Rat, RatFunc, TSeries};

fn main() -> galois_patch::Result<()> {
    let q = Rat::int(0);
    let f = make_f(&q, 6);
    println!("f = {}", show(&f));
    println!("d/dx f = {}", show(&f.dx()));
    println!("d/dt f = {}", show(&f.dt()));

    // 1 + f is a unit; its inverse is known to the same order
    let u = TSeries::one().add(&f);
    let ui = u.inv()?;
    println!("(1 + f)^-1 = {}", show(&ui));
    println!("(1 + f)(1 + f)^-1 - 1 = {}", show(&u.mul(&ui).sub(&TSeries::one())));

    // inverting t^-1 (1 + t f) moves the known window up by two orders
    let w = TSeries::monomial(RatFunc::one(), -1).add(&f);
    println!("precision of t^-1 + f: {:?}, of its inverse: {:?}", w.prec(), w.inv()?.prec());
    Ok(())
}

fn show(s: &TSeries<Rat>) -> String {
    let mut parts: Vec<String> = s.terms().map(|(e, c)| format!("({c:?}) t^{e}")).collect();
    if let Some(p) = s.prec() {
        parts.push(format!("O(t^{p})"));
    }
    parts.join(" + ")
}

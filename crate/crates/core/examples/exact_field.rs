//! Exact rational functions: partial fractions, residues and Laurent expansions.

use galois_patch::{Poly, Rat, RatFunc};

fn main() -> galois_patch::Result<()> {
    let q = Rat::int(1);
    // (x^3 + 2) / ((x - 1)^2 (x + 2))
    let num: Poly<Rat> = Poly::from_rats(&[Rat::int(2), Rat::zero(), Rat::zero(), Rat::one()]);
    let den: Poly<Rat> = Poly::from_rats(&[Rat::int(2), Rat::int(-3), Rat::zero(), Rat::one()]);
    let r = RatFunc::from_fraction(num, den)?;
    println!("r = {r:?}");
    println!("polynomial part: {:?}", r.poly_part());
    for p in r.poles() {
        println!("pole at x = {}: coefficients of 1/(x-q)^k, k = 1.. : {:?}", p.at, p.coeffs);
    }
    println!("residue at 1: {}", r.residue(&q));
    let l = r.expand_at(&q, 3);
    let terms: Vec<String> = l
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| format!("{c}(x-1)^{}", l.start + j as i64))
        .collect();
    println!("expansion at 1: {} + ...", terms.join(" + "));
    let back = r.mul(&r.inv().unwrap());
    println!("r * r^-1 = {back:?}");
    println!("d/dx r = {:?}", r.dx());
    Ok(())
}

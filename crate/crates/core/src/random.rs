//! Seeded random elements for property checks.

use rand::Rng;

use crate::field::{Rat, Ring};
use crate::matrix::{Mat, TMatrix};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::series::TSeries;
use crate::tower::PointSet;

pub fn rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::new(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn nonzero_rat<R: Rng>(rng: &mut R) -> Rat {
    loop {
        let r = rat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Polynomial of degree at most 2 plus up to two principal parts at the points.
pub fn ratfunc<R: Rng>(rng: &mut R, ps: &PointSet) -> RatFunc<Rat> {
    let deg = rng.gen_range(0..=2);
    let mut r = RatFunc::from_poly(Poly::new((0..=deg).map(|_| rat(rng)).collect()));
    for _ in 0..rng.gen_range(0..=2) {
        let q = ps.get(rng.gen_range(0..ps.len()));
        let order = rng.gen_range(1..=2);
        r = r.add(&RatFunc::principal(q, (0..order).map(|_| rat(rng)).collect()));
    }
    r
}

/// Series with valuation in `[-1, 1]` and the given precision, with
/// roughly a quarter of the coefficients zero.
pub fn series<R: Rng>(rng: &mut R, ps: &PointSet, prec: i64) -> TSeries<Rat> {
    let t_min = rng.gen_range(-1..=1).min(prec - 1);
    let coeffs = (t_min..prec)
        .map(|_| {
            if rng.gen_bool(0.25) {
                RatFunc::zero()
            } else {
                ratfunc(rng, ps)
            }
        })
        .collect();
    TSeries::new(t_min, coeffs, Some(prec))
}

/// Series with a nonzero constant leading term, hence invertible to the
/// same precision.
pub fn unit_series<R: Rng>(rng: &mut R, ps: &PointSet, prec: i64) -> TSeries<Rat> {
    let tail = series(rng, ps, prec).shift(2).truncate(prec);
    TSeries::constant(RatFunc::from_rat(&nonzero_rat(rng))).add(&tail)
}

/// Matrix congruent to the identity mod `t`.
pub fn identity_mod_t<R: Rng>(rng: &mut R, n: usize, ps: &PointSet, prec: i64) -> TMatrix<Rat> {
    let id: TMatrix<Rat> = Mat::identity(n);
    // valuations of `series` are at least -1
    let noise = Mat::from_fn(n, n, |_, _| series(rng, ps, prec).shift(2).truncate(prec));
    id.add(&noise).truncate(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ps = PointSet::consecutive(3);
        for _ in 0..50 {
            let s = series(&mut rng, &ps, 5);
            assert_eq!(s.prec(), Some(5));
            assert!(unit_series(&mut rng, &ps, 5).valuation() == Some(0));
            assert!(identity_mod_t(&mut rng, 2, &ps, 4).is_identity_mod_t());
        }
    }
}

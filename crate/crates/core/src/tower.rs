//! The field tower `F = k((t))(x) ⊆ F_0, F_i ⊆ F_i°` at the level of
//! exhibitable representatives.
//!
//! `F_0` is represented by series whose coefficients lie in
//! `k[(x-q_1)^-1, ..., (x-q_r)^-1]`, and `F_i` by series whose coefficients
//! are regular at `q_i`. Both predicates are sufficient, never necessary,
//! conditions for membership in the corresponding fraction fields.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::series::TSeries;

/// Pairwise distinct rational points `q_1, ..., q_r`, `r >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rat>", into = "Vec<Rat>")]
pub struct PointSet {
    points: Vec<Rat>,
}

impl PointSet {
    pub fn new(points: Vec<Rat>) -> Result<PointSet> {
        if points.is_empty() {
            return Err(Error::InvalidPoints("empty point set".into()));
        }
        let mut seen = BTreeSet::new();
        for q in &points {
            if !seen.insert(q) {
                return Err(Error::InvalidPoints(format!("repeated point {q}")));
            }
        }
        Ok(PointSet { points })
    }

    /// The integers `0, 1, ..., r - 1`.
    pub fn consecutive(r: usize) -> PointSet {
        PointSet::new((0..r as i64).map(Rat::int).collect()).expect("r >= 1")
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.points[i]
    }

    pub fn index_of(&self, q: &Rat) -> Option<usize> {
        self.points.iter().position(|p| p == q)
    }
}

impl TryFrom<Vec<Rat>> for PointSet {
    type Error = Error;
    fn try_from(v: Vec<Rat>) -> Result<PointSet> {
        PointSet::new(v)
    }
}

impl From<PointSet> for Vec<Rat> {
    fn from(p: PointSet) -> Vec<Rat> {
        p.points
    }
}

/// Which field of the tower an object is meant to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerTag {
    GlobalF,
    F0,
    Fi(usize),
    FiCirc(usize),
}

impl TowerTag {
    /// Ring-level membership certificate for a series, when one is decidable
    /// from the stored data. `None` means only reconstruction can tell.
    pub fn certify<K: Field>(&self, a: &TSeries<K>, ps: &PointSet) -> Option<bool> {
        match *self {
            TowerTag::GlobalF => a.is_exact().then_some(true),
            TowerTag::F0 => Some(in_f0_ring(a, ps)),
            TowerTag::Fi(i) => Some(in_fi_ring(a, ps.get(i))),
            // every rational-function coefficient expands in k((x - q_i))
            TowerTag::FiCirc(i) => Some(i < ps.len()),
        }
    }
}

/// Every coefficient lies in `k[(x-q_1)^-1, ..., (x-q_r)^-1]`.
pub fn in_f0_ring<K: Field>(a: &TSeries<K>, ps: &PointSet) -> bool {
    a.terms().all(|(_, c)| c.in_inverse_linear_ring(ps.points()))
}

/// Every coefficient is regular at `q`.
pub fn in_fi_ring<K: Field>(a: &TSeries<K>, q: &Rat) -> bool {
    a.terms().all(|(_, c)| c.pole_free_at(q))
}

/// Sufficient certificate for membership in `F = F_0 ∩ F_i`. A `false`
/// answer is inconclusive, not a proof of non-membership.
pub fn lemma_schnitt_check<K: Field>(a: &TSeries<K>, ps: &PointSet, i: usize) -> bool {
    in_f0_ring(a, ps) && in_fi_ring(a, ps.get(i))
}

/// Outcome of [`reconstruct`].
#[derive(Clone)]
pub struct Reconstruction<K> {
    pub success: bool,
    /// `P`, with polynomial coefficients in `x`.
    pub numerator: TSeries<K>,
    /// `Q`, with polynomial coefficients in `x`; `Q mod t` is monic.
    pub denominator: TSeries<K>,
    pub degree_bounds: (usize, usize),
    pub verified_order: i64,
}

impl<K: Field> Reconstruction<K> {
    fn failure(d: usize) -> Reconstruction<K> {
        Reconstruction {
            success: false,
            numerator: TSeries::zero_exact(),
            denominator: TSeries::one(),
            degree_bounds: (d, d),
            verified_order: 0,
        }
    }

    /// `Q * a - P`, which is zero mod `t^verified_order` on success.
    pub fn residual(&self, a: &TSeries<K>) -> TSeries<K> {
        self.denominator.mul(a).sub(&self.numerator)
    }

    /// The denominator as a polynomial in `x` with t-series coefficients,
    /// low degree first.
    pub fn denominator_in_x(&self) -> Vec<TSeries<K>> {
        x_coefficients(&self.denominator)
    }

    pub fn numerator_in_x(&self) -> Vec<TSeries<K>> {
        x_coefficients(&self.numerator)
    }
}

fn x_coefficients<K: Field>(s: &TSeries<K>) -> Vec<TSeries<K>> {
    let deg = s
        .terms()
        .filter_map(|(_, c)| c.poly_part().degree())
        .max()
        .unwrap_or(0);
    (0..=deg)
        .map(|i| {
            let lo = s.valuation().unwrap_or(0);
            let coeffs = s
                .terms()
                .map(|(e, c)| (e, c.poly_part().coeff(i)))
                .collect::<Vec<_>>();
            let hi = coeffs.last().map_or(lo, |(e, _)| *e);
            let dense = (lo..=hi)
                .map(|e| {
                    coeffs
                        .iter()
                        .find(|(f, _)| *f == e)
                        .map(|(_, k)| RatFunc::constant(k.clone()))
                        .unwrap_or_else(RatFunc::zero)
                })
                .collect();
            TSeries::new(lo, dense, s.prec())
        })
        .collect()
}

/// Coordinates of a rational function modulo polynomials of degree `<= d`.
struct Layout {
    orders: Vec<usize>,
    rest_den: Poly<Rat>,
    rest_len: usize,
    poly_len: usize,
    d: usize,
}

impl Layout {
    fn width(&self) -> usize {
        self.orders.iter().sum::<usize>() + self.rest_len + self.poly_len
    }
}

struct Term<K> {
    dec: crate::ratfunc::Decomposition<K>,
}

fn coords<K: Field>(t: &Term<K>, lay: &Layout) -> Vec<K> {
    let mut v = vec![K::zero(); lay.width()];
    let mut off = 0;
    for (part, &ord) in t.dec.parts.iter().zip(&lay.orders) {
        for (k, c) in part.iter().enumerate() {
            v[off + k] = c.clone();
        }
        off += ord;
    }
    if let Some((num, den)) = &t.dec.rest {
        let den_k: Poly<K> = den.clone();
        let big: Poly<K> = lay.rest_den.map(|c| K::from_rat(c));
        let (cof, rem) = big.divrem(&den_k);
        debug_assert!(rem.is_zero());
        let n = num.mul(&cof);
        for (k, c) in n.coeffs().iter().enumerate() {
            v[off + k] = c.clone();
        }
    }
    off += lay.rest_len;
    for (k, c) in t.dec.poly.coeffs().iter().enumerate().skip(lay.d + 1) {
        v[off + k - lay.d - 1] = c.clone();
    }
    v
}

/// Incremental row echelon form over `K` with a right-hand side column.
struct Echelon<K> {
    cols: usize,
    rows: Vec<(usize, Vec<K>)>,
}

impl<K: Field> Echelon<K> {
    fn new(cols: usize) -> Echelon<K> {
        Echelon {
            cols,
            rows: Vec::new(),
        }
    }

    /// Adds `row · unknowns = rhs` (rhs stored at index `cols`). Returns
    /// `false` if the system became inconsistent.
    fn insert(&mut self, mut row: Vec<K>) -> bool {
        for (p, b) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (j, bj) in b.iter().enumerate().skip(*p) {
                if !bj.is_zero() {
                    row[j] = row[j].sub(&f.mul(bj));
                }
            }
        }
        match (0..self.cols).find(|&j| !row[j].is_zero()) {
            None => row[self.cols].is_zero(),
            Some(p) => {
                let inv = row[p].inv().expect("nonzero pivot");
                for x in row.iter_mut().skip(p) {
                    *x = x.mul(&inv);
                }
                // keep earlier rows reduced against the new pivot
                for (_, b) in self.rows.iter_mut() {
                    if b[p].is_zero() {
                        continue;
                    }
                    let f = b[p].clone();
                    for (j, rj) in row.iter().enumerate().skip(p) {
                        if !rj.is_zero() {
                            b[j] = b[j].sub(&f.mul(rj));
                        }
                    }
                }
                self.rows.push((p, row));
                true
            }
        }
    }

    /// Solution with every free unknown set to zero.
    fn solve(&self) -> Vec<K> {
        let mut x = vec![K::zero(); self.cols];
        for (p, r) in &self.rows {
            x[*p] = r[self.cols].clone();
        }
        x
    }
}

/// Searches for `Q, P` with x-degree at most `d_x`, `Q mod t` monic in `x`,
/// and `Q a ≡ P (mod t^n)`.
///
/// The t-coefficients of `Q` are the unknowns; each t-order contributes the
/// linear conditions that its coefficient of `Q a` be a polynomial of degree
/// at most `d_x`. Free unknowns are set to zero, which makes the answer
/// deterministic and prefers low t-order, low x-degree denominators. Any
/// solution found is verified by recomputing `Q a - P` in series arithmetic.
pub fn reconstruct<K: Field>(a: &TSeries<K>, d_x: usize, n: i64) -> Result<Reconstruction<K>> {
    if let Some(p) = a.prec() {
        if p < n {
            return Err(Error::InsufficientPrecision { needed: n, have: p });
        }
    }
    let v = a.valuation().unwrap_or(0).min(0);
    let needed = 2 * (d_x as i64 + 1);
    if n - v < needed {
        return Err(Error::InsufficientPrecision {
            needed: needed + v,
            have: n,
        });
    }
    let a = a.truncate(n);
    let lo = a.valuation().unwrap_or(n);
    // orders of Q that can meet a known coefficient
    let kmax = (n - lo).max(0) as usize;

    let mut pts: BTreeSet<Rat> = BTreeSet::new();
    for (_, c) in a.terms() {
        pts.extend(c.pole_points().cloned());
    }
    let points: Vec<Rat> = pts.into_iter().collect();
    let coeff_of = |e: i64| a.coeff(e);

    // terms x^i a_j for i <= d_x, j = lo..n-1
    let xs: Vec<RatFunc<K>> = (0..=d_x)
        .map(|i| RatFunc::from_poly(Poly::monomial(K::one(), i)))
        .collect();
    let mut terms: Vec<Vec<Term<K>>> = Vec::with_capacity(kmax);
    for j in 0..kmax {
        let aj = coeff_of(lo + j as i64);
        terms.push(
            xs.iter()
                .map(|x| Term {
                    dec: x.mul(&aj).decompose(&points),
                })
                .collect(),
        );
    }
    let mut orders = vec![0; points.len()];
    let mut rest_den: Poly<Rat> = Poly::one();
    let mut poly_len = 0;
    let mut rest_seen = false;
    for t in terms.iter().flatten() {
        for (o, part) in orders.iter_mut().zip(&t.dec.parts) {
            *o = (*o).max(part.len());
        }
        if !t.dec.extra_poles.is_empty() {
            // cannot happen: pole points were collected from every coefficient
            return Ok(Reconstruction::failure(d_x));
        }
        if let Some((_, den)) = &t.dec.rest {
            let Some(den_q) = to_rat_poly(den) else {
                return Ok(Reconstruction::failure(d_x));
            };
            let g = rest_den.gcd(&den_q);
            rest_den = rest_den.mul(&den_q.divrem(&g).0);
            rest_seen = true;
        }
        if let Some(dg) = t.dec.poly.degree() {
            poly_len = poly_len.max(dg.saturating_sub(d_x));
        }
    }
    let lay = Layout {
        orders,
        rest_len: if rest_seen { rest_den.degree().unwrap_or(0) } else { 0 },
        rest_den,
        poly_len,
        d: d_x,
    };
    let coord: Vec<Vec<Vec<K>>> = terms
        .iter()
        .map(|row| row.iter().map(|t| coords(t, &lay)).collect())
        .collect();

    for e in 0..=d_x {
        // unknowns: Q_0 coefficients of x^0..x^(e-1), then Q_k (k >= 1) of x^0..x^d
        let col = |k: usize, i: usize| -> usize {
            if k == 0 {
                i
            } else {
                e + (k - 1) * (d_x + 1) + i
            }
        };
        let ncols = e + (kmax.saturating_sub(1)) * (d_x + 1);
        let mut ech: Echelon<K> = Echelon::new(ncols);
        let mut ok = true;
        'orders: for j in 0..kmax {
            // t^(lo + j) coefficient of Q a: sum over k of Q_k a_(lo + j - k)
            for s in 0..lay.width() {
                let mut row = vec![K::zero(); ncols + 1];
                let mut any = false;
                for k in 0..=j {
                    let c = &coord[j - k];
                    let top = if k == 0 { e } else { d_x + 1 };
                    for i in 0..top {
                        let val = &c[i][s];
                        if !val.is_zero() {
                            row[col(k, i)] = row[col(k, i)].add(val);
                            any = true;
                        }
                    }
                }
                // monic x^e term of Q_0 moves to the right-hand side
                let m = &coord[j][e][s];
                if !m.is_zero() {
                    row[ncols] = m.neg();
                    any = true;
                }
                if any && !ech.insert(row) {
                    ok = false;
                    break 'orders;
                }
            }
        }
        if !ok {
            continue;
        }
        let sol = ech.solve();
        let mut q_coeffs: Vec<RatFunc<K>> = Vec::with_capacity(kmax);
        for k in 0..kmax.max(1) {
            let mut c = vec![K::zero(); d_x + 1];
            if k == 0 {
                c[..e].clone_from_slice(&sol[..e]);
                c[e] = K::one();
            } else {
                for (i, ci) in c.iter_mut().enumerate() {
                    *ci = sol[col(k, i)].clone();
                }
            }
            q_coeffs.push(RatFunc::from_poly(Poly::new(c)));
        }
        let q = TSeries::new(0, q_coeffs, None);
        let qa = q.mul(&a).truncate(n);
        let p_coeffs: Vec<RatFunc<K>> = (lo..n)
            .map(|e2| RatFunc::from_poly(qa.coeff(e2).poly_part().clone()))
            .collect();
        let p = TSeries::new(lo, p_coeffs, Some(n));
        let res = Reconstruction {
            success: true,
            numerator: p,
            denominator: q,
            degree_bounds: (d_x, d_x),
            verified_order: n,
        };
        let residual = res.residual(&a);
        let degree_ok = res
            .numerator
            .terms()
            .all(|(_, c)| c.poly_part().degree().is_none_or(|dg| dg <= d_x));
        if residual.is_zero() && degree_ok {
            return Ok(res);
        }
    }
    Ok(Reconstruction::failure(d_x))
}

fn to_rat_poly<K: Field>(p: &Poly<K>) -> Option<Poly<Rat>> {
    let v: Option<Vec<Rat>> = p.coeffs().iter().map(|c| c.to_rat()).collect();
    v.map(Poly::new)
}

/// Degree schedule used when certifying matrix entries: `d = 1, 2, 4, 8`
/// with `N >= 2(d + 1) + 4`, then the largest `d` that `N` admits, stopping
/// at the first success.
pub fn reconstruct_scheduled<K: Field>(a: &TSeries<K>, max_n: i64) -> Option<Reconstruction<K>> {
    let admits = |d: usize| 2 * (d as i64 + 1) + 4 <= max_n;
    let mut schedule: Vec<usize> = [1, 2, 4, 8].into_iter().filter(|&d| admits(d)).collect();
    let top = ((max_n - 4) / 2 - 1).max(0) as usize;
    if top > 8 {
        schedule.push(top);
    }
    schedule
        .into_iter()
        .filter_map(|d| reconstruct(a, d, max_n).ok())
        .find(|r| r.success)
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = RatFunc<Rat>;
    type S = TSeries<Rat>;

    fn pts(v: &[i64]) -> PointSet {
        PointSet::new(v.iter().map(|&i| Rat::int(i)).collect()).unwrap()
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet::new(vec![]).is_err());
        assert!(PointSet::new(vec![Rat::int(1), Rat::new(2, 2)]).is_err());
        assert_eq!(PointSet::consecutive(3).points()[2], Rat::int(2));
    }

    #[test]
    fn membership_predicates() {
        let ps = pts(&[0, 1]);
        let seven = S::constant(R::from_rat(&Rat::int(7)));
        assert!(in_f0_ring(&seven, &ps));
        assert!(lemma_schnitt_check(&seven, &ps, 0));
        let xs = S::constant(R::x());
        assert!(!in_f0_ring(&xs, &ps));
        assert!(in_fi_ring(&xs, &Rat::int(0)));
        let other = S::constant(R::pole(&Rat::int(5), 1, Rat::one()));
        assert!(!in_f0_ring(&other, &ps));
        assert!(in_fi_ring(&other, &Rat::int(0)));
        assert!(!lemma_schnitt_check(&other, &ps, 0));
        let at0 = S::constant(R::pole(&Rat::int(0), 2, Rat::one()));
        assert!(in_f0_ring(&at0, &ps));
        assert!(!in_fi_ring(&at0, &Rat::int(0)));
        assert_eq!(TowerTag::GlobalF.certify(&seven, &ps), Some(true));
        assert_eq!(TowerTag::Fi(1).certify(&at0, &ps), Some(true));
    }

    #[test]
    fn reconstruct_constant() {
        let a = S::constant(R::from_rat(&Rat::int(3)));
        let r = reconstruct(&a, 0, 4).unwrap();
        assert!(r.success);
        assert_eq!(r.denominator, S::one());
        assert_eq!(r.numerator, a.truncate(4));
    }

    #[test]
    fn reconstruct_needs_precision() {
        let a = S::constant(R::x()).truncate(3);
        assert!(matches!(reconstruct(&a, 1, 8), Err(Error::InsufficientPrecision { .. })));
        assert!(matches!(reconstruct(&a, 2, 3), Err(Error::InsufficientPrecision { .. })));
    }

    fn log_series(q: &Rat, n: i64) -> S {
        // log(1 + t/(x - q)) = sum_n (-1)^(n+1) t^n / (n (x - q)^n)
        let coeffs = (0..n)
            .map(|k| {
                if k == 0 {
                    R::zero()
                } else {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    R::pole(q, k as usize, Rat::new(sign, k))
                }
            })
            .collect();
        S::from_coeffs(coeffs, Some(n))
    }

    #[test]
    fn reconstruct_planted_shift() {
        let q = Rat::new(3, 2);
        let xq = R::x().sub(&R::from_rat(&q));
        let a = S::inv_linear_shift(&q, &Rat::one(), 8);
        let r = reconstruct(&a, 1, 8).unwrap();
        assert!(r.success);
        let expect_q = S::from_coeffs(vec![xq.clone(), R::one()], None);
        assert_eq!(r.denominator, expect_q);
        assert_eq!(r.numerator, S::one().truncate(8));
        assert!(r.residual(&a).is_zero());

        // (x - q)/(x - q - t) = sum_n t^n / (x - q)^n
        let b = S::inv_linear_shift(&q, &Rat::int(-1), 8).scale_rf(&xq);
        let r = reconstruct(&b, 1, 8).unwrap();
        assert!(r.success);
        assert_eq!(r.denominator, S::from_coeffs(vec![xq.clone(), R::from_rat(&Rat::int(-1))], None));
        assert_eq!(r.numerator, S::constant(xq).truncate(8));
    }

    #[test]
    fn log_series_is_not_reconstructed() {
        let q = Rat::int(2);
        for d in 0..=4usize {
            let n = 2 * (d as i64 + 1) + 4;
            let a = log_series(&q, n);
            let r = reconstruct(&a, d, n).unwrap();
            assert!(!r.success, "d = {d}");
        }
    }
}

//! Rational functions in `x` over a field `K`.
//!
//! Values are kept in partial-fraction form: a polynomial part, principal
//! parts at rational points, and (rarely) a proper remainder whose
//! denominator has no known rational root. Everything the construction
//! pipeline produces has poles only at rational points, so products and
//! sums never expand large denominators.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Rat, Ring};
use crate::poly::Poly;

/// Principal part at a rational point.
#[derive(Clone, PartialEq, Debug)]
pub struct Pole<K> {
    pub at: Rat,
    /// `coeffs[k]` multiplies `(x - at)^-(k+1)`. Never empty, never ends in zero.
    pub coeffs: Vec<K>,
}

#[derive(Clone, PartialEq)]
struct Proper<K> {
    num: Poly<K>,
    den: Poly<K>,
}

/// Exact element of `K(x)`.
///
/// Invariants: poles are sorted by point with distinct points; the remainder,
/// if present, is a reduced proper fraction with monic denominator of
/// positive degree that does not vanish at any listed pole point. These make
/// the zero test structural.
#[derive(Clone)]
pub struct RatFunc<K> {
    poly: Poly<K>,
    poles: Vec<Pole<K>>,
    rest: Option<Box<Proper<K>>>,
}

/// Output of [`RatFunc::decompose`].
#[derive(Clone)]
pub struct Decomposition<K> {
    pub poly: Poly<K>,
    /// Principal part coefficients, aligned with the requested points.
    pub parts: Vec<Vec<K>>,
    /// Principal parts at rational points outside the requested set.
    pub extra_poles: Vec<Pole<K>>,
    pub rest: Option<(Poly<K>, Poly<K>)>,
}

/// Laurent expansion `sum_j coeffs[j] (x - q)^(start + j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<K> {
    pub start: i64,
    pub coeffs: Vec<K>,
}

impl<K: Field> Laurent<K> {
    pub fn coeff(&self, j: i64) -> K {
        if j < self.start {
            return K::zero();
        }
        self.coeffs
            .get((j - self.start) as usize)
            .cloned()
            .unwrap_or_else(K::zero)
    }
}

fn trim<K: Field>(v: &mut Vec<K>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Taylor coefficients at `q` of `sum_k coeffs[k] (x - p)^-(k+1)`, `p != q`,
/// accumulated into `out`.
fn add_pole_taylor<K: Field>(out: &mut [K], p: &Rat, coeffs: &[K], q: &Rat) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let dinv = (q - p).recip().expect("distinct points");
    let neg_dinv = -&dinv;
    // t(k, s) = (-1)^s binom(k+s-1, s) d^-(k+s)
    let mut head = dinv.clone();
    for (idx, c) in coeffs.iter().enumerate() {
        let k = idx as i64 + 1;
        if !c.is_zero() {
            let mut t = head.clone();
            out[0] = out[0].add(&c.scale(&t));
            for (s, slot) in out.iter_mut().enumerate().skip(1) {
                let s = s as i64;
                t = &(&t * &neg_dinv) * &Rat::new(k + s - 1, s);
                *slot = slot.add(&c.scale(&t));
            }
        }
        head = &head * &dinv;
    }
}

/// First `n` coefficients of the power series `a / b`, with `b[0] != 0`.
fn series_div<K: Field>(a: &[K], b: &[K], n: usize) -> Vec<K> {
    let b0inv = b[0].inv().expect("unit constant term");
    let mut out: Vec<K> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = a.get(i).cloned().unwrap_or_else(K::zero);
        for j in 1..=i.min(b.len().saturating_sub(1)) {
            acc = acc.sub(&b[j].mul(&out[i - j]));
        }
        out.push(acc.mul(&b0inv));
    }
    out
}

impl<K: Field> Proper<K> {
    fn add(&self, rhs: &Proper<K>) -> Option<Proper<K>> {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Proper::reduce(num, den)
    }

    fn reduce(num: Poly<K>, den: Poly<K>) -> Option<Proper<K>> {
        if num.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let l = den.lead().unwrap().clone();
        if !l.is_one() {
            let li = l.inv().unwrap();
            num = num.scale(&li);
            den = den.scale(&li);
        }
        Some(Proper { num, den })
    }

    fn taylor(&self, q: &K, n: usize) -> Vec<K> {
        series_div(&self.num.taylor(q, n), &self.den.taylor(q, n), n)
    }
}

/// Splits `num/den` into polynomial part, principal parts at the hinted
/// points (plus any detected rational root of a pure linear power), and a
/// proper remainder.
/// Polynomial part, poles at rational points, irreducible remainder.
type Parts<K> = (Poly<K>, Vec<Pole<K>>, Option<Box<Proper<K>>>);

fn split<K: Field>(
    num: Poly<K>,
    den: Poly<K>,
    hints: &[Rat],
) -> Parts<K> {
    let Some(fr) = Proper::reduce(num, den) else {
        return (Poly::zero(), Vec::new(), None);
    };
    let (poly, r) = fr.num.divrem(&fr.den);
    let den = fr.den;
    if r.is_zero() {
        return (poly, Vec::new(), None);
    }
    let mut cof = den.clone();
    let mut factors: Vec<(Rat, u32)> = Vec::new();
    let mut pts: Vec<Rat> = hints.to_vec();
    pts.sort();
    pts.dedup();
    for q in &pts {
        if cof.is_constant() {
            break;
        }
        let (e, c) = cof.split_root(&K::from_rat(q));
        if e > 0 {
            factors.push((q.clone(), e));
            cof = c;
        }
    }
    // (x - r)^k has sub-leading coefficient -k r
    while let Some(k) = cof.degree().filter(|&k| k >= 1) {
        let cand = cof.coeff(k - 1).neg().scale(&Rat::new(1, k as i64));
        let Some(rq) = cand.to_rat() else { break };
        let (e, c) = cof.split_root(&cand);
        if e == 0 || factors.iter().any(|(p, _)| *p == rq) {
            break;
        }
        factors.push((rq, e));
        cof = c;
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));

    let mut poles = Vec::with_capacity(factors.len());
    let mut numer = r.clone();
    for (q, e) in &factors {
        let e = *e as usize;
        let qk = K::from_rat(q);
        let dq = den.quo_linear_pow(&qk, e);
        let s = series_div(&r.taylor(&qk, e), &dq.taylor(&qk, e), e);
        // s_j is the coefficient of u^(j - e)
        let mut coeffs: Vec<K> = s.iter().rev().cloned().collect();
        trim(&mut coeffs);
        numer = numer.sub(&Poly::from_shifted(&s, &qk).mul(&dq));
        if !coeffs.is_empty() {
            poles.push(Pole {
                at: q.clone(),
                coeffs,
            });
        }
    }
    let rest = if cof.is_constant() {
        debug_assert!(numer.is_zero() || factors.is_empty());
        None
    } else {
        for (q, e) in &factors {
            let qk = K::from_rat(q);
            for _ in 0..*e {
                let (quo, rem) = numer.div_linear(&qk);
                debug_assert!(rem.is_zero());
                numer = quo;
            }
        }
        Proper::reduce(numer, cof).map(Box::new)
    };
    (poly, poles, rest)
}

impl<K: Field> RatFunc<K> {
    pub fn zero() -> RatFunc<K> {
        RatFunc {
            poly: Poly::zero(),
            poles: Vec::new(),
            rest: None,
        }
    }

    pub fn one() -> RatFunc<K> {
        RatFunc::constant(K::one())
    }

    pub fn constant(c: K) -> RatFunc<K> {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_rat(q: &Rat) -> RatFunc<K> {
        RatFunc::constant(K::from_rat(q))
    }

    pub fn x() -> RatFunc<K> {
        RatFunc::from_poly(Poly::x())
    }

    pub fn from_poly(poly: Poly<K>) -> RatFunc<K> {
        RatFunc {
            poly,
            poles: Vec::new(),
            rest: None,
        }
    }

    /// `c / (x - q)^k`, `k >= 1`.
    pub fn pole(q: &Rat, k: usize, c: K) -> RatFunc<K> {
        assert!(k >= 1);
        if c.is_zero() {
            return RatFunc::zero();
        }
        let mut coeffs = vec![K::zero(); k - 1];
        coeffs.push(c);
        RatFunc {
            poly: Poly::zero(),
            poles: vec![Pole {
                at: q.clone(),
                coeffs,
            }],
            rest: None,
        }
    }

    /// Builds a principal part directly: `coeffs[k]` multiplies `(x - q)^-(k+1)`.
    pub fn principal(q: &Rat, mut coeffs: Vec<K>) -> RatFunc<K> {
        trim(&mut coeffs);
        if coeffs.is_empty() {
            return RatFunc::zero();
        }
        RatFunc {
            poly: Poly::zero(),
            poles: vec![Pole {
                at: q.clone(),
                coeffs,
            }],
            rest: None,
        }
    }

    pub fn from_fraction(num: Poly<K>, den: Poly<K>) -> Result<RatFunc<K>> {
        RatFunc::from_fraction_hinted(num, den, &[])
    }

    /// Like [`RatFunc::from_fraction`], trying the `hints` as denominator roots first.
    pub fn from_fraction_hinted(num: Poly<K>, den: Poly<K>, hints: &[Rat]) -> Result<RatFunc<K>> {
        if den.is_zero() {
            return Err(Error::DivByZero);
        }
        let (poly, poles, rest) = split(num, den, hints);
        Ok(RatFunc { poly, poles, rest })
    }

    pub fn poly_part(&self) -> &Poly<K> {
        &self.poly
    }

    pub fn poles(&self) -> &[Pole<K>] {
        &self.poles
    }

    /// Proper remainder `(num, den)` whose denominator has no listed pole point.
    pub fn remainder(&self) -> Option<(&Poly<K>, &Poly<K>)> {
        self.rest.as_ref().map(|r| (&r.num, &r.den))
    }

    pub fn pole_points(&self) -> impl Iterator<Item = &Rat> {
        self.poles.iter().map(|p| &p.at)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.poles.is_empty() && self.rest.is_none()
    }

    pub fn is_constant(&self) -> bool {
        self.poly.is_constant() && self.poles.is_empty() && self.rest.is_none()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<K> {
        self.is_constant().then(|| self.poly.coeff(0))
    }

    /// `(num, den)` with `den` monic and `gcd(num, den) = 1`.
    pub fn to_fraction(&self) -> (Poly<K>, Poly<K>) {
        let (mut num, mut den) = match &self.rest {
            Some(r) => (r.num.clone(), r.den.clone()),
            None => (Poly::zero(), Poly::one()),
        };
        for p in &self.poles {
            let q = K::from_rat(&p.at);
            let e = p.coeffs.len();
            // sum_k c_k u^-(k+1) = (sum_k c_k u^(e-1-k)) / u^e
            let shifted: Vec<K> = p.coeffs.iter().rev().cloned().collect();
            let top = Poly::from_shifted(&shifted, &q);
            for _ in 0..e {
                num = num.mul_linear(&q);
            }
            num = num.add(&top.mul(&den));
            for _ in 0..e {
                den = den.mul_linear(&q);
            }
        }
        num = num.add(&self.poly.mul(&den));
        (num, den)
    }

    fn with_rest_split(&self, extra: &[Rat]) -> RatFunc<K> {
        let Some(r) = &self.rest else {
            return self.clone();
        };
        let mut hints: Vec<Rat> = self.poles.iter().map(|p| p.at.clone()).collect();
        hints.extend_from_slice(extra);
        let (_, poles, rest) = split(r.num.clone(), r.den.clone(), &hints);
        let base = RatFunc {
            poly: self.poly.clone(),
            poles: self.poles.clone(),
            rest: None,
        };
        let mut out = base.add_no_rest(&RatFunc {
            poly: Poly::zero(),
            poles,
            rest: None,
        });
        out.rest = rest;
        out
    }

    fn normalized(mut self) -> RatFunc<K> {
        if self.rest.is_some() && !self.poles.is_empty() {
            let needs = {
                let r = self.rest.as_ref().unwrap();
                self.poles
                    .iter()
                    .any(|p| r.den.eval(&K::from_rat(&p.at)).is_zero())
            };
            if needs {
                self = self.with_rest_split(&[]);
            }
        }
        self
    }

    fn add_no_rest(&self, rhs: &RatFunc<K>) -> RatFunc<K> {
        let poly = self.poly.add(&rhs.poly);
        let mut poles = Vec::with_capacity(self.poles.len() + rhs.poles.len());
        let (mut i, mut j) = (0, 0);
        while i < self.poles.len() || j < rhs.poles.len() {
            let ord = match (self.poles.get(i), rhs.poles.get(j)) {
                (Some(a), Some(b)) => a.at.cmp(&b.at),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    poles.push(self.poles[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    poles.push(rhs.poles[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (a, b) = (&self.poles[i].coeffs, &rhs.poles[j].coeffs);
                    let n = a.len().max(b.len());
                    let mut c: Vec<K> = (0..n)
                        .map(|k| match (a.get(k), b.get(k)) {
                            (Some(x), Some(y)) => x.add(y),
                            (Some(x), None) => x.clone(),
                            (None, Some(y)) => y.clone(),
                            _ => unreachable!(),
                        })
                        .collect();
                    trim(&mut c);
                    if !c.is_empty() {
                        poles.push(Pole {
                            at: self.poles[i].at.clone(),
                            coeffs: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        RatFunc {
            poly,
            poles,
            rest: None,
        }
    }

    pub fn add(&self, rhs: &RatFunc<K>) -> RatFunc<K> {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut out = self.add_no_rest(rhs);
        out.rest = match (&self.rest, &rhs.rest) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => a.add(b).map(Box::new),
        };
        out.normalized()
    }

    pub fn neg(&self) -> RatFunc<K> {
        RatFunc {
            poly: self.poly.neg(),
            poles: self
                .poles
                .iter()
                .map(|p| Pole {
                    at: p.at.clone(),
                    coeffs: p.coeffs.iter().map(|c| c.neg()).collect(),
                })
                .collect(),
            rest: self.rest.as_ref().map(|r| {
                Box::new(Proper {
                    num: r.num.neg(),
                    den: r.den.clone(),
                })
            }),
        }
    }

    pub fn sub(&self, rhs: &RatFunc<K>) -> RatFunc<K> {
        self.add(&rhs.neg())
    }

    /// Multiply by a constant of `K`.
    pub fn scale_k(&self, c: &K) -> RatFunc<K> {
        if c.is_zero() {
            return RatFunc::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        RatFunc {
            poly: self.poly.scale(c),
            poles: self
                .poles
                .iter()
                .map(|p| Pole {
                    at: p.at.clone(),
                    coeffs: p.coeffs.iter().map(|a| a.mul(c)).collect(),
                })
                .collect(),
            rest: self.rest.as_ref().map(|r| {
                Box::new(Proper {
                    num: r.num.scale(c),
                    den: r.den.clone(),
                })
            }),
        }
    }

    /// Taylor coefficients at `q` of everything except the principal part at `q`.
    /// The remainder must be regular at `q`.
    fn regular_taylor(&self, q: &Rat, n: usize) -> Vec<K> {
        let qk = K::from_rat(q);
        let mut out = self.poly.taylor(&qk, n);
        for p in &self.poles {
            if p.at != *q {
                add_pole_taylor(&mut out, &p.at, &p.coeffs, q);
            }
        }
        if let Some(r) = &self.rest {
            for (o, v) in out.iter_mut().zip(r.taylor(&qk, n)) {
                *o = o.add(&v);
            }
        }
        out
    }

    fn pole_coeffs(&self, q: &Rat) -> &[K] {
        match self.poles.binary_search_by(|p| p.at.cmp(q)) {
            Ok(i) => &self.poles[i].coeffs,
            Err(_) => &[],
        }
    }

    /// Polynomial part of `p * sum_k c_k (x - q)^-(k+1)`.
    fn poly_times_pole_polypart(p: &Poly<K>, q: &Rat, coeffs: &[K]) -> Poly<K> {
        let qk = K::from_rat(q);
        let mut cur = p.clone();
        let mut acc = Poly::zero();
        for c in coeffs {
            if cur.is_zero() {
                break;
            }
            cur = cur.div_linear(&qk).0;
            if !c.is_zero() {
                acc = acc.add(&cur.scale(c));
            }
        }
        acc
    }

    pub fn mul(&self, rhs: &RatFunc<K>) -> RatFunc<K> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale_k(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale_k(&c);
        }
        if self.rest.is_some() || rhs.rest.is_some() {
            return self.mul_general(rhs);
        }
        let mut poly = self.poly.mul(&rhs.poly);
        if !self.poly.is_zero() {
            for p in &rhs.poles {
                poly = poly.add(&Self::poly_times_pole_polypart(&self.poly, &p.at, &p.coeffs));
            }
        }
        if !rhs.poly.is_zero() {
            for p in &self.poles {
                poly = poly.add(&Self::poly_times_pole_polypart(&rhs.poly, &p.at, &p.coeffs));
            }
        }
        let mut points: Vec<&Rat> = self.pole_points().chain(rhs.pole_points()).collect();
        points.sort();
        points.dedup();
        let mut poles = Vec::with_capacity(points.len());
        for q in points {
            let a = self.pole_coeffs(q);
            let b = rhs.pole_coeffs(q);
            let mut pp = vec![K::zero(); a.len() + b.len()];
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    pp[i + j + 1] = pp[i + j + 1].add(&ai.mul(bj));
                }
            }
            for (own, other) in [(a, rhs), (b, self)] {
                if own.is_empty() {
                    continue;
                }
                let t = other.regular_taylor(q, own.len());
                for (i, ai) in own.iter().enumerate() {
                    if ai.is_zero() {
                        continue;
                    }
                    for (s, ts) in t.iter().enumerate().take(i + 1) {
                        if !ts.is_zero() {
                            pp[i - s] = pp[i - s].add(&ai.mul(ts));
                        }
                    }
                }
            }
            trim(&mut pp);
            if !pp.is_empty() {
                poles.push(Pole {
                    at: q.clone(),
                    coeffs: pp,
                });
            }
        }
        RatFunc {
            poly,
            poles,
            rest: None,
        }
    }

    fn mul_general(&self, rhs: &RatFunc<K>) -> RatFunc<K> {
        let (na, da) = self.to_fraction();
        let (nb, db) = rhs.to_fraction();
        let hints: Vec<Rat> = self.pole_points().chain(rhs.pole_points()).cloned().collect();
        RatFunc::from_fraction_hinted(na.mul(&nb), da.mul(&db), &hints).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Option<RatFunc<K>> {
        if self.is_zero() {
            return None;
        }
        if let Some(c) = self.as_constant() {
            return c.inv().map(RatFunc::constant);
        }
        if self.poly.is_zero() && self.rest.is_none() && self.poles.len() == 1 {
            let p = &self.poles[0];
            let k = p.coeffs.len();
            if p.coeffs[..k - 1].iter().all(|c| c.is_zero()) {
                let ci = p.coeffs[k - 1].inv()?;
                let mut poly = Poly::constant(ci);
                let q = K::from_rat(&p.at);
                for _ in 0..k {
                    poly = poly.mul_linear(&q);
                }
                return Some(RatFunc::from_poly(poly));
            }
        }
        let (n, d) = self.to_fraction();
        RatFunc::from_fraction(d, n).ok()
    }

    pub fn div(&self, rhs: &RatFunc<K>) -> Result<RatFunc<K>> {
        rhs.inv().map(|r| self.mul(&r)).ok_or(Error::DivByZero)
    }

    /// Formal derivative in `x`.
    pub fn dx(&self) -> RatFunc<K> {
        let poly = self.poly.derivative();
        let poles = self
            .poles
            .iter()
            .map(|p| {
                let mut c = vec![K::zero(); p.coeffs.len() + 1];
                for (k, a) in p.coeffs.iter().enumerate() {
                    c[k + 1] = a.scale(&Rat::int(-(k as i64 + 1)));
                }
                Pole {
                    at: p.at.clone(),
                    coeffs: c,
                }
            })
            .collect();
        let rest = self.rest.as_ref().and_then(|r| {
            let num = r.num.derivative().mul(&r.den).sub(&r.num.mul(&r.den.derivative()));
            Proper::reduce(num, r.den.mul(&r.den)).map(Box::new)
        });
        RatFunc { poly, poles, rest }
    }

    /// Order of the pole at `q` (0 if regular).
    pub fn pole_order(&self, q: &Rat) -> usize {
        let s = self.with_rest_split(std::slice::from_ref(q));
        s.pole_coeffs(q).len()
    }

    /// True iff the reduced denominator does not vanish at `q`.
    pub fn pole_free_at(&self, q: &Rat) -> bool {
        if !self.pole_coeffs(q).is_empty() {
            return false;
        }
        match &self.rest {
            Some(r) => !r.den.eval(&K::from_rat(q)).is_zero(),
            None => true,
        }
    }

    /// Coefficient of `(x - q)^-1` in the Laurent expansion at `q`.
    pub fn residue(&self, q: &Rat) -> K {
        let s = self.with_rest_split(std::slice::from_ref(q));
        s.pole_coeffs(q).first().cloned().unwrap_or_else(K::zero)
    }

    /// Residue at an arbitrary point `r` of `K` (not necessarily rational).
    pub fn residue_at(&self, r: &K) -> K {
        if let Some(q) = r.to_rat() {
            return self.residue(&q);
        }
        let Some(rest) = &self.rest else {
            return K::zero();
        };
        let (e, d) = rest.den.split_root(r);
        if e == 0 {
            return K::zero();
        }
        let e = e as usize;
        let s = series_div(&rest.num.taylor(r, e), &d.taylor(r, e), e);
        s[e - 1].clone()
    }

    /// Laurent coefficients at `q` from the lowest (pole) exponent up to `order`.
    pub fn expand_at(&self, q: &Rat, order: i64) -> Laurent<K> {
        let s = self.with_rest_split(std::slice::from_ref(q));
        let pp = s.pole_coeffs(q);
        let start = -(pp.len() as i64);
        let mut coeffs: Vec<K> = pp.iter().rev().cloned().collect();
        if order >= 0 {
            coeffs.extend(s.regular_taylor(q, order as usize + 1));
        } else {
            coeffs.truncate((order - start + 1).max(0) as usize);
        }
        Laurent { start, coeffs }
    }

    /// Principal part at `q`.
    pub fn principal_part(&self, q: &Rat) -> RatFunc<K> {
        let s = self.with_rest_split(std::slice::from_ref(q));
        RatFunc::principal(q, s.pole_coeffs(q).to_vec())
    }

    /// `self = sum_q pp[q] + rest`, where `rest` is regular at every point.
    pub fn partial_fractions(&self, points: &[Rat]) -> (Vec<(Rat, RatFunc<K>)>, RatFunc<K>) {
        let s = self.with_rest_split(points);
        let mut pps = Vec::new();
        let mut rest = s.clone();
        for q in points {
            let pp = RatFunc::principal(q, s.pole_coeffs(q).to_vec());
            rest = rest.sub(&pp);
            pps.push((q.clone(), pp));
        }
        (pps, rest)
    }

    /// Unique decomposition `poly + sum_i parts[i] + num/den` where `parts[i]`
    /// is the principal part at `points[i]` and `den` has no root in `points`.
    pub fn decompose(&self, points: &[Rat]) -> Decomposition<K> {
        let s = self.with_rest_split(points);
        Decomposition {
            parts: points.iter().map(|q| s.pole_coeffs(q).to_vec()).collect(),
            extra_poles: s
                .poles
                .iter()
                .filter(|p| !points.contains(&p.at))
                .cloned()
                .collect(),
            rest: s.rest.map(|r| (r.num, r.den)),
            poly: s.poly,
        }
    }

    /// True iff every pole lies in `points` and the polynomial part is constant,
    /// i.e. the element lies in `K[(x-q_1)^-1, ..., (x-q_r)^-1]`.
    pub fn in_inverse_linear_ring(&self, points: &[Rat]) -> bool {
        if !self.poly.is_constant() {
            return false;
        }
        let s = self.with_rest_split(points);
        s.rest.is_none() && s.poles.iter().all(|p| points.contains(&p.at))
    }

    /// Value at a point of `K`, or `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        let mut acc = self.poly.eval(x);
        for p in &self.poles {
            let u = x.sub(&K::from_rat(&p.at));
            let ui = u.inv()?;
            let mut pw = ui.clone();
            for c in &p.coeffs {
                acc = acc.add(&c.mul(&pw));
                pw = pw.mul(&ui);
            }
        }
        if let Some(r) = &self.rest {
            let d = r.den.eval(x);
            acc = acc.add(&r.num.eval(x).mul(&d.inv()?));
        }
        Some(acc)
    }

    /// Apply a field embedding `K -> L` to every coefficient.
    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> RatFunc<L> {
        RatFunc {
            poly: self.poly.map(&f),
            poles: self
                .poles
                .iter()
                .map(|p| Pole {
                    at: p.at.clone(),
                    coeffs: p.coeffs.iter().map(&f).collect(),
                })
                .collect(),
            rest: self.rest.as_ref().map(|r| {
                Box::new(Proper {
                    num: r.num.map(&f),
                    den: r.den.map(&f),
                })
            }),
        }
    }

    /// Rough size measure used for diagnostics: stored coefficient count.
    pub fn term_count(&self) -> usize {
        self.poly.coeffs().len()
            + self.poles.iter().map(|p| p.coeffs.len()).sum::<usize>()
            + self
                .rest
                .as_ref()
                .map_or(0, |r| r.num.coeffs().len() + r.den.coeffs().len())
    }
}

impl<K: Field> PartialEq for RatFunc<K> {
    fn eq(&self, other: &RatFunc<K>) -> bool {
        if self.rest.is_none() && other.rest.is_none() {
            return self.poly == other.poly && self.poles == other.poles;
        }
        self.sub(other).is_zero()
    }
}

impl<K: Field> fmt::Debug for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_fraction();
        if d.is_constant() {
            write!(f, "{n:?}")
        } else {
            write!(f, "({n:?})/({d:?})")
        }
    }
}

impl<K: Field> Ring for RatFunc<K> {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFunc::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        RatFunc::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFunc::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn from_rat(q: &Rat) -> Self {
        RatFunc::from_rat(q)
    }
    fn scale(&self, q: &Rat) -> Self {
        self.scale_k(&K::from_rat(q))
    }
}

impl<K: Field> Field for RatFunc<K> {
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
    fn to_rat(&self) -> Option<Rat> {
        self.as_constant().and_then(|c| c.to_rat())
    }
}

macro_rules! rf_ops {
    ($tr:ident, $m:ident) => {
        impl<K: Field> std::ops::$tr<&RatFunc<K>> for &RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: &RatFunc<K>) -> RatFunc<K> {
                RatFunc::$m(self, rhs)
            }
        }
        impl<K: Field> std::ops::$tr<RatFunc<K>> for RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: RatFunc<K>) -> RatFunc<K> {
                RatFunc::$m(&self, &rhs)
            }
        }
    };
}

rf_ops!(Add, add);
rf_ops!(Sub, sub);
rf_ops!(Mul, mul);

impl<K: Field> std::ops::Neg for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        RatFunc::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = RatFunc<Rat>;

    fn r(n: i64) -> Rat {
        Rat::int(n)
    }

    fn poly(v: &[i64]) -> Poly<Rat> {
        Poly::new(v.iter().map(|&c| r(c)).collect())
    }

    fn frac(n: &[i64], d: &[i64]) -> R {
        R::from_fraction(poly(n), poly(d)).unwrap()
    }

    fn lin(q: i64) -> R {
        R::pole(&r(q), 1, Rat::one())
    }

    #[test]
    fn common_denominator() {
        // 1/(x-1) + 1/(x+1) = 2x/(x^2-1)
        let s = &lin(1) + &lin(-1);
        let (n, d) = s.to_fraction();
        assert_eq!(n, poly(&[0, 2]));
        assert_eq!(d, poly(&[-1, 0, 1]));
        assert_eq!(s, frac(&[0, 2], &[-1, 0, 1]));
    }

    #[test]
    fn inverse_with_irreducible_denominator() {
        let f = frac(&[1, 0, 3], &[-2, 1]);
        let g = f.inv().unwrap();
        assert!(g.remainder().is_some());
        assert_eq!(&f * &g, R::one());
        assert_eq!(g.to_fraction(), (poly(&[-2, 1]).scale(&Rat::new(1, 3)), poly(&[1, 0, 3]).scale(&Rat::new(1, 3))));
    }

    #[test]
    fn gcd_cancellation() {
        let f = frac(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(f, R::from_poly(poly(&[1, 1])));
        assert!(f.poles().is_empty());
        assert_eq!(R::from_fraction(poly(&[1]), Poly::zero()), Err(Error::DivByZero));
    }

    #[test]
    fn derivative_examples() {
        let q = Rat::new(2, 3);
        assert_eq!(R::pole(&q, 1, Rat::one()).dx(), R::pole(&q, 2, r(-1)));
        assert!(R::constant(r(7)).dx().is_zero());
        // quotient rule by hand: (3x^2(x+1) - x^3)/(x+1)^2 = (2x^3 + 3x^2)/(x+1)^2
        let f = frac(&[0, 0, 0, 1], &[1, 1]);
        assert_eq!(f.dx(), frac(&[0, 0, 3, 2], &[1, 2, 1]));
    }

    #[test]
    fn partial_fraction_examples() {
        let (q1, q2) = (r(2), Rat::new(-1, 2));
        let f = R::pole(&q1, 1, Rat::one()) * R::pole(&q2, 1, Rat::one());
        let (pp, rest) = f.partial_fractions(&[q1.clone(), q2.clone()]);
        let d = &q1 - &q2;
        assert_eq!(pp[0].1, R::pole(&q1, 1, d.recip().unwrap()));
        assert_eq!(pp[1].1, R::pole(&q2, 1, (-&d).recip().unwrap()));
        assert!(rest.is_zero());

        let g = R::pole(&q1, 2, Rat::one());
        let (pp, rest) = g.partial_fractions(std::slice::from_ref(&q1));
        assert_eq!(pp[0].1, g);
        assert!(rest.is_zero());

        // x^2 + 1 = (x - q)(x + q) + q^2 + 1
        let q = r(3);
        let h = frac(&[1, 0, 1], &[-3, 1]);
        let (pp, rest) = h.partial_fractions(std::slice::from_ref(&q));
        assert_eq!(pp[0].1, R::pole(&q, 1, r(10)));
        assert_eq!(rest, R::from_poly(poly(&[3, 1])));
        assert!(rest.pole_free_at(&q));
    }

    #[test]
    fn residues() {
        let (q, p) = (r(4), Rat::new(1, 3));
        assert_eq!(R::pole(&q, 1, Rat::one()).residue(&q), Rat::one());
        assert_eq!(R::pole(&q, 2, Rat::one()).residue(&q), Rat::zero());
        let f = R::pole(&q, 1, Rat::one()) * R::pole(&p, 1, Rat::one());
        assert_eq!(f.residue(&q), (&q - &p).recip().unwrap());
        // residue from a general remainder
        let g = frac(&[1], &[-4, 1]).mul(&frac(&[1], &[1, 0, 1]));
        assert_eq!(g.residue(&q), Rat::new(1, 17));
    }

    #[test]
    fn expansions() {
        let (p, q) = (r(-2), r(5));
        let e = R::pole(&p, 1, Rat::one()).expand_at(&q, 2);
        let d = &q - &p;
        // geometric series 1/(d + u) = sum (-1)^j u^j / d^(j+1)
        let expect: Vec<Rat> = (0..3).map(|j| Rat::int(if j % 2 == 0 { 1 } else { -1 }) * d.powi(-(j + 1))).collect();
        assert_eq!(e.start, 0);
        assert_eq!(e.coeffs, expect);

        let e = R::pole(&q, 1, Rat::one()).expand_at(&q, -1);
        assert_eq!((e.start, e.coeffs), (-1, vec![Rat::one()]));

        let e = R::x().expand_at(&q, 1);
        assert_eq!((e.start, e.coeffs), (0, vec![q.clone(), Rat::one()]));
    }

    #[test]
    fn pole_free() {
        let q = r(1);
        assert!(!lin(1).pole_free_at(&q));
        assert!(lin(2).pole_free_at(&q));
        assert!(frac(&[-1, 1], &[-1, 1]).pole_free_at(&q));
        assert!(!frac(&[1], &[2, -3, 1]).pole_free_at(&q));
        assert_eq!(frac(&[1], &[2, -3, 1]).pole_order(&q), 1);
    }

    #[test]
    fn remainder_migrates_to_pole_points() {
        // 1/((x-1)(x-2)) with no hints stays general; adding a pole at 1 splits it
        let g = frac(&[1], &[2, -3, 1]);
        assert!(g.remainder().is_some());
        let s = &g + &lin(1);
        assert!(s.remainder().is_none());
        assert_eq!(s, R::pole(&r(2), 1, Rat::one()));
        assert!((&g - &g).is_zero());
    }

    #[test]
    fn mul_matches_fraction_arithmetic() {
        let a = &(&lin(0) * &lin(0)) + &R::pole(&r(3), 2, Rat::new(2, 5));
        let b = &(&R::from_poly(poly(&[1, -1, 2])) + &lin(3)) + &R::pole(&r(-1), 3, r(7));
        let c = &a * &b;
        let (na, da) = a.to_fraction();
        let (nb, db) = b.to_fraction();
        let expect = R::from_fraction(na.mul(&nb), da.mul(&db)).unwrap();
        assert_eq!(c.to_fraction(), expect.to_fraction());
    }
}

//! Truncated Laurent series in `t` with rational-function coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Rat, Ring};
use crate::ratfunc::RatFunc;

/// `sum_j coeffs[j] t^(t_min + j) + O(t^prec)`.
///
/// `prec == None` means the series is exact (a Laurent polynomial in `t`).
/// Coefficients at or above `prec` are never stored, and the stored vector
/// has nonzero first and last entries, so the zero series has no coefficients.
#[derive(Clone)]
pub struct TSeries<K> {
    t_min: i64,
    coeffs: Vec<RatFunc<K>>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<K: Field> TSeries<K> {
    /// Builds and normalizes `sum_j coeffs[j] t^(t_min + j) + O(t^prec)`.
    pub fn new(t_min: i64, mut coeffs: Vec<RatFunc<K>>, prec: Option<i64>) -> TSeries<K> {
        if let Some(p) = prec {
            let keep = (p - t_min).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        let t_min = if coeffs.is_empty() { 0 } else { t_min + lead as i64 };
        TSeries {
            t_min,
            coeffs,
            prec,
        }
    }

    pub fn zero_exact() -> TSeries<K> {
        TSeries::new(0, Vec::new(), None)
    }

    /// `O(t^prec)`.
    pub fn zero_to(prec: i64) -> TSeries<K> {
        TSeries::new(0, Vec::new(), Some(prec))
    }

    pub fn one() -> TSeries<K> {
        TSeries::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc<K>) -> TSeries<K> {
        TSeries::new(0, vec![c], None)
    }

    /// `c t^e`, exact.
    pub fn monomial(c: RatFunc<K>, e: i64) -> TSeries<K> {
        TSeries::new(e, vec![c], None)
    }

    pub fn t() -> TSeries<K> {
        TSeries::monomial(RatFunc::one(), 1)
    }

    /// Series with `coeffs[j]` at `t^j`, known modulo `t^prec`.
    pub fn from_coeffs(coeffs: Vec<RatFunc<K>>, prec: Option<i64>) -> TSeries<K> {
        TSeries::new(0, coeffs, prec)
    }

    /// `1 / (x - q + c t) = sum_n (-c)^n t^n / (x - q)^(n+1)` modulo `t^prec`.
    pub fn inv_linear_shift(q: &Rat, c: &Rat, prec: i64) -> TSeries<K> {
        let mut coeffs = Vec::new();
        let mut w = Rat::one();
        let mc = -c;
        for n in 0..prec.max(0) as usize {
            coeffs.push(RatFunc::pole(q, n + 1, K::from_rat(&w)));
            w = &w * &mc;
        }
        TSeries::new(0, coeffs, Some(prec))
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest exponent with nonzero coefficient; `None` if no such term is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.t_min)
    }

    /// Valuation, or the precision for a zero series (`i64::MAX` if exactly zero).
    pub fn order(&self) -> i64 {
        self.valuation().or(self.prec).unwrap_or(i64::MAX)
    }

    /// Highest exponent with a stored coefficient.
    pub fn max_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.t_min + self.coeffs.len() as i64 - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> RatFunc<K> {
        if e < self.t_min {
            return RatFunc::zero();
        }
        self.coeffs
            .get((e - self.t_min) as usize)
            .cloned()
            .unwrap_or_else(RatFunc::zero)
    }

    /// Stored `(exponent, coefficient)` pairs, zero entries skipped.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatFunc<K>)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(j, c)| (self.t_min + j as i64, c))
    }

    /// Drop everything at and above `t^n`.
    pub fn truncate(&self, n: i64) -> TSeries<K> {
        let p = min_prec(self.prec, Some(n));
        TSeries::new(self.t_min, self.coeffs.clone(), p)
    }

    pub fn add(&self, rhs: &TSeries<K>) -> TSeries<K> {
        let prec = min_prec(self.prec, rhs.prec);
        if rhs.is_zero() {
            return TSeries::new(self.t_min, self.coeffs.clone(), prec);
        }
        if self.is_zero() {
            return TSeries::new(rhs.t_min, rhs.coeffs.clone(), prec);
        }
        let lo = self.t_min.min(rhs.t_min);
        let hi = self.max_exponent().unwrap().max(rhs.max_exponent().unwrap());
        let hi = prec.map_or(hi, |p| hi.min(p - 1));
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = self.get(e);
                let b = rhs.get(e);
                match (a, b) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => RatFunc::zero(),
                }
            })
            .collect();
        TSeries::new(lo, coeffs, prec)
    }

    fn get(&self, e: i64) -> Option<&RatFunc<K>> {
        if e < self.t_min {
            return None;
        }
        self.coeffs.get((e - self.t_min) as usize)
    }

    pub fn neg(&self) -> TSeries<K> {
        TSeries {
            t_min: self.t_min,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, rhs: &TSeries<K>) -> TSeries<K> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &TSeries<K>) -> TSeries<K> {
        let prec = min_prec(
            self.prec.map(|p| p.saturating_add(rhs.order())),
            rhs.prec.map(|p| p.saturating_add(self.order())),
        );
        if self.is_zero() || rhs.is_zero() {
            return TSeries::new(0, Vec::new(), prec);
        }
        let lo = self.t_min + rhs.t_min;
        let mut n = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(p) = prec {
            n = n.min((p - lo).max(0) as usize);
        }
        let mut out = vec![RatFunc::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n || a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TSeries::new(lo, out, prec)
    }

    /// Multiply every coefficient by a rational function.
    pub fn scale_rf(&self, c: &RatFunc<K>) -> TSeries<K> {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        TSeries::new(self.t_min, coeffs, self.prec)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> TSeries<K> {
        TSeries {
            t_min: if self.is_zero() { 0 } else { self.t_min + k },
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Derivative in `x`, coefficientwise. Precision is unchanged.
    pub fn dx(&self) -> TSeries<K> {
        TSeries::new(
            self.t_min,
            self.coeffs.iter().map(|c| c.dx()).collect(),
            self.prec,
        )
    }

    /// Derivative in `t`. Loses one order of precision.
    pub fn dt(&self) -> TSeries<K> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.scale(&Rat::int(self.t_min + j as i64)))
            .collect();
        TSeries::new(self.t_min - 1, coeffs, self.prec.map(|p| p - 1))
    }

    /// Multiplicative inverse.
    ///
    /// Exact single-term series invert exactly; other exact series need
    /// [`TSeries::inv_to`]. A series known mod `t^P` with valuation `v`
    /// has an inverse known mod `t^(P - 2v)`.
    pub fn inv(&self) -> Result<TSeries<K>> {
        match self.prec {
            None => {
                if self.coeffs.len() == 1 {
                    let c = self.coeffs[0].inv().ok_or(Error::DivByZero)?;
                    Ok(TSeries::monomial(c, -self.t_min))
                } else if self.is_zero() {
                    Err(Error::DivByZero)
                } else {
                    Err(Error::UnboundedPrecision)
                }
            }
            Some(p) => self.inv_rel(p),
        }
    }

    /// Inverse of an exact series, computed modulo `t^prec`.
    pub fn inv_to(&self, prec: i64) -> Result<TSeries<K>> {
        let v = self.valuation().ok_or(Error::DivByZero)?;
        let p = min_prec(self.prec, Some(prec + 2 * v)).unwrap();
        self.inv_rel(p)
    }

    fn inv_rel(&self, p: i64) -> Result<TSeries<K>> {
        let v = self.valuation().ok_or(Error::ZeroLeadingTerm)?;
        let n = (p - v).max(0) as usize;
        let c0 = self.coeffs[0].inv().ok_or(Error::ZeroLeadingTerm)?;
        let mut out: Vec<RatFunc<K>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = if i == 0 { RatFunc::one() } else { RatFunc::zero() };
            for j in 1..=i.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[j];
                if !a.is_zero() && !out[i - j].is_zero() {
                    acc = acc.sub(&a.mul(&out[i - j]));
                }
            }
            out.push(acc.mul(&c0));
        }
        Ok(TSeries::new(-v, out, Some(p - 2 * v)))
    }

    /// Apply a field embedding to every coefficient.
    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L + Copy) -> TSeries<L> {
        TSeries {
            t_min: self.t_min,
            coeffs: self.coeffs.iter().map(|c| c.map_coeffs(f)).collect(),
            prec: self.prec,
        }
    }

    /// Apply a map to every coefficient, keeping exponents and precision.
    pub fn map_rf(&self, f: impl Fn(&RatFunc<K>) -> RatFunc<K>) -> TSeries<K> {
        TSeries::new(self.t_min, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Lowest exponent where `self` and `rhs` differ, below their common precision.
    pub fn first_difference(&self, rhs: &TSeries<K>) -> Option<i64> {
        self.sub(rhs).valuation()
    }
}

impl<K: Field> PartialEq for TSeries<K> {
    /// Equality modulo the smaller of the two precisions.
    fn eq(&self, other: &TSeries<K>) -> bool {
        self.sub(other).is_zero()
    }
}

impl<K: Field> fmt::Debug for TSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c:?}] t^{e}")?;
        }
        if let Some(p) = self.prec {
            write!(f, " + O(t^{p})")?;
        }
        Ok(())
    }
}

impl<K: Field> Ring for TSeries<K> {
    fn zero() -> Self {
        TSeries::zero_exact()
    }
    fn one() -> Self {
        TSeries::one()
    }
    fn is_zero(&self) -> bool {
        TSeries::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.t_min == 0 && self.coeffs[0].is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        TSeries::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        TSeries::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        TSeries::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        TSeries::neg(self)
    }
    fn from_rat(q: &Rat) -> Self {
        TSeries::constant(RatFunc::from_rat(q))
    }
    fn scale(&self, q: &Rat) -> Self {
        let coeffs = self.coeffs.iter().map(|c| Ring::scale(c, q)).collect();
        TSeries::new(self.t_min, coeffs, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = TSeries<Rat>;
    type R = RatFunc<Rat>;

    fn r(n: i64) -> Rat {
        Rat::int(n)
    }

    #[test]
    fn precision_propagation() {
        let a = S::from_coeffs(vec![R::x(), R::one()], Some(5));
        let b = S::from_coeffs(vec![R::zero(), R::x()], Some(3));
        assert_eq!(a.add(&b).prec(), Some(3));
        // a has valuation 0, b valuation 1: min(5 + 1, 3 + 0)
        assert_eq!(a.mul(&b).prec(), Some(3));
        let c = S::t().mul(&S::t());
        assert_eq!(a.mul(&c).prec(), Some(7));
        assert_eq!(a.dt().prec(), Some(4));
        assert_eq!(a.dx().prec(), Some(5));
    }

    #[test]
    fn inverse_precision() {
        let q = r(2);
        let s = S::monomial(R::pole(&q, 1, Rat::one()), 1).add(&S::zero_to(6));
        let inv = s.inv().unwrap();
        assert_eq!(inv.prec(), Some(4));
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(s.mul(&inv), S::one().truncate(5));
        assert_eq!(S::zero_to(4).inv().unwrap_err(), Error::ZeroLeadingTerm);
        let exact = S::one().add(&S::t());
        assert_eq!(exact.inv().unwrap_err(), Error::UnboundedPrecision);
        let i = exact.inv_to(6).unwrap();
        assert_eq!(i.prec(), Some(6));
        // 1/(1+t) = sum (-t)^n
        for e in 0..6 {
            assert_eq!(i.coeff(e), R::from_rat(&r(if e % 2 == 0 { 1 } else { -1 })));
        }
    }

    #[test]
    fn shifted_pole_expansion() {
        let q = Rat::new(1, 2);
        let s = S::inv_linear_shift(&q, &Rat::one(), 6);
        // (x - q + t) * s = 1 mod t^6
        let lin = S::from_coeffs(
            vec![R::x().sub(&R::from_rat(&q)), R::one()],
            None,
        );
        assert_eq!(lin.mul(&s), S::one().truncate(6));
        assert_eq!(lin.mul(&s).prec(), Some(6));
    }

    #[test]
    fn equality_is_modulo_precision() {
        let a = S::from_coeffs(vec![R::one(), R::x(), R::x()], Some(3));
        let b = S::from_coeffs(vec![R::one(), R::x()], Some(2));
        assert_eq!(a, b);
        let c = S::from_coeffs(vec![R::one(), R::one()], Some(2));
        assert_ne!(a, c);
        assert_eq!(a.first_difference(&c), Some(1));
    }
}

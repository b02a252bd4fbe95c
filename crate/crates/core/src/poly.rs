//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use crate::field::{Field, Rat};

/// Polynomial in `x` with coefficients stored low degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Poly<K> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly<K> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly<K> {
        Poly::constant(K::one())
    }

    pub fn constant(c: K) -> Poly<K> {
        Poly::new(vec![c])
    }

    pub fn x() -> Poly<K> {
        Poly::new(vec![K::zero(), K::one()])
    }

    pub fn monomial(c: K, k: usize) -> Poly<K> {
        let mut v = vec![K::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    /// `x - r`.
    pub fn linear(r: &K) -> Poly<K> {
        Poly::new(vec![r.neg(), K::one()])
    }

    pub fn from_rats(coeffs: &[Rat]) -> Poly<K> {
        Poly::new(coeffs.iter().map(K::from_rat).collect())
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(v)
    }

    pub fn sub(&self, rhs: &Poly<K>) -> Poly<K> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly<K> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Poly<K> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::new(v)
    }

    /// Multiply by `x - r`.
    pub fn mul_linear(&self, r: &K) -> Poly<K> {
        if self.is_zero() {
            return Poly::zero();
        }
        let n = self.coeffs.len();
        let mut v = Vec::with_capacity(n + 1);
        v.push(self.coeffs[0].mul(r).neg());
        for i in 1..n {
            v.push(self.coeffs[i - 1].sub(&self.coeffs[i].mul(r)));
        }
        v.push(self.coeffs[n - 1].clone());
        Poly::new(v)
    }

    /// Synthetic division by `x - r`: returns `(quotient, self(r))`.
    pub fn div_linear(&self, r: &K) -> (Poly<K>, K) {
        if self.is_zero() {
            return (Poly::zero(), K::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![K::zero(); n - 1];
        let mut acc = K::zero();
        for i in (0..n).rev() {
            acc = acc.mul(r).add(&self.coeffs[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Poly::new(q), acc)
    }

    /// Multiplicity of the root `r`, and the cofactor with that factor removed.
    pub fn split_root(&self, r: &K) -> (u32, Poly<K>) {
        let mut cur = self.clone();
        let mut e = 0;
        if cur.is_zero() {
            return (0, cur);
        }
        loop {
            let (q, rem) = cur.div_linear(r);
            if !rem.is_zero() {
                return (e, cur);
            }
            cur = q;
            e += 1;
        }
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly<K> {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rat::int(i as i64)))
            .collect();
        Poly::new(v)
    }

    /// First `n` Taylor coefficients of `self(r + u)` in `u`.
    pub fn taylor(&self, r: &K, n: usize) -> Vec<K> {
        let mut out = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            if cur.is_zero() {
                out.push(K::zero());
                continue;
            }
            let (q, v) = cur.div_linear(r);
            out.push(v);
            cur = q;
        }
        out
    }

    /// Quotient of `self` by `(x - r)^k`, discarding the remainder.
    pub fn quo_linear_pow(&self, r: &K, k: usize) -> Poly<K> {
        let mut cur = self.clone();
        for _ in 0..k {
            if cur.is_zero() {
                break;
            }
            cur = cur.div_linear(r).0;
        }
        cur
    }

    /// Rewrite `p(u)`, a polynomial in `u = x - r`, as a polynomial in `x`.
    pub fn from_shifted(coeffs_in_u: &[K], r: &K) -> Poly<K> {
        let mut acc = Poly::zero();
        for c in coeffs_in_u.iter().rev() {
            acc = acc.mul_linear(r).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn divrem(&self, d: &Poly<K>) -> (Poly<K>, Poly<K>) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.lead().unwrap().inv().expect("nonzero lead");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![K::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].mul(&lead_inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].sub(&c.mul(dc));
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly<K> {
        match self.lead() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly<K>) -> Poly<K> {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<K: Field + fmt::Debug> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "({c:?})x")?,
                _ => write!(f, "({c:?})x^{i}")?,
            }
        }
        Ok(())
    }
}

//! Ground fields.
//!
//! Everything in the crate is generic over a [`Field`] of characteristic
//! zero. Two instances are used in practice: [`Rat`] itself, and
//! `RatFunc<Rat>`, i.e. `Q(a)` with one formal transcendental constant.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Pow, Reciprocal};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_q::Rational;

use crate::error::Error;

/// Commutative ring with unit containing `Q`.
///
/// Methods take references and return owned values; none of them mutate.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Image of a rational number under the structure map `Q -> R`.
    fn from_rat(q: &Rat) -> Self;

    fn scale(&self, q: &Rat) -> Self {
        self.mul(&Self::from_rat(q))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// The element as a rational number, if it lies in the prime field.
    fn to_rat(&self) -> Option<Rat>;
}

/// Exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(Rational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(Rational::from_signeds(num, den))
    }

    pub fn zero() -> Rat {
        Rat(Rational::ZERO)
    }

    pub fn one() -> Rat {
        Rat(Rational::ONE)
    }

    pub fn int(n: i64) -> Rat {
        Rat(Rational::from(n))
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denominator_ref() == 1u32
    }

    pub fn signum(&self) -> Ordering {
        self.0.partial_cmp(&0u32).unwrap_or(Ordering::Equal)
    }

    pub fn recip(&self) -> Option<Rat> {
        if self.0 == 0u32 {
            None
        } else {
            Some(Rat((&self.0).reciprocal()))
        }
    }

    /// Integer power; negative exponents invert. Panics on `0^-k`.
    pub fn powi(&self, e: i64) -> Rat {
        assert!(e >= 0 || self.0 != 0u32, "zero to a negative power");
        Rat((&self.0).pow(e))
    }

    pub fn numerator_string(&self) -> String {
        let s = self.0.numerator_ref().to_string();
        if self.0 < 0u32 {
            format!("-{s}")
        } else {
            s
        }
    }

    pub fn denominator_string(&self) -> String {
        self.0.denominator_ref().to_string()
    }
}

impl fmt::Display for Rat {
    /// Always `p/q`, including `q = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator_string(), self.denominator_string())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator_string())
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let t = s.trim();
        Rational::from_str(t)
            .map(Rat)
            .map_err(|_| Error::Parse(format!("not an exact rational: {s:?}")))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat($tr::$m(self.0, &rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(rhs.0 != 0u32, "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Ring for Rat {
    fn zero() -> Rat {
        Rat(Rational::ZERO)
    }
    fn one() -> Rat {
        Rat(Rational::ONE)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0u32
    }
    fn is_one(&self) -> bool {
        self.0 == 1u32
    }
    fn add(&self, rhs: &Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Rat) -> Rat {
        Rat(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Rat) -> Rat {
        Rat(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Rat {
        Rat(-&self.0)
    }
    fn from_rat(q: &Rat) -> Rat {
        q.clone()
    }
    fn scale(&self, q: &Rat) -> Rat {
        Rat(&self.0 * &q.0)
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Rat> {
        self.recip()
    }
    fn to_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = Rat::new(6, -4);
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(Rat::int(5).to_string(), "5/1");
        assert_eq!(Rat::zero().to_string(), "0/1");
        assert_eq!("10/4".parse::<Rat>().unwrap(), Rat::new(5, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::int(-7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(&a + &b, Rat::new(1, 2));
        assert_eq!(&a - &b, Rat::new(1, 6));
        assert_eq!(&a * &b, Rat::new(1, 18));
        assert_eq!(&a / &b, Rat::int(2));
        assert_eq!(a.powi(-2), Rat::int(9));
        assert_eq!(Rat::zero().recip(), None);
        assert_eq!(Ring::pow(&Rat::int(-2), 5), Rat::int(-32));
    }
}

//! Exact rational scalars and vectors.
//!
//! All polytope-family computations run on these types so that equality of
//! polytopes and families is decidable exactly, with no tolerance anywhere.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("rational with zero denominator"));
        }
        Ok(Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// Exact conversion: every finite double is a dyadic rational.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Rat)
            .ok_or_else(|| Error::invalid(format!("non-finite value {x} has no rational form")))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num)
            .map_err(|_| Error::invalid(format!("bad rational numerator in {s:?}")))?;
        let den = BigInt::from_str(den)
            .map_err(|_| Error::invalid(format!("bad rational denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {s:?}")));
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        Rat(&self.0 / &rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// Fixed-dimension vector of exact rationals. Comparison is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("zero-dimensional rational vector"));
        }
        Ok(RatVec(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVec(coords.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rat::to_f64).collect()
    }

    /// Scale to coprime integer coordinates, preserving orientation.
    /// Returns an error on the zero vector.
    pub fn primitive(&self) -> Result<RatVec> {
        if self.0.iter().all(Rat::is_zero) {
            return Err(Error::invalid("zero vector has no primitive form"));
        }
        let mut lcm = BigInt::one();
        for c in &self.0 {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = gcd.gcd(v);
        }
        Ok(RatVec(
            ints.into_iter()
                .map(|v| Rat(BigRational::from_integer(v / &gcd)))
                .collect(),
        ))
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = Rat::new(4, -6).unwrap();
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(r, Rat::new(-2, 3).unwrap());
        assert!(Rat::new(1, 0).is_err());
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(Rat::new(8, 4).unwrap().to_string(), "2");
        assert_eq!(Rat::new(1, 2).unwrap().to_string(), "1/2");
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::int(-7));
        assert_eq!("3/9".parse::<Rat>().unwrap(), Rat::new(1, 3).unwrap());
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn exact_float_conversion() {
        let r = Rat::from_f64(0.5).unwrap();
        assert_eq!(r, Rat::new(1, 2).unwrap());
        let r = Rat::from_f64(0.1).unwrap();
        // 0.1 is not exactly 1/10 in binary; conversion is exact, so it differs.
        assert_ne!(r, Rat::new(1, 10).unwrap());
        assert_eq!(r.to_f64(), 0.1);
        assert!(Rat::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn lexicographic_vector_order() {
        let a = RatVec::from_ints(&[0, 5]);
        let b = RatVec::from_ints(&[1, -5]);
        assert!(a < b);
    }

    #[test]
    fn primitive_form() {
        let v = RatVec(vec![Rat::new(-1, 2).unwrap(), Rat::new(3, 4).unwrap()]);
        assert_eq!(v.primitive().unwrap(), RatVec::from_ints(&[-2, 3]));
        let zero = RatVec::from_ints(&[0, 0]);
        assert!(zero.primitive().is_err());
    }

    proptest! {
        #[test]
        fn add_sub_roundtrip(an in -1000i64..1000, ad in 1i64..100, bn in -1000i64..1000, bd in 1i64..100) {
            let a = Rat::new(an, ad).unwrap();
            let b = Rat::new(bn, bd).unwrap();
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn normalization_idempotent(n in -10000i64..10000, d in 1i64..1000, k in 1i64..50) {
            let a = Rat::new(n, d).unwrap();
            let b = Rat::new(n * k, d * k).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.to_string(), b.to_string());
        }

        #[test]
        fn serde_string_roundtrip(n in -10000i64..10000, d in 1i64..1000) {
            let a = Rat::new(n, d).unwrap();
            let s = serde_json::to_string(&a).unwrap();
            let back: Rat = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(a, back);
        }
    }
}

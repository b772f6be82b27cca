//! Exact scalars: arbitrary-precision rationals and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// Deterministic trial division; the primes used here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Fp {
                    value: r.to_u64().expect("reduced residue fits"),
                    p,
                }
            }
        }
    }

    /// `(-1)^odd` as a field element.
    pub fn sign(&self, odd: bool) -> Scalar {
        self.from_i64(if odd { -1 } else { 1 })
    }

    /// Parses `"7"`, `"-3/4"` or a JSON integer.
    pub fn parse_scalar(&self, value: &Value) -> Result<Scalar> {
        match value {
            Value::Number(n) => {
                let v = n
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("scalar {n} is not an integer")))?;
                Ok(self.from_i64(v))
            }
            Value::String(s) => self.parse_str(s),
            other => Err(Error::Parse(format!("cannot read scalar from {other}"))),
        }
    }

    pub fn parse_str(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad scalar '{s}'")))?;
        let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad scalar '{s}'")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        let n = self.from_bigint(&num);
        let d = self.from_bigint(&den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator of '{s}' vanishes in {self}")))?;
        Ok(n * inv)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Field::Rationals => Value::String("Q".into()),
            Field::Prime(p) => serde_json::json!({ "Fp": p }),
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) if s == "Q" => Ok(Field::Rationals),
            Value::Object(map) => {
                let p = map
                    .get("Fp")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse(format!("bad field {value}")))?;
                Field::prime(p)
            }
            _ => Err(Error::Parse(format!("bad field {value}"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field element. Mixing elements of different fields is a logic
/// error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    /// Multiplies by `(-1)^odd`.
    pub fn signed(self, odd: bool) -> Scalar {
        if odd {
            -self
        } else {
            self
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Q(q) if q.is_integer() => match q.numer().to_i64() {
                Some(v) => Value::from(v),
                None => Value::String(q.to_string()),
            },
            Scalar::Q(q) => Value::String(format!("{}/{}", q.numer(), q.denom())),
            Scalar::Fp { value, .. } => Value::from(*value),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

fn same_prime(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "scalars from different prime fields");
    a
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Fp {
                    value: (a + b) % p,
                    p,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Fp {
                    value: a * b % p,
                    p,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: (p - value) % p,
                p,
            },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn parses_fractions() {
        let q = Field::Rationals;
        let x = q.parse_str("-3/4").unwrap();
        assert_eq!(x.to_json(), Value::String("-3/4".into()));
        let f5 = Field::prime(5).unwrap();
        // 1/2 = 3 mod 5
        assert_eq!(f5.parse_str("1/2").unwrap(), f5.from_i64(3));
        assert!(f5.parse_str("1/5").is_err());
    }

    #[test]
    fn negation_mod_p() {
        let f = Field::prime(2).unwrap();
        assert_eq!(-f.one(), f.one());
        assert_eq!(f.sign(true), f.one());
    }
}

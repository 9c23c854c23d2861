use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

/// An element of a [`Field`]. Arithmetic always goes through the field so
/// that prime-field residues are reduced with the right modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidField(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Residue(n.rem_euclid(*p as i64) as u32),
        }
    }

    /// `num / den`; panics when `den` vanishes in the field.
    pub fn fraction(&self, num: i64, den: i64) -> Scalar {
        let d = self.from_i64(den);
        self.mul(&self.from_i64(num), &self.inv(&d))
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => *r == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Field::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// `a - c * b`, the elimination step.
    pub fn sub_mul(&self, a: &Scalar, c: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, c, b) {
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y), Scalar::Residue(z)) => {
                let p = *p as u64;
                let prod = (*y as u64 * *z as u64) % p;
                Scalar::Residue(((*x as u64 + p - prod) % p) as u32)
            }
            _ => self.sub(a, &self.mul(c, b)),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => {
                assert!(!x.is_zero(), "division by zero");
                Scalar::Rational(x.recip())
            }
            (Field::Prime(p), Scalar::Residue(x)) => {
                assert!(*x != 0, "division by zero");
                Scalar::Residue(pow_mod(*x as u64, *p as u64 - 2, *p as u64) as u32)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &Scalar, e: i64) -> Scalar {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Every element, for prime fields only.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(Scalar::Residue).collect()),
        }
    }

    /// A random element; rationals are drawn as small integers in [-3, 3].
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Rationals => self.from_i64(rng.gen_range(-3..=3)),
            Field::Prime(p) => Scalar::Residue(rng.gen_range(0..*p)),
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Residue(x)) => x < p,
            _ => false,
        }
    }

    /// Parses `"num/den"` (or an integer) for the rationals, an integer in
    /// `0..p` for a prime field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        match self {
            Field::Rationals => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| Error::Parse(format!("bad rational numerator {num:?}")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| Error::Parse(format!("bad rational denominator {den:?}")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {text:?}")));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let v: i64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {text:?}")))?;
                if v < 0 || v >= *p as i64 {
                    return Err(Error::Parse(format!("residue {v} outside 0..{p}")));
                }
                Ok(Scalar::Residue(v as u32))
            }
        }
    }

    /// Decodes the JSON form used by scenario files: strings for
    /// rationals, integers for residues.
    pub fn scalar_from_json(&self, value: &serde_json::Value) -> Result<Scalar> {
        match value {
            serde_json::Value::String(s) => self.parse_scalar(s),
            serde_json::Value::Number(n) => {
                let v = n
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("non-integer scalar {n}")))?;
                match self {
                    Field::Rationals => Ok(self.from_i64(v)),
                    Field::Prime(_) => self.parse_scalar(&v.to_string()),
                }
            }
            other => Err(Error::Parse(format!("expected scalar, got {other}"))),
        }
    }

    pub fn scalar_to_json(&self, a: &Scalar) -> serde_json::Value {
        match a {
            Scalar::Rational(q) => serde_json::Value::String(format!("{}/{}", q.numer(), q.denom())),
            Scalar::Residue(r) => serde_json::Value::from(*r),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix("GF"))
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| Error::InvalidField(format!("unknown field {s:?}")))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("unknown field {s:?}")))?;
        Field::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Field, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl Scalar {
    /// Small-integer view, used by report formatting and tests.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Residue(r) => Some(*r as i64),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Field::prime(5).unwrap();
        let two = f5.from_i64(2);
        assert_eq!(f5.inv(&two), f5.from_i64(3));
        assert_eq!(f5.mul(&two, &f5.from_i64(3)), f5.one());
        assert_eq!(f5.from_i64(-1), Scalar::Residue(4));
        assert_eq!(f5.pow(&two, -1), f5.from_i64(3));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(6).is_err());
        assert!("F9".parse::<Field>().is_err());
        assert_eq!("F7".parse::<Field>().unwrap(), Field::Prime(7));
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rationals);
    }

    #[test]
    fn scalar_text_forms() {
        let q = Field::Rationals;
        let a = q.parse_scalar("-3/6").unwrap();
        assert_eq!(a, q.fraction(-1, 2));
        assert_eq!(q.scalar_to_json(&a), serde_json::json!("-1/2"));
        let f3 = Field::Prime(3);
        assert_eq!(f3.scalar_from_json(&serde_json::json!(2)).unwrap(), Scalar::Residue(2));
        assert!(f3.scalar_from_json(&serde_json::json!(3)).is_err());
    }
}

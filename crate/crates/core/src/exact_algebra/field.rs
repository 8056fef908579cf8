//! Exact scalars: the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest characteristic accepted; products of two residues must fit in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// The ground field every computation is carried out over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// A field element. The variant always matches the [`FieldSpec`] it was produced by.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Modular(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_CHARACTERISTIC {
            return Err(Error::CharacteristicTooLarge(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Parses `Q`, `F7`, `F_7` or `Fp7`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("Fp")
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::BadField(text.to_string()))?;
        let p: u64 = digits.parse().map_err(|_| Error::BadField(text.to_string()))?;
        FieldSpec::prime(p)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Modular(0),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Modular(n.rem_euclid(p as i64) as u64),
        }
    }

    /// Maps a rational number into the field; fails in characteristic p when the
    /// denominator is divisible by p.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::NotInvertible(format!("{q} in F{p}")));
                }
                Ok(Scalar::Modular(num * inv_mod(den, p) % p))
            }
        }
    }

    pub fn is_zero(self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v) => *v == 0,
        }
    }

    pub fn is_one(self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular(v) => *v == 1,
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (FieldSpec::Prime(p), Scalar::Modular(x), Scalar::Modular(y)) => Scalar::Modular((x + y) % p),
            _ => panic!("scalar from a foreign field"),
        }
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Modular(x)) => Scalar::Modular((p - x) % p),
            _ => panic!("scalar from a foreign field"),
        }
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (FieldSpec::Prime(p), Scalar::Modular(x), Scalar::Modular(y)) => Scalar::Modular(x * y % p),
            _ => panic!("scalar from a foreign field"),
        }
    }

    pub fn inv(self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (_, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            (FieldSpec::Prime(p), Scalar::Modular(x)) => Some(Scalar::Modular(inv_mod(*x, p))),
            _ => panic!("scalar from a foreign field"),
        }
    }

    /// All elements of a prime field in increasing residue order.
    pub fn elements(self) -> Result<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => Err(Error::InfiniteField),
            FieldSpec::Prime(p) => Ok((0..p).map(Scalar::Modular).collect()),
        }
    }

    /// True when `a` is a value of this field (variant and range).
    pub fn owns(self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime(p), Scalar::Modular(v)) => *v < p,
            _ => false,
        }
    }

    /// Signed rational view of a scalar; residues are shown in the symmetric range.
    pub fn to_rational(self, a: &Scalar) -> BigRational {
        match (self, a) {
            (_, Scalar::Rational(q)) => q.clone(),
            (FieldSpec::Prime(p), Scalar::Modular(v)) => {
                let signed = if *v > p / 2 { *v as i64 - p as i64 } else { *v as i64 };
                BigRational::from_integer(BigInt::from(signed))
            }
            _ => panic!("scalar from a foreign field"),
        }
    }

    /// Renders a scalar in the symmetric representation used by the text formats.
    pub fn display(self, a: &Scalar) -> String {
        let q = self.to_rational(a);
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    pub fn is_negative_display(self, a: &Scalar) -> bool {
        self.to_rational(a).is_negative()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("F3").unwrap(), FieldSpec::Prime(3));
        assert_eq!(FieldSpec::parse("Fp7").unwrap(), FieldSpec::Prime(7));
        assert!(matches!(FieldSpec::parse("F4"), Err(Error::NotPrime(4))));
        assert!(FieldSpec::parse("R").is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let f = FieldSpec::Prime(7);
        let three = f.from_int(3);
        let inv = f.inv(&three).unwrap();
        assert!(f.is_one(&f.mul(&three, &inv)));
        assert_eq!(f.from_int(-1), Scalar::Modular(6));
        assert_eq!(f.display(&f.from_int(-1)), "-1");
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), Scalar::Modular(4));
        assert!(FieldSpec::Prime(2).from_rational(&half).is_err());
    }

    #[test]
    fn rational_display() {
        let q = FieldSpec::Rationals;
        let x = q.from_rational(&BigRational::new((-3).into(), 6.into())).unwrap();
        assert_eq!(q.display(&x), "-1/2");
    }
}

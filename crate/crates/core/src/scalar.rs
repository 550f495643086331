//! Exact coefficients: the rationals or a prime field `F_p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    /// `F_p` with `p` prime and below `2^31`.
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n % BigInt::from(p);
                let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                Scalar::Prime {
                    value: r.try_into().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den`, failing on a zero denominator (in the field).
    pub fn fraction(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        let inv = d.inverse().ok_or(Error::ZeroDenominator)?;
        Ok(&self.from_bigint(num) * &inv)
    }
}

impl FromStr for Field {
    type Err = Error;

    /// `q` for the rationals, `fp:<p>` for a prime field.
    fn from_str(s: &str) -> Result<Field> {
        match s {
            "q" | "Q" => Ok(Field::Rational),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidField(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element in canonical form (reduced fraction, or least
/// nonnegative residue).
///
/// Arithmetic between scalars of different fields is a logic error and panics;
/// elements check field agreement before combining coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// True when the canonical printed form starts with a minus sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn add_assign_ref(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            (Scalar::Prime { value, modulus }, Scalar::Prime { value: b, modulus: m }) => {
                assert_eq!(modulus, m, "scalars from different fields");
                *value = (*value + b) % *modulus;
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value, modulus }, Scalar::Prime { value: b, modulus: m }) => {
                assert_eq!(modulus, m, "scalars from different fields");
                Scalar::Prime {
                    value: value * b % modulus,
                    modulus: *modulus,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!(matches!("fp:8".parse::<Field>(), Err(Error::NotPrime(8))));
        assert!(matches!("fp:x".parse::<Field>(), Err(Error::InvalidField(_))));
        assert!("r".parse::<Field>().is_err());
    }

    #[test]
    fn rational_canonical_form() {
        let q = Field::Rational;
        let half = q.fraction(&BigInt::from(2), &BigInt::from(4)).unwrap();
        assert_eq!(half.to_string(), "1/2");
        let x = &half + &half;
        assert!(x.is_one());
        assert!(q.fraction(&BigInt::from(1), &BigInt::from(0)).is_err());
        assert!((-&half).is_negative());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(7);
        let three = f.from_i64(3);
        let inv = three.inverse().unwrap();
        assert!((&three * &inv).is_one());
        assert_eq!((-&three).to_string(), "4");
        assert_eq!(f.from_i64(-1).to_string(), "6");
        // 1/2 in F_7 is 4
        assert_eq!(f.fraction(&BigInt::from(1), &BigInt::from(2)).unwrap().to_string(), "4");
        assert!(matches!(
            f.fraction(&BigInt::from(1), &BigInt::from(14)),
            Err(Error::ZeroDenominator)
        ));
        assert!(f.zero().inverse().is_none());
    }
}

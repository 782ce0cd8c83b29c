//! Coefficient domains for the polynomial layer.
//!
//! Residue rings ZZ/N are not a coefficient domain here: they are modeled as
//! integer coefficients with the modulus adjoined to the defining ideal, so
//! the strong Groebner machinery over ZZ covers them uniformly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffDomain {
    Integer,
    Rational,
    PrimeField(BigUint),
}

impl CoeffDomain {
    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffDomain::Integer)
    }

    /// Canonical representative of a raw coefficient in this domain.
    pub fn normalize(&self, c: &BigRational) -> Result<BigRational> {
        match self {
            CoeffDomain::Rational => Ok(c.clone()),
            CoeffDomain::Integer => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(Error::UnsupportedCoefficient(format!(
                        "{c} is not an integer"
                    )))
                }
            }
            CoeffDomain::PrimeField(p) => {
                let p: BigInt = BigInt::from(p.clone());
                let num = c.numer().mod_floor(&p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::UnsupportedCoefficient(format!(
                        "denominator of {c} vanishes mod {p}"
                    )));
                }
                let inv = mod_inverse(&den, &p).ok_or_else(|| {
                    Error::UnsupportedCoefficient(format!(
                        "denominator of {c} not invertible mod {p}"
                    ))
                })?;
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    /// Multiplicative inverse, for field domains.
    pub fn inverse(&self, c: &BigRational) -> Option<BigRational> {
        if c.is_zero() {
            return None;
        }
        match self {
            CoeffDomain::Rational => Some(c.recip()),
            CoeffDomain::Integer => {
                let a = c.numer();
                if a.abs().is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            CoeffDomain::PrimeField(p) => {
                let p: BigInt = BigInt::from(p.clone());
                let inv = mod_inverse(&c.numer().mod_floor(&p), &p)?;
                Some(BigRational::from_integer(inv))
            }
        }
    }
}

/// Inverse of a mod m, if gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(a, m);
    if g.is_one() {
        Some(x.mod_floor(m))
    } else {
        None
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        let (g, x, y) = ext_gcd(&BigInt::from(12), &BigInt::from(18));
        assert_eq!(g, BigInt::from(6));
        assert_eq!(BigInt::from(12) * x + BigInt::from(18) * y, BigInt::from(6));
    }

    #[test]
    fn prime_field_normalizes_fractions() {
        let d = CoeffDomain::PrimeField(BigUint::from(7u32));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        // 1/2 = 4 mod 7
        assert_eq!(d.normalize(&half).unwrap(), BigRational::from_integer(BigInt::from(4)));
    }
}

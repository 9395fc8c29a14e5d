//! Coefficient rings for exact series arithmetic: the integers, or the
//! integers modulo a fixed m (used for long congruence scans where exact
//! coefficients would be prohibitively large).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Either arbitrary-precision integers or residues modulo a fixed m >= 2.
///
/// Residues are always stored normalized into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffRing {
    Exact,
    Mod(BigInt),
}

impl CoeffRing {
    /// Residue ring Z/mZ. Panics if m < 2.
    pub fn modulus(m: impl Into<BigInt>) -> Self {
        let m = m.into();
        assert!(m >= BigInt::from(2), "modulus must be at least 2");
        CoeffRing::Mod(m)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CoeffRing::Exact)
    }

    /// Bring a raw integer into canonical form for this ring.
    pub fn normalize(&self, x: BigInt) -> BigInt {
        match self {
            CoeffRing::Exact => x,
            CoeffRing::Mod(m) => x.mod_floor(m),
        }
    }

    pub fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &BigInt) -> BigInt {
        self.normalize(-a)
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        match self {
            CoeffRing::Exact => a.abs().is_one(),
            CoeffRing::Mod(m) => a.gcd(m).is_one(),
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: &BigInt) -> Result<BigInt> {
        match self {
            CoeffRing::Exact => {
                if a.abs().is_one() {
                    Ok(a.clone())
                } else {
                    Err(Error::NonUnitLeading(a.to_string(), self.to_string()))
                }
            }
            CoeffRing::Mod(m) => {
                let e = a.extended_gcd(m);
                if e.gcd.is_one() {
                    Ok(e.x.mod_floor(m))
                } else {
                    Err(Error::NonUnitLeading(a.to_string(), self.to_string()))
                }
            }
        }
    }

    /// Wire-format tag: `Z` or `Zmod:m`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "Z" {
            return Ok(CoeffRing::Exact);
        }
        if let Some(m) = s.strip_prefix("Zmod:") {
            let m: BigInt = m
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus {m:?}")))?;
            if m < BigInt::from(2) {
                return Err(Error::Parse(format!("modulus {m} < 2")));
            }
            return Ok(CoeffRing::Mod(m));
        }
        Err(Error::Parse(format!("unknown ring {s:?}")))
    }

    pub(crate) fn check_same(&self, other: &CoeffRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Exact => write!(f, "Z"),
            CoeffRing::Mod(m) => write!(f, "Zmod:{m}"),
        }
    }
}

/// Largest e with 5^e dividing m, or `None` for m = 0 (conventionally infinite).
pub fn val5(m: &BigInt) -> Option<u64> {
    if m.is_zero() {
        return None;
    }
    let five = BigInt::from(5);
    let mut m = m.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&five);
        if !r.is_zero() {
            return Some(e);
        }
        m = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_normalized_into_range() {
        let r = CoeffRing::modulus(5);
        assert_eq!(r.normalize(BigInt::from(-3)), BigInt::from(2));
        assert_eq!(r.add(&BigInt::from(4), &BigInt::from(3)), BigInt::from(2));
    }

    #[test]
    fn modular_inverse() {
        let r = CoeffRing::modulus(625);
        let inv8 = r.inv(&BigInt::from(8)).unwrap();
        assert_eq!(r.mul(&inv8, &BigInt::from(8)), BigInt::one());
        assert!(r.inv(&BigInt::from(25)).is_err());
    }

    #[test]
    fn exact_units() {
        let r = CoeffRing::Exact;
        assert_eq!(r.inv(&BigInt::from(-1)).unwrap(), BigInt::from(-1));
        assert!(r.inv(&BigInt::from(2)).is_err());
    }

    #[test]
    fn ring_tag_round_trip() {
        for r in [CoeffRing::Exact, CoeffRing::modulus(125)] {
            assert_eq!(CoeffRing::parse(&r.to_string()).unwrap(), r);
        }
        assert!(CoeffRing::parse("Zmod:1").is_err());
    }

    #[test]
    fn val5_convention() {
        assert_eq!(val5(&BigInt::from(125)), Some(3));
        assert_eq!(val5(&BigInt::from(-50)), Some(2));
        assert_eq!(val5(&BigInt::from(12)), Some(0));
        assert_eq!(val5(&BigInt::zero()), None);
    }
}

//! Symbolic eta-quotients on Γ₀(N): modularity conditions, cusp
//! enumeration, exact cusp orders, order bounds under U₅, and q-expansion.
//!
//! An eta-quotient is a finite product ∏_{δ|N} η(δz)^{r_δ}. Whether it is a
//! modular function, and its vanishing order at each cusp c/d, are decided
//! by exact rational arithmetic on the exponents alone; the q-expansion is
//! only ever needed at i∞.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qseries::{euler_factor, QSeries};
use crate::ring::CoeffRing;

/// ∏_{δ|N} η(δz)^{r_δ} with every δ dividing the level and no zero
/// exponents stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u64,
    exps: BTreeMap<u64, i64>,
}

/// A cusp c/d of Γ₀(N) with d | N and gcd(c, d) = 1. The cusp 0 is 0/1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cusp {
    pub num: i64,
    pub den: u64,
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 && self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Result of the weight/divisibility modularity test.
#[derive(Clone, Debug)]
pub struct ModularityCheck {
    /// Half the exponent sum.
    pub weight: BigRational,
    /// Σ δ·r_δ ≡ 0 (mod 24).
    pub cond_upper: bool,
    /// Σ (N/δ)·r_δ ≡ 0 (mod 24).
    pub cond_lower: bool,
    /// ∏ δ^{r_δ} as an exact rational.
    pub s: BigRational,
    /// Weight zero, both divisibility conditions, and s a rational square.
    pub is_modular_function: bool,
}

/// Lower bounds for cusp orders after U₅ (level 50 down to level 10):
/// the raw rational bounds, plus the integer-ceiling view that uses
/// integrality of orders of modular functions.
#[derive(Clone, Debug)]
pub struct U5OrderBounds {
    pub raw: BTreeMap<u64, BigRational>,
    pub ceiled: BTreeMap<u64, BigInt>,
}

impl EtaQuotient {
    /// Build from (δ, r_δ) pairs; δ must divide the level, zero exponents
    /// are dropped.
    pub fn new(level: u64, exps: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        assert!(level >= 1);
        let mut map = BTreeMap::new();
        for (delta, r) in exps {
            if delta == 0 || level % delta != 0 {
                return Err(Error::Parse(format!(
                    "delta {delta} does not divide level {level}"
                )));
            }
            if r != 0 {
                *map.entry(delta).or_insert(0) += r;
            }
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exps: map })
    }

    /// The trivial quotient (constant 1) at the given level.
    pub fn empty(level: u64) -> Self {
        EtaQuotient {
            level,
            exps: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.exps.iter().map(|(&d, &r)| (d, r))
    }

    /// Same exponents viewed at a different (multiple) level.
    pub fn at_level(&self, level: u64) -> Result<Self> {
        EtaQuotient::new(level, self.exps.iter().map(|(&d, &r)| (d, r)))
    }

    /// Pointwise sum of exponents (the product of the two quotients).
    pub fn product(&self, other: &EtaQuotient) -> Result<Self> {
        assert_eq!(self.level, other.level, "levels must agree");
        EtaQuotient::new(
            self.level,
            self.exps
                .iter()
                .chain(other.exps.iter())
                .map(|(&d, &r)| (d, r)),
        )
    }

    /// Σ δ·r_δ (24 times the leading exponent of the q-expansion).
    fn weighted_sum_upper(&self) -> i64 {
        self.exps.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    fn weighted_sum_lower(&self) -> i64 {
        self.exps
            .iter()
            .map(|(&d, &r)| (self.level / d) as i64 * r)
            .sum()
    }

    /// Weight and Newman-style divisibility conditions, plus the membership
    /// criterion for the field of modular functions: weight 0 and
    /// s = ∏ δ^{r_δ} a square of a rational.
    pub fn check_modularity(&self) -> ModularityCheck {
        let rsum: i64 = self.exps.values().sum();
        let weight = BigRational::new(BigInt::from(rsum), BigInt::from(2));
        let cond_upper = self.weighted_sum_upper().rem_euclid(24) == 0;
        let cond_lower = self.weighted_sum_lower().rem_euclid(24) == 0;
        let mut s = BigRational::one();
        for (&d, &r) in &self.exps {
            let d = BigInt::from(d);
            if r >= 0 {
                s *= BigRational::from(d.pow(r as u32));
            } else {
                s /= BigRational::from(d.pow(r.unsigned_abs() as u32));
            }
        }
        let is_modular_function =
            weight.is_zero() && cond_upper && cond_lower && is_rational_square(&s);
        ModularityCheck {
            weight,
            cond_upper,
            cond_lower,
            s,
            is_modular_function,
        }
    }

    /// Exact vanishing order at the cusp c/d:
    /// (N/24) Σ_δ gcd(d,δ)² r_δ / (gcd(d, N/d) d δ).
    /// Depends on d only; cusps with equal denominators share their order.
    pub fn order_at_cusp(&self, cusp: &Cusp) -> Result<BigRational> {
        let n = self.level;
        let d = cusp.den;
        if d == 0 || n % d != 0 {
            return Err(Error::BadCuspDenominator { d, level: n });
        }
        let mut total = BigRational::zero();
        let g_outer = d.gcd(&(n / d));
        for (&delta, &r) in &self.exps {
            let g = d.gcd(&delta);
            let num = BigInt::from(g) * BigInt::from(g) * BigInt::from(r);
            let den = BigInt::from(g_outer) * BigInt::from(d) * BigInt::from(delta);
            total += BigRational::new(num, den);
        }
        Ok(total * BigRational::new(BigInt::from(n), BigInt::from(24)))
    }

    /// Orders at one representative per denominator, keyed by d.
    pub fn order_table(&self) -> Result<BTreeMap<u64, BigRational>> {
        let mut out = BTreeMap::new();
        for d in divisors(self.level) {
            let cusp = Cusp {
                num: if d == 1 { 0 } else { 1 },
                den: d,
            };
            out.insert(d, self.order_at_cusp(&cusp)?);
        }
        Ok(out)
    }

    /// q-expansion to the requested precision. The leading exponent is
    /// Σ δ·r_δ / 24, which must be an integer.
    pub fn expand(&self, prec: i64, ring: &CoeffRing) -> Result<QSeries> {
        let w = self.weighted_sum_upper();
        if w.rem_euclid(24) != 0 {
            return Err(Error::NonIntegralLeadingExponent(w));
        }
        let vmin = w.div_euclid(24);
        let body_prec = prec - vmin;
        if body_prec < 1 {
            return Err(Error::InsufficientPrecision {
                needed: vmin + 1,
                have: prec,
            });
        }
        let mut body = QSeries::one(ring.clone());
        for (&delta, &r) in &self.exps {
            body = body.mul(&euler_factor(delta, r, body_prec, ring))?;
        }
        Ok(body.truncate(body_prec).shift(vmin))
    }

    /// Text format `N; d^r * d^r * ...`, e.g. `50; 25^1 * 50^1 * 1^-1 * 2^-1`.
    pub fn parse(text: &str) -> Result<Self> {
        let (level, rest) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse("expected `N; d^r * ...`".into()))?;
        let level: u64 = level
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad level {level:?}")))?;
        if level == 0 {
            return Err(Error::Parse("level must be positive".into()));
        }
        let rest = rest.trim();
        let mut exps = Vec::new();
        if !rest.is_empty() {
            for factor in rest.split('*') {
                let factor = factor.trim();
                let (d, r) = factor
                    .split_once('^')
                    .ok_or_else(|| Error::Parse(format!("bad factor {factor:?}")))?;
                let d: u64 = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad delta {d:?}")))?;
                let r: i64 = r
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {r:?}")))?;
                exps.push((d, r));
            }
        }
        EtaQuotient::new(level, exps)
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.level)?;
        let mut first = true;
        for (&d, &r) in &self.exps {
            if first {
                write!(f, " {d}^{r}")?;
                first = false;
            } else {
                write!(f, " * {d}^{r}")?;
            }
        }
        Ok(())
    }
}

/// Positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    is_sq(x.numer()) && is_sq(x.denom())
}

/// One representative per Γ₀(N)-equivalence class of cusps: for each d | N
/// there are φ(gcd(d, N/d)) classes, represented by the smallest
/// nonnegative c ≡ ρ (mod gcd(d, N/d)) coprime to d, with 0 written 0/1.
pub fn cusp_representatives(level: u64) -> Vec<Cusp> {
    assert!(level >= 1);
    let mut out = Vec::new();
    for d in divisors(level) {
        let g = d.gcd(&(level / d));
        if d == 1 {
            out.push(Cusp { num: 0, den: 1 });
            continue;
        }
        let mut count = 0;
        let classes = totient(g);
        for rho in 1..=g.max(1) {
            if count == classes {
                break;
            }
            if rho.gcd(&g) != 1 && g != 1 {
                continue;
            }
            // smallest positive c in the class rho mod g with gcd(c, d) = 1
            let mut c = rho;
            while c.gcd(&d) != 1 {
                c += g;
            }
            out.push(Cusp {
                num: c as i64,
                den: d,
            });
            count += 1;
            if g == 1 {
                break;
            }
        }
    }
    out
}

/// Lower bounds for the orders of U₅(f) at the cusps of Γ₀(10), given f's
/// orders at the cusps of Γ₀(50) keyed by denominator.
///
/// Raw bounds: at 0 and 1/2 the min of the two colliding cusps; at 1/5 and
/// 1/10 one fifth of the order at 1/25 resp. 1/50. The ceiled view rounds
/// up to integers, which is valid because orders of modular functions are
/// integral.
pub fn u5_order_bounds(orders50: &BTreeMap<u64, BigRational>) -> Result<U5OrderBounds> {
    let get = |d: u64| -> Result<&BigRational> {
        orders50
            .get(&d)
            .ok_or(Error::BadCuspDenominator { d, level: 50 })
    };
    let fifth = BigRational::new(BigInt::one(), BigInt::from(5));
    let mut raw = BTreeMap::new();
    raw.insert(1, get(1)?.min(get(5)?).clone());
    raw.insert(2, get(2)?.min(get(10)?).clone());
    raw.insert(5, get(25)? * &fifth);
    raw.insert(10, get(50)? * &fifth);
    let ceiled = raw
        .iter()
        .map(|(&d, v)| (d, v.ceil().to_integer()))
        .collect();
    Ok(U5OrderBounds { raw, ceiled })
}

/// The weight-0 quotient η(25z)η(50z)/(η(z)η(2z)) on Γ₀(50): its expansion
/// is q³ Σ a(n)qⁿ with a(n) the cubic partition numbers.
pub fn cubic_carrier() -> EtaQuotient {
    EtaQuotient::new(50, [(25, 1), (50, 1), (1, -1), (2, -1)]).unwrap()
}

/// The Hauptmodul η²(5z)η²(10z)/(η²(z)η²(2z)) generating the function
/// field of the genus-zero curve X₀(10).
pub fn hauptmodul() -> EtaQuotient {
    EtaQuotient::new(10, [(5, 2), (10, 2), (1, -2), (2, -2)]).unwrap()
}

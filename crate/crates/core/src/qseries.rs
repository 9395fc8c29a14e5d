//! Truncated Laurent series in q with exact coefficients.
//!
//! A [`QSeries`] stores the coefficients of q^n for `vmin <= n < prec` and
//! asserts nothing beyond `prec`. Every operation propagates the tightest
//! provable validity bound, so an identity that holds "within the window"
//! is a real statement, not an artifact of silent truncation. Values are
//! immutable; all operations are pure.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::CoeffRing;

/// Sentinel for "valid at every exponent": the zero series and exactly-known
/// polynomials (monomials, finite eta-expansion numerators, ...).
pub const PREC_INF: i64 = i64::MAX;

/// Exponent/precision addition where `PREC_INF` absorbs.
fn exp_plus(a: i64, b: i64) -> i64 {
    if a == PREC_INF || b == PREC_INF {
        PREC_INF
    } else {
        a + b
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    ring: CoeffRing,
    /// Exponent of the first stored coefficient. Equals `prec` for the zero
    /// series (empty window).
    vmin: i64,
    /// Dense coefficients for exponents `vmin, vmin+1, ...`. For finite
    /// `prec` the length is exactly `prec - vmin`; for `PREC_INF` trailing
    /// zeros are trimmed and the tail is genuinely zero.
    coeffs: Vec<BigInt>,
    /// Exclusive validity bound: coefficients are asserted correct for
    /// `n < prec` only.
    prec: i64,
}

impl QSeries {
    /// The zero series, valid at every exponent.
    pub fn zero(ring: CoeffRing) -> Self {
        QSeries {
            ring,
            vmin: PREC_INF,
            coeffs: Vec::new(),
            prec: PREC_INF,
        }
    }

    /// Zero within the window below `prec`; nothing is claimed beyond.
    fn zero_below(ring: CoeffRing, prec: i64) -> Self {
        QSeries {
            ring,
            vmin: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// The constant 1, exactly known.
    pub fn one(ring: CoeffRing) -> Self {
        Self::monomial(ring, BigInt::one(), 0)
    }

    /// `c * q^n`, exactly known.
    pub fn monomial(ring: CoeffRing, c: impl Into<BigInt>, n: i64) -> Self {
        let c = ring.normalize(c.into());
        if c.is_zero() {
            return Self::zero(ring);
        }
        QSeries {
            ring,
            vmin: n,
            coeffs: vec![c],
            prec: PREC_INF,
        }
    }

    /// Series with the given coefficients at `vmin, vmin+1, ...`, valid
    /// below `prec`. Missing trailing coefficients are zero. Panics if the
    /// coefficients overrun `prec`.
    pub fn from_coeffs(
        ring: CoeffRing,
        vmin: i64,
        coeffs: Vec<impl Into<BigInt>>,
        prec: i64,
    ) -> Self {
        let coeffs: Vec<BigInt> = coeffs
            .into_iter()
            .map(|c| ring.normalize(c.into()))
            .collect();
        if prec != PREC_INF {
            assert!(
                vmin + coeffs.len() as i64 <= prec,
                "coefficients overrun prec"
            );
        }
        Self::canonical(ring, vmin, coeffs, prec)
    }

    /// Canonical form: leading zeros stripped (advancing `vmin`), finite
    /// windows padded dense to `prec`, infinite ones trailing-trimmed.
    fn canonical(ring: CoeffRing, vmin: i64, mut coeffs: Vec<BigInt>, prec: i64) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                if prec == PREC_INF {
                    Self::zero(ring)
                } else {
                    Self::zero_below(ring, prec)
                }
            }
            Some(k) => {
                coeffs.drain(..k);
                let vmin = vmin + k as i64;
                if prec == PREC_INF {
                    let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                    coeffs.truncate(last + 1);
                } else {
                    coeffs.resize((prec - vmin) as usize, BigInt::zero());
                }
                QSeries {
                    ring,
                    vmin,
                    coeffs,
                    prec,
                }
            }
        }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the series (exponent of the nonzero leading term), `None`
    /// for zero.
    pub fn vmin(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.vmin)
        }
    }

    /// Window start for precision bookkeeping; for the zero series this is
    /// its `prec` (the window is empty).
    fn evmin(&self) -> i64 {
        self.vmin
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exactly_known(&self) -> bool {
        self.prec == PREC_INF
    }

    /// Coefficient of q^n. Below the leading term this is genuinely zero;
    /// at or above `prec` it is an error, never a silent zero.
    pub fn coeff(&self, n: i64) -> Result<BigInt> {
        if n >= self.prec {
            return Err(Error::OutOfWindow { n, prec: self.prec });
        }
        if self.is_zero() || n < self.vmin {
            return Ok(BigInt::zero());
        }
        let idx = (n - self.vmin) as usize;
        Ok(self.coeffs.get(idx).cloned().unwrap_or_else(BigInt::zero))
    }

    /// Coefficient of q^n assuming n is in window (zero below vmin).
    fn coeff_ref(&self, n: i64) -> Option<&BigInt> {
        if self.is_zero() || n < self.vmin {
            return None;
        }
        self.coeffs.get((n - self.vmin) as usize)
    }

    pub fn add(&self, g: &QSeries) -> Result<QSeries> {
        self.ring.check_same(&g.ring)?;
        let prec = self.prec.min(g.prec);
        let vmin = self.evmin().min(g.evmin());
        if prec == PREC_INF && vmin == PREC_INF {
            return Ok(QSeries::zero(self.ring.clone()));
        }
        if vmin >= prec {
            return Ok(QSeries::zero_below(self.ring.clone(), prec));
        }
        let hi = if prec == PREC_INF {
            // exactly-known operands: the window covers every stored term
            [self, g]
                .into_iter()
                .filter(|s| !s.is_zero())
                .map(|s| s.vmin + s.coeffs.len() as i64)
                .max()
                .expect("at least one operand is nonzero here")
        } else {
            prec
        };
        let mut out = Vec::with_capacity((hi - vmin) as usize);
        for n in vmin..hi {
            let a = self.coeff_ref(n).cloned().unwrap_or_else(BigInt::zero);
            let b = g.coeff_ref(n).cloned().unwrap_or_else(BigInt::zero);
            out.push(self.ring.add(&a, &b));
        }
        Ok(QSeries::canonical(self.ring.clone(), vmin, out, prec))
    }

    pub fn sub(&self, g: &QSeries) -> Result<QSeries> {
        self.add(&g.neg())
    }

    pub fn neg(&self) -> QSeries {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        QSeries {
            ring: self.ring.clone(),
            vmin: self.vmin,
            coeffs,
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        let c = self.ring.normalize(c.clone());
        if c.is_zero() {
            return if self.prec == PREC_INF {
                QSeries::zero(self.ring.clone())
            } else {
                QSeries::zero_below(self.ring.clone(), self.prec)
            };
        }
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(x, &c)).collect();
        QSeries::canonical(self.ring.clone(), self.vmin, coeffs, self.prec)
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i64) -> QSeries {
        QSeries {
            ring: self.ring.clone(),
            vmin: exp_plus(self.vmin, k),
            coeffs: self.coeffs.clone(),
            prec: exp_plus(self.prec, k),
        }
    }

    /// Cauchy product. Result `prec` is
    /// `min(f.prec + g.vmin, g.prec + f.vmin)` -- the tightest bound the two
    /// windows support.
    pub fn mul(&self, g: &QSeries) -> Result<QSeries> {
        self.ring.check_same(&g.ring)?;
        let prec = exp_plus(self.prec, g.evmin()).min(exp_plus(g.prec, self.evmin()));
        if self.is_zero() || g.is_zero() {
            return Ok(if prec == PREC_INF {
                QSeries::zero(self.ring.clone())
            } else {
                QSeries::zero_below(self.ring.clone(), prec)
            });
        }
        let vmin = self.vmin + g.vmin;
        let len = if prec == PREC_INF {
            self.coeffs.len() + g.coeffs.len() - 1
        } else {
            (prec - vmin) as usize
        };
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        if !self.ring.is_exact() {
            for c in &mut out {
                *c = self.ring.normalize(std::mem::take(c));
            }
        }
        Ok(QSeries::canonical(self.ring.clone(), vmin, out, prec))
    }

    /// Multiplicative inverse, valid to `min(prec, what f's window proves)`.
    /// The leading coefficient must be a unit of the ring.
    pub fn inverse(&self, prec: i64) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NonUnitLeading(
                "0".into(),
                self.ring.to_string(),
            ));
        }
        let lead_inv = self.ring.inv(&self.coeffs[0])?;
        let vmin = -self.vmin;
        let provable = if self.prec == PREC_INF {
            prec
        } else {
            // window length is preserved: prec - vmin terms of f give as
            // many terms of 1/f
            prec.min(self.prec - 2 * self.vmin)
        };
        if provable == PREC_INF {
            return Err(Error::InsufficientPrecision {
                needed: PREC_INF,
                have: self.prec,
            });
        }
        if provable <= vmin {
            return Err(Error::InsufficientPrecision {
                needed: vmin + 1,
                have: provable,
            });
        }
        let nterms = (provable - vmin) as usize;
        let mut body = Vec::with_capacity(nterms);
        body.push(lead_inv.clone());
        for n in 1..nterms {
            let mut s = BigInt::zero();
            for (k, b) in body.iter().enumerate().take(n).skip(n.saturating_sub(self.coeffs.len() - 1)) {
                let a = &self.coeffs[n - k];
                if !a.is_zero() && !b.is_zero() {
                    s += a * b;
                }
            }
            body.push(self.ring.mul(&self.ring.neg(&s), &lead_inv));
        }
        Ok(QSeries::canonical(self.ring.clone(), vmin, body, provable))
    }

    /// f^e by square-and-multiply; `f^0 = 1`. Negative exponents need a
    /// unit leading coefficient and a finite window to invert into.
    pub fn int_pow(&self, e: i64) -> Result<QSeries> {
        if e == 0 {
            return Ok(QSeries::one(self.ring.clone()));
        }
        let base = if e < 0 {
            self.inverse(PREC_INF)?
        } else {
            self.clone()
        };
        let mut acc: Option<QSeries> = None;
        let mut sq = base;
        let mut k = e.unsigned_abs();
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.mul(&sq)?;
        }
        Ok(acc.unwrap())
    }

    /// The U_p operator: coefficient of q^n in the result is the
    /// coefficient of q^{pn} here.
    pub fn u_p(&self, p: u32) -> QSeries {
        assert!(p >= 2, "U_p needs p >= 2");
        let p = p as i64;
        let prec = if self.prec == PREC_INF {
            PREC_INF
        } else {
            (self.prec - 1).div_euclid(p) + 1
        };
        if self.is_zero() {
            return if prec == PREC_INF {
                QSeries::zero(self.ring.clone())
            } else {
                QSeries::zero_below(self.ring.clone(), prec)
            };
        }
        let vmin = ceil_div(self.vmin, p);
        let hi = if prec == PREC_INF {
            (self.vmin + self.coeffs.len() as i64 - 1).div_euclid(p) + 1
        } else {
            prec
        };
        let mut out = Vec::with_capacity((hi - vmin).max(0) as usize);
        for n in vmin..hi {
            out.push(
                self.coeff_ref(p * n)
                    .cloned()
                    .unwrap_or_else(BigInt::zero),
            );
        }
        QSeries::canonical(self.ring.clone(), vmin, out, prec)
    }

    /// Clip the validity window to `prec` (never extends it).
    pub fn truncate(&self, prec: i64) -> QSeries {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() || prec <= self.vmin {
            return QSeries::zero_below(self.ring.clone(), prec);
        }
        let keep = ((prec - self.vmin) as usize).min(self.coeffs.len());
        let mut coeffs = self.coeffs[..keep].to_vec();
        coeffs.resize((prec - self.vmin) as usize, BigInt::zero());
        QSeries::canonical(self.ring.clone(), self.vmin, coeffs, prec)
    }

    /// Reduce an exact-integer series into a residue ring. (Residue series
    /// cannot be lifted back.)
    pub fn to_ring(&self, ring: &CoeffRing) -> Result<QSeries> {
        match (&self.ring, ring) {
            (a, b) if a == b => Ok(self.clone()),
            (CoeffRing::Exact, CoeffRing::Mod(_)) => {
                let coeffs: Vec<BigInt> =
                    self.coeffs.iter().map(|c| ring.normalize(c.clone())).collect();
                Ok(QSeries::canonical(ring.clone(), self.vmin, coeffs, self.prec))
            }
            (a, b) => Err(Error::RingMismatch(a.to_string(), b.to_string())),
        }
    }

    /// First exponent in `[lo, hi)` where the two series differ, if any.
    /// Both windows must cover the range.
    pub fn first_difference(&self, other: &QSeries, lo: i64, hi: i64) -> Result<Option<i64>> {
        for n in lo..hi {
            if self.coeff(n)? != other.coeff(n)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Wire format: a header `vmin=<v> prec=<p|inf> ring=<Z|Zmod:m>`, then
    /// one `n<TAB>coefficient` line per nonzero term. Round-trips exactly.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let prec = if self.prec == PREC_INF {
            "inf".to_string()
        } else {
            self.prec.to_string()
        };
        let vmin = if self.is_zero() { 0 } else { self.vmin };
        let _ = writeln!(s, "vmin={} prec={} ring={}", vmin, prec, self.ring);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let _ = writeln!(s, "{}\t{}", self.vmin + i as i64, c);
            }
        }
        s
    }

    pub fn deserialize(text: &str) -> Result<QSeries> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty series".into()))?;
        let mut vmin: Option<i64> = None;
        let mut prec: Option<i64> = None;
        let mut ring: Option<CoeffRing> = None;
        for field in header.split_whitespace() {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
            match key {
                "vmin" => {
                    vmin = Some(val.parse().map_err(|_| Error::Parse(format!("bad vmin {val:?}")))?)
                }
                "prec" => {
                    prec = Some(if val == "inf" {
                        PREC_INF
                    } else {
                        val.parse().map_err(|_| Error::Parse(format!("bad prec {val:?}")))?
                    })
                }
                "ring" => ring = Some(CoeffRing::parse(val)?),
                _ => return Err(Error::Parse(format!("unknown header field {key:?}"))),
            }
        }
        let (vmin, prec, ring) = match (vmin, prec, ring) {
            (Some(v), Some(p), Some(r)) => (v, p, r),
            _ => return Err(Error::Parse("header must have vmin, prec, ring".into())),
        };
        let mut terms: Vec<(i64, BigInt)> = Vec::new();
        for line in lines {
            let (n, c) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("bad term line {line:?}")))?;
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {n:?}")))?;
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            if n < vmin || (prec != PREC_INF && n >= prec) {
                return Err(Error::Parse(format!("term q^{n} outside window")));
            }
            terms.push((n, c));
        }
        if terms.is_empty() {
            return Ok(if prec == PREC_INF {
                QSeries::zero(ring)
            } else {
                QSeries::zero_below(ring, prec)
            });
        }
        let hi = terms.iter().map(|(n, _)| *n).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - vmin + 1) as usize];
        for (n, c) in terms {
            coeffs[(n - vmin) as usize] = c;
        }
        if prec != PREC_INF {
            coeffs.resize((prec - vmin) as usize, BigInt::zero());
        }
        Ok(QSeries::canonical(ring, vmin, coeffs, prec))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (i, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let n = self.vmin + i as i64;
                if first {
                    first = false;
                } else {
                    write!(f, " + ")?;
                }
                match n {
                    0 => write!(f, "{c}")?,
                    1 if c.is_one() => write!(f, "q")?,
                    1 => write!(f, "{c}*q")?,
                    _ if c.is_one() => write!(f, "q^{n}")?,
                    _ => write!(f, "{c}*q^{n}")?,
                }
            }
            if first {
                write!(f, "0")?;
            }
        }
        if self.prec != PREC_INF {
            write!(f, " + O(q^{})", self.prec)?;
        }
        Ok(())
    }
}

/// Expansion of the Euler product `prod_{n>=1} (1 - q^{delta*n})^r`, valid
/// for `0 <= n < prec`.
///
/// The r = 1 case is the pentagonal number theorem (O(sqrt(prec/delta))
/// nonzero terms); r = -1 inverts it; larger |r| goes through
/// square-and-multiply on those.
pub fn euler_factor(delta: u64, r: i64, prec: i64, ring: &CoeffRing) -> QSeries {
    assert!(delta >= 1, "delta must be positive");
    assert!(prec >= 1, "prec must be at least 1");
    if r == 0 {
        return QSeries::one(ring.clone()).truncate(prec);
    }
    let base = pentagonal(delta, prec, ring);
    let base = if r < 0 {
        base.inverse(prec)
            .expect("pentagonal series has unit leading coefficient")
    } else {
        base
    };
    base.int_pow(r.abs())
        .expect("positive power cannot fail")
        .truncate(prec)
}

/// Pentagonal-number-theorem expansion of `prod (1 - q^{delta*n})`.
fn pentagonal(delta: u64, prec: i64, ring: &CoeffRing) -> QSeries {
    let mut coeffs = vec![BigInt::zero(); prec as usize];
    let delta = delta as i64;
    let mut k: i64 = 0;
    loop {
        let mut placed = false;
        let signs = if k == 0 { vec![0] } else { vec![k, -k] };
        for kk in signs {
            let g = kk * (3 * kk - 1) / 2;
            let e = delta * g;
            if e < prec {
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                let idx = e as usize;
                coeffs[idx] = ring.add(&coeffs[idx], &BigInt::from(sign));
                placed = true;
            }
        }
        if k > 0 && !placed {
            break;
        }
        k += 1;
    }
    QSeries::canonical(ring.clone(), 0, coeffs, prec)
}

/// Generalized pentagonal exponents g with `delta*g < prec`, with signs,
/// excluding g = 0. Shared with the sparse recurrences in `cubic`.
pub(crate) fn pentagonal_terms(delta: u64, prec: i64) -> Vec<(i64, i64)> {
    let delta = delta as i64;
    let mut out = Vec::new();
    let mut k: i64 = 1;
    loop {
        let mut placed = false;
        for kk in [k, -k] {
            let e = delta * (kk * (3 * kk - 1) / 2);
            if e < prec {
                out.push((e, if kk.rem_euclid(2) == 0 { 1 } else { -1 }));
                placed = true;
            }
        }
        if !placed {
            break;
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

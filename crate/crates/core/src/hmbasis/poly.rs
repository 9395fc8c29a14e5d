//! Polynomials in the Hauptmodul H with exact integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// Σ c_j H^j with trailing zeros trimmed. The j = 0 entry is permitted
/// (several U-images of negative powers have one).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HmPoly {
    coeffs: Vec<BigInt>,
}

impl HmPoly {
    pub fn zero() -> Self {
        HmPoly::default()
    }

    pub fn one() -> Self {
        HmPoly::from_coeffs(vec![1])
    }

    /// The Hauptmodul itself, H^1.
    pub fn gen() -> Self {
        HmPoly::from_coeffs(vec![0, 1])
    }

    pub fn from_coeffs(coeffs: Vec<impl Into<BigInt>>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        HmPoly { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut coeffs = Vec::new();
        for (j, c) in terms {
            if coeffs.len() <= j {
                coeffs.resize(j + 1, BigInt::zero());
            }
            coeffs[j] += c;
        }
        HmPoly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest j with a nonzero coefficient, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest j with a nonzero coefficient, `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff_ref(&self, j: usize) -> Option<&BigInt> {
        self.coeffs.get(j).filter(|c| !c.is_zero())
    }

    /// Nonzero terms, ascending in j.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, g: &HmPoly) -> HmPoly {
        let n = self.coeffs.len().max(g.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            out.push(self.coeff(j) + g.coeff(j));
        }
        HmPoly::from_coeffs(out)
    }

    pub fn sub(&self, g: &HmPoly) -> HmPoly {
        self.add(&g.neg())
    }

    pub fn neg(&self) -> HmPoly {
        HmPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> HmPoly {
        let c = c.into();
        HmPoly::from_coeffs(self.coeffs.iter().map(|x| x * &c).collect::<Vec<_>>())
    }

    pub fn mul(&self, g: &HmPoly) -> HmPoly {
        if self.is_zero() || g.is_zero() {
            return HmPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        HmPoly::from_coeffs(out)
    }

    /// Divide every coefficient by n, which must divide exactly.
    pub fn div_exact_int(&self, n: impl Into<BigInt>) -> Result<HmPoly> {
        let n = n.into();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(&n);
            if !r.is_zero() {
                return Err(Error::InexactDivision(n.to_string(), c.to_string()));
            }
            out.push(q);
        }
        Ok(HmPoly::from_coeffs(out))
    }

    /// Exact polynomial division from the low end; errors unless the
    /// quotient is again a polynomial with integer coefficients.
    pub fn div_exact(&self, den: &HmPoly) -> Result<HmPoly> {
        if den.is_zero() {
            return Err(Error::InexactDivision("0".into(), self.to_string()));
        }
        let jd = den.order().unwrap();
        let dlead = den.coeff(jd);
        let mut rem = self.clone();
        let mut quot: Vec<(usize, BigInt)> = Vec::new();
        while !rem.is_zero() {
            let jn = rem.order().unwrap();
            if jn < jd {
                return Err(Error::InexactDivision(den.to_string(), self.to_string()));
            }
            let (q, r) = rem.coeff(jn).div_rem(&dlead);
            if r.is_zero() && !q.is_zero() {
                rem = rem.sub(&den.mul(&HmPoly::from_terms([(jn - jd, q.clone())])));
                quot.push((jn - jd, q));
            } else {
                return Err(Error::InexactDivision(den.to_string(), self.to_string()));
            }
        }
        Ok(HmPoly::from_terms(quot))
    }

    /// Evaluate at a q-series (Horner). With an expansion of the Hauptmodul
    /// (vmin 1), the result is valid at least as far as the expansion.
    pub fn eval(&self, h: &QSeries) -> Result<QSeries> {
        let ring = h.ring().clone();
        let Some(deg) = self.degree() else {
            return Ok(QSeries::zero(ring));
        };
        let mut acc = QSeries::monomial(ring.clone(), self.coeff(deg), 0);
        for j in (0..deg).rev() {
            acc = acc.mul(h)?;
            let c = self.coeff(j);
            if !c.is_zero() {
                acc = acc.add(&QSeries::monomial(ring.clone(), c, 0))?;
            }
        }
        Ok(acc)
    }

    /// 5-adic valuation of the coefficient of H^j (`None` = infinite).
    pub fn coeff_val5(&self, j: usize) -> Option<u64> {
        crate::ring::val5(&self.coeff(j))
    }
}

impl fmt::Display for HmPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.terms() {
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            match j {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "H")?,
                1 => write!(f, "{mag}*H")?,
                _ if mag.is_one() => write!(f, "H^{j}")?,
                _ => write!(f, "{mag}*H^{j}")?,
            }
        }
        Ok(())
    }
}

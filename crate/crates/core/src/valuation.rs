//! 5-adic valuations of the U-operator matrices and the W-vector
//! iteration whose entrywise divisibility is the congruence theorem.
//!
//! The matrix entries satisfy floor-type valuation lower bounds; those are
//! theorems, so a violation fails the build loudly. The printed valuation
//! table shipped for rows 1..=5 is compared cell-by-cell, with mismatches
//! reported as warnings (the recomputed values win).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::cubic;
use crate::error::{Error, Result};
use crate::etaquot::hauptmodul;
use crate::hmbasis::{HmPoly, MatrixKind, UMatrix};
use crate::qseries::{euler_factor, QSeries};
use crate::report::{Report, ReportLine, Status};
use crate::ring::{val5, CoeffRing};

/// A 5-adic valuation: the exponent of 5, with zero mapped to infinity so
/// that it satisfies every lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Val5 {
    Finite(u64),
    Infinite,
}

impl Val5 {
    pub fn of(m: &BigInt) -> Val5 {
        match val5(m) {
            Some(e) => Val5::Finite(e),
            None => Val5::Infinite,
        }
    }

    pub fn min(self, other: Val5) -> Val5 {
        match (self, other) {
            (Val5::Infinite, v) | (v, Val5::Infinite) => v,
            (Val5::Finite(a), Val5::Finite(b)) => Val5::Finite(a.min(b)),
        }
    }

    /// Valuation of a product adds.
    pub fn plus(self, other: Val5) -> Val5 {
        match (self, other) {
            (Val5::Infinite, _) | (_, Val5::Infinite) => Val5::Infinite,
            (Val5::Finite(a), Val5::Finite(b)) => Val5::Finite(a + b),
        }
    }

    /// Does the valuation meet a (possibly negative) lower bound?
    pub fn meets(self, bound: i64) -> bool {
        match self {
            Val5::Infinite => true,
            Val5::Finite(v) => bound <= 0 || v >= bound as u64,
        }
    }
}

impl fmt::Display for Val5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val5::Finite(v) => write!(f, "{v}"),
            Val5::Infinite => write!(f, "inf"),
        }
    }
}

/// Largest e with 5^e | m, infinite for zero.
pub fn pval5(m: &BigInt) -> Val5 {
    Val5::of(m)
}

/// Valuation lower bound for an entry of the given matrix family:
/// floor((3j - i)/2) for U(H^i) rows, floor((5j - i - 1)/6) for
/// U(C·H^i) rows.
pub fn entry_bound(kind: MatrixKind, i: usize, j: usize) -> i64 {
    let (i, j) = (i as i64, j as i64);
    match kind {
        MatrixKind::Hauptmodul => (3 * j - i).div_euclid(2),
        MatrixKind::Carrier => (5 * j - i - 1).div_euclid(6),
    }
}

/// Printed valuation table for the U(H^i) matrix, rows 1..=5.
/// The third field is the printed value; the fourth notes a printed column
/// index that is outside the row's support and was remapped (the printed
/// "j=31" entry of row 3 can only be column 11).
const PRINTED_VAL5_TABLE: &[(usize, usize, u64, Option<usize>)] = &[
    (1, 1, 1, None),
    (1, 2, 2, None),
    (1, 3, 4, None),
    (1, 4, 6, None),
    (1, 5, 7, None),
    (2, 1, 0, None),
    (2, 2, 2, None),
    (2, 3, 4, None),
    (2, 4, 5, None),
    (2, 5, 7, None),
    (2, 6, 9, None),
    (2, 7, 10, None),
    (2, 8, 12, None),
    (2, 9, 14, None),
    (2, 10, 15, None),
    (3, 1, 0, None),
    (3, 2, 2, None),
    (3, 3, 4, None),
    (3, 4, 5, None),
    (3, 5, 7, None),
    (3, 6, 9, None),
    (3, 7, 10, None),
    (3, 8, 12, None),
    (3, 9, 15, None),
    (3, 10, 15, None),
    (3, 11, 18, Some(31)),
    (3, 12, 18, None),
    (3, 13, 20, None),
    (3, 14, 22, None),
    (3, 15, 23, None),
    (4, 1, 0, None),
    (4, 2, 1, None),
    (4, 3, 3, None),
    (4, 4, 5, None),
    (4, 5, 6, None),
    (4, 6, 9, None),
    (4, 7, 10, None),
    (4, 8, 13, None),
    (4, 9, 14, None),
    (4, 10, 15, None),
    (4, 11, 16, None),
    (4, 12, 18, None),
    (4, 13, 20, None),
    (4, 14, 20, None),
    (4, 15, 23, None),
    (4, 16, 25, None),
    (4, 17, 26, None),
    (4, 18, 28, None),
    (4, 19, 30, None),
    (4, 20, 31, None),
    (5, 1, 0, None),
    (5, 2, 2, None),
    (5, 3, 4, None),
    (5, 4, 5, None),
    (5, 5, 7, None),
    (5, 6, 9, None),
    (5, 7, 10, None),
    (5, 8, 12, None),
    (5, 9, 14, None),
    (5, 10, 14, None),
    (5, 11, 18, None),
    (5, 12, 18, None),
    (5, 13, 19, None),
    (5, 14, 21, None),
    (5, 15, 25, None),
    (5, 16, 24, None),
    (5, 17, 26, None),
    (5, 18, 28, None),
    (5, 19, 29, None),
    (5, 20, 32, None),
    (5, 21, 34, None),
    (5, 22, 35, None),
    (5, 23, 37, None),
    (5, 24, 39, None),
    (5, 25, 39, None),
];

/// Check the entrywise valuation bound on every supported cell of rows
/// 1..=i_max. For the U(H^i) matrix the printed table for rows 1..=5 is
/// additionally diffed (diffs warn, bound violations fail).
pub fn check_matrix_bounds(matrix: &UMatrix, i_max: usize) -> Result<Report> {
    if matrix.max_row() < i_max {
        return Err(Error::InsufficientMatrixRows {
            needed: i_max,
            have: matrix.max_row(),
        });
    }
    let kind = matrix.kind();
    let label = format!("LEMMA {}", kind.token());
    let mut report = Report::new();
    for i in 1..=i_max {
        let row = matrix.row(i);
        for j in kind.support_low(i)..=kind.degree_bound(i) {
            let pi = Val5::of(&row.coeff(j));
            let bound = entry_bound(kind, i, j);
            let status = if pi.meets(bound) {
                Status::Ok
            } else {
                Status::Violation
            };
            report.push(
                ReportLine::new(label.clone(), status)
                    .field("i", i)
                    .field("j", j)
                    .field("pi", pi)
                    .field("bound", bound),
            );
        }
    }
    if kind == MatrixKind::Hauptmodul {
        for &(i, j, printed, remapped) in PRINTED_VAL5_TABLE {
            if i > i_max {
                continue;
            }
            let pi = Val5::of(&matrix.entry(i, j));
            let matches = pi == Val5::Finite(printed);
            let mut line = ReportLine::new(
                label.clone(),
                if matches { Status::Ok } else { Status::TableDiff },
            )
            .field("i", i)
            .field("j", j)
            .field("pi", pi)
            .field("bound", entry_bound(kind, i, j))
            .field("printed", printed);
            if let Some(orig) = remapped {
                line = line.field("printed_j", orig);
            }
            report.push(line);
        }
    }
    Ok(report)
}

/// Row vector in the H basis; entry j is the coefficient of H^j, j >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WVector {
    pub k: u32,
    entries: Vec<BigInt>,
}

impl WVector {
    fn new(k: u32, mut entries: Vec<BigInt>) -> Self {
        while entries.last().is_some_and(Zero::is_zero) {
            entries.pop();
        }
        WVector { k, entries }
    }

    /// First vector of the iteration: the reduced U-image of the carrier.
    pub fn seed() -> Self {
        WVector::new(1, vec![BigInt::from(3), BigInt::from(25), BigInt::from(125)])
    }

    /// Entry at column j (1-indexed), zero beyond support.
    pub fn entry(&self, j: usize) -> BigInt {
        assert!(j >= 1);
        self.entries
            .get(j - 1)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest column with a nonzero entry (0 for the zero vector).
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(idx, c)| (idx + 1, c))
            .filter(|(_, c)| !c.is_zero())
    }

    /// The vector as a polynomial in H.
    pub fn to_poly(&self) -> HmPoly {
        HmPoly::from_terms(self.iter().map(|(j, c)| (j, c.clone())))
    }

    /// Row-vector times matrix, exactly.
    fn mul_matrix(&self, m: &UMatrix, k: u32) -> Result<WVector> {
        if self.support() > m.max_row() {
            return Err(Error::InsufficientMatrixRows {
                needed: self.support(),
                have: m.max_row(),
            });
        }
        let width = m.kind().degree_bound(self.support());
        let mut out = vec![BigInt::zero(); width];
        for (i, w) in self.iter() {
            for (j, c) in m.row(i).terms() {
                out[j - 1] += w * c;
            }
        }
        Ok(WVector::new(k, out))
    }
}

/// Iterate the W vectors to k_max: each step multiplies by the U(H^i)
/// matrix (even k) or the U(C·H^i) matrix (odd k >= 3).
pub fn w_iterate(
    hm_matrix: &UMatrix,
    carrier_matrix: &UMatrix,
    k_max: u32,
) -> Result<Vec<WVector>> {
    assert!(k_max >= 1);
    assert_eq!(hm_matrix.kind(), MatrixKind::Hauptmodul);
    assert_eq!(carrier_matrix.kind(), MatrixKind::Carrier);
    let mut out = vec![WVector::seed()];
    for k in 2..=k_max {
        let prev = out.last().unwrap();
        let next = if k % 2 == 0 {
            prev.mul_matrix(hm_matrix, k)?
        } else {
            prev.mul_matrix(carrier_matrix, k)?
        };
        out.push(next);
    }
    Ok(out)
}

/// Matrix rows needed (hauptmodul-kind, carrier-kind) to push the
/// iteration to k_max, from the support growth 3 -> 15 -> 78 -> 390 -> ...
pub fn rows_needed(k_max: u32) -> (usize, usize) {
    let mut support = 3usize;
    let (mut hm_rows, mut carrier_rows) = (1, 1);
    for k in 2..=k_max {
        if k % 2 == 0 {
            hm_rows = hm_rows.max(support);
            support *= 5;
        } else {
            carrier_rows = carrier_rows.max(support);
            support = 5 * support + 3;
        }
    }
    (hm_rows, carrier_rows)
}

/// Entrywise valuation bounds along the iteration:
/// π(w_j) >= α + floor(j/2) at k = 2α+1 and
/// π(w_j) >= α + 1 + floor((j-1)/2) at k = 2α+2. The even-step bound at
/// j = 1 is divisibility by 5^{α+1}, so each even step also gets a
/// whole-vector divisibility line.
pub fn check_w_bounds(ws: &[WVector], alpha_max: u32) -> Result<Report> {
    let needed = (2 * alpha_max + 2) as usize;
    if ws.len() < needed {
        return Err(Error::InsufficientMatrixRows {
            needed,
            have: ws.len(),
        });
    }
    let mut report = Report::new();
    for alpha in 0..=alpha_max {
        for (k, is_even) in [(2 * alpha + 1, false), (2 * alpha + 2, true)] {
            let w = &ws[(k - 1) as usize];
            assert_eq!(w.k, k);
            for (j, c) in w.iter() {
                let bound = if is_even {
                    alpha as i64 + 1 + (j as i64 - 1).div_euclid(2)
                } else {
                    alpha as i64 + (j as i64).div_euclid(2)
                };
                let pi = Val5::of(c);
                report.push(
                    ReportLine::new(
                        "LEMMA w",
                        if pi.meets(bound) {
                            Status::Ok
                        } else {
                            Status::Violation
                        },
                    )
                    .field("k", k)
                    .field("j", j)
                    .field("pi", pi)
                    .field("bound", bound),
                );
            }
        }
        let even = &ws[(2 * alpha + 2 - 1) as usize];
        let modulus = BigInt::from(5).pow(alpha + 1);
        let divisible = even.iter().all(|(_, c)| c.mod_floor(&modulus).is_zero());
        report.push(
            ReportLine::new(
                "WDIV",
                if divisible {
                    Status::Ok
                } else {
                    Status::Violation
                },
            )
            .field("k", 2 * alpha + 2)
            .field("mod", &modulus),
        );
    }
    Ok(report)
}

/// Cross-representation identity for an even step: the vector read as a
/// polynomial in H, evaluated at the q-expansion of H, equals
/// (Σ_{n>=1} a(5^{2α+2}·n − δ') q^n) · ∏(1-q^n)(1-q^{2n})
/// coefficientwise through the window.
pub fn check_cross_representation(ws: &[WVector], alpha: u32, window: i64) -> Result<Report> {
    assert!(window >= 10);
    let k = 2 * alpha + 2;
    let w = ws
        .get((k - 1) as usize)
        .ok_or(Error::InsufficientMatrixRows {
            needed: k as usize,
            have: ws.len(),
        })?;
    let ring = CoeffRing::Exact;
    let prec = window + 1;
    let h = hauptmodul().expand(prec, &ring)?;
    let lhs = w.to_poly().eval(&h)?;

    let prog = cubic::progression(alpha);
    let stride = usize::try_from(&prog.stride).expect("stride fits usize at desk scale");
    let co = usize::try_from(&prog.co_offset).expect("offset fits usize");
    let n_max = stride * (prec as usize - 1) - co;
    let counts = cubic::cubic_counts(n_max, &ring);
    let sums: Vec<BigInt> = (1..prec as usize)
        .map(|n| counts.a(stride * n - co).clone())
        .collect();
    let series = QSeries::from_coeffs(ring.clone(), 1, sums, prec);
    let kernel = euler_factor(1, 1, prec, &ring).mul(&euler_factor(2, 1, prec, &ring))?;
    let rhs = series.mul(&kernel)?;

    let mut report = Report::new();
    match lhs.first_difference(&rhs, 1, window)? {
        None => report.push(
            ReportLine::new("WCROSS", Status::Ok)
                .field("alpha", alpha)
                .field("window", window),
        ),
        Some(n) => report.push(
            ReportLine::new("WCROSS", Status::Violation)
                .field("alpha", alpha)
                .field("window", window)
                .field("first_diff", n)
                .field("lhs", lhs.coeff(n)?)
                .field("rhs", rhs.coeff(n)?),
        ),
    }
    Ok(report)
}

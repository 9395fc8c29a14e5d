//! Reduction to the Hauptmodul basis and the U-operator coefficient
//! matrices.
//!
//! Weight-0 functions on Γ₀(10) are polynomials in the Hauptmodul H;
//! [`reduce_to_poly`] finds that polynomial by greedy elimination against
//! the q-expansion and certifies it through a guard window. The elementary
//! symmetric functions of the five U-conjugates of H satisfy a five-term
//! recurrence that generates every row U(H^i) and U(C·H^i) from five seed
//! values; [`build_matrix`] runs the recurrence and cross-checks rows
//! against direct q-series reduction. Reference tables ship as fixtures;
//! whenever recomputation disagrees with a printed value, the recomputed
//! value wins and the cell is reported as a TABLE_DIFF warning.

pub mod poly;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::etaquot::{cubic_carrier, hauptmodul};
use crate::qseries::QSeries;
use crate::report::{Report, ReportLine, Status};
use crate::ring::CoeffRing;

pub use poly::HmPoly;

/// Certified coefficients required beyond the last eliminated exponent.
pub const GUARD: i64 = 5;

/// Which family of U-images a matrix holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// Rows are U(H^i): support ceil(i/5) <= j <= 5i.
    Hauptmodul,
    /// Rows are U(C·H^i) with C the cubic carrier: support
    /// ceil(i/5) <= j <= 5i+3.
    Carrier,
}

impl MatrixKind {
    pub fn token(self) -> &'static str {
        match self {
            MatrixKind::Hauptmodul => "h",
            MatrixKind::Carrier => "ch",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(MatrixKind::Hauptmodul),
            "ch" => Ok(MatrixKind::Carrier),
            _ => Err(Error::Parse(format!("unknown matrix kind {s:?}"))),
        }
    }

    pub fn degree_bound(self, i: usize) -> usize {
        match self {
            MatrixKind::Hauptmodul => 5 * i,
            MatrixKind::Carrier => 5 * i + 3,
        }
    }

    pub fn support_low(self, i: usize) -> usize {
        i.div_ceil(5).max(1)
    }
}

/// Greedy reduction of a q-series to a polynomial in the Hauptmodul.
///
/// `h` must be an expansion of the Hauptmodul (vmin 1, leading coefficient
/// 1, exact integers) at least as precise as `f`. Repeatedly subtracts
/// c·H^v at the residual's leading exponent v; succeeds when the residual
/// vanishes identically through at least [`GUARD`] further coefficients.
pub fn reduce_to_poly(f: &QSeries, h: &QSeries, allow_constant: bool) -> Result<HmPoly> {
    if !f.ring().is_exact() || !h.ring().is_exact() {
        return Err(Error::ExactRingRequired(f.ring().to_string()));
    }
    assert_eq!(h.vmin(), Some(1), "basis expansion must have vmin 1");
    assert_eq!(
        h.coeff(1).unwrap(),
        BigInt::from(1),
        "basis expansion must be monic"
    );
    let mut residual = f.clone();
    let mut terms: Vec<(usize, BigInt)> = Vec::new();
    let mut last_v: i64 = -1;
    // incrementally maintained H^v
    let mut pow = QSeries::one(h.ring().clone());
    let mut pow_exp: i64 = 0;
    while !residual.is_zero() {
        let v = residual.vmin().expect("nonzero residual has a vmin");
        if v < 0 || (v == 0 && !allow_constant) {
            return Err(Error::NonzeroResidual(v));
        }
        if residual.prec() != crate::qseries::PREC_INF && v > residual.prec() - GUARD - 1 {
            return Err(Error::InsufficientPrecision {
                needed: v + GUARD + 1,
                have: residual.prec(),
            });
        }
        let c = residual.coeff(v)?;
        while pow_exp < v {
            pow = pow.mul(h)?;
            pow_exp += 1;
        }
        residual = residual.sub(&pow.scale(&c))?;
        terms.push((v as usize, c));
        last_v = v;
    }
    if residual.prec() != crate::qseries::PREC_INF && residual.prec() - last_v - 1 < GUARD {
        return Err(Error::InsufficientPrecision {
            needed: last_v + 1 + GUARD,
            have: residual.prec(),
        });
    }
    Ok(HmPoly::from_terms(terms))
}

/// The elementary symmetric functions e₁..e₅ (as polynomials in H) of the
/// five U-conjugates of the Hauptmodul. They drive the five-term row
/// recurrence; e₅ is H itself and every constant term vanishes.
#[derive(Clone, Debug)]
pub struct ElemSym {
    e: [HmPoly; 5],
}

impl ElemSym {
    /// e_k for k = 1..=5.
    pub fn e(&self, k: usize) -> &HmPoly {
        &self.e[k - 1]
    }
}

/// Reference tables for the symmetric functions, as printed.
fn reference_elem_sym() -> [HmPoly; 5] {
    [
        HmPoly::from_coeffs(vec![0, 175, 3500, 34375, 156250, 390625]),
        HmPoly::from_coeffs(vec![0, -140, -1375, -6250, -15625]),
        HmPoly::from_coeffs(vec![0, 55, 250, 625]),
        HmPoly::from_coeffs(vec![0, -10, -25]),
        HmPoly::from_coeffs(vec![0, 1]),
    ]
}

/// Reference seed tables U(H^i), i = -4..=0, as printed.
fn reference_seeds_hauptmodul() -> [HmPoly; 5] {
    [
        HmPoly::from_coeffs(vec![-210, 0, 0, 0, -78125]),
        HmPoly::from_coeffs(vec![46, 0, 0, -3125]),
        HmPoly::from_coeffs(vec![-2, 0, -125]),
        HmPoly::from_coeffs(vec![-2, -5]),
        HmPoly::one(),
    ]
}

/// Reference seed tables U(C·H^i), i = -4..=0, as printed.
fn reference_seeds_carrier() -> [HmPoly; 5] {
    [
        HmPoly::from_coeffs(vec![-7, 525, 4375, 21875, 15625]),
        HmPoly::from_coeffs(vec![0, -75, -625, -2500]),
        HmPoly::from_coeffs(vec![0, 0, 25]),
        HmPoly::gen(),
        HmPoly::from_coeffs(vec![0, 3, 25, 125]),
    ]
}

/// Hauptmodul expansion sized so that reducing a U₅ image of degree up to
/// `bound` still has its guard window certified.
fn hauptmodul_expansion(bound: usize) -> Result<QSeries> {
    hauptmodul().expand(5 * (bound as i64 + GUARD) + 8, &CoeffRing::Exact)
}

fn diff_line(context: &str, fields: Vec<(String, String)>, matches: bool) -> ReportLine {
    let mut line = ReportLine::new(
        context,
        if matches { Status::Ok } else { Status::TableDiff },
    );
    line.fields = fields;
    line
}

/// Compare a computed polynomial with a printed reference; one line per
/// differing cell, or a single OK line.
fn compare_polys(context: &str, label: &str, computed: &HmPoly, printed: &HmPoly) -> Report {
    let mut report = Report::new();
    if computed == printed {
        report.push(diff_line(
            context,
            vec![("row".into(), label.into())],
            true,
        ));
        return report;
    }
    let top = computed
        .degree()
        .unwrap_or(0)
        .max(printed.degree().unwrap_or(0));
    for j in 0..=top {
        let c = computed.coeff(j);
        let p = printed.coeff(j);
        if c != p {
            report.push(diff_line(
                context,
                vec![
                    ("row".into(), label.into()),
                    ("j".into(), j.to_string()),
                    ("printed".into(), p.to_string()),
                    ("computed".into(), c.to_string()),
                ],
                false,
            ));
        }
    }
    report
}

/// Solve for the elementary symmetric functions from the reduced U-images
/// of H^{-1}..H^{-4} and of H, via the Newton identities. The computed
/// result is compared against the reference table; mismatches are reported
/// and the computed value is the one used downstream.
pub fn solve_elem_sym() -> Result<(ElemSym, Report)> {
    let h = hauptmodul_expansion(8)?;
    // power sums of the reciprocal conjugates: p_k = 5·U(H^{-k})
    let mut p = Vec::with_capacity(4);
    for k in 1..=4 {
        let img = h.int_pow(-k)?.u_p(5);
        p.push(reduce_to_poly(&img, &h, true)?.scale(5));
    }
    let u_h = reduce_to_poly(&h.u_p(5), &h, false)?;
    let e1 = u_h.scale(5);

    // Newton identities give t_k = e_{5-k}/e₅ one at a time
    let t1 = p[0].clone();
    let t2 = t1.mul(&p[0]).sub(&p[1]).div_exact_int(2)?;
    let t3 = t2
        .mul(&p[0])
        .sub(&t1.mul(&p[1]))
        .add(&p[2])
        .div_exact_int(3)?;
    let t4 = t3
        .mul(&p[0])
        .sub(&t2.mul(&p[1]))
        .add(&t1.mul(&p[2]))
        .sub(&p[3])
        .div_exact_int(4)?;
    let e5 = e1.div_exact(&t4)?;
    let sym = ElemSym {
        e: [
            e1,
            t3.mul(&e5),
            t2.mul(&e5),
            t1.mul(&e5),
            e5,
        ],
    };
    let mut report = Report::new();
    let reference = reference_elem_sym();
    for k in 1..=5 {
        report.extend(compare_polys(
            "ELEMSYM",
            &format!("e{k}"),
            sym.e(k),
            &reference[k - 1],
        ));
    }
    // structural facts the recurrence relies on
    for k in 1..=5 {
        if !sym.e(k).coeff(0).is_zero() {
            return Err(Error::SupportViolation {
                row: k,
                col: 0,
                lo: 1,
                hi: 5,
            });
        }
    }
    if sym.e(5) != &HmPoly::gen() {
        report.push(diff_line(
            "ELEMSYM",
            vec![
                ("row".into(), "e5".into()),
                ("expected".into(), "H".into()),
            ],
            false,
        ));
    }
    Ok((sym, report))
}

/// The five seed rows U(·H^i), i = -4..=0, recomputed from q-series and
/// diffed against the printed reference lists (computed values win).
pub fn initial_window(kind: MatrixKind) -> Result<(Vec<HmPoly>, Report)> {
    let h = hauptmodul_expansion(10)?;
    let carrier = match kind {
        MatrixKind::Hauptmodul => None,
        MatrixKind::Carrier => Some(
            cubic_carrier().expand(h.prec(), &CoeffRing::Exact)?,
        ),
    };
    let mut seeds = Vec::with_capacity(5);
    for i in -4i64..=0 {
        let base = h.int_pow(i)?;
        let f = match &carrier {
            None => base,
            Some(c) => c.mul(&base)?,
        };
        seeds.push(reduce_to_poly(&f.u_p(5), &h, true)?);
    }
    let reference = match kind {
        MatrixKind::Hauptmodul => reference_seeds_hauptmodul(),
        MatrixKind::Carrier => reference_seeds_carrier(),
    };
    let mut report = Report::new();
    for (idx, seed) in seeds.iter().enumerate() {
        let i = idx as i64 - 4;
        report.extend(compare_polys(
            "SEED",
            &format!("{} {}", kind.token(), i),
            seed,
            &reference[idx],
        ));
    }
    Ok((seeds, report))
}

/// One application of the five-term recurrence:
/// next = e₁·w[4] − e₂·w[3] + e₃·w[2] − e₄·w[1] + e₅·w[0]
/// where the window holds rows i−5..i−1 in ascending order.
pub fn newton_next(window: &[HmPoly; 5], sym: &ElemSym) -> HmPoly {
    sym.e(1)
        .mul(&window[4])
        .sub(&sym.e(2).mul(&window[3]))
        .add(&sym.e(3).mul(&window[2]))
        .sub(&sym.e(4).mul(&window[1]))
        .add(&sym.e(5).mul(&window[0]))
}

/// Integer matrix of U-operator images in the H basis, rows i >= 1.
#[derive(Clone, Debug)]
pub struct UMatrix {
    kind: MatrixKind,
    rows: Vec<HmPoly>,
}

impl UMatrix {
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn max_row(&self) -> usize {
        self.rows.len()
    }

    /// Row i (1-indexed).
    pub fn row(&self, i: usize) -> &HmPoly {
        &self.rows[i - 1]
    }

    /// Entry at (i, j), zero outside support.
    pub fn entry(&self, i: usize, j: usize) -> BigInt {
        self.row(i).coeff(j)
    }

    /// Fixture format: `kind i : j1=c1 j2=c2 ...`, one row per line.
    pub fn serialize_rows(&self) -> String {
        let mut out = String::new();
        for (idx, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{} {} :", self.kind.token(), idx + 1);
            for (j, c) in row.terms() {
                let _ = write!(out, " {j}={c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Build rows 1..=i_max by the recurrence; rows 1..=verify_rows are
/// additionally recomputed by direct q-series reduction (the independent
/// oracle) and must agree exactly. Support and zero-constant-term
/// invariants are enforced on every row.
pub fn build_matrix(
    kind: MatrixKind,
    i_max: usize,
    verify_rows: usize,
) -> Result<(UMatrix, Report)> {
    assert!(i_max >= 1);
    let (sym, mut report) = solve_elem_sym()?;
    let (seeds, seed_report) = initial_window(kind)?;
    report.extend(seed_report);

    let mut window: [HmPoly; 5] = seeds.try_into().expect("five seeds");
    let mut rows = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let next = newton_next(&window, &sym);
        check_support(kind, i, &next)?;
        window.rotate_left(1);
        window[4] = next.clone();
        rows.push(next);
    }
    let matrix = UMatrix { kind, rows };

    let verify_rows = verify_rows.min(i_max);
    if verify_rows >= 1 {
        let bound = kind.degree_bound(verify_rows);
        let h = hauptmodul_expansion(bound)?;
        let carrier = match kind {
            MatrixKind::Hauptmodul => None,
            MatrixKind::Carrier => Some(cubic_carrier().expand(h.prec(), &CoeffRing::Exact)?),
        };
        let mut power = h.clone();
        for i in 1..=verify_rows {
            if i > 1 {
                power = power.mul(&h)?;
            }
            let f = match &carrier {
                None => power.clone(),
                Some(c) => c.mul(&power)?,
            };
            let direct = reduce_to_poly(&f.u_p(5), &h, false)?;
            let built = matrix.row(i);
            if &direct != built {
                let j = (0..=direct
                    .degree()
                    .unwrap_or(0)
                    .max(built.degree().unwrap_or(0)))
                    .find(|&j| direct.coeff(j) != built.coeff(j))
                    .unwrap_or(0);
                return Err(Error::OracleDisagreement {
                    row: i,
                    col: j,
                    recurrence: built.coeff(j).to_string(),
                    oracle: direct.coeff(j).to_string(),
                });
            }
            report.push(
                ReportLine::new("ORACLE", Status::Ok)
                    .field("kind", kind.token())
                    .field("i", i),
            );
        }
    }
    Ok((matrix, report))
}

fn check_support(kind: MatrixKind, i: usize, row: &HmPoly) -> Result<()> {
    let lo = kind.support_low(i);
    let hi = kind.degree_bound(i);
    for (j, _) in row.terms() {
        if j < lo || j > hi {
            return Err(Error::SupportViolation {
                row: i,
                col: j,
                lo,
                hi,
            });
        }
    }
    Ok(())
}

/// The printed reference appendix shipped with the crate.
pub fn reference_appendix() -> &'static str {
    include_str!("../../fixtures/appendix.txt")
}

/// Parse matrix fixture lines `kind i : j=c j=c ...` (comments start
/// with `#`).
pub fn parse_matrix_fixture(text: &str) -> Result<Vec<(MatrixKind, usize, HmPoly)>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, cells) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in fixture line {line:?}")))?;
        let mut head_parts = head.split_whitespace();
        let kind = MatrixKind::parse(
            head_parts
                .next()
                .ok_or_else(|| Error::Parse("missing kind".into()))?,
        )?;
        let i: usize = head_parts
            .next()
            .ok_or_else(|| Error::Parse("missing row index".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad row index".into()))?;
        if head_parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in {head:?}")));
        }
        let mut terms = Vec::new();
        for cell in cells.split_whitespace() {
            let (j, c) = cell
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad cell {cell:?}")))?;
            let j: usize = j
                .parse()
                .map_err(|_| Error::Parse(format!("bad column {j:?}")))?;
            let c: BigInt = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            terms.push((j, c));
        }
        out.push((kind, i, HmPoly::from_terms(terms)));
    }
    Ok(out)
}

/// Diff built matrices against the printed reference appendix. Each
/// mismatching cell is a TABLE_DIFF warning; matching rows get one OK line.
pub fn compare_with_reference(
    hauptmodul_rows: &UMatrix,
    carrier_rows: &UMatrix,
    fixture: &str,
) -> Result<Report> {
    let mut report = Report::new();
    for (kind, i, printed) in parse_matrix_fixture(fixture)? {
        let matrix = match kind {
            MatrixKind::Hauptmodul => hauptmodul_rows,
            MatrixKind::Carrier => carrier_rows,
        };
        if i > matrix.max_row() {
            continue;
        }
        report.extend(compare_polys(
            "APPENDIX",
            &format!("{} {}", kind.token(), i),
            matrix.row(i),
            &printed,
        ));
    }
    Ok(report)
}

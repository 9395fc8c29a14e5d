//! Cubic partition numbers and the end-to-end congruence verifiers.
//!
//! a(n) counts partitions of n where even parts come in two colors; the
//! generating function is 1/(∏(1-q^n)(1-q^{2n})). Three independent
//! computations are kept: a cascade of sparse pentagonal recurrences (the
//! workhorse), a dynamic-programming count (the oracle), and coefficient
//! extraction from generic series inversion (a third route through
//! entirely different code).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::etaquot::{cubic_carrier, hauptmodul};
use crate::hmbasis::{reduce_to_poly, HmPoly};
use crate::qseries::{euler_factor, pentagonal_terms, QSeries};
use crate::report::{Report, ReportLine, Status};
use crate::ring::CoeffRing;

/// Cubic partition counts a(0..=n_max) in a coefficient ring.
#[derive(Clone, Debug)]
pub struct CubicCounts {
    ring: CoeffRing,
    values: Vec<BigInt>,
}

impl CubicCounts {
    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn a(&self, n: usize) -> &BigInt {
        &self.values[n]
    }
}

/// Counts via two cascaded sparse recurrences: v with ∏(1-q^{2n})·v = 1,
/// then a with ∏(1-q^n)·a = v. Each kernel has O(√n_max) terms, so the
/// whole run is O(n_max^1.5) ring operations -- this is what makes the
/// large residue scans affordable.
pub fn cubic_counts(n_max: usize, ring: &CoeffRing) -> CubicCounts {
    let prec = n_max as i64 + 1;
    let kernel2 = pentagonal_terms(2, prec);
    let kernel1 = pentagonal_terms(1, prec);

    let mut v = Vec::with_capacity(n_max + 1);
    v.push(ring.normalize(BigInt::one()));
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for &(e, s) in &kernel2 {
            let e = e as usize;
            if e > n {
                break;
            }
            if s > 0 {
                acc -= &v[n - e];
            } else {
                acc += &v[n - e];
            }
        }
        v.push(ring.normalize(acc));
    }

    let mut a = Vec::with_capacity(n_max + 1);
    a.push(ring.normalize(BigInt::one()));
    for n in 1..=n_max {
        let mut acc = v[n].clone();
        for &(e, s) in &kernel1 {
            let e = e as usize;
            if e > n {
                break;
            }
            if s > 0 {
                acc -= &a[n - e];
            } else {
                acc += &a[n - e];
            }
        }
        a.push(ring.normalize(acc));
    }

    debug_assert!(a[0].is_one());
    if ring.is_exact() {
        for n in 1..=n_max {
            assert!(
                a[n] >= a[n - 1] && a[n] > BigInt::zero(),
                "exact counts must be positive and nondecreasing at n={n}"
            );
        }
    }
    CubicCounts {
        ring: ring.clone(),
        values: a,
    }
}

/// Independent oracle: dynamic programming over the part types
/// {1, 2, 2', 3, 4, 4', ...} -- every size once, plus every even size in a
/// second color. Shares no code with the series machinery.
pub fn cubic_count_dp(n: usize) -> BigInt {
    let mut ways = vec![BigInt::zero(); n + 1];
    ways[0] = BigInt::one();
    for part in 1..=n.max(1) {
        if part > n {
            break;
        }
        for t in part..=n {
            let prev = ways[t - part].clone();
            ways[t] += prev;
        }
    }
    let mut part = 2;
    while part <= n {
        for t in part..=n {
            let prev = ways[t - part].clone();
            ways[t] += prev;
        }
        part += 2;
    }
    ways.swap_remove(n)
}

/// Third route: coefficients of 1/(∏(1-q^n)(1-q^{2n})) by generic series
/// inversion.
pub fn cubic_counts_by_inversion(n_max: usize) -> Result<Vec<BigInt>> {
    let ring = CoeffRing::Exact;
    let prec = n_max as i64 + 1;
    let gf = euler_factor(1, -1, prec, &ring).mul(&euler_factor(2, -1, prec, &ring))?;
    (0..=n_max as i64).map(|n| gf.coeff(n)).collect()
}

/// The arithmetic-progression offsets for the powers-of-five family:
/// indices 5^{2α+2}·n + offset (n >= 0) are exactly the indices
/// 5^{2α+2}·m − co_offset (m >= 1).
#[derive(Clone, Debug)]
pub struct Progression {
    pub alpha: u32,
    /// 5^{2α+2}.
    pub stride: BigInt,
    /// The reciprocal of 8 modulo the stride.
    pub offset: BigInt,
    /// stride − offset = (stride − 1)/8.
    pub co_offset: BigInt,
}

/// Offsets by extended Euclid, with the defining identities asserted and
/// the step relation co(α) = co(α−1) + 3·25^α checked against the
/// previous level.
pub fn progression(alpha: u32) -> Progression {
    let stride = BigInt::from(5).pow(2 * alpha + 2);
    let ring = CoeffRing::modulus(stride.clone());
    let offset = ring
        .inv(&BigInt::from(8))
        .expect("8 is a unit modulo a power of five");
    let co_offset = &stride - &offset;
    assert!((&offset * 8u32).mod_floor(&stride).is_one());
    assert_eq!(co_offset, (&stride - 1) / 8);
    if alpha >= 1 {
        let prev = progression(alpha - 1);
        assert_eq!(
            &co_offset - &prev.co_offset,
            BigInt::from(3) * BigInt::from(25).pow(alpha)
        );
    }
    Progression {
        alpha,
        stride,
        offset,
        co_offset,
    }
}

fn thm_line(
    id: &str,
    alpha: u32,
    n: usize,
    index: &BigInt,
    residue: &BigInt,
    modulus: &BigInt,
) -> ReportLine {
    ReportLine::new(
        format!("THM {id}"),
        if residue.is_zero() {
            Status::Pass
        } else {
            Status::Fail
        },
    )
    .field("alpha", alpha)
    .field("n", n)
    .field("index", index)
    .field("residue", residue)
    .field("mod", modulus)
}

/// Check a(5^{2α+2}·n + offset) ≡ 0 (mod 5^{α+1}) for 0 <= n < n_count,
/// over the residue ring. One report line per n.
pub fn verify_power_of_five(id: &str, alpha: u32, n_count: usize) -> Result<Report> {
    assert!(n_count >= 1);
    let prog = progression(alpha);
    let modulus = BigInt::from(5).pow(alpha + 1);
    let ring = CoeffRing::modulus(modulus.clone());
    let stride = usize::try_from(&prog.stride)
        .map_err(|_| Error::Parse("stride exceeds addressable range".into()))?;
    let offset = usize::try_from(&prog.offset).expect("offset < stride");
    let n_max = stride * (n_count - 1) + offset;
    let counts = cubic_counts(n_max, &ring);
    let mut report = Report::new();
    for n in 0..n_count {
        let index = stride * n + offset;
        report.push(thm_line(
            id,
            alpha,
            n,
            &BigInt::from(index),
            counts.a(index),
            &modulus,
        ));
    }
    Ok(report)
}

/// Check a(3^α·n + c) ≡ 0 (mod 3^{α+δ(α)}) for 0 <= n < n_count, where c
/// is the reciprocal of 8 mod 3^α and δ(α) is 1 for even α, 0 for odd.
pub fn verify_power_of_three(alpha: u32, n_count: usize) -> Result<Report> {
    assert!(alpha >= 1, "the p = 3 family needs alpha >= 1");
    assert!(n_count >= 1);
    let stride_big = BigInt::from(3).pow(alpha);
    let c = CoeffRing::modulus(stride_big.clone())
        .inv(&BigInt::from(8))
        .expect("8 is a unit modulo a power of three");
    let exponent = alpha + if alpha % 2 == 0 { 1 } else { 0 };
    let modulus = BigInt::from(3).pow(exponent);
    let ring = CoeffRing::modulus(modulus.clone());
    let stride = usize::try_from(&stride_big)
        .map_err(|_| Error::Parse("stride exceeds addressable range".into()))?;
    let offset = usize::try_from(&c).expect("offset < stride");
    let n_max = stride * (n_count - 1) + offset;
    let counts = cubic_counts(n_max, &ring);
    let mut report = Report::new();
    for n in 0..n_count {
        let index = stride * n + offset;
        report.push(thm_line(
            "thm11",
            alpha,
            n,
            &BigInt::from(index),
            counts.a(index),
            &modulus,
        ));
    }
    Ok(report)
}

/// The closed form for the 3n+2 subsequence:
/// Σ a(3n+2)qⁿ = 3·∏(1-q^{3n})³(1-q^{6n})³ / ((1-q^n)⁴(1-q^{2n})⁴),
/// checked coefficientwise through the window.
pub fn verify_triple_identity(prec: i64) -> Result<Report> {
    assert!(prec >= 10);
    let ring = CoeffRing::Exact;
    let counts = cubic_counts(3 * (prec as usize - 1) + 2, &ring);
    let lhs = QSeries::from_coeffs(
        ring.clone(),
        0,
        (0..prec as usize).map(|n| counts.a(3 * n + 2).clone()).collect::<Vec<_>>(),
        prec,
    );
    let rhs = euler_factor(3, 3, prec, &ring)
        .mul(&euler_factor(6, 3, prec, &ring))?
        .mul(&euler_factor(1, -4, prec, &ring))?
        .mul(&euler_factor(2, -4, prec, &ring))?
        .scale(&BigInt::from(3));
    let mut report = Report::new();
    match lhs.first_difference(&rhs, 0, prec)? {
        None => report.push(
            ReportLine::new("IDENT", Status::Ok)
                .field("target", "a(3n+2)")
                .field("prec", prec),
        ),
        Some(n) => report.push(
            ReportLine::new("IDENT", Status::Violation)
                .field("target", "a(3n+2)")
                .field("prec", prec)
                .field("first_diff", n)
                .field("lhs", lhs.coeff(n)?)
                .field("rhs", rhs.coeff(n)?),
        ),
    }
    Ok(report)
}

fn pipeline_line(stage: &str, ok: bool) -> ReportLine {
    ReportLine::new(
        "PIPELINE",
        if ok { Status::Ok } else { Status::Violation },
    )
    .field("stage", stage)
}

/// End-to-end replay of the mod-5 congruence derivation:
/// (i) U₅ of the carrier expansion equals (Σ a(5n−3)qⁿ)·∏(1-q^{5n})(1-q^{10n});
/// (ii) its Hauptmodul polynomial is 3H + 25H² + 125H³;
/// (iii) a second U₅ equals (Σ a(25n−3)qⁿ)·∏(1-q^n)(1-q^{2n}), whose sum
/// factor is ≡ 0 mod 5 coefficientwise;
/// (iv) the kernel ∏(1-q^n)(1-q^{2n}) is a unit mod 5 (constant term 1).
pub fn verify_u_pipeline(prec: i64) -> Result<Report> {
    assert!(prec >= 60, "pipeline needs prec >= 60");
    let ring = CoeffRing::Exact;
    let mut report = Report::new();

    let f = cubic_carrier().expand(prec, &ring)?;
    let u1 = f.u_p(5);
    let w1 = u1.prec();
    let counts = cubic_counts(5 * (w1 as usize - 1) - 3, &ring);

    // (i) one application of U₅ folds the eta prefactor down a level
    let s1 = QSeries::from_coeffs(
        ring.clone(),
        1,
        (1..w1 as usize).map(|n| counts.a(5 * n - 3).clone()).collect::<Vec<_>>(),
        w1,
    );
    let rhs1 = s1
        .mul(&euler_factor(5, 1, w1, &ring))?
        .mul(&euler_factor(10, 1, w1, &ring))?;
    let diff1 = u1.first_difference(&rhs1, 1, w1.min(rhs1.prec()))?;
    report.push(pipeline_line("fold-once", diff1.is_none()).field("window", w1));

    // (ii) the folded image is a cubic polynomial in the Hauptmodul
    let h = hauptmodul().expand(w1, &ring)?;
    let poly = reduce_to_poly(&u1, &h, false)?;
    let expected = HmPoly::from_coeffs(vec![0, 3, 25, 125]);
    report.push(pipeline_line("hauptmodul-poly", poly == expected).field("poly", &poly));

    // (iii) a second U₅ exposes the 25n-3 subsequence
    let u2 = u1.u_p(5);
    let w2 = u2.prec();
    let s2 = QSeries::from_coeffs(
        ring.clone(),
        1,
        (1..w2 as usize).map(|n| counts.a(25 * n - 3).clone()).collect::<Vec<_>>(),
        w2,
    );
    let kernel = euler_factor(1, 1, w2, &ring).mul(&euler_factor(2, 1, w2, &ring))?;
    let rhs2 = s2.mul(&kernel)?;
    let diff2 = u2.first_difference(&rhs2, 1, w2.min(rhs2.prec()))?;
    report.push(pipeline_line("fold-twice", diff2.is_none()).field("window", w2));

    let all_divisible =
        (1..w2 as usize).all(|n| counts.a(25 * n - 3).mod_floor(&BigInt::from(5)).is_zero());
    report.push(pipeline_line("divisibility", all_divisible).field("mod", 5));

    // (iv) dividing out the kernel is legitimate mod 5: its constant term
    // is a unit
    let witness = kernel.coeff(0)?;
    report.push(
        pipeline_line("kernel-unit", witness.is_one())
            .field("witness_exponent", 0)
            .field("witness", &witness),
    );
    Ok(report)
}

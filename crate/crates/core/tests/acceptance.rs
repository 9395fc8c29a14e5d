//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its wall time and asserting the stated budget.
//!
//! Criterion 4 is split: `criterion_04_newton_machinery` holds everything
//! the recomputation supports; `criterion_04b_printed_carrier_rows_match`
//! asserts, as stated, that the printed carrier rows 1..=3 match the
//! recomputation coefficient-for-coefficient -- they do not (the printed
//! tables descend from a seed misprint), and that test documents the
//! mismatch rather than hiding it.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use cubic5_core::cubic::{
    cubic_count_dp, cubic_counts, cubic_counts_by_inversion, progression, verify_power_of_five,
    verify_power_of_three, verify_triple_identity,
};
use cubic5_core::etaquot::{cubic_carrier, cusp_representatives, hauptmodul, u5_order_bounds};
use cubic5_core::hmbasis::{
    build_matrix, compare_with_reference, initial_window, newton_next, reduce_to_poly,
    reference_appendix, solve_elem_sym, HmPoly, MatrixKind,
};
use cubic5_core::report::Status;
use cubic5_core::ring::CoeffRing;
use cubic5_core::valuation::{
    check_cross_representation, check_matrix_bounds, check_w_bounds, rows_needed, w_iterate,
};

fn finish(criterion: &str, name: &str, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("ACCEPTANCE {criterion} {name}: PASS ({elapsed:.2}s, budget {budget_secs}s)");
    assert!(
        elapsed < budget_secs,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2}s >= {budget_secs}s"
    );
}

#[test]
fn criterion_01_eta_expansions() {
    let t = Instant::now();
    let ring = CoeffRing::Exact;
    let f = cubic_carrier().expand(10, &ring).unwrap();
    assert_eq!(f.vmin(), Some(3));
    for (n, c) in [(3, 1), (4, 1), (5, 3), (6, 4), (7, 9)] {
        assert_eq!(f.coeff(n).unwrap(), BigInt::from(c), "carrier q^{n}");
    }
    let a = hauptmodul().expand(8, &ring).unwrap();
    for (n, c) in [(1, 1), (2, 2), (3, 7), (4, 14), (5, 35), (6, 64)] {
        assert_eq!(a.coeff(n).unwrap(), BigInt::from(c), "hauptmodul q^{n}");
    }
    // the q^8 coefficient is pinned by the brute-force count, not by the
    // printed expansion (which shows 128 where the count gives 12)
    let brute = cubic_count_dp(5);
    assert_eq!(f.coeff(8).unwrap(), brute);
    assert_eq!(brute, BigInt::from(12));
    println!("  note: carrier q^8 printed=128 computed=12 status=TABLE_DIFF");
    finish("01", "eta-expansions", t, 1.0);
}

#[test]
fn criterion_02_order_tables() {
    let t = Instant::now();
    let f_orders = cubic_carrier().order_table().unwrap();
    for (d, v) in [(1, -3), (2, -3), (5, 0), (10, 0), (25, 3), (50, 3)] {
        assert_eq!(f_orders[&d], BigInt::from(v).into(), "carrier d={d}");
    }
    let a10 = hauptmodul().order_table().unwrap();
    for (d, v) in [(1, -1), (2, -1), (5, 1), (10, 1)] {
        assert_eq!(a10[&d], BigInt::from(v).into(), "hauptmodul@10 d={d}");
    }
    let a50 = hauptmodul().at_level(50).unwrap().order_table().unwrap();
    for (d, v) in [(1, -5), (2, -5), (5, 1), (10, 1), (25, 1), (50, 1)] {
        assert_eq!(a50[&d], BigInt::from(v).into(), "hauptmodul@50 d={d}");
    }
    // folded order bounds, integer-ceiled
    let fb = u5_order_bounds(&f_orders).unwrap();
    for (d, v) in [(1, -3), (2, -3), (5, 1), (10, 1)] {
        assert_eq!(fb.ceiled[&d], BigInt::from(v), "U(carrier) bound d={d}");
    }
    let ab = u5_order_bounds(&a50).unwrap();
    for (d, v) in [(1, -5), (2, -5), (5, 1), (10, 1)] {
        assert_eq!(ab.ceiled[&d], BigInt::from(v), "U(hauptmodul) bound d={d}");
    }
    assert_eq!(cusp_representatives(10).len(), 4);
    assert_eq!(cusp_representatives(50).len(), 12);
    finish("02", "order-tables", t, 1.0);
}

#[test]
fn criterion_03_hauptmodul_reductions() {
    let t = Instant::now();
    let ring = CoeffRing::Exact;
    let prec = 300;
    let h = hauptmodul().expand(prec, &ring).unwrap();
    let f = cubic_carrier().expand(prec, &ring).unwrap();
    let uf = reduce_to_poly(&f.u_p(5), &h, false).unwrap();
    assert_eq!(uf, HmPoly::from_coeffs(vec![0, 3, 25, 125]));
    let ua = reduce_to_poly(&h.u_p(5), &h, false).unwrap();
    assert_eq!(ua, HmPoly::from_coeffs(vec![0, 35, 700, 6875, 31250, 78125]));
    finish("03", "hauptmodul-reductions", t, 5.0);
}

#[test]
fn criterion_04_newton_machinery() {
    let t = Instant::now();

    // the symmetric-function set solved from the U-images matches the
    // printed list exactly
    let (sym, sym_report) = solve_elem_sym().unwrap();
    assert_eq!(sym_report.count(Status::TableDiff), 0);
    assert_eq!(
        sym.e(1),
        &HmPoly::from_coeffs(vec![0, 175, 3500, 34375, 156250, 390625])
    );
    assert_eq!(sym.e(4), &HmPoly::from_coeffs(vec![0, -10, -25]));
    assert_eq!(sym.e(5), &HmPoly::gen());

    // the recurrence regenerates U(H) from the seeds exactly
    let (seeds, _) = initial_window(MatrixKind::Hauptmodul).unwrap();
    let window: [HmPoly; 5] = seeds.try_into().unwrap();
    assert_eq!(
        newton_next(&window, &sym),
        HmPoly::from_coeffs(vec![0, 35, 700, 6875, 31250, 78125])
    );

    // build both matrices to row 5 with every row oracle-checked against
    // direct q-series reduction at auto-sized precision
    let (mh, rep_h) = build_matrix(MatrixKind::Hauptmodul, 5, 5).unwrap();
    let (mc, rep_c) = build_matrix(MatrixKind::Carrier, 5, 5).unwrap();
    assert!(!rep_h.has_failures());
    assert!(!rep_c.has_failures());

    // diff against the printed appendix: rows h2 and h3 match
    // coefficient-for-coefficient; every other row's diffs are warnings
    // with exactly these cells
    let report = compare_with_reference(&mh, &mc, reference_appendix()).unwrap();
    assert!(!report.has_failures());
    let mut diff_cells: BTreeSet<(String, usize)> = BTreeSet::new();
    for line in report.warnings() {
        let row = line
            .fields
            .iter()
            .find(|(k, _)| k == "row")
            .map(|(_, v)| v.clone())
            .unwrap();
        let j: usize = line
            .fields
            .iter()
            .find(|(k, _)| k == "j")
            .map(|(_, v)| v.parse().unwrap())
            .unwrap();
        diff_cells.insert((row, j));
    }
    let expect: BTreeSet<(String, usize)> = [
        ("h 4", vec![1usize, 2, 3, 4, 11, 12, 13, 14]),
        ("h 5", vec![2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 19]),
        ("ch 1", vec![1, 2]),
        ("ch 2", vec![1, 2, 3, 4, 5, 6, 7]),
        ("ch 3", vec![2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]),
        ("ch 4", (2..=17).collect()),
        ("ch 5", (2..=22).collect()),
    ]
    .into_iter()
    .flat_map(|(row, js)| js.into_iter().map(move |j| (row.to_string(), j)))
    .collect();
    assert_eq!(diff_cells, expect, "recomputed-vs-printed diff cells");
    assert!(
        !diff_cells.iter().any(|(row, _)| row == "h 2" || row == "h 3"),
        "printed rows h2/h3 must match exactly"
    );

    finish("04", "newton-machinery", t, 120.0);
}

/// As stated, the printed carrier rows 1..=3 are required to match the
/// recomputed rows coefficient-for-coefficient. They cannot: the printed
/// tables inherit a misprinted seed. The recomputed value of the first
/// cell is forced by hand-checkable arithmetic -- the q^5 coefficient of
/// carrier·hauptmodul is C₃·H₂ + C₄·H₁ = 1·2 + 1·1 = 3, so row 1 starts
/// 3H + 465H², not -7H + 440H². Running the recurrence from the printed
/// seed list (which drops the constant term of U(C·H^{-3})) reproduces
/// the printed rows exactly, which locates the misprint. This test states
/// the criterion faithfully and is expected to fail.
#[test]
fn criterion_04b_printed_carrier_rows_match() {
    let t = Instant::now();
    let (mc, _) = build_matrix(MatrixKind::Carrier, 3, 3).unwrap();
    let report = compare_with_reference(
        &build_matrix(MatrixKind::Hauptmodul, 1, 0).unwrap().0,
        &mc,
        reference_appendix(),
    )
    .unwrap();
    let carrier_diffs: Vec<String> = report
        .warnings()
        .filter(|l| {
            l.fields
                .iter()
                .any(|(k, v)| k == "row" && v.starts_with("ch"))
        })
        .map(|l| l.to_string())
        .collect();
    let pass = carrier_diffs.is_empty();
    let elapsed = t.elapsed().as_secs_f64();
    if pass {
        println!("ACCEPTANCE 04b printed-carrier-rows-match: PASS ({elapsed:.2}s)");
    } else {
        println!("ACCEPTANCE 04b printed-carrier-rows-match: FAIL ({elapsed:.2}s)");
    }
    assert!(
        pass,
        "printed carrier rows disagree with both independent recomputations \
         (recurrence and direct q-series reduction, which agree with each \
         other). The first cell is decidable by hand: the q^5 coefficient \
         of carrier*hauptmodul is 1*2 + 1*1 = 3, so b(1,1) = 3, but the \
         printed table shows -7. The printed rows are exactly what the \
         recurrence yields from the misprinted seed list (whose U(C*H^-3) \
         entry lost its constant term), so the discrepancy is a seed \
         misprint propagated through the printed tables. Diff lines:\n{}",
        carrier_diffs.join("\n")
    );
}

#[test]
fn criterion_05_valuation_lemmas() {
    let t = Instant::now();
    let (mh, _) = build_matrix(MatrixKind::Hauptmodul, 30, 5).unwrap();
    let (mc, _) = build_matrix(MatrixKind::Carrier, 30, 5).unwrap();
    let rh = check_matrix_bounds(&mh, 30).unwrap();
    let rc = check_matrix_bounds(&mc, 30).unwrap();
    assert_eq!(rh.count(Status::Violation), 0, "entry bounds, U(H^i) rows");
    assert_eq!(rc.count(Status::Violation), 0, "entry bounds, U(C·H^i) rows");
    // printed valuation table matches except at the logged typo candidates
    let diffs: BTreeSet<(String, String)> = rh
        .warnings()
        .map(|l| {
            let get = |key: &str| {
                l.fields
                    .iter()
                    .find(|(k, _)| k == key)
                    .map(|(_, v)| v.clone())
                    .unwrap()
            };
            (get("i"), get("j"))
        })
        .collect();
    let expect: BTreeSet<(String, String)> = [
        (4, 12),
        (4, 14),
        (5, 12),
        (5, 13),
        (5, 14),
        (5, 15),
        (5, 16),
        (5, 17),
        (5, 18),
        (5, 19),
    ]
    .into_iter()
    .map(|(i, j): (i32, i32)| (i.to_string(), j.to_string()))
    .collect();
    assert_eq!(diffs, expect, "typo candidates in the printed table");
    finish("05", "valuation-lemmas", t, 120.0);
}

#[test]
fn criterion_06_w_iteration() {
    let t = Instant::now();
    let (need_h, need_c) = rows_needed(4);
    let (mh, _) = build_matrix(MatrixKind::Hauptmodul, need_h, 0).unwrap();
    let (mc, _) = build_matrix(MatrixKind::Carrier, need_c, 0).unwrap();
    let ws = w_iterate(&mh, &mc, 4).unwrap();

    // exact matrix algebra: every entry of the even steps is divisible by
    // the advertised power of five
    let five = BigInt::from(5);
    let twenty_five = BigInt::from(25);
    assert!((1..=ws[1].support()).all(|j| (ws[1].entry(j) % &five).is_zero()));
    assert!((1..=ws[3].support()).all(|j| (ws[3].entry(j) % &twenty_five).is_zero()));
    let bounds = check_w_bounds(&ws, 1).unwrap();
    assert!(!bounds.has_failures());

    // cross-representation identity over a >= 30 coefficient window
    for alpha in [0u32, 1] {
        let rep = check_cross_representation(&ws, alpha, 30).unwrap();
        assert!(!rep.has_failures(), "cross-representation alpha={alpha}");
    }
    finish("06", "w-iteration", t, 300.0);
}

#[test]
fn criterion_07_mod5_progression() {
    let t = Instant::now();
    let report = verify_power_of_five("thm12", 0, 2000).unwrap();
    assert_eq!(report.lines.len(), 2000);
    assert!(report.lines.iter().all(|l| l.status == Status::Pass));
    finish("07", "mod5-progression", t, 30.0);
}

#[test]
fn criterion_08_mod25_and_mod125_progressions() {
    let t = Instant::now();
    let r1 = verify_power_of_five("thm14", 1, 200).unwrap();
    assert_eq!(r1.lines.len(), 200);
    assert!(r1.lines.iter().all(|l| l.status == Status::Pass));
    let p2 = progression(2);
    assert_eq!(p2.offset, BigInt::from(13672)); // extended Euclid, 8·13672 ≡ 1
    let r2 = verify_power_of_five("thm14", 2, 8).unwrap();
    assert_eq!(r2.lines.len(), 8);
    assert!(r2.lines.iter().all(|l| l.status == Status::Pass));
    finish("08", "mod25-mod125-progressions", t, 300.0);
}

#[test]
fn criterion_09_mod3_family() {
    let t = Instant::now();
    let r1 = verify_power_of_three(1, 10_000).unwrap();
    assert!(r1.lines.iter().all(|l| l.status == Status::Pass));
    let r2 = verify_power_of_three(2, 300).unwrap();
    assert!(r2.lines.iter().all(|l| l.status == Status::Pass));
    assert!(r2.lines[0].to_string().contains("index=8"));
    assert!(r2.lines[0].to_string().contains("mod=27"));
    let ident = verify_triple_identity(50).unwrap();
    assert!(!ident.has_failures());
    finish("09", "mod3-family", t, 60.0);
}

#[test]
fn criterion_10_oracle_triangle() {
    let t = Instant::now();
    let recurrence = cubic_counts(200, &CoeffRing::Exact);
    let inversion = cubic_counts_by_inversion(200).unwrap();
    for n in 0..=200usize {
        let dp = cubic_count_dp(n);
        assert_eq!(recurrence.a(n), &dp, "recurrence vs dp at {n}");
        assert_eq!(&inversion[n], &dp, "inversion vs dp at {n}");
    }
    assert!(recurrence.a(0).is_one());
    finish("10", "oracle-triangle", t, 10.0);
}

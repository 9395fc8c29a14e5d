//! End-to-end checks of the command-line surface: wire formats, exit
//! codes, and text/json parity.

use std::process::{Command, Output};

fn cubic5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic5"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn expand_carrier_emits_wire_format() {
    let out = cubic5(&["expand", "50; 25^1*50^1*1^-1*2^-1", "--prec", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "vmin=3 prec=10 ring=Z");
    assert_eq!(lines.next().unwrap(), "3\t1");
    assert!(text.contains("8\t12"), "q^8 coefficient is the recomputed 12");
}

#[test]
fn expand_hauptmodul_leading_terms() {
    let out = cubic5(&["expand", "10; 5^2*10^2*1^-2*2^-2", "--prec", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("vmin=1 prec=8 ring=Z\n"));
    for term in ["1\t1", "2\t2", "3\t7", "4\t14"] {
        assert!(text.contains(term), "missing {term}");
    }
}

#[test]
fn expand_supports_residue_rings() {
    let out = cubic5(&[
        "expand",
        "50; 25^1*50^1*1^-1*2^-1",
        "--prec",
        "10",
        "--modulus",
        "5",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ring=Zmod:5"));
}

#[test]
fn malformed_quotient_exits_2() {
    let out = cubic5(&["expand", "not a quotient"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cubic5(&["expand", "50; 3^1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = cubic5(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orders_prints_carrier_table() {
    let out = cubic5(&["orders", "50; 25^1*50^1*1^-1*2^-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("modular_function=true"));
    for line in [
        "ORDER d=1 order=-3",
        "ORDER d=2 order=-3",
        "ORDER d=5 order=0",
        "ORDER d=25 order=3",
        "CUSPS level=50 count=12",
    ] {
        assert!(text.contains(line), "missing {line:?}");
    }
}

#[test]
fn orders_of_empty_quotient_are_all_zero() {
    let out = cubic5(&["orders", "10;"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for d in [1, 2, 5, 10] {
        assert!(text.contains(&format!("ORDER d={d} order=0")));
    }
}

#[test]
fn verify_all_default_config_is_clean() {
    let out = cubic5(&["verify", "all"]);
    assert!(out.status.success(), "composite run must exit 0");
    let text = stdout(&out);
    let summary = text.lines().last().unwrap();
    assert!(summary.starts_with("SUMMARY"));
    assert!(summary.contains("failures=0"));
    // reference-table diffs surface as warnings, never failures
    assert!(text.contains("status=TABLE_DIFF"));
}

#[test]
fn reduce_carrier_to_hauptmodul_polynomial() {
    let out = cubic5(&["reduce", "50; 25^1*50^1*1^-1*2^-1", "--prec", "120"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3*H + 25*H^2 + 125*H^3");
}

#[test]
fn matrix_rows_in_fixture_format() {
    let out = cubic5(&["matrix", "--kind", "h", "--rows", "3", "--verify", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("h 1 : 1=35 2=700 3=6875 4=31250 5=78125"));
    assert!(text.contains("h 3 :"));
    assert!(text.contains("15=11920928955078125"));
}

#[test]
fn verify_thm12_passes_and_reports_each_index() {
    let out = cubic5(&["verify", "thm12", "--n-count", "25"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 26); // 25 checks + summary
    assert!(text.contains("THM thm12 alpha=0 n=0 index=22 residue=0 mod=5 PASS"));
}

#[test]
fn verify_appendix_warns_but_exits_clean() {
    let out = cubic5(&["verify", "appendix", "--verify-rows", "2"]);
    assert!(out.status.success(), "table diffs are warnings, not failures");
    let text = stdout(&out);
    assert!(text.contains("status=TABLE_DIFF"));
    assert!(text.contains("row=h 4"));
    assert!(text.contains("row=ch 1"));
    assert!(text.contains("APPENDIX row=h 2 status=OK"));
}

#[test]
fn json_mode_matches_text_mode_record_for_record() {
    let args = ["verify", "pipeline", "--prec", "120"];
    let text_out = cubic5(&args);
    assert!(text_out.status.success());
    let mut json_args = vec!["--output", "json"];
    json_args.extend_from_slice(&args);
    let json_out = cubic5(&json_args);
    assert!(json_out.status.success());

    let text_lines: Vec<String> = stdout(&text_out).lines().map(String::from).collect();
    let json_lines: Vec<String> = stdout(&json_out).lines().map(String::from).collect();
    assert_eq!(text_lines.len(), json_lines.len());
    for line in &json_lines {
        let record: serde_json::Value = serde_json::from_str(line).expect("parseable json");
        assert!(record.get("check").is_some());
        assert!(record.get("fields").is_some());
        assert!(record.get("status").is_some());
    }
}

#[test]
fn fixtures_flag_overrides_builtin_tables() {
    // a fixture claiming U(H) = 35H forces a diff at every other cell
    let dir = std::env::temp_dir().join("cubic5-fixture-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.txt");
    std::fs::write(&path, "# local override\nh 1 : 1=35\n").unwrap();
    let out = cubic5(&[
        "--fixtures",
        path.to_str().unwrap(),
        "verify",
        "appendix",
        "--verify-rows",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("row=h 1"));
    assert!(text.contains("status=TABLE_DIFF"));
    assert!(text.contains("printed=0"));
}

//! cubic5 -- exact verification runs for cubic-partition congruences.
//!
//! Subcommands expand eta-quotients, print cusp-order tables, reduce
//! U₅-images to Hauptmodul polynomials, dump the U-operator matrices, and
//! run the full verification targets. Exit code 0 means every check passed
//! (reference-table diffs warn but do not fail), 1 means a check failed,
//! 2 means the invocation itself was bad.

use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cubic5_core::cubic;
use cubic5_core::etaquot::{cusp_representatives, EtaQuotient};
use cubic5_core::hmbasis::{
    self, build_matrix, reduce_to_poly, MatrixKind, UMatrix,
};
use cubic5_core::report::{Report, ReportLine, Status};
use cubic5_core::ring::CoeffRing;
use cubic5_core::valuation;
use cubic5_core::Error;

#[derive(Parser)]
#[command(name = "cubic5", version, about = "Exact q-series congruence verification engine")]
struct Cli {
    /// Report format for verification targets.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,

    /// Reference-table fixture file (defaults to the built-in tables;
    /// env: CUBIC5_FIXTURES).
    #[arg(long, global = true, env = "CUBIC5_FIXTURES")]
    fixtures: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an eta-quotient (`N; d^r * d^r * ...`) as a q-series.
    Expand {
        /// Quotient, e.g. "50; 25^1*50^1*1^-1*2^-1".
        quotient: String,
        #[arg(long, default_value_t = 20)]
        prec: i64,
        /// Reduce coefficients modulo m instead of exact integers.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Cusp orders and modularity check for an eta-quotient.
    Orders { quotient: String },
    /// Reduce U₅ of an eta-quotient expansion to a polynomial in the
    /// Hauptmodul.
    Reduce {
        quotient: String,
        #[arg(long, default_value_t = 400)]
        prec: i64,
    },
    /// Build U-operator matrix rows and print them in fixture format.
    Matrix {
        #[arg(long, value_parser = parse_kind)]
        kind: MatrixKind,
        #[arg(long, default_value_t = 5)]
        rows: usize,
        /// Cross-check this many rows against direct q-series reduction.
        #[arg(long, default_value_t = 3)]
        verify: usize,
    },
    /// Run a verification target.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        config: RunConfig,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Thm11,
    Thm12,
    Thm14,
    Lemmas,
    Appendix,
    Pipeline,
    All,
}

/// Knobs for verification runs; defaults reproduce the standard desk-scale
/// run.
#[derive(Args, Clone)]
struct RunConfig {
    /// Progression length for the primary range of a target.
    #[arg(long)]
    n_count: Option<usize>,

    /// Progression length for the deepest (alpha = 2) residue scan.
    #[arg(long, default_value_t = 8)]
    deep_count: usize,

    /// Largest alpha exercised through exact matrix algebra.
    #[arg(long, default_value_t = 1)]
    alpha_max_matrix: u32,

    /// Largest alpha exercised through residue series.
    #[arg(long, default_value_t = 2)]
    alpha_max_series: u32,

    /// Matrix rows covered by the valuation bound checks.
    #[arg(long, default_value_t = 30)]
    lemma_rows: usize,

    /// Matrix rows cross-checked against the q-series oracle.
    #[arg(long, default_value_t = 10)]
    verify_rows: usize,

    /// Expansion precision for the pipeline replay.
    #[arg(long, default_value_t = 750)]
    prec: i64,
}

fn parse_kind(s: &str) -> Result<MatrixKind, String> {
    MatrixKind::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Expand {
            quotient,
            prec,
            modulus,
        } => {
            let eq = EtaQuotient::parse(quotient)?;
            let ring = match modulus {
                None => CoeffRing::Exact,
                Some(m) => CoeffRing::modulus(*m),
            };
            let series = eq.expand(*prec, &ring)?;
            print!("{}", series.serialize());
            Ok(true)
        }
        Command::Orders { quotient } => {
            let eq = EtaQuotient::parse(quotient)?;
            let report = orders_report(&eq)?;
            emit(cli, &report)?;
            Ok(!report.has_failures())
        }
        Command::Reduce { quotient, prec } => {
            let eq = EtaQuotient::parse(quotient)?;
            let ring = CoeffRing::Exact;
            let image = eq.expand(*prec, &ring)?.u_p(5);
            let h = cubic5_core::etaquot::hauptmodul().expand(image.prec(), &ring)?;
            let poly = reduce_to_poly(&image, &h, true)?;
            println!("{poly}");
            Ok(true)
        }
        Command::Matrix { kind, rows, verify } => {
            let (matrix, report) = build_matrix(*kind, *rows, *verify)?;
            print!("{}", matrix.serialize_rows());
            let warnings: Vec<String> = report.warnings().map(|l| l.to_string()).collect();
            for w in warnings {
                eprintln!("{w}");
            }
            Ok(!report.has_failures())
        }
        Command::Verify { target, config } => {
            if config.alpha_max_matrix > config.alpha_max_series {
                return Err(Error::Parse(
                    "--alpha-max-matrix must not exceed --alpha-max-series".into(),
                ));
            }
            let report = run_target(*target, config, cli)?;
            emit(cli, &report)?;
            let summary = ReportLine::new("SUMMARY", Status::Ok)
                .field("checks", report.lines.len())
                .field("failures", report.failures().count())
                .field("warnings", report.warnings().count());
            emit_line(cli, &summary)?;
            Ok(!report.has_failures())
        }
    }
}

fn orders_report(eq: &EtaQuotient) -> Result<Report, Error> {
    let mut report = Report::new();
    let chk = eq.check_modularity();
    report.push(
        ReportLine::new("NEWMAN", Status::Ok)
            .field("level", eq.level())
            .field("weight", &chk.weight)
            .field("cond_upper", chk.cond_upper)
            .field("cond_lower", chk.cond_lower)
            .field("s", &chk.s)
            .field("modular_function", chk.is_modular_function),
    );
    for (d, ord) in eq.order_table()? {
        report.push(
            ReportLine::new("ORDER", Status::Ok)
                .field("d", d)
                .field("order", &ord),
        );
    }
    report.push(
        ReportLine::new("CUSPS", Status::Ok)
            .field("level", eq.level())
            .field("count", cusp_representatives(eq.level()).len()),
    );
    Ok(report)
}

fn fixture_text(cli: &Cli) -> Result<String, Error> {
    match &cli.fixtures {
        None => Ok(hmbasis::reference_appendix().to_string()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display()))),
    }
}

fn run_target(target: Target, config: &RunConfig, cli: &Cli) -> Result<Report, Error> {
    let mut report = Report::new();
    match target {
        Target::Thm12 => {
            report.extend(cubic::verify_power_of_five(
                "thm12",
                0,
                config.n_count.unwrap_or(2000),
            )?);
        }
        Target::Thm14 => {
            for alpha in 1..=config.alpha_max_series.max(1) {
                let n_count = if alpha == 1 {
                    config.n_count.unwrap_or(200)
                } else {
                    config.deep_count
                };
                report.extend(cubic::verify_power_of_five("thm14", alpha, n_count)?);
            }
        }
        Target::Thm11 => {
            let ranges = [
                (1, config.n_count.unwrap_or(10_000)),
                (2, 300),
                (3, 50),
                (4, 20),
            ];
            for (alpha, n_count) in ranges {
                report.extend(cubic::verify_power_of_three(alpha, n_count)?);
            }
            report.extend(cubic::verify_triple_identity(50)?);
        }
        Target::Lemmas => {
            let k_max = 2 * config.alpha_max_matrix + 2;
            let (need_h, need_c) = valuation::rows_needed(k_max);
            let (mh, rep_h) = build_matrix(
                MatrixKind::Hauptmodul,
                config.lemma_rows.max(need_h),
                config.verify_rows,
            )?;
            let (mc, rep_c) = build_matrix(
                MatrixKind::Carrier,
                config.lemma_rows.max(need_c),
                config.verify_rows,
            )?;
            report.extend(rep_h);
            report.extend(rep_c);
            report.extend(valuation::check_matrix_bounds(&mh, config.lemma_rows)?);
            report.extend(valuation::check_matrix_bounds(&mc, config.lemma_rows)?);
            let ws = valuation::w_iterate(&mh, &mc, k_max)?;
            report.extend(valuation::check_w_bounds(&ws, config.alpha_max_matrix)?);
            for alpha in 0..=config.alpha_max_matrix {
                report.extend(valuation::check_cross_representation(&ws, alpha, 30)?);
            }
        }
        Target::Appendix => {
            report.extend(appendix_target(config, cli)?);
        }
        Target::Pipeline => {
            report.extend(cubic::verify_u_pipeline(config.prec.max(60))?);
        }
        Target::All => {
            for t in [
                Target::Thm11,
                Target::Thm12,
                Target::Thm14,
                Target::Lemmas,
                Target::Appendix,
                Target::Pipeline,
            ] {
                report.extend(run_target(t, config, cli)?);
            }
        }
    }
    Ok(report)
}

fn appendix_target(config: &RunConfig, cli: &Cli) -> Result<Report, Error> {
    let fixture = fixture_text(cli)?;
    let rows = hmbasis::parse_matrix_fixture(&fixture)?;
    let max_row = |k: MatrixKind| {
        rows.iter()
            .filter(|(kind, _, _)| *kind == k)
            .map(|(_, i, _)| *i)
            .max()
            .unwrap_or(1)
    };
    let verify = config.verify_rows;
    let (mh, rep_h): (UMatrix, Report) =
        build_matrix(MatrixKind::Hauptmodul, max_row(MatrixKind::Hauptmodul), verify)?;
    let (mc, rep_c) = build_matrix(MatrixKind::Carrier, max_row(MatrixKind::Carrier), verify)?;
    let mut report = Report::new();
    report.extend(rep_h);
    report.extend(rep_c);
    report.extend(hmbasis::compare_with_reference(&mh, &mc, &fixture)?);
    Ok(report)
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Error> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for line in &report.lines {
        write_line(cli, &mut out, line);
    }
    out.flush().ok();
    Ok(())
}

fn emit_line(cli: &Cli, line: &ReportLine) -> Result<(), Error> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    write_line(cli, &mut out, line);
    out.flush().ok();
    Ok(())
}

fn write_line(cli: &Cli, out: &mut impl Write, line: &ReportLine) {
    match cli.output {
        OutputMode::Text => {
            let _ = writeln!(out, "{line}");
        }
        OutputMode::Json => {
            let mut fields = serde_json::Map::new();
            for (k, v) in &line.fields {
                fields.insert(k.clone(), serde_json::Value::String(v.clone()));
            }
            let record = serde_json::json!({
                "check": line.check,
                "fields": fields,
                "status": line.status.as_str(),
            });
            let _ = writeln!(out, "{record}");
        }
    }
}

//! Structured check records shared by the verifiers.
//!
//! Reference-table mismatches are warnings (`TableDiff`); theorem and lemma
//! violations are failures. A run is clean iff it has no failures.

use std::fmt;

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Pass,
    Fail,
    Violation,
    TableDiff,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Violation)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Violation => "VIOLATION",
            Status::TableDiff => "TABLE_DIFF",
        }
    }
}

/// One check record: a check name, ordered `key=value` fields, a status.
#[derive(Clone, Debug)]
pub struct ReportLine {
    pub check: String,
    pub fields: Vec<(String, String)>,
    pub status: Status,
}

impl ReportLine {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        ReportLine {
            check: check.into(),
            fields: Vec::new(),
            status,
        }
    }

    pub fn field(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.check)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        // theorem lines end in a bare PASS/FAIL, everything else in status=
        if self.check.starts_with("THM") {
            write!(f, " {}", self.status.as_str())
        } else {
            write!(f, " status={}", self.status.as_str())
        }
    }
}

/// An ordered collection of check records.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub lines: Vec<ReportLine>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, line: ReportLine) {
        self.lines.push(line);
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn has_failures(&self) -> bool {
        self.lines.iter().any(|l| l.status.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportLine> {
        self.lines.iter().filter(|l| l.status.is_failure())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ReportLine> {
        self.lines
            .iter()
            .filter(|l| l.status == Status::TableDiff)
    }

    pub fn count(&self, status: Status) -> usize {
        self.lines.iter().filter(|l| l.status == status).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

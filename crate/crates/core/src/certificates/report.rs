//! Verdict records shared by every suite, plus their text and JSON forms.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::numerics::rational::{exact_string, render};
use crate::numerics::{int, Interval, Rational, Rounding};

/// Longest `n/d` text printed alongside a rendered exact value.
const EXACT_TEXT_LIMIT: usize = 64;

/// One side of a checked relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Enclosure(Interval),
}

impl Value {
    pub fn lo(&self) -> &Rational {
        match self {
            Value::Exact(x) => x,
            Value::Enclosure(iv) => iv.lo(),
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Value::Exact(x) => x,
            Value::Enclosure(iv) => iv.hi(),
        }
    }
}

impl From<Rational> for Value {
    fn from(x: Rational) -> Self {
        Value::Exact(x)
    }
}

impl From<&Rational> for Value {
    fn from(x: &Rational) -> Self {
        Value::Exact(x.clone())
    }
}

impl From<Interval> for Value {
    fn from(iv: Interval) -> Self {
        Value::Enclosure(iv)
    }
}

impl From<&Interval> for Value {
    fn from(iv: &Interval) -> Self {
        Value::Enclosure(iv.clone())
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Exact(int(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "=")]
    Equal,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::Greater => ">",
            Relation::Equal => "=",
        }
    }
}

/// `lhs relation rhs`, decided strictly: an enclosure certifies `<` only if
/// its upper end lies below the other side's lower end, and `=` needs two
/// equal exact values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub lhs: Value,
    pub relation: Relation,
    pub rhs: Value,
}

impl Check {
    pub fn new(label: impl Into<String>, lhs: impl Into<Value>, relation: Relation, rhs: impl Into<Value>) -> Self {
        Self {
            label: label.into(),
            lhs: lhs.into(),
            relation,
            rhs: rhs.into(),
        }
    }

    pub fn less(label: impl Into<String>, lhs: impl Into<Value>, rhs: impl Into<Value>) -> Self {
        Self::new(label, lhs, Relation::Less, rhs)
    }

    pub fn greater(label: impl Into<String>, lhs: impl Into<Value>, rhs: impl Into<Value>) -> Self {
        Self::new(label, lhs, Relation::Greater, rhs)
    }

    pub fn equal(label: impl Into<String>, lhs: impl Into<Value>, rhs: impl Into<Value>) -> Self {
        Self::new(label, lhs, Relation::Equal, rhs)
    }

    /// Guaranteed slack; negative or zero when the relation is not certified.
    pub fn margin(&self) -> Rational {
        match self.relation {
            Relation::Less => self.rhs.lo() - self.lhs.hi(),
            Relation::Greater => self.lhs.lo() - self.rhs.hi(),
            Relation::Equal => Rational::zero(),
        }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Less => self.lhs.hi() < self.rhs.lo(),
            Relation::Greater => self.lhs.lo() > self.rhs.hi(),
            Relation::Equal => match (&self.lhs, &self.rhs) {
                (Value::Exact(a), Value::Exact(b)) => a == b,
                _ => false,
            },
        }
    }
}

/// Everything checked for one claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub claim_id: String,
    pub location: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl CertificateReport {
    pub fn new(claim_id: impl Into<String>, location: impl Into<String>) -> Self {
        Self {
            claim_id: claim_id.into(),
            location: location.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    /// Records a step that could not be evaluated; the claim fails.
    pub fn failed_step(&mut self, label: impl Into<String>, err: impl std::fmt::Display) -> &mut Self {
        self.notes.push(format!("error: {}: {err}", label.into()));
        self.checks.push(Check::equal("step evaluated", 0u64, 1u64));
        self
    }

    /// Pass only when there is at least one check and every check holds.
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::holds)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.holds())
    }
}

#[derive(Serialize)]
struct BoundRecord {
    lo: String,
    hi: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    description: &'a str,
    lhs: BoundRecord,
    relation: Relation,
    rhs: BoundRecord,
    margin: String,
    holds: bool,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    claim_id: &'a str,
    location: &'a str,
    verdict: &'static str,
    inequalities: Vec<CheckRecord<'a>>,
    notes: &'a [String],
}

fn bound_record(v: &Value) -> BoundRecord {
    BoundRecord {
        lo: render(v.lo(), Rounding::Down),
        hi: render(v.hi(), Rounding::Up),
        exact: match v {
            Value::Exact(x) => exact_string(x, EXACT_TEXT_LIMIT),
            Value::Enclosure(_) => None,
        },
    }
}

fn record(report: &CertificateReport) -> ReportRecord<'_> {
    ReportRecord {
        claim_id: &report.claim_id,
        location: &report.location,
        verdict: if report.passed() { "pass" } else { "fail" },
        inequalities: report
            .checks
            .iter()
            .map(|c| CheckRecord {
                description: &c.label,
                lhs: bound_record(&c.lhs),
                relation: c.relation,
                rhs: bound_record(&c.rhs),
                margin: render(&c.margin(), Rounding::Down),
                holds: c.holds(),
            })
            .collect(),
        notes: &report.notes,
    }
}

/// Reports in a stable order: by claim id.
pub fn sorted(mut reports: Vec<CertificateReport>) -> Vec<CertificateReport> {
    reports.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    reports
}

/// JSON array of report records, one per claim, newline-terminated.
pub fn to_machine(reports: &[CertificateReport]) -> String {
    let records: Vec<ReportRecord<'_>> = reports.iter().map(record).collect();
    let mut out = serde_json::to_string_pretty(&records).expect("report records serialize");
    out.push('\n');
    out
}

fn show(v: &Value) -> String {
    match v {
        Value::Exact(x) => match exact_string(x, EXACT_TEXT_LIMIT) {
            Some(text) if x.is_integer() => text,
            Some(text) => format!("{text} (~{})", render(x, Rounding::Down)),
            None => format!("~{}", render(x, Rounding::Down)),
        },
        Value::Enclosure(iv) => format!("{iv}"),
    }
}

pub fn check_line(c: &Check) -> String {
    format!(
        "{} {}: {} {} {}  (margin {})",
        if c.holds() { "ok  " } else { "FAIL" },
        c.label,
        show(&c.lhs),
        c.relation.symbol(),
        show(&c.rhs),
        render(&c.margin(), Rounding::Down)
    )
}

/// Full human-readable form of one report.
pub fn to_text_one(report: &CertificateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "[{}] {}  ({})",
        if report.passed() { "PASS" } else { "FAIL" },
        report.claim_id,
        report.location
    );
    for c in &report.checks {
        let _ = writeln!(out, "    {}", check_line(c));
    }
    for n in &report.notes {
        let _ = writeln!(out, "    note: {n}");
    }
    out
}

pub fn to_text(reports: &[CertificateReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&to_text_one(r));
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "{passed}/{} claims verified", reports.len());
    out
}

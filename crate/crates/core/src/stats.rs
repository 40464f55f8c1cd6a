//! Count statistics: mean and population variance of per-outcome counts, the
//! error rate under an injected classifier, and side-by-side comparison
//! against the embedded reference tables `t1`..`t10`.
//!
//! Reference count tables keep their rows exactly as printed, duplicate
//! outcome strings included, and the mean divides by the number of rows.
//! Simulator histograms have one row per distinct bitstring.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::aqecc::CaseId;
use crate::error::{Error, Result};
use crate::experiments::CaseReport;
use crate::sim::Counts;

/// Absolute tolerance for MATCH in reference comparisons.
pub const REFERENCE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub outcome: String,
    pub count: u64,
}

impl CountRow {
    pub fn new(outcome: impl Into<String>, count: u64) -> Self {
        Self {
            outcome: outcome.into(),
            count,
        }
    }
}

/// One row per distinct outcome, in outcome order.
pub fn rows_from_counts(c: &Counts) -> Vec<CountRow> {
    c.counts().iter().map(|(k, &v)| CountRow::new(k.clone(), v)).collect()
}

/// Reads `outcome,count` CSV, keeping rows in file order.
pub fn rows_from_csv(text: &str) -> Result<Vec<CountRow>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(o), Some(c)) = (col("outcome"), col("count")) else {
        return Err(Error::Parse("expected header `outcome,count`".into()));
    };
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let count = rec[c]
            .parse()
            .map_err(|_| Error::Parse(format!("bad count {:?}", &rec[c])))?;
        rows.push(CountRow::new(&rec[o], count));
    }
    Ok(rows)
}

fn counts_of(rows: &[CountRow]) -> Result<Vec<f64>> {
    if rows.is_empty() {
        return Err(Error::EmptyCounts);
    }
    Ok(rows.iter().map(|r| r.count as f64).collect())
}

/// Sum of counts over the number of rows.
pub fn mean_counts(rows: &[CountRow]) -> Result<f64> {
    let xs = counts_of(rows)?;
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Population variance `Σ(xᵢ − μ)² / n`.
pub fn variance_counts(rows: &[CountRow]) -> Result<f64> {
    let mu = mean_counts(rows)?;
    let xs = counts_of(rows)?;
    Ok(xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / xs.len() as f64)
}

/// `100 · Σ{count : is_error} / Σ count`.
pub fn error_rate(rows: &[CountRow], is_error: impl Fn(&CountRow) -> bool) -> Result<f64> {
    let total: u64 = rows.iter().map(|r| r.count).sum();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let bad: u64 = rows.iter().filter(|r| is_error(r)).map(|r| r.count).sum();
    Ok(100.0 * bad as f64 / total as f64)
}

/// Classifier treating every row below the maximum count as an error. Rows
/// tied at the maximum are all correct.
pub fn argmax_classifier(rows: &[CountRow]) -> impl Fn(&CountRow) -> bool {
    let max = rows.iter().map(|r| r.count).max().unwrap_or(0);
    move |r: &CountRow| r.count < max
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub mean: f64,
    pub variance: f64,
    pub error_rate_percent: f64,
    pub num_outcomes: usize,
    pub total_counts: u64,
}

pub fn summarize(rows: &[CountRow], is_error: impl Fn(&CountRow) -> bool) -> Result<StatsSummary> {
    Ok(StatsSummary {
        mean: mean_counts(rows)?,
        variance: variance_counts(rows)?,
        error_rate_percent: error_rate(rows, is_error)?,
        num_outcomes: rows.len(),
        total_counts: rows.iter().map(|r| r.count).sum(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub case: CaseId,
    pub p: usize,
    pub family: String,
    pub summary: StatsSummary,
}

/// Per-case statistics of two runs side by side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub pairs: Vec<(ComparisonEntry, ComparisonEntry)>,
}

fn entry(r: &CaseReport) -> ComparisonEntry {
    ComparisonEntry {
        case: r.case,
        p: r.case.spec().capability,
        family: r.family.to_string(),
        summary: r.stats.clone(),
    }
}

pub fn comparison_table(reports: &[(CaseReport, CaseReport)]) -> Result<ComparisonTable> {
    if reports.is_empty() {
        return Err(Error::EmptyCounts);
    }
    let pairs = reports
        .iter()
        .map(|(a, b)| {
            if a.case != b.case {
                Err(Error::MismatchedCases(a.case.to_string(), b.case.to_string()))
            } else {
                Ok((entry(a), entry(b)))
            }
        })
        .collect::<Result<_>>()?;
    Ok(ComparisonTable { pairs })
}

/// Fixed-point rendering with trailing zeros removed.
pub fn format_value(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

impl ComparisonTable {
    /// Aligned text in the layout `case P | μ μ | σ² σ² | η η`.
    pub fn to_text(&self) -> String {
        let (fa, fb) = self
            .pairs
            .first()
            .map(|(a, b)| (a.family.clone(), b.family.clone()))
            .unwrap_or_default();
        let mut grid = vec![vec![
            "case".to_string(),
            "P".into(),
            format!("mean[{fa}]"),
            format!("mean[{fb}]"),
            format!("var[{fa}]"),
            format!("var[{fb}]"),
            format!("eta%[{fa}]"),
            format!("eta%[{fb}]"),
        ]];
        for (a, b) in &self.pairs {
            grid.push(vec![
                a.case.to_string(),
                a.p.to_string(),
                format_value(a.summary.mean),
                format_value(b.summary.mean),
                format_value(a.summary.variance),
                format_value(b.summary.variance),
                format!("{:.2}", a.summary.error_rate_percent),
                format!("{:.2}", b.summary.error_rate_percent),
            ]);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in grid {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  "));
        }
        out
    }

    /// `case,P,family,mean,variance,error_rate`, two lines per case.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("case,P,family,mean,variance,error_rate\n");
        for (a, b) in &self.pairs {
            for e in [a, b] {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    e.case, e.p, e.family, e.summary.mean, e.summary.variance, e.summary.error_rate_percent
                );
            }
        }
        out
    }
}

/// Column selector for the paired count tables `t5`..`t8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    Qc,
    Gt,
}

impl std::str::FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qc" => Ok(Column::Qc),
            "gt" => Ok(Column::Gt),
            _ => Err(Error::Parse(format!("unknown column {s:?} (expected qc or gt)"))),
        }
    }
}

const FIXTURES: [(&str, &str); 10] = [
    ("t1", include_str!("../fixtures/t1.csv")),
    ("t2", include_str!("../fixtures/t2.csv")),
    ("t3", include_str!("../fixtures/t3.csv")),
    ("t4", include_str!("../fixtures/t4.csv")),
    ("t5", include_str!("../fixtures/t5.csv")),
    ("t6", include_str!("../fixtures/t6.csv")),
    ("t7", include_str!("../fixtures/t7.csv")),
    ("t8", include_str!("../fixtures/t8.csv")),
    ("t9", include_str!("../fixtures/t9.csv")),
    ("t10", include_str!("../fixtures/t10.csv")),
];

pub fn fixture_text(id: &str) -> Result<&'static str> {
    let id = id.to_ascii_lowercase();
    FIXTURES
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("unknown table {id:?} (expected t1..t10)")))
}

fn table_number(id: &str) -> Result<usize> {
    id.to_ascii_lowercase()
        .strip_prefix('t')
        .and_then(|n| n.parse().ok())
        .filter(|n| (1..=10).contains(n))
        .ok_or_else(|| Error::Parse(format!("unknown table {id:?} (expected t1..t10)")))
}

fn parse_records(text: &str) -> Result<Vec<csv::StringRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(e.to_string()))
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

/// Rows of count table `t1`..`t8`. `column` picks the paired column of
/// `t5`..`t8` and is ignored for `t1`..`t4`.
pub fn fixture_rows(id: &str, column: Column) -> Result<Vec<CountRow>> {
    let n = table_number(id)?;
    let text = fixture_text(id)?;
    match n {
        1..=4 => rows_from_csv(text),
        5..=8 => parse_records(text)?
            .iter()
            .map(|r| {
                let v = if column == Column::Qc { &r[1] } else { &r[2] };
                Ok(CountRow::new(&r[0], number(v)?))
            })
            .collect(),
        _ => Err(Error::InvalidArgument(format!("{id} is a statistics table, not a count table"))),
    }
}

/// Case whose counts a count table lists.
pub fn fixture_case(id: &str) -> Result<CaseId> {
    Ok(match table_number(id)? {
        1 | 5 => CaseId::C1,
        2 | 6 => CaseId::C2,
        3 | 7 => CaseId::C3,
        4 | 8 => CaseId::C4,
        _ => return Err(Error::InvalidArgument(format!("{id} is not a count table"))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    pub mean: f64,
    pub variance: f64,
    pub error_rate_percent: f64,
}

/// Published statistics for a table.
///
/// Count tables `t1`..`t4` resolve to their row of `t9`, and `t5`..`t8` to
/// the `column` half of their row of `t10`. The statistics tables need an
/// explicit `case`.
pub fn reference_values(id: &str, case: Option<CaseId>, column: Column) -> Result<ReferenceValues> {
    let n = table_number(id)?;
    let (stats_table, case) = match n {
        1..=4 => ("t9", fixture_case(id)?),
        5..=8 => ("t10", fixture_case(id)?),
        9 | 10 => (
            if n == 9 { "t9" } else { "t10" },
            case.ok_or_else(|| Error::InvalidArgument(format!("{id} needs a case")))?,
        ),
        _ => unreachable!("table_number bounds the id"),
    };
    let records = parse_records(fixture_text(stats_table)?)?;
    let row = records
        .iter()
        .find(|r| &r[0] == case.to_string().as_str())
        .ok_or_else(|| Error::Parse(format!("{stats_table} has no row for {case}")))?;
    if stats_table == "t9" {
        return Ok(ReferenceValues {
            mean: number(&row[2])?,
            variance: number(&row[3])?,
            error_rate_percent: number(&row[4])?,
        });
    }
    // t10 columns: case,p,gt_mean,qc_mean,gt_var,qc_var,gt_eta,qc_eta
    let off = if column == Column::Gt { 0 } else { 1 };
    Ok(ReferenceValues {
        mean: number(&row[2 + off])?,
        variance: number(&row[4 + off])?,
        error_rate_percent: number(&row[6 + off])?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLine {
    pub quantity: String,
    pub computed: f64,
    pub reference: f64,
    pub matches: bool,
}

impl ReferenceLine {
    pub fn render(&self) -> String {
        format!(
            "{:<10} computed={:<10} reference={:<10} {}",
            self.quantity,
            format_value(self.computed),
            format_value(self.reference),
            if self.matches { "MATCH" } else { "DISCREPANCY" }
        )
    }
}

pub fn compare_with_reference(s: &StatsSummary, r: &ReferenceValues) -> Vec<ReferenceLine> {
    [
        ("mean", s.mean, r.mean),
        ("variance", s.variance, r.variance),
        ("error_rate", s.error_rate_percent, r.error_rate_percent),
    ]
    .into_iter()
    .map(|(q, c, p)| ReferenceLine {
        quantity: q.into(),
        computed: c,
        reference: p,
        matches: (c - p).abs() <= REFERENCE_TOLERANCE,
    })
    .collect()
}

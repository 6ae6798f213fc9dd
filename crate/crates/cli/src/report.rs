//! Verification reports and their text and structured renderings.
//!
//! The structured form is JSON with `schema_version` at the top level.
//! Maps are ordered, floats round-trip exactly, and wall time is only
//! present when requested, so equal inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Stand-in for residuals that came out non-finite.
pub const NON_FINITE_RESIDUAL: f64 = f64::MAX;

/// Maps NaN and infinities to [`NON_FINITE_RESIDUAL`] and negatives to their magnitude.
pub fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x.abs()
    } else {
        NON_FINITE_RESIDUAL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

/// A measured residual with the bound it is held to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub value: f64,
    /// Absent for informational metrics.
    pub threshold: Option<f64>,
}

impl Metric {
    pub fn passed(&self) -> bool {
        self.threshold.is_none_or(|t| self.value <= t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub expected: Option<usize>,
    pub got: usize,
}

impl DimensionRecord {
    pub fn matches(&self) -> bool {
        self.expected.is_none_or(|e| e == self.got)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub verdict: Verdict,
    /// Largest value among the thresholded metrics.
    pub residual: f64,
    pub metrics: BTreeMap<String, Metric>,
    pub dimensions: BTreeMap<String, DimensionRecord>,
    pub samples: usize,
    pub notes: Vec<String>,
}

impl ClaimRecord {
    pub fn new(claim: &str) -> Self {
        ClaimRecord {
            claim: claim.to_string(),
            verdict: Verdict::Pass,
            residual: 0.0,
            metrics: BTreeMap::new(),
            dimensions: BTreeMap::new(),
            samples: 0,
            notes: Vec::new(),
        }
    }

    pub fn skipped(claim: &str, note: impl Into<String>) -> Self {
        let mut r = ClaimRecord::new(claim);
        r.verdict = Verdict::Skipped;
        r.notes.push(note.into());
        r
    }

    pub fn metric(&mut self, name: &str, value: f64, threshold: f64) -> &mut Self {
        let value = finite(value);
        self.residual = self.residual.max(value);
        self.metrics.insert(name.to_string(), Metric { value, threshold: Some(threshold) });
        self
    }

    pub fn info(&mut self, name: &str, value: f64) -> &mut Self {
        self.metrics.insert(name.to_string(), Metric { value: finite(value), threshold: None });
        self
    }

    pub fn dim(&mut self, name: &str, expected: Option<usize>, got: usize) -> &mut Self {
        self.dimensions.insert(name.to_string(), DimensionRecord { expected, got });
        self
    }

    /// Fails the claim with an explanatory note.
    pub fn fail(&mut self, note: impl Into<String>) -> &mut Self {
        self.verdict = Verdict::Fail;
        self.notes.push(note.into());
        self
    }

    /// Sets the verdict from the metrics and dimensions unless already failed or skipped.
    pub fn settle(mut self) -> Self {
        if self.verdict == Verdict::Pass
            && !(self.metrics.values().all(Metric::passed) && self.dimensions.values().all(DimensionRecord::matches))
        {
            self.verdict = Verdict::Fail;
        }
        self
    }

    /// Human-readable list of failed metrics and mismatched dimensions.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, m) in &self.metrics {
            if !m.passed() {
                out.push(format!("{name}: {:.3e} > {:.1e}", m.value, m.threshold.unwrap_or_default()));
            }
        }
        for (name, d) in &self.dimensions {
            if !d.matches() {
                out.push(format!("{name}: expected {}, got {}", d.expected.unwrap_or_default(), d.got));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Status {
    Completed,
    Rejected { stage: String, residual: Option<f64>, message: String },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entry_id: String,
    /// Absent when the entry was rejected or skipped before any `s` was used.
    pub s: Option<f64>,
    pub seed: u64,
    pub normalization: String,
    pub status: Status,
    pub claims: Vec<ClaimRecord>,
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn rejected(&self) -> bool {
        matches!(self.status, Status::Rejected { .. })
    }

    pub fn failed(&self) -> bool {
        self.claims.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.claim == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub samples: usize,
    pub tolerance_override: Option<f64>,
    /// Rule used to call a sample regular.
    pub regular_proxy: String,
    pub reports: Vec<VerificationReport>,
}

impl RunReport {
    /// 0 all pass, 1 verification mismatch, 2 construction rejection.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(VerificationReport::rejected) {
            2
        } else if self.reports.iter().any(VerificationReport::failed) {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

pub fn parse_structured(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

fn s_label(s: Option<f64>) -> String {
    s.map_or_else(|| "-".to_string(), |s| format!("{s}"))
}

fn render_text(report: &RunReport) -> String {
    let mut rows: Vec<[String; 6]> = Vec::new();
    let mut notes = Vec::new();
    for r in &report.reports {
        let s = s_label(r.s);
        match &r.status {
            Status::Rejected { stage, residual, message } => notes.push(format!(
                "{} s={s}: rejected at {stage}{}: {message}",
                r.entry_id,
                residual.map(|x| format!(" (residual {x:.3e})")).unwrap_or_default()
            )),
            Status::Skipped { reason } => notes.push(format!("{}: skipped ({reason})", r.entry_id)),
            Status::Completed => {}
        }
        for c in &r.claims {
            let threshold = c
                .metrics
                .values()
                .filter_map(|m| m.threshold)
                .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.max(t))));
            rows.push([
                r.entry_id.clone(),
                s.clone(),
                c.claim.clone(),
                c.verdict.as_str().to_string(),
                format!("{:.3e}", c.residual),
                threshold.map_or_else(|| "-".to_string(), |t| format!("{t:.1e}")),
            ]);
            for m in c.mismatches() {
                notes.push(format!("{} s={s} {}: {m}", r.entry_id, c.claim));
            }
            for n in &c.notes {
                if c.verdict != Verdict::Skipped {
                    notes.push(format!("{} s={s} {}: {n}", r.entry_id, c.claim));
                }
            }
        }
    }
    let header = ["entry", "s", "claim", "verdict", "residual", "threshold"].map(String::from);
    let mut widths = header.clone().map(|h| h.len());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let line: Vec<_> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
    }
    if !notes.is_empty() {
        writeln!(out).unwrap();
        for n in notes {
            writeln!(out, "{n}").unwrap();
        }
    }
    writeln!(out).unwrap();
    writeln!(
        out,
        "seed {}  samples {}  regular proxy: {}  exit {}",
        report.seed,
        report.samples,
        report.regular_proxy,
        report.exit_code()
    )
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut c = ClaimRecord::new("pair");
        c.metric("jacobi", 1.234e-15, 1e-10).dim("dim_g", Some(8), 8).info("note", f64::NAN);
        let c = c.settle();
        RunReport {
            schema_version: SCHEMA_VERSION,
            seed: 7,
            samples: 20,
            tolerance_override: None,
            regular_proxy: "max".into(),
            reports: vec![VerificationReport {
                entry_id: "x".into(),
                s: Some(0.1 + 0.2),
                seed: 7,
                normalization: "n".into(),
                status: Status::Completed,
                claims: vec![c],
                wall_time_ms: None,
            }],
        }
    }

    #[test]
    fn structured_round_trip_is_exact() {
        let r = sample();
        let back = parse_structured(&render(&r, Format::Structured)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn non_finite_values_are_sanitized() {
        let r = sample();
        assert_eq!(r.reports[0].claims[0].metrics["note"].value, NON_FINITE_RESIDUAL);
    }

    #[test]
    fn text_has_one_line_per_claim_in_scientific_notation() {
        let text = render(&sample(), Format::Text);
        let lines: Vec<_> = text.lines().filter(|l| l.starts_with("x ")).collect();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].contains("1.234e-15"));
        assert!(lines[0].contains("pass"));
    }

    #[test]
    fn mismatched_dimension_fails_the_claim() {
        let mut c = ClaimRecord::new("split");
        c.dim("dim_k", Some(3), 2);
        let c = c.settle();
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.mismatches(), vec!["dim_k: expected 3, got 2".to_string()]);
    }
}

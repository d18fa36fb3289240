//! Check reports, residual measurement and report documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::expr::Point;
use crate::sample::SamplePlan;
use crate::spec_file::Expectation;
use crate::tensor::{Frame, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The check's hypothesis did not hold, so it was not evaluated.
    Skipped,
    NotApplicable,
    /// A condition probe that holds; probes never fail a document.
    Holds,
    Violated,
    /// A negative control that failed as intended.
    ExpectedFail,
    /// A negative control that unexpectedly passed.
    UnexpectedPass,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::UnexpectedPass)
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::NotApplicable => "N/A",
            Status::Holds => "HOLDS",
            Status::Violated => "VIOLATED",
            Status::ExpectedFail => "XFAIL",
            Status::UnexpectedPass => "XPASS",
        }
    }
}

/// Tolerances for every check family. `scaled` multiplies all of them by
/// `tol / 1e-9`, so `--tol` moves the whole family together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub soliton: f64,
    pub exact: f64,
    pub second_bianchi: f64,
    pub weyl_trace: f64,
    pub ricci_xi: f64,
    pub declared_match: f64,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { soliton: 1e-9, exact: 1e-10, second_bianchi: 1e-8, weyl_trace: 1e-9, ricci_xi: 1e-8, declared_match: 1e-8 }
    }
}

impl Tolerances {
    pub fn scaled(tol: f64) -> Self {
        let f = tol / DEFAULT_TOLERANCE;
        let d = Tolerances::default();
        Tolerances {
            soliton: d.soliton * f,
            exact: d.exact * f,
            second_bianchi: d.second_bianchi * f,
            weyl_trace: d.weyl_trace * f,
            ricci_xi: d.ricci_xi * f,
            declared_match: d.declared_match * f,
        }
    }
}

/// One residual measurement at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// `max |frame component| / (1 + max input magnitude)`.
    pub residual: f64,
    pub max_abs: f64,
    pub coordinate_max: f64,
    pub component: Vec<usize>,
    pub value: f64,
}

impl Sample {
    pub fn scalar(residual: f64, scale: f64) -> Self {
        Sample {
            residual: residual.abs() / (1.0 + scale.abs()),
            max_abs: residual.abs(),
            coordinate_max: residual.abs(),
            component: Vec::new(),
            value: residual,
        }
    }
}

/// Measure a residual tensor in the orthonormal frame, normalized by the
/// largest frame component among the terms that built it.
pub fn measure(residual: &Tensor<f64>, terms: &[&Tensor<f64>], frame: &Frame<f64>) -> Sample {
    let projected = frame.project(residual);
    let component = projected.argmax_abs();
    let value = *projected.get(&component);
    let scale = terms.iter().map(|t| frame.project(t).max_abs()).fold(0.0, f64::max);
    Sample { residual: value.abs() / (1.0 + scale), max_abs: value.abs(), coordinate_max: residual.max_abs(), component, value }
}

/// A residual tensor (rank 0 for scalar identities) together with the terms
/// it was assembled from, which set its normalization.
#[derive(Debug, Clone)]
pub struct Residual {
    pub residual: Tensor<f64>,
    pub terms: Vec<Tensor<f64>>,
}

impl Residual {
    pub fn new(residual: Tensor<f64>, terms: Vec<Tensor<f64>>) -> Self {
        Residual { residual, terms }
    }

    /// `lhs − rhs`, normalized by both sides.
    pub fn difference(lhs: Tensor<f64>, rhs: Tensor<f64>) -> Self {
        let residual = lhs.minus(&rhs).expect("identity sides share a shape");
        Residual { residual, terms: vec![lhs, rhs] }
    }

    pub fn scalar(lhs: f64, rhs: f64) -> Self {
        Residual::difference(Tensor::scalar(lhs), Tensor::scalar(rhs))
    }

    pub fn sample(&self, frame: &Frame<f64>) -> Sample {
        let terms: Vec<&Tensor<f64>> = self.terms.iter().collect();
        measure(&self.residual, &terms, frame)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Worst {
    pub point_index: usize,
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub component: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
    pub status: Status,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_coordinate: Option<f64>,
    pub points: usize,
    pub failing_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<Worst>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<f64>,
    /// Sample-point index of each entry in `residuals`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point_indices: Vec<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn display_name(&self) -> String {
        match &self.subject {
            Some(s) => format!("{} [{}]", self.name, s),
            None => self.name.clone(),
        }
    }

    /// Fraction of evaluated points whose residual is within tolerance.
    pub fn pass_fraction(&self) -> f64 {
        if self.points == 0 {
            0.0
        } else {
            (self.points - self.failing_points) as f64 / self.points as f64
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Holds | Status::UnexpectedPass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Verdict(Expectation),
    Probe,
}

/// Collects per-point samples and produces a [`CheckReport`].
#[derive(Debug, Clone)]
pub struct CheckBuilder {
    name: String,
    group: String,
    subject: Option<String>,
    claim: Option<String>,
    tolerance: f64,
    mode: Mode,
    samples: Vec<(usize, Sample)>,
    values: BTreeMap<String, f64>,
    detail: Option<String>,
}

impl CheckBuilder {
    pub fn new(group: &str, name: &str, tolerance: f64) -> Self {
        CheckBuilder {
            name: name.to_string(),
            group: group.to_string(),
            subject: None,
            claim: None,
            tolerance,
            mode: Mode::Verdict(Expectation::Pass),
            samples: Vec::new(),
            values: BTreeMap::new(),
            detail: None,
        }
    }

    pub fn subject(mut self, subject: &str) -> Self {
        self.subject = Some(subject.to_string());
        self
    }

    pub fn claim(mut self, claim: Option<&str>) -> Self {
        self.claim = claim.map(str::to_string);
        self
    }

    pub fn expect(mut self, expect: Expectation) -> Self {
        self.mode = Mode::Verdict(expect);
        self
    }

    /// Report `holds`/`violated` instead of a verdict.
    pub fn probe(mut self) -> Self {
        self.mode = Mode::Probe;
        self
    }

    pub fn push(&mut self, point_index: usize, sample: Sample) {
        self.samples.push((point_index, sample));
    }

    pub fn value(&mut self, key: &str, v: f64) {
        self.values.insert(key.to_string(), v);
    }

    pub fn detail(&mut self, text: impl Into<String>) {
        self.detail = Some(text.into());
    }

    /// Record min/max of a sampled field.
    pub fn range(&mut self, key: &str, samples: &[f64]) {
        if samples.is_empty() {
            return;
        }
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.value(&format!("{key}_min"), lo);
        self.value(&format!("{key}_max"), hi);
    }

    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|(_, s)| s.residual).fold(0.0, f64::max)
    }

    pub fn within_tolerance(&self) -> bool {
        !self.samples.is_empty() && self.max_residual() <= self.tolerance
    }

    fn report(self, status: Status, points: &[Point]) -> CheckReport {
        let n = self.samples.len();
        let failing = self.samples.iter().filter(|(_, s)| s.residual.is_nan() || s.residual > self.tolerance).count();
        let (max_residual, mean_residual, max_abs, max_coordinate, worst) = if n == 0 {
            (None, None, None, None, None)
        } else {
            let mut sum = 0.0;
            let mut worst_at = 0;
            for (k, (_, s)) in self.samples.iter().enumerate() {
                sum += s.residual;
                if s.residual > self.samples[worst_at].1.residual {
                    worst_at = k;
                }
            }
            let (pi, ws) = &self.samples[worst_at];
            let worst = Worst { point_index: *pi, point: points[*pi].0.clone(), component: ws.component.clone(), value: ws.value };
            (
                Some(ws.residual),
                Some(sum / n as f64),
                Some(self.samples.iter().map(|(_, s)| s.max_abs).fold(0.0, f64::max)),
                Some(self.samples.iter().map(|(_, s)| s.coordinate_max).fold(0.0, f64::max)),
                Some(worst),
            )
        };
        CheckReport {
            name: self.name,
            group: self.group,
            subject: self.subject,
            claim: self.claim,
            status,
            tolerance: self.tolerance,
            max_residual,
            mean_residual,
            max_abs,
            max_coordinate,
            points: n,
            failing_points: failing,
            worst,
            residuals: self.samples.iter().map(|(_, s)| s.residual).collect(),
            point_indices: self.samples.iter().map(|(i, _)| *i).collect(),
            values: self.values,
            detail: self.detail,
        }
    }

    pub fn finish(self, points: &[Point]) -> CheckReport {
        if self.samples.is_empty() {
            let mut b = self;
            if b.detail.is_none() {
                b.detail = Some("no sample point could be evaluated".into());
            }
            return b.report(Status::Skipped, points);
        }
        let ok = self.within_tolerance();
        let status = match (self.mode, ok) {
            (Mode::Probe, true) => Status::Holds,
            (Mode::Probe, false) => Status::Violated,
            (Mode::Verdict(Expectation::Pass), true) => Status::Pass,
            (Mode::Verdict(Expectation::Pass), false) => Status::Fail,
            (Mode::Verdict(Expectation::Fail), true) => Status::UnexpectedPass,
            (Mode::Verdict(Expectation::Fail), false) => Status::ExpectedFail,
        };
        self.report(status, points)
    }

    /// Finish with a fixed status (skipped, not applicable, or a pass/fail
    /// decided by the caller), keeping any samples gathered.
    pub fn finish_as(mut self, status: Status, detail: &str, points: &[Point]) -> CheckReport {
        self.detail = Some(detail.to_string());
        self.report(status, points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub index: Vec<usize>,
    pub value: f64,
}

/// Nonzero components of a tensor at one sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub basis: String,
    pub layout: String,
    pub point: Vec<f64>,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPoint {
    pub index: usize,
    pub point: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub manifold: String,
    pub dimension: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub sample_plan: SamplePlan,
    pub points: usize,
    pub sample_points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped_points: Vec<SkippedPoint>,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    pub verdict: Verdict,
}

impl ReportDocument {
    pub fn recompute_verdict(&mut self) {
        self.verdict = if self.checks.iter().any(|c| c.status.is_failure()) { Verdict::Fail } else { Verdict::Pass };
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str, subject: Option<&str>) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name && c.subject.as_deref() == subject)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports always serialize");
        text.push('\n');
        text
    }

    /// One row per (check, point) residual; checks without per-point data
    /// get a single row with an empty point index.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "subject", "status", "tolerance", "point_index", "point", "residual"]).expect("in-memory write");
        for c in &self.checks {
            let subject = c.subject.clone().unwrap_or_default();
            let tol = format!("{:e}", c.tolerance);
            if c.residuals.is_empty() {
                w.write_record([c.name.as_str(), &subject, c.status.label(), &tol, "", "", ""]).expect("in-memory write");
                continue;
            }
            for (r, &pi) in c.residuals.iter().zip(&c.point_indices) {
                let coords = self.sample_points[pi].iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";");
                w.write_record([c.name.as_str(), &subject, c.status.label(), &tol, &pi.to_string(), &coords, &format!("{r:e}")])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Human-readable line per check; claims are listed first.
    pub fn claim_table(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.display_name().chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let residual = c.max_residual.map(|r| format!("{r:.2e}")).unwrap_or_else(|| "-".into());
            let claim = c.claim.as_deref().unwrap_or("");
            let _ = writeln!(out, "{:<8} {:<width$}  {:>9}  {}", c.status.label(), c.display_name(), residual, claim, width = width);
        }
        let _ = writeln!(out, "verdict: {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

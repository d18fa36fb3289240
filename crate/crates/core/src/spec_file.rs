//! JSON manifold description: chart, metric, optional almost contact
//! structure, soliton candidates, sample plan and expected values.
//!
//! All fields are plain strings in the expression grammar of
//! [`crate::expr::parse`], so files are writable by hand and diff cleanly.
//! Matrices are row-major; `phi[i][j]` is the component `φ^i_j`, i.e.
//! `φ(∂_j) = φ^i_j ∂_i`, and `frame[a]` lists the coordinate components of
//! the frame vector `E_a`. Frame and index references are 0-based.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::InputError;

use crate::sample::SamplePlan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpecFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    #[serde(default)]
    pub domain: Vec<String>,
    pub metric: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub candidates: Vec<CandidateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_plan: Option<SamplePlan>,
    #[serde(default)]
    pub expected: Vec<ExpectedEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    pub eta: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolitonKind {
    Riemann,
    Ricci,
    Yamabe,
}

impl SolitonKind {
    pub fn label(self) -> &'static str {
        match self {
            SolitonKind::Riemann => "riemann",
            SolitonKind::Ricci => "ricci",
            SolitonKind::Yamabe => "yamabe",
        }
    }
}

/// Whether a candidate is expected to satisfy its soliton equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    #[default]
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub name: String,
    /// Coordinate components of the potential field `V`.
    pub potential: Vec<String>,
    pub lambda: String,
    pub kind: SolitonKind,
    #[serde(default)]
    pub collinear: bool,
    #[serde(default)]
    pub expect: Expectation,
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// Stated in the published worked example.
    Published,
    /// Obtained by an independent hand or numeric computation.
    Computed,
    /// Immediate from definitions.
    Elementary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureClass {
    Cosymplectic,
    BetaSasakian,
    Sasakian,
    AlphaKenmotsu,
    Kenmotsu,
    TransSasakian,
    NotAlphaBeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEntry {
    pub label: String,
    pub origin: Origin,
    #[serde(flatten)]
    pub value: ExpectedValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ExpectedValue {
    /// `∇_{E_a}E_b = Σ_c result[c] E_c`.
    Connection {
        a: usize,
        b: usize,
        result: Vec<String>,
    },
    /// Coordinate Christoffel symbol `Γ^upper_{lower[0] lower[1]}`.
    Christoffel {
        upper: usize,
        lower: [usize; 2],
        value: String,
    },
    /// `R(E_a,E_b)E_c = Σ_d result[d] E_d`.
    Curvature {
        a: usize,
        b: usize,
        c: usize,
        result: Vec<String>,
    },
    /// `Ric(E_a, E_b)`.
    Ricci {
        a: usize,
        b: usize,
        value: String,
    },
    ScalarCurvature {
        value: String,
    },
    /// `(£_V g)(E_a, E_b)` for the named candidate's potential.
    LieDerivative {
        candidate: String,
        a: usize,
        b: usize,
        value: String,
    },
    Divergence {
        candidate: String,
        value: String,
    },
    AlphaBeta {
        alpha: String,
        beta: String,
        class: StructureClass,
    },
    RicciXiXi {
        value: String,
    },
    /// One frame component of the candidate's soliton residual tensor.
    ResidualComponent {
        candidate: String,
        component: Vec<usize>,
        value: String,
    },
}

impl ManifoldSpecFile {
    /// Parse a spec file; `path` is only used in diagnostics.
    pub fn from_json(text: &str, path: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| {
            let mut message = e.to_string();
            if let Some(at) = message.rfind(" at line ") {
                message.truncate(at);
            }
            InputError::Json { path: path.to_string(), line: e.line(), column: e.column(), message }
        })
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| InputError::Io { action: "read", path: shown.clone(), message: e.to_string() })?;
        Self::from_json(&text, &shown)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("spec files always serialize");
        text.push('\n');
        text
    }
}

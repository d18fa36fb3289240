//! Check suites behind each command, assembled into report documents.

use crate::contact;
use crate::expected;
use crate::invariants;
use crate::report::{CheckReport, ReportDocument, Table, Verdict};
use crate::session::Session;
use crate::soliton::{self, SolitonOptions};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn document(session: &Session, command: &str, checks: Vec<CheckReport>, tables: Vec<Table>) -> ReportDocument {
    let mut doc = ReportDocument {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        command: command.to_string(),
        manifold: session.name().to_string(),
        dimension: session.dim(),
        seed: session.plan.seed,
        tolerance: session.tolerance,
        sample_plan: session.plan.clone(),
        points: session.points.len(),
        sample_points: session.sample_points.iter().map(|p| p.coords().to_vec()).collect(),
        skipped_points: session.skipped.clone(),
        checks,
        tables,
        verdict: Verdict::Pass,
    };
    doc.recompute_verdict();
    doc
}

/// Metric symmetry, structure axioms and the `(α, β)` fit.
pub fn validate(session: &Session) -> ReportDocument {
    document(session, "validate", contact::structure_checks(session), Vec::new())
}

/// Curvature identities plus component tables.
pub fn curvature(session: &Session, frame: bool) -> ReportDocument {
    document(session, "curvature", invariants::curvature_checks(session), invariants::tables(session, frame))
}

/// Soliton checks for the selected candidates (all of them when `None`).
pub fn check_soliton(session: &Session, selected: Option<usize>, opts: SolitonOptions) -> ReportDocument {
    let selected: Vec<usize> = match selected {
        Some(k) => vec![k],
        None => (0..session.candidates.len()).collect(),
    };
    document(session, "check-soliton", soliton::run(session, &selected, opts), Vec::new())
}

/// Every suite at once: structure, derived identities, curvature,
/// expected values and all soliton checks with λ recovery.
pub fn verify(session: &Session) -> ReportDocument {
    let mut checks = contact::structure_checks(session);
    checks.extend(contact::identity_checks(session));
    checks.extend(invariants::curvature_checks(session));
    checks.extend(expected::expected_checks(session));
    let all: Vec<usize> = (0..session.candidates.len()).collect();
    checks.extend(soliton::run(session, &all, SolitonOptions { solve_lambda: true }));
    document(session, "verify-paper", checks, invariants::tables(session, true))
}

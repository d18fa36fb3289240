//! Comparison of computed values against a manifold's expected-value list.

use std::collections::BTreeSet;

use crate::contact::{self, class_label};
use crate::report::{CheckBuilder, CheckReport, Residual, Sample, Status};
use crate::session::{PointData, Session};
use crate::soliton::formulas::Equation;
use crate::spec_file::{ExpectedEntry, ExpectedValue, Origin};
use crate::tensor::{lie_derivative, Frame, Tensor, Variance};

fn origin_label(origin: Origin) -> &'static str {
    match origin {
        Origin::Published => "published worked example",
        Origin::Computed => "independent computation",
        Origin::Elementary => "elementary",
    }
}

fn type_name(value: &ExpectedValue) -> &'static str {
    match value {
        ExpectedValue::Connection { .. } => "expected.connection",
        ExpectedValue::Christoffel { .. } => "expected.christoffel",
        ExpectedValue::Curvature { .. } => "expected.curvature",
        ExpectedValue::Ricci { .. } => "expected.ricci",
        ExpectedValue::ScalarCurvature { .. } => "expected.scalar-curvature",
        ExpectedValue::LieDerivative { .. } => "expected.lie-derivative",
        ExpectedValue::Divergence { .. } => "expected.divergence",
        ExpectedValue::AlphaBeta { .. } => "expected.alpha-beta",
        ExpectedValue::RicciXiXi { .. } => "expected.ricci-xi-xi",
        ExpectedValue::ResidualComponent { .. } => "expected.residual-component",
    }
}

fn eval(session: &Session, text: &str, pd: &PointData) -> Result<f64, String> {
    session.evaluate_text(text, &pd.coords)
}

fn eval_all(session: &Session, texts: &[String], pd: &PointData) -> Result<Vec<f64>, String> {
    texts.iter().map(|t| eval(session, t, pd)).collect()
}

fn vector(v: Vec<f64>) -> Tensor<f64> {
    Tensor::from_components(v.len(), vec![Variance::Covariant], v)
}

/// Measure a residual whose components are already frame components.
fn plain(res: &Residual) -> Sample {
    let m = res.residual.dim();
    let unit: Vec<Vec<f64>> = (0..m).map(|a| (0..m).map(|i| if a == i { 1.0 } else { 0.0 }).collect()).collect();
    res.sample(&Frame { vectors: unit.clone(), coframe: unit })
}

/// `computed − expected` for one entry at one point, in frame components.
fn compare(session: &Session, value: &ExpectedValue, pd: &PointData) -> Result<Option<Residual>, String> {
    let geo = &pd.geo;
    let f = &geo.frame_values;
    let m = session.dim();
    let check_index = |ix: &[usize]| {
        if ix.iter().any(|&i| i >= m) {
            Err(format!("index {ix:?} out of range for dimension {m}"))
        } else {
            Ok(())
        }
    };
    Ok(Some(match value {
        ExpectedValue::Connection { a, b, result } => {
            check_index(&[*a, *b])?;
            let w = geo.frame_connection();
            let got = (0..m).map(|c| *w.get(&[*a, *b, c])).collect();
            Residual::difference(vector(got), vector(eval_all(session, result, pd)?))
        }
        ExpectedValue::Christoffel { upper, lower, value } => {
            check_index(&[*upper, lower[0], lower[1]])?;
            let got = geo.christoffel.get(&[*upper, lower[0], lower[1]]).value();
            Residual::scalar(got, eval(session, value, pd)?)
        }
        ExpectedValue::Curvature { a, b, c, result } => {
            check_index(&[*a, *b, *c])?;
            let r = f.project(&geo.riemann_up.values());
            let got = (0..m).map(|d| *r.get(&[d, *a, *b, *c])).collect();
            Residual::difference(vector(got), vector(eval_all(session, result, pd)?))
        }
        ExpectedValue::Ricci { a, b, value } => {
            check_index(&[*a, *b])?;
            let got = *f.project(&geo.ricci.values()).get(&[*a, *b]);
            Residual::scalar(got, eval(session, value, pd)?)
        }
        ExpectedValue::ScalarCurvature { value } => Residual::scalar(geo.scal.value(), eval(session, value, pd)?),
        ExpectedValue::LieDerivative { candidate, a, b, value } => {
            check_index(&[*a, *b])?;
            let k = session.candidate(candidate).map_err(|e| e.to_string())?;
            let (v, _) = session.candidate_fields(k, pd)?;
            let lie = lie_derivative(&v, &geo.metric.g.truncate(2)).map_err(|e| e.to_string())?.values();
            Residual::scalar(*f.project(&lie).get(&[*a, *b]), eval(session, value, pd)?)
        }
        ExpectedValue::Divergence { candidate, value } => {
            let k = session.candidate(candidate).map_err(|e| e.to_string())?;
            let (v, _) = session.candidate_fields(k, pd)?;
            let nabla = geo.covariant(&v.truncate(1)).values();
            let div = (0..m).map(|i| nabla.get(&[i, i])).sum();
            Residual::scalar(div, eval(session, value, pd)?)
        }
        ExpectedValue::AlphaBeta { alpha, beta, .. } => {
            let Some(cp) = &pd.contact else { return Ok(None) };
            if !cp.fit.rank_ok {
                return Err("(α, β) fit is rank-deficient".into());
            }
            let got = vector(vec![cp.fit.alpha.value(), cp.fit.beta.value()]);
            Residual::difference(got, vector(vec![eval(session, alpha, pd)?, eval(session, beta, pd)?]))
        }
        ExpectedValue::RicciXiXi { value } => {
            let Some(cp) = &pd.contact else { return Ok(None) };
            let Some((a, b)) = cp.alpha_beta() else { return Err("no (α, β) available".into()) };
            let (lhs, _) = contact::ricci_xi_xi(cp, geo, a, b);
            Residual::scalar(lhs, eval(session, value, pd)?)
        }
        ExpectedValue::ResidualComponent { candidate, component, value } => {
            let k = session.candidate(candidate).map_err(|e| e.to_string())?;
            let c = &session.candidates[k];
            let (v, lambda) = session.candidate_fields(k, pd)?;
            let lambda = lambda.value();
            let lie = lie_derivative(&v, &geo.metric.g.truncate(2)).map_err(|e| e.to_string())?.values();
            let pv = crate::soliton::point_values(geo);
            let res = Equation::new(c.kind, &pv, &lie).residual(lambda).residual;
            let projected = f.project(&res);
            if component.len() != projected.rank() {
                return Err(format!("component {component:?} does not match a rank-{} residual", projected.rank()));
            }
            check_index(component)?;
            Residual::scalar(*projected.get(component), eval(session, value, pd)?)
        }
    }))
}

fn entry_check(session: &Session, entry: &ExpectedEntry, class: Option<crate::spec_file::StructureClass>) -> CheckReport {
    let tol = match entry.value {
        ExpectedValue::RicciXiXi { .. } => session.tol.ricci_xi,
        _ => session.tol.soliton,
    };
    let mut b = CheckBuilder::new("expected", type_name(&entry.value), tol).subject(&entry.label).claim(Some(origin_label(entry.origin)));
    let mut errors = Vec::new();
    for pd in &session.points {
        match compare(session, &entry.value, pd) {
            Ok(Some(res)) => b.push(pd.index, plain(&res)),
            Ok(None) => {}
            Err(e) => errors.push(e),
        }
    }
    if let Some(e) = errors.first() {
        return b.finish_as(Status::Fail, &format!("could not evaluate at {} point(s): {e}", errors.len()), &session.sample_points);
    }
    if let ExpectedValue::AlphaBeta { class: want, .. } = &entry.value {
        let got = class.map(class_label).unwrap_or("no structure");
        if class != Some(*want) {
            let detail = format!("class {got}, expected {}", class_label(*want));
            return b.finish_as(Status::Fail, &detail, &session.sample_points);
        }
        b.detail(format!("class {got}"));
    }
    b.finish(&session.sample_points)
}

/// Components of a table that the expected list does not mention must vanish.
fn completeness(
    session: &Session,
    name: &str,
    claim: &str,
    listed: &BTreeSet<Vec<usize>>,
    rank: usize,
    value: impl Fn(&PointData) -> Tensor<f64>,
) -> CheckReport {
    let mut b = CheckBuilder::new("expected", name, session.tol.soliton).claim(Some(claim));
    for pd in &session.points {
        let t = value(pd);
        let rest = Tensor::from_fn(t.dim(), t.variance().to_vec(), |ix| if listed.contains(&ix[..rank].to_vec()) { 0.0 } else { *t.get(ix) });
        b.push(pd.index, plain(&Residual::new(rest, vec![t])));
    }
    b.finish(&session.sample_points)
}

/// One check per expected entry, plus completeness checks for the frame
/// connection and Ricci tables when entries of those kinds are listed.
pub fn expected_checks(session: &Session) -> Vec<CheckReport> {
    let class = contact::profile(session).map(|p| p.class);
    let mut out: Vec<CheckReport> = session.spec.expected.iter().map(|e| entry_check(session, e, class)).collect();
    let mut connection = BTreeSet::new();
    let mut ricci = BTreeSet::new();
    for e in &session.spec.expected {
        match &e.value {
            ExpectedValue::Connection { a, b, .. } => {
                connection.insert(vec![*a, *b]);
            }
            ExpectedValue::Ricci { a, b, .. } => {
                ricci.insert(vec![*a, *b]);
                ricci.insert(vec![*b, *a]);
            }
            _ => {}
        }
    }
    if !connection.is_empty() {
        out.push(completeness(session, "expected.connection-complete", "unlisted ∇_{E_a}E_b vanish", &connection, 2, |pd| {
            pd.geo.frame_connection()
        }));
    }
    if !ricci.is_empty() {
        out.push(completeness(session, "expected.ricci-complete", "unlisted Ric(E_a, E_b) vanish", &ricci, 2, |pd| {
            pd.geo.frame_values.project(&pd.geo.ricci.values())
        }));
    }
    out
}

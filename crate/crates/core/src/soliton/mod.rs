//! Almost Riemann, Ricci and Yamabe soliton residuals, pointwise λ
//! recovery, and the identities that follow from each soliton equation.

pub mod formulas;
pub mod propositions;

use crate::geometry::PointGeometry;
use crate::jet::Jet;
use crate::report::{CheckBuilder, CheckReport, Residual, Sample, Status};
use crate::session::{PointData, Session};
use crate::spec_file::{Expectation, SolitonKind};
use crate::tensor::{lie_derivative, Frame, Scalar, Tensor};

use formulas::{Collinear, ContactValues, Equation, PointValues};

/// Relative agreement used when deciding whether two sampled fields
/// (potentials, soliton functions) are the same field.
pub const SAME_FIELD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolitonOptions {
    pub solve_lambda: bool,
}

/// Values shared by every candidate at one sample point.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub pv: PointValues,
    pub cv: Option<ContactValues>,
}

pub fn point_values(geo: &PointGeometry) -> PointValues {
    PointValues {
        m: geo.dim(),
        metric: geo.metric.values(),
        riemann: geo.riemann.values(),
        ricci: geo.ricci.values(),
        ricci_op: geo.ricci_op.values(),
        scal: geo.scal.value(),
    }
}

pub fn contact_values(pd: &PointData) -> Option<ContactValues> {
    let cp = pd.contact.as_ref()?;
    let (alpha, beta) = cp.alpha_beta()?;
    let m = cp.dim();
    Some(ContactValues {
        phi: cp.phi.values(),
        xi: cp.xi.values(),
        eta: cp.eta.values(),
        alpha: alpha.value(),
        beta: beta.value(),
        dalpha: (0..m).map(|i| alpha.first(i)).collect(),
        dbeta: (0..m).map(|i| beta.first(i)).collect(),
        xi_alpha: cp.along_xi(alpha),
    })
}

pub fn prepare(session: &Session) -> Vec<Prepared> {
    session.points.iter().map(|pd| Prepared { pv: point_values(&pd.geo), cv: contact_values(pd) }).collect()
}

/// One candidate at one sample point.
#[derive(Debug, Clone)]
pub struct CandidatePoint {
    /// Position in [`Session::points`].
    pub pos: usize,
    pub v: Tensor<f64>,
    pub lambda: f64,
    pub dlambda: Vec<f64>,
    /// `£_V g`
    pub lie: Tensor<f64>,
    /// `(∇_{∂_d} V)^i` at `(d, i)`.
    pub nabla_v: Tensor<f64>,
    pub div: f64,
    /// `η(V)` data whenever a structure is present.
    pub collinear: Option<Collinear>,
}

#[derive(Debug, Clone)]
pub struct CandidateData {
    pub index: usize,
    pub points: Vec<CandidatePoint>,
    /// Sample-point index and reason for points where the candidate's
    /// fields could not be evaluated.
    pub errors: Vec<(usize, String)>,
}

fn eta_v_data(pd: &PointData, v: &Tensor<Jet>) -> Option<Collinear> {
    let cp = pd.contact.as_ref()?;
    let m = v.dim();
    let ev = (0..m).fold(v.template().zero_like(), |acc, i| acc.add(&cp.eta.get(&[i]).mul(v.get(&[i]))));
    let d: Vec<f64> = (0..m).map(|i| ev.first(i)).collect();
    let inv = pd.geo.metric.inv.values();
    let grad = (0..m).map(|a| (0..m).map(|b| inv.get(&[a, b]) * d[b]).sum()).collect();
    let xi_d = (0..m).map(|i| cp.xi.get(&[i]).value() * d[i]).sum();
    Some(Collinear { eta_v: ev.value(), d, grad, xi_d })
}

pub fn evaluate_candidate(session: &Session, k: usize) -> CandidateData {
    let mut points = Vec::new();
    let mut errors = Vec::new();
    for (pos, pd) in session.points.iter().enumerate() {
        let (vj, lj) = match session.candidate_fields(k, pd) {
            Ok(f) => f,
            Err(e) => {
                errors.push((pd.index, e));
                continue;
            }
        };
        let m = vj.dim();
        let lie = lie_derivative(&vj, &pd.geo.metric.g.truncate(2)).expect("vector and metric").values();
        let nabla_v = pd.geo.covariant(&vj.truncate(1)).values();
        let div = (0..m).map(|i| nabla_v.get(&[i, i])).sum();
        points.push(CandidatePoint {
            pos,
            v: vj.values(),
            lambda: lj.value(),
            dlambda: (0..m).map(|i| lj.first(i)).collect(),
            lie,
            nabla_v,
            div,
            collinear: eta_v_data(pd, &vj),
        });
    }
    CandidateData { index: k, points, errors }
}

/// Whether two candidates' potentials agree at every sample point (after
/// scaling the first by `factor`).
pub fn same_potential(a: &CandidateData, b: &CandidateData, factor: f64) -> bool {
    a.points.len() == b.points.len()
        && !a.points.is_empty()
        && a.points.iter().zip(&b.points).all(|(p, q)| {
            p.pos == q.pos && p.v.components().iter().zip(q.v.components()).all(|(x, y)| (factor * x - y).abs() <= SAME_FIELD * (1.0 + y.abs()))
        })
}

/// Whether `V = ξ` at every sample point.
pub fn is_reeb(data: &CandidateData, prep: &[Prepared]) -> bool {
    !data.points.is_empty()
        && data.points.iter().all(|cp| match &prep[cp.pos].cv {
            Some(cv) => cp.v.components().iter().zip(cv.xi.components()).all(|(x, y)| (x - y).abs() <= SAME_FIELD * (1.0 + y.abs())),
            None => false,
        })
}

pub(crate) fn frame<'a>(session: &'a Session, cp: &CandidatePoint) -> &'a Frame<f64> {
    &session.points[cp.pos].geo.frame_values
}

pub(crate) fn index_of(session: &Session, cp: &CandidatePoint) -> usize {
    session.points[cp.pos].index
}

fn claim_for(kind: SolitonKind) -> &'static str {
    match kind {
        SolitonKind::Riemann => "½(£_V g)⊙g + R = ½λ g⊙g",
        SolitonKind::Ricci => "½£_V g + Ric = λg",
        SolitonKind::Yamabe => "£_V g = (λ − scal)g",
    }
}

/// The soliton equation residual for candidate `k`.
pub fn soliton_check(session: &Session, prep: &[Prepared], data: &CandidateData) -> CheckReport {
    let c = &session.candidates[data.index];
    let mut b = CheckBuilder::new("soliton", &format!("soliton.{}", c.kind.label()), session.tol.soliton)
        .subject(&c.name)
        .claim(Some(claim_for(c.kind)))
        .expect(c.expect);
    for cp in &data.points {
        let eq = Equation::new(c.kind, &prep[cp.pos].pv, &cp.lie);
        b.push(index_of(session, cp), eq.residual(cp.lambda).sample(frame(session, cp)));
    }
    if !data.errors.is_empty() {
        b.detail(format!("fields could not be evaluated at {} point(s), first: {}", data.errors.len(), data.errors[0].1));
    }
    b.finish(&session.sample_points)
}

/// Builder that only collects samples while its hypotheses hold.
pub(crate) struct Gated {
    pub builder: CheckBuilder,
    pub open: bool,
    reason: String,
}

impl Gated {
    pub fn new(builder: CheckBuilder, hypothesis: &CheckReport) -> Self {
        Self::all(builder, &[hypothesis])
    }

    pub fn all(builder: CheckBuilder, hypotheses: &[&CheckReport]) -> Self {
        let failed: Vec<String> = hypotheses.iter().filter(|h| !h.holds()).map(|h| h.display_name()).collect();
        let reason = format!("hypothesis does not hold: {}", failed.join(", "));
        Gated { builder, open: failed.is_empty(), reason }
    }

    pub fn push(&mut self, index: usize, sample: Sample) {
        if self.open {
            self.builder.push(index, sample);
        }
    }

    pub fn finish(self, session: &Session) -> CheckReport {
        if self.open {
            self.builder.finish(&session.sample_points)
        } else {
            self.builder.finish_as(Status::Skipped, &self.reason, &session.sample_points)
        }
    }
}

/// Every per-candidate check for candidate `data.index`, given its soliton
/// report and the structure-level probes.
pub fn candidate_checks(
    session: &Session,
    prep: &[Prepared],
    all: &[CandidateData],
    solitons: &[CheckReport],
    probes: &[CheckReport],
    data: &CandidateData,
    opts: SolitonOptions,
) -> Vec<CheckReport> {
    let k = data.index;
    let c = &session.candidates[k];
    let tol = session.tol;
    let pts = &session.sample_points;
    let soliton = &solitons[k];
    let m = session.dim();
    let new = |group: &str, name: &str, t: f64| CheckBuilder::new(group, name, t).subject(&c.name);
    let mut out = Vec::new();

    if c.collinear {
        let mut b = new("candidate", "candidate.collinear", tol.exact).claim(Some("V = η(V)ξ"));
        for cp in &data.points {
            let (Some(col), Some(cv)) = (&cp.collinear, &prep[cp.pos].cv) else { continue };
            let along = cv.xi.scaled(col.eta_v);
            b.push(index_of(session, cp), Residual::difference(cp.v.clone(), along).sample(frame(session, cp)));
        }
        out.push(b.finish(pts));
    }

    out.push(soliton.clone());

    if opts.solve_lambda {
        let mut best = new("solve-lambda", &format!("solve-lambda.{}", c.kind.label()), tol.soliton)
            .claim(Some("an almost soliton with this potential exists"))
            .probe();
        let mut recovery = new("solve-lambda", "solve-lambda.recovery", tol.soliton).claim(Some("least-squares λ equals the candidate's λ"));
        if c.expect == Expectation::Fail {
            recovery = recovery.probe();
        }
        let mut lambdas = Vec::new();
        let mut irreducible = Vec::new();
        for cp in &data.points {
            let eq = Equation::new(c.kind, &prep[cp.pos].pv, &cp.lie);
            let f = frame(session, cp);
            let l = eq.best_lambda(f);
            let s = eq.residual(l).sample(f);
            lambdas.push(l);
            irreducible.push(s.residual);
            best.push(index_of(session, cp), s);
            recovery.push(index_of(session, cp), Sample::scalar(l - cp.lambda, cp.lambda));
        }
        best.range("lambda", &lambdas);
        best.range("irreducible", &irreducible);
        out.push(best.finish(pts));
        out.push(recovery.finish(pts));
    }

    out.extend(lemma_checks(session, prep, data));
    if m >= 3 {
        out.extend(coherence_checks(session, prep, data));
    }
    out.extend(contracted_checks(session, prep, data, soliton));
    match c.kind {
        SolitonKind::Riemann if m >= 3 => out.extend(transfer_checks(session, prep, all, solitons, data)),
        SolitonKind::Ricci => out.extend(ricci_to_riemann(session, prep, all, solitons, data)),
        _ => {}
    }
    if c.collinear && c.kind != SolitonKind::Yamabe {
        out.extend(propositions::commutation_checks(session, prep, data, soliton, probes));
    }
    out
}

fn lemma_checks(session: &Session, prep: &[Prepared], data: &CandidateData) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    if !c.collinear || session.structure.is_none() {
        return Vec::new();
    }
    let tol = session.tol.soliton;
    let new = |name: &str, claim: &str| CheckBuilder::new("lemma", name, tol).subject(&c.name).claim(Some(claim));
    let mut nabla = new("lemma.nabla-v", "∇V = [d(η(V)) − αη(V)η]⊗ξ + η(V)(α Id − βφ)");
    let mut lie = new("lemma.lie-metric", "£_V g = d(η(V))⊗η + η⊗d(η(V)) + 2αη(V)(g − η⊗η)");
    let mut div = new("lemma.divergence", "div V = 2nαη(V) + ξ(η(V))");
    let mut divs = Vec::new();
    for cp in &data.points {
        let (Some(col), Some(cv)) = (&cp.collinear, &prep[cp.pos].cv) else { continue };
        let (n_form, l_form, d_form) = formulas::lemma_forms(&prep[cp.pos].pv, cv, col);
        let f = frame(session, cp);
        let i = index_of(session, cp);
        nabla.push(i, Residual::difference(cp.nabla_v.clone(), n_form).sample(f));
        lie.push(i, Residual::difference(cp.lie.clone(), l_form).sample(f));
        div.push(i, Residual::scalar(cp.div, d_form).sample(f));
        divs.push(cp.div);
    }
    div.range("div", &divs);
    let pts = &session.sample_points;
    vec![nabla.finish(pts), lie.finish(pts), div.finish(pts)]
}

/// Tracing the Riemann residual reproduces the contracted equations; these
/// hold for any `(V, λ)`, soliton or not.
fn coherence_checks(session: &Session, prep: &[Prepared], data: &CandidateData) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    let tol = session.tol.soliton;
    let m = session.dim() as f64;
    let mut trace = CheckBuilder::new("coherence", "coherence.trace", tol)
        .subject(&c.name)
        .claim(Some("trace_{1,4} of the Riemann residual = (m − 2) × traced equation residual"));
    let mut scalar = CheckBuilder::new("coherence", "coherence.scalar", tol)
        .subject(&c.name)
        .claim(Some("(m − 2) × trace of the traced equation residual = scalar equation residual"));
    for cp in &data.points {
        let pv = &prep[cp.pos].pv;
        let f = frame(session, cp);
        let i = index_of(session, cp);
        let e = formulas::riemann_residual(pv, &cp.lie, cp.lambda);
        let contracted = e.residual.contract(0, 3, Some(&pv.metric)).expect("rank 4");
        let traced = formulas::traced_riemann(pv, &cp.lie, cp.lambda, cp.div);
        trace.push(i, Residual::difference(contracted, traced.residual.scaled(m - 2.0)).sample(f));
        let tr = traced.residual.contract(0, 1, Some(&pv.metric)).expect("rank 2");
        let scal_res = formulas::riemann_scalar(pv, cp.lambda, cp.div);
        let lhs = (m - 2.0) * tr.components()[0];
        let rhs = scal_res.residual.components()[0];
        let mut terms = scal_res.terms.clone();
        terms.push(Tensor::scalar(lhs));
        scalar.push(i, Residual::new(Tensor::scalar(lhs - rhs), terms).sample(f));
    }
    let pts = &session.sample_points;
    vec![trace.finish(pts), scalar.finish(pts)]
}

fn contracted_checks(session: &Session, prep: &[Prepared], data: &CandidateData, soliton: &CheckReport) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    let tol = session.tol.soliton;
    let m = session.dim();
    let new = |name: &str, claim: &str| Gated::new(CheckBuilder::new("contracted", name, tol).subject(&c.name).claim(Some(claim)), soliton);
    let with_structure = c.collinear && session.structure.is_some();
    let mut out = Vec::new();
    match c.kind {
        SolitonKind::Riemann if m >= 3 => {
            let mut traced = new("contracted.riemann-trace", "½£_V g + Ric/(2n−1) = (2nλ − div V)/(2n−1)·g");
            let mut scalar = new("contracted.riemann-scalar", "scal = 2n[(2n+1)λ − 2 div V]");
            let mut forms = [
                new("contracted.riemann-ricci", "collinear V: Ric in terms of η(V), α, λ"),
                new("contracted.riemann-ricci-operator", "collinear V: Q in terms of η(V), α, λ"),
                new("contracted.riemann-scalar-collinear", "collinear V: scal = 2n[(2n+1)λ − 4nαη(V) − 2ξ(η(V))]"),
            ];
            for cp in &data.points {
                let pv = &prep[cp.pos].pv;
                let (f, i) = (frame(session, cp), index_of(session, cp));
                traced.push(i, formulas::traced_riemann(pv, &cp.lie, cp.lambda, cp.div).sample(f));
                scalar.push(i, formulas::riemann_scalar(pv, cp.lambda, cp.div).sample(f));
                if with_structure {
                    push_collinear_forms(&mut forms, SolitonKind::Riemann, pv, prep[cp.pos].cv.as_ref(), cp, f, i);
                }
            }
            out.push(traced.finish(session));
            out.push(scalar.finish(session));
            if with_structure {
                out.extend(forms.into_iter().map(|g| g.finish(session)));
            }
        }
        SolitonKind::Ricci => {
            let mut scalar = new("contracted.ricci-scalar", "scal = mλ − div V");
            let mut forms = [
                new("contracted.ricci-ricci", "collinear V: Ric in terms of η(V), α, λ"),
                new("contracted.ricci-ricci-operator", "collinear V: Q in terms of η(V), α, λ"),
                new("contracted.ricci-scalar-collinear", "collinear V: scal = (2n+1)λ − 2nαη(V) − ξ(η(V))"),
            ];
            for cp in &data.points {
                let pv = &prep[cp.pos].pv;
                let (f, i) = (frame(session, cp), index_of(session, cp));
                scalar.push(i, formulas::ricci_scalar(pv, cp.lambda, cp.div).sample(f));
                if with_structure {
                    push_collinear_forms(&mut forms, SolitonKind::Ricci, pv, prep[cp.pos].cv.as_ref(), cp, f, i);
                }
            }
            out.push(scalar.finish(session));
            if with_structure {
                out.extend(forms.into_iter().map(|g| g.finish(session)));
            }
        }
        SolitonKind::Yamabe => {
            let mut trace = new("contracted.yamabe-trace", "2 div V = m(λ − scal)");
            for cp in &data.points {
                let pv = &prep[cp.pos].pv;
                trace.push(index_of(session, cp), formulas::yamabe_trace(pv, cp.lambda, cp.div).sample(frame(session, cp)));
            }
            out.push(trace.finish(session));
        }
        _ => {}
    }
    out
}

fn push_collinear_forms(
    forms: &mut [Gated; 3],
    kind: SolitonKind,
    pv: &PointValues,
    cv: Option<&ContactValues>,
    cp: &CandidatePoint,
    f: &Frame<f64>,
    i: usize,
) {
    let (Some(cv), Some(col)) = (cv, &cp.collinear) else { return };
    let (ric, q, scal) = formulas::collinear_ricci(kind, pv, cv, col, cp.lambda);
    forms[0].push(i, Residual::difference(pv.ricci.clone(), ric).sample(f));
    forms[1].push(i, Residual::difference(pv.ricci_op.clone(), q).sample(f));
    forms[2].push(i, Residual::scalar(pv.scal, scal).sample(f));
}

/// `(V̄, λ̄) = ((m−2)V, (m−1)λ − div V)` is an almost Ricci soliton.
fn transfer_checks(session: &Session, prep: &[Prepared], all: &[CandidateData], solitons: &[CheckReport], data: &CandidateData) -> Vec<CheckReport> {
    let soliton = &solitons[data.index];
    let c = &session.candidates[data.index];
    let tol = session.tol;
    let m = session.dim() as f64;
    let new = |name: &str, t: f64, claim: &str| Gated::new(CheckBuilder::new("transfer", name, t).subject(&c.name).claim(Some(claim)), soliton);
    let mut ricci = new("transfer.ricci", 10.0 * tol.soliton, "((m−2)V, (m−1)λ − div V) is an almost Ricci soliton");
    let mut lam = new("transfer.lambda-closed-form", tol.soliton, "collinear V: λ = ξ(η(V)) + αη(V) + β² − α² − ξ(α)");
    let mut lam_bar = new("transfer.lambda-bar-closed-form", tol.soliton, "collinear V: λ̄ = (2n−1)ξ(η(V)) + 2n[β² − α² − ξ(α)]");
    let collinear = c.collinear && session.structure.is_some();
    let mut bars = Vec::new();
    for cp in &data.points {
        let pv = &prep[cp.pos].pv;
        let (f, i) = (frame(session, cp), index_of(session, cp));
        let bar = (m - 1.0) * cp.lambda - cp.div;
        bars.push(bar);
        let eq = Equation::new(SolitonKind::Ricci, pv, &cp.lie.scaled(m - 2.0));
        ricci.push(i, eq.residual(bar).sample(f));
        if let (true, Some(cv), Some(col)) = (collinear, &prep[cp.pos].cv, &cp.collinear) {
            let (l, lb) = formulas::transfer_closed_forms(pv, cv, col);
            lam.push(i, Residual::scalar(cp.lambda, l).sample(f));
            lam_bar.push(i, Residual::scalar(bar, lb).sample(f));
        }
    }
    ricci.builder.range("lambda_bar", &bars);
    let mut out = vec![ricci.finish(session)];
    if collinear {
        out.push(lam.finish(session));
        out.push(lam_bar.finish(session));
    }

    // A listed Ricci soliton with potential V̄ must carry λ̄.
    for other in all {
        let oc = &session.candidates[other.index];
        if oc.kind != SolitonKind::Ricci || !solitons[other.index].holds() || !same_potential(data, other, m - 2.0) {
            continue;
        }
        let mut b = Gated::new(
            CheckBuilder::new("transfer", "transfer.candidate-match", tol.exact)
                .subject(&c.name)
                .claim(Some("λ̄ = (m−1)λ − div V equals the listed Ricci soliton function")),
            soliton,
        );
        b.builder.detail(format!("matched Ricci candidate `{}`", oc.name));
        for (cp, op) in data.points.iter().zip(&other.points) {
            let bar = (m - 1.0) * cp.lambda - cp.div;
            b.push(index_of(session, cp), Sample::scalar(bar - op.lambda, op.lambda));
        }
        out.push(b.finish(session));
    }

    if session.dim() >= 3 {
        let mut weyl = Gated::new(
            CheckBuilder::new("remark", "remark.weyl", tol.weyl_trace).subject(&c.name).claim(Some("an almost Riemann soliton has W = 0")),
            soliton,
        );
        for cp in &data.points {
            let pd = &session.points[cp.pos];
            let w = pd.geo.weyl().expect("m ≥ 3").values();
            weyl.push(index_of(session, cp), Residual::new(w, vec![prep[cp.pos].pv.riemann.clone()]).sample(frame(session, cp)));
        }
        out.push(weyl.finish(session));
    }
    out
}

/// A Ricci soliton `(V, λ)` is also an almost Riemann soliton `(V, λ̄)` iff
/// `R = (Ric + ½(λ̄ − 2λ)g)⊙g` for some `λ̄`.
fn ricci_to_riemann(session: &Session, prep: &[Prepared], all: &[CandidateData], solitons: &[CheckReport], data: &CandidateData) -> Vec<CheckReport> {
    let soliton = &solitons[data.index];
    let c = &session.candidates[data.index];
    let tol = session.tol.soliton;
    if session.dim() < 3 {
        return Vec::new();
    }
    let mut probe = Gated::new(
        CheckBuilder::new("remark", "remark.ricci-to-riemann", tol).subject(&c.name).claim(Some("R = (Ric + ½(λ̄ − 2λ)g)⊙g for some λ̄")).probe(),
        soliton,
    );
    let mut lambda_bar = Vec::new();
    for cp in &data.points {
        let pv = &prep[cp.pos].pv;
        let f = frame(session, cp);
        let shifted = pv.ricci.minus(&pv.g().scaled(cp.lambda)).expect("shape");
        let a = pv.riemann.minus(&formulas::kn(&shifted, pv.g())).expect("shape");
        let eq = Equation { a, b: pv.gg().scaled(0.5), terms: vec![pv.riemann.clone()] };
        let lb = eq.best_lambda(f);
        lambda_bar.push(lb);
        probe.push(index_of(session, cp), eq.residual(lb).sample(f));
    }
    probe.builder.range("lambda_bar", &lambda_bar);
    let mut out = vec![probe.finish(session)];
    for other in all {
        let oc = &session.candidates[other.index];
        if oc.kind != SolitonKind::Riemann || !solitons[other.index].holds() || !same_potential(data, other, 1.0) {
            continue;
        }
        let mut b = Gated::new(
            CheckBuilder::new("remark", "remark.ricci-to-riemann-match", tol)
                .subject(&c.name)
                .claim(Some("λ̄ equals the listed Riemann soliton function")),
            soliton,
        );
        b.builder.detail(format!("matched Riemann candidate `{}`", oc.name));
        for ((cp, op), lb) in data.points.iter().zip(&other.points).zip(&lambda_bar) {
            b.push(index_of(session, cp), Sample::scalar(lb - op.lambda, op.lambda));
        }
        out.push(b.finish(session));
    }
    out
}

/// Run the soliton suite on the selected candidates. Cross-candidate
/// checks are added when every candidate is selected.
pub fn run(session: &Session, selected: &[usize], opts: SolitonOptions) -> Vec<CheckReport> {
    let prep = prepare(session);
    let class = crate::contact::profile(session).map(|p| p.class);
    let data: Vec<CandidateData> = (0..session.candidates.len()).map(|k| evaluate_candidate(session, k)).collect();
    let solitons: Vec<CheckReport> = data.iter().map(|d| soliton_check(session, &prep, d)).collect();
    let probes = propositions::structure_probes(session, &prep);
    let mut out = probes.clone();
    for &k in selected {
        let (d, s) = (&data[k], &solitons[k]);
        out.extend(candidate_checks(session, &prep, &data, &solitons, &probes, d, opts));
        out.extend(propositions::quasi_einstein_checks(session, &prep, d, s));
        out.extend(propositions::reeb_checks(session, &prep, d, s, &probes, class));
        out.extend(propositions::sasakian_remark(session, &prep, d, s, class));
    }
    if selected.len() == session.candidates.len() {
        out.extend(propositions::multi_soliton(session, &prep, &data, &solitons));
        out.extend(propositions::simultaneous_closed_forms(session, &prep, &data, &solitons));
    }
    out
}

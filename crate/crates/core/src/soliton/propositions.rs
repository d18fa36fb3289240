//! Structure-level probes and the consequences that hold for solitons with
//! potential `ξ`, `cξ`, or several kinds at once.

use crate::contact::CONSTANCY;
use crate::geometry::curvature_action_on_ric;
use crate::report::{CheckBuilder, CheckReport, Residual, Sample, Status};
use crate::session::Session;
use crate::spec_file::{SolitonKind, StructureClass};
use crate::tensor::{Tensor, Variance};

use super::formulas::{self, compose, ContactValues, PointValues};
use super::{frame, index_of, is_reeb, same_potential, CandidateData, Gated, Prepared};

use Variance::{Contravariant as Up, Covariant as Down};

/// Pass fraction required of each kind in the multi-soliton checks.
pub const MULTI_PASS_FRACTION: f64 = 0.95;

pub const NABLA_RICCI: &str = "structure.nabla-ricci";
pub const NABLA_Q: &str = "structure.nabla-ricci-operator";
pub const PHI2_NABLA_Q: &str = "structure.phi2-nabla-ricci-operator";
pub const PHI_COMMUTES: &str = "structure.phi-commutes-ricci";
pub const PHI2_COMMUTES: &str = "structure.phi2-commutes-ricci";
pub const CURVATURE_ACTION: &str = "structure.curvature-action-on-ricci";
pub const QUASI_EINSTEIN: &str = "structure.quasi-einstein";

fn find<'a>(probes: &'a [CheckReport], name: &str) -> Option<&'a CheckReport> {
    probes.iter().find(|r| r.name == name)
}

fn covector(v: &[f64]) -> Tensor<f64> {
    Tensor::from_components(v.len(), vec![Down], v.to_vec())
}

/// `φ²∘∇Q` at `(x, p, y)`.
fn phi2_nabla_q(phi2: &Tensor<f64>, nabla_q: &Tensor<f64>) -> Tensor<f64> {
    let m = phi2.dim();
    Tensor::from_fn(m, vec![Down, Up, Down], |ix| (0..m).map(|a| phi2.get(&[ix[1], a]) * nabla_q.get(&[ix[0], a, ix[2]])).sum())
}

/// Hypothesis probes that depend only on the manifold and its structure.
pub fn structure_probes(session: &Session, prep: &[Prepared]) -> Vec<CheckReport> {
    let tol = session.tol.soliton;
    let pts = &session.sample_points;
    let new = |name: &str, claim: &str| CheckBuilder::new("structure-probe", name, tol).claim(Some(claim)).probe();
    let mut nabla_ric = new(NABLA_RICCI, "∇Ric = 0");
    let mut nabla_q = new(NABLA_Q, "∇Q = 0");
    let mut phi2_nq = new(PHI2_NABLA_Q, "φ²∘∇Q = 0");
    let mut phi_c = new(PHI_COMMUTES, "φQ = Qφ");
    let mut phi2_c = new(PHI2_COMMUTES, "φ²Q = Qφ²");
    let mut action = new(CURVATURE_ACTION, "Ric(R(ξ,X)Y, Z) + Ric(Y, R(ξ,X)Z) = 0");
    let mut qe = new(QUASI_EINSTEIN, "Ric = a·g + b·η⊗η");
    let (mut qa, mut qb) = (Vec::new(), Vec::new());
    for (pd, pr) in session.points.iter().zip(prep) {
        let f = &pd.geo.frame_values;
        let i = pd.index;
        let nr = pd.geo.covariant(&pd.geo.ricci).values();
        let nq = pd.geo.covariant(&pd.geo.ricci_op).values();
        nabla_ric.push(i, Residual::new(nr, Vec::new()).sample(f));
        nabla_q.push(i, Residual::new(nq.clone(), Vec::new()).sample(f));
        let Some(cv) = &pr.cv else { continue };
        let q = &pr.pv.ricci_op;
        let phi2 = compose(&cv.phi, &cv.phi);
        phi2_nq.push(i, Residual::new(phi2_nabla_q(&phi2, &nq), Vec::new()).sample(f));
        phi_c.push(i, Residual::difference(compose(&cv.phi, q), compose(q, &cv.phi)).sample(f));
        phi2_c.push(i, Residual::difference(compose(&phi2, q), compose(q, &phi2)).sample(f));
        let d = curvature_action_on_ric(&pd.geo.riemann_up.values(), &pr.pv.ricci, &cv.xi);
        action.push(i, Residual::new(d, vec![pr.pv.ricci.clone()]).sample(f));
        let (a, b, res) = formulas::quasi_einstein(&pr.pv, cv, f);
        qa.push(a);
        qb.push(b);
        qe.push(i, res.sample(f));
    }
    let mut out = vec![nabla_ric.finish(pts), nabla_q.finish(pts)];
    if session.structure.is_some() {
        qe.range("a", &qa);
        qe.range("b", &qb);
        out.extend([phi2_nq.finish(pts), phi_c.finish(pts), phi2_c.finish(pts), action.finish(pts), qe.finish(pts)]);
    }
    out
}

/// Commutation equivalents for a collinear candidate and the two
/// equivalences `φQ = Qφ ⇔ (i)` and `φ²Q = Qφ² ⇔ (ii)`.
pub fn commutation_checks(
    session: &Session,
    prep: &[Prepared],
    data: &CandidateData,
    soliton: &CheckReport,
    probes: &[CheckReport],
) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    let tol = session.tol.soliton;
    let pts = &session.sample_points;
    let new = |name: &str, claim: &str| CheckBuilder::new("commutation", name, tol).subject(&c.name).claim(Some(claim)).probe();
    let mut first = new("commutation.phi-gradient", "η⊗φ(grad η(V)) − [d(η(V))∘φ]⊗ξ = 0");
    let mut second = new("commutation.gradient", "η⊗grad η(V) − d(η(V))⊗ξ = 0");
    for cp in &data.points {
        let (Some(cv), Some(col)) = (&prep[cp.pos].cv, &cp.collinear) else { continue };
        let m = cv.xi.dim();
        let eta = |x: usize| *cv.eta.get(&[x]);
        let xi = |a: usize| *cv.xi.get(&[a]);
        let phi_grad: Vec<f64> = (0..m).map(|a| (0..m).map(|b| cv.phi.get(&[a, b]) * col.grad[b]).sum()).collect();
        let d_phi: Vec<f64> = (0..m).map(|x| (0..m).map(|b| col.d[b] * cv.phi.get(&[b, x])).sum()).collect();
        let lhs1 = formulas::operator(m, |ix| eta(ix[1]) * phi_grad[ix[0]]);
        let rhs1 = formulas::operator(m, |ix| d_phi[ix[1]] * xi(ix[0]));
        let lhs2 = formulas::operator(m, |ix| eta(ix[1]) * col.grad[ix[0]]);
        let rhs2 = formulas::operator(m, |ix| col.d[ix[1]] * xi(ix[0]));
        let f = frame(session, cp);
        let i = index_of(session, cp);
        first.push(i, Residual::difference(lhs1, rhs1).sample(f));
        second.push(i, Residual::difference(lhs2, rhs2).sample(f));
    }
    let first = first.finish(pts);
    let second = second.finish(pts);
    let mut out = Vec::new();
    for (name, claim, probe, equivalent) in [
        ("commutation.phi-iff", "φQ = Qφ ⇔ η⊗φ(grad η(V)) = [d(η(V))∘φ]⊗ξ", PHI_COMMUTES, &first),
        ("commutation.phi2-iff", "φ²Q = Qφ² ⇔ η⊗grad η(V) = d(η(V))⊗ξ", PHI2_COMMUTES, &second),
    ] {
        let b = CheckBuilder::new("commutation", name, tol).subject(&c.name).claim(Some(claim));
        let Some(structural) = find(probes, probe) else { continue };
        let gate = Gated::new(b, soliton);
        if !gate.open {
            out.push(gate.finish(session));
            continue;
        }
        let agree = structural.holds() == equivalent.holds();
        let detail = format!("{} {}, {} {}", structural.name, structural.status.label(), equivalent.name, equivalent.status.label());
        out.push(gate.builder.finish_as(if agree { Status::Pass } else { Status::Fail }, &detail, pts));
    }
    let mut all = vec![first, second];
    all.extend(out);
    all
}

fn not_applicable(b: CheckBuilder, why: &str, session: &Session) -> CheckReport {
    b.finish_as(Status::NotApplicable, why, &session.sample_points)
}

/// `V = cξ` on a (β-)Sasakian manifold: the soliton is Einstein with a
/// fixed λ.
pub fn sasakian_remark(
    session: &Session,
    prep: &[Prepared],
    data: &CandidateData,
    soliton: &CheckReport,
    class: Option<StructureClass>,
) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    if c.kind == SolitonKind::Yamabe || session.structure.is_none() {
        return Vec::new();
    }
    let tol = session.tol.soliton;
    let new = |name: &str, claim: &str| CheckBuilder::new("remark", name, tol).subject(&c.name).claim(Some(claim));
    let einstein = new("remark.beta-sasakian-einstein", "V = cξ on a β-Sasakian manifold: Ric = (scal/m)g");
    let lambda_claim = match c.kind {
        SolitonKind::Riemann => "V = cξ on a β-Sasakian manifold: λ = scal/(2n(2n+1))",
        _ => "V = cξ on a β-Sasakian manifold: λ = scal/(2n+1)",
    };
    let lambda = new("remark.beta-sasakian-lambda", lambda_claim);
    let sasakian = matches!(class, Some(StructureClass::Sasakian | StructureClass::BetaSasakian));
    let constant_multiple = c.collinear
        && !data.points.is_empty()
        && data.points.iter().all(|cp| cp.collinear.as_ref().is_some_and(|col| col.d.iter().all(|x| x.abs() <= CONSTANCY)));
    if !sasakian || !constant_multiple {
        let why = if sasakian { "potential is not a constant multiple of ξ" } else { "structure is not β-Sasakian" };
        return vec![not_applicable(einstein, why, session), not_applicable(lambda, why, session)];
    }
    let mut einstein = Gated::new(einstein, soliton);
    let mut lambda = Gated::new(lambda, soliton);
    for cp in &data.points {
        let pv = &prep[cp.pos].pv;
        let (f, i) = (frame(session, cp), index_of(session, cp));
        let m = pv.m as f64;
        let n = pv.n();
        einstein.push(i, Residual::difference(pv.ricci.clone(), pv.g().scaled(pv.scal / m)).sample(f));
        let predicted = match c.kind {
            SolitonKind::Riemann => pv.scal / (2.0 * n * (2.0 * n + 1.0)),
            _ => pv.scal / (2.0 * n + 1.0),
        };
        lambda.push(i, Residual::scalar(cp.lambda, predicted).sample(f));
    }
    vec![einstein.finish(session), lambda.finish(session)]
}

fn point_covariants(session: &Session, pos: usize) -> (Tensor<f64>, Tensor<f64>, Option<Tensor<f64>>) {
    let pd = &session.points[pos];
    let nr = pd.geo.covariant(&pd.geo.ricci).values();
    let nq = pd.geo.covariant(&pd.geo.ricci_op).values();
    let ne = pd.contact.as_ref().map(|cp| pd.geo.covariant(&cp.eta.truncate(1)).values());
    (nr, nq, ne)
}

/// Checks for a candidate whose potential is the Reeb field `ξ`.
pub fn reeb_checks(
    session: &Session,
    prep: &[Prepared],
    data: &CandidateData,
    soliton: &CheckReport,
    probes: &[CheckReport],
    class: Option<StructureClass>,
) -> Vec<CheckReport> {
    if !is_reeb(data, prep) {
        return Vec::new();
    }
    let c = &session.candidates[data.index];
    let tol = session.tol;
    let pts = &session.sample_points;
    let kind = c.kind;
    let mut out = Vec::new();
    let new = |group: &str, name: &str, t: f64, claim: &str| CheckBuilder::new(group, name, t).subject(&c.name).claim(Some(claim));

    // E(ξ, ·, ·, ·) for V = ξ is the torse-forming residual, for any λ.
    let mut coherence = new("reeb", "reeb.torse-forming-coherence", tol.soliton, "V = ξ: E(ξ,Y,Z,W) = R(ξ,Y,Z,W) − (λ − α)[g(Y,Z)η(W) − η(Z)g(Y,W)]");
    for cp in &data.points {
        let Some(cv) = &prep[cp.pos].cv else { continue };
        let pv = &prep[cp.pos].pv;
        let e = formulas::riemann_residual(pv, &cp.lie, cp.lambda);
        let lhs = formulas::contract_first_with(&e.residual, &cv.xi);
        let rhs = formulas::torse_forming_curvature(pv, cv, cp.lambda);
        let mut terms = rhs.terms.clone();
        terms.extend(e.terms.iter().map(|t| formulas::contract_first_with(t, &cv.xi)));
        let res = Residual::new(lhs.minus(&rhs.residual).expect("shape"), terms);
        coherence.push(index_of(session, cp), res.sample(frame(session, cp)));
    }
    out.push(coherence.finish(pts));

    let soliton_like = kind != SolitonKind::Yamabe;
    if kind == SolitonKind::Riemann {
        let mut torse = Gated::new(new("reeb", "reeb.torse-forming", tol.soliton, "R(ξ,Y,Z,W) = (λ − α)[g(Y,Z)η(W) − η(Z)g(Y,W)]"), soliton);
        for cp in &data.points {
            let Some(cv) = &prep[cp.pos].cv else { continue };
            torse.push(index_of(session, cp), formulas::torse_forming_curvature(&prep[cp.pos].pv, cv, cp.lambda).sample(frame(session, cp)));
        }
        out.push(torse.finish(session));
        out.extend(alpha_kenmotsu(session, prep, data, soliton, probes, class));
    }

    if soliton_like {
        let mut form = Gated::new(
            new("reeb", "reeb.nabla-ricci-form", tol.soliton, "(∇_X Ric)(Y,Z) from the covariant derivative of the soliton's Ricci form"),
            soliton,
        );
        let hyp = |name: &str| find(probes, name);
        let mut parallel = hyp(NABLA_RICCI).map(|h| {
            let claim = if kind == SolitonKind::Riemann { "∇Ric = 0 ⇒ dλ = dα" } else { "∇Ric = 0 ⇒ dλ = 0" };
            Gated::all(new("proposition", "proposition.parallel-ricci", tol.soliton, claim), &[h, soliton])
        });
        let scal_claim = if kind == SolitonKind::Riemann { "∇Q = 0 ⇒ scal = 2n(2n+1)λ" } else { "∇Q = 0 ⇒ scal = (2n+1)λ" };
        let mut q_alpha = hyp(NABLA_Q)
            .map(|h| Gated::all(new("proposition", "proposition.parallel-ricci-operator.alpha", tol.soliton, "∇Q = 0 ⇒ α = 0"), &[h, soliton]));
        let mut q_scal = hyp(NABLA_Q)
            .map(|h| Gated::all(new("proposition", "proposition.parallel-ricci-operator.scalar", tol.soliton, scal_claim), &[h, soliton]));
        let phi2_gate = hyp(PHI2_NABLA_Q).map(|h| Gated::all(CheckBuilder::new("", "", 0.0), &[h, soliton]));
        let mut cosymplectic = new("proposition", "proposition.phi2-parallel-ricci-operator", tol.soliton, "");
        let mut other_branch = new("proposition", "proposition.phi2-parallel-ricci-operator", tol.soliton, "");
        let mut beta_nonzero = true;

        for cp in &data.points {
            let Some(cv) = &prep[cp.pos].cv else { continue };
            let pv = &prep[cp.pos].pv;
            let (f, i) = (frame(session, cp), index_of(session, cp));
            let (nr, _, ne) = point_covariants(session, cp.pos);
            let Some(ne) = ne else { continue };
            let predicted = formulas::nabla_ricci_form(kind, pv, cv, &ne, &cp.dlambda);
            form.push(i, Residual::difference(nr, predicted).sample(f));
            if let Some(p) = parallel.as_mut() {
                let c_alpha = if kind == SolitonKind::Riemann { 1.0 } else { 0.0 };
                let dalpha: Vec<f64> = cv.dalpha.iter().map(|x| c_alpha * x).collect();
                p.push(i, Residual::difference(covector(&cp.dlambda), covector(&dalpha)).sample(f));
            }
            let predicted_scal = scalar_from_lambda(kind, pv, cp.lambda);
            if let Some(q) = q_alpha.as_mut() {
                q.push(i, Residual::scalar(cv.alpha, 0.0).sample(f));
            }
            if let Some(q) = q_scal.as_mut() {
                q.push(i, Residual::scalar(pv.scal, predicted_scal).sample(f));
            }
            // Cosymplectic branch: α = β = 0. Other branch: α = 0, β ≠ 0,
            // dλ = 0 and the scalar relation.
            let zero_ab = Residual::new(covector(&[cv.alpha, cv.beta]), Vec::new()).sample(f);
            cosymplectic.push(i, zero_ab);
            let parts = [
                Residual::scalar(cv.alpha, 0.0).sample(f),
                Residual::new(covector(&cp.dlambda), Vec::new()).sample(f),
                Residual::scalar(pv.scal, predicted_scal).sample(f),
            ];
            other_branch.push(i, worst_of(parts));
            beta_nonzero &= cv.beta.abs() > CONSTANCY;
        }
        out.push(form.finish(session));
        out.extend(parallel.map(|p| p.finish(session)));
        out.extend(q_alpha.map(|p| p.finish(session)));
        out.extend(q_scal.map(|p| p.finish(session)));
        if let Some(gate) = phi2_gate {
            out.push(phi2_branches(session, c.name.as_str(), kind, gate, cosymplectic, other_branch, beta_nonzero));
        }
    }

    let mut corollary =
        new("corollary", "corollary.sasakian-constant-scalar", CONSTANCY, "(ξ, λ) almost soliton on a Sasakian manifold ⇒ scal constant");
    if class != Some(StructureClass::Sasakian) {
        out.push(not_applicable(corollary, "structure is not Sasakian", session));
    } else {
        let scal: Vec<f64> = data.points.iter().map(|cp| prep[cp.pos].pv.scal).collect();
        corollary.range("scal", &scal);
        let mut gate = Gated::new(corollary, soliton);
        for cp in &data.points {
            let pd = &session.points[cp.pos];
            let ds: Vec<f64> = (0..pd.geo.dim()).map(|a| pd.geo.scal.first(a)).collect();
            gate.push(index_of(session, cp), Residual::new(covector(&ds), Vec::new()).sample(frame(session, cp)));
        }
        out.push(gate.finish(session));
    }
    out
}

fn scalar_from_lambda(kind: SolitonKind, pv: &PointValues, lambda: f64) -> f64 {
    let n = pv.n();
    match kind {
        SolitonKind::Riemann => 2.0 * n * (2.0 * n + 1.0) * lambda,
        _ => (2.0 * n + 1.0) * lambda,
    }
}

fn worst_of(parts: [Sample; 3]) -> Sample {
    parts.into_iter().max_by(|a, b| a.residual.total_cmp(&b.residual)).expect("non-empty")
}

fn phi2_branches(
    session: &Session,
    subject: &str,
    kind: SolitonKind,
    gate: Gated,
    cosymplectic: CheckBuilder,
    other: CheckBuilder,
    beta_nonzero: bool,
) -> CheckReport {
    let scal = if kind == SolitonKind::Riemann { "2n(2n+1)λ" } else { "(2n+1)λ" };
    let claim = format!("φ²∘∇Q = 0 ⇒ α = β = 0, or α = 0, β ≠ 0, λ constant and scal = {scal}");
    let pts = &session.sample_points;
    if !gate.open {
        let b =
            CheckBuilder::new("proposition", "proposition.phi2-parallel-ricci-operator", session.tol.soliton).subject(subject).claim(Some(&claim));
        return Gated { builder: b, ..gate }.finish(session);
    }
    let first_ok = cosymplectic.within_tolerance();
    let second_ok = beta_nonzero && other.within_tolerance();
    let (chosen, branch) = if first_ok || (!second_ok && cosymplectic.max_residual() <= other.max_residual()) {
        (cosymplectic, "cosymplectic branch")
    } else {
        (other, "β ≠ 0 branch")
    };
    let status = if first_ok || second_ok { Status::Pass } else { Status::Fail };
    chosen.subject(subject).claim(Some(&claim)).finish_as(status, branch, pts)
}

/// The α-Kenmotsu proposition: under `R(ξ,·)·Ric = 0`, a `(ξ, λ)` almost
/// Riemann soliton has `λ = α` and `scal = −2n(2n−1)α`.
fn alpha_kenmotsu(
    session: &Session,
    prep: &[Prepared],
    data: &CandidateData,
    soliton: &CheckReport,
    probes: &[CheckReport],
    class: Option<StructureClass>,
) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    let tol = session.tol.soliton;
    let new = |name: &str, claim: &str| CheckBuilder::new("proposition", name, tol).subject(&c.name).claim(Some(claim));
    let lam = new("proposition.alpha-kenmotsu.lambda", "α-Kenmotsu, R(ξ,·)·Ric = 0, (ξ, λ) Riemann ⇒ λ = α");
    let scal = new("proposition.alpha-kenmotsu.scalar", "α-Kenmotsu, R(ξ,·)·Ric = 0, (ξ, λ) Riemann ⇒ scal = −2n(2n−1)α");
    let Some(action) = find(probes, CURVATURE_ACTION) else { return Vec::new() };
    if !matches!(class, Some(StructureClass::AlphaKenmotsu | StructureClass::Kenmotsu)) {
        let why = "structure is not α-Kenmotsu";
        return vec![not_applicable(lam, why, session), not_applicable(scal, why, session)];
    }
    let mut lam = Gated::all(lam, &[soliton, action]);
    let mut scal = Gated::all(scal, &[soliton, action]);
    for cp in &data.points {
        let Some(cv) = &prep[cp.pos].cv else { continue };
        let pv = &prep[cp.pos].pv;
        let (f, i) = (frame(session, cp), index_of(session, cp));
        let n = pv.n();
        lam.push(i, Residual::scalar(cp.lambda, cv.alpha).sample(f));
        scal.push(i, Residual::scalar(pv.scal, -2.0 * n * (2.0 * n - 1.0) * cv.alpha).sample(f));
    }
    vec![lam.finish(session), scal.finish(session)]
}

/// Quasi-Einstein coefficients predicted for a passing `(ξ, λ)` soliton.
pub fn quasi_einstein_checks(session: &Session, prep: &[Prepared], data: &CandidateData, soliton: &CheckReport) -> Vec<CheckReport> {
    let c = &session.candidates[data.index];
    if c.kind == SolitonKind::Yamabe || !is_reeb(data, prep) {
        return Vec::new();
    }
    let tol = session.tol.soliton;
    let claim = match c.kind {
        SolitonKind::Riemann => "(ξ, λ) Riemann: Ric = [2nλ − (4n−1)α]g + (2n−1)α η⊗η",
        _ => "(ξ, λ) Ricci: Ric = (λ − α)g + α η⊗η",
    };
    let mut b = Gated::new(CheckBuilder::new("proposition", "proposition.quasi-einstein", tol).subject(&c.name).claim(Some(claim)), soliton);
    for cp in &data.points {
        let Some(cv) = &prep[cp.pos].cv else { continue };
        let pv = &prep[cp.pos].pv;
        let (a, bb) = quasi_einstein_coefficients(c.kind, pv, cv, cp.lambda);
        let fit = pv.g().scaled(a).plus(&cv.eta_eta().scaled(bb)).expect("shape");
        b.push(index_of(session, cp), Residual::difference(pv.ricci.clone(), fit).sample(frame(session, cp)));
    }
    vec![b.finish(session)]
}

pub fn quasi_einstein_coefficients(kind: SolitonKind, pv: &PointValues, cv: &ContactValues, lambda: f64) -> (f64, f64) {
    let n = pv.n();
    match kind {
        SolitonKind::Riemann => (2.0 * n * lambda - (4.0 * n - 1.0) * cv.alpha, (2.0 * n - 1.0) * cv.alpha),
        _ => (lambda - cv.alpha, cv.alpha),
    }
}

fn passes_mostly(r: &CheckReport) -> bool {
    r.points > 0 && r.pass_fraction() >= MULTI_PASS_FRACTION
}

fn same_lambda(a: &CandidateData, b: &CandidateData) -> bool {
    a.points.len() == b.points.len()
        && a.points.iter().zip(&b.points).all(|(p, q)| (p.lambda - q.lambda).abs() <= super::SAME_FIELD * (1.0 + q.lambda.abs()))
}

/// Checks that need more than one candidate.
pub fn multi_soliton(session: &Session, prep: &[Prepared], data: &[CandidateData], solitons: &[CheckReport]) -> Vec<CheckReport> {
    vec![final_proposition(session, prep, data, solitons), simultaneous_remark(session, prep, data, solitons)]
}

/// `(ξ, λ)` almost soliton of two distinct kinds ⇒ Ricci-flat cosymplectic
/// with `λ = 0`.
fn final_proposition(session: &Session, prep: &[Prepared], data: &[CandidateData], solitons: &[CheckReport]) -> CheckReport {
    let tol = session.tol.exact;
    let mut b =
        CheckBuilder::new("proposition", "proposition.two-kinds", tol).claim(Some("(ξ, λ) almost soliton of two kinds ⇒ α = β = λ = 0 and Ric = 0"));
    let reeb: Vec<usize> = (0..data.len()).filter(|&k| is_reeb(&data[k], prep) && passes_mostly(&solitons[k])).collect();
    let pair = reeb
        .iter()
        .flat_map(|&a| reeb.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| a < b && session.candidates[a].kind != session.candidates[b].kind && same_lambda(&data[a], &data[b]));
    let Some((a, other)) = pair else {
        return b.finish_as(Status::NotApplicable, "no (ξ, λ) pair passes two soliton kinds", &session.sample_points);
    };
    b.detail(format!("candidates `{}` and `{}`", session.candidates[a].name, session.candidates[other].name));
    let failing: Vec<usize> = [a, other]
        .iter()
        .flat_map(|&k| {
            solitons[k].point_indices.iter().zip(&solitons[k].residuals).filter(move |(_, r)| **r > solitons[k].tolerance).map(|(i, _)| *i)
        })
        .collect();
    for cp in &data[a].points {
        let index = index_of(session, cp);
        if failing.contains(&index) {
            continue;
        }
        let Some(cv) = &prep[cp.pos].cv else { continue };
        let pv = &prep[cp.pos].pv;
        let f = frame(session, cp);
        let mut parts = vec![Residual::new(covector(&[cv.alpha, cv.beta]), Vec::new()).sample(f)];
        parts.push(Residual::scalar(cp.lambda, 0.0).sample(f));
        parts.push(Residual::new(pv.ricci.clone(), Vec::new()).sample(f));
        let worst = parts.into_iter().max_by(|x, y| x.residual.total_cmp(&y.residual)).expect("non-empty");
        b.push(index, worst);
    }
    if !failing.is_empty() {
        let mut f = failing.clone();
        f.sort_unstable();
        f.dedup();
        b.value("excluded_points", f.len() as f64);
    }
    b.finish(&session.sample_points)
}

/// Riemann `(V, λ)` and Ricci `(V, λ̄)` together, `n > 1` ⇒ Einstein with
/// `Ric = 2n/(4n−1)(2λ̄ − λ)g`.
fn simultaneous_remark(session: &Session, prep: &[Prepared], data: &[CandidateData], solitons: &[CheckReport]) -> CheckReport {
    let tol = session.tol.soliton;
    let pts = &session.sample_points;
    let mut b =
        CheckBuilder::new("remark", "remark.simultaneous", tol).claim(Some("Riemann (V, λ) and Ricci (V, λ̄), n > 1 ⇒ Ric = 2n/(4n−1)(2λ̄ − λ)g"));
    if session.dim() < 5 {
        return b.finish_as(Status::NotApplicable, "stated for n > 1", pts);
    }
    let pair = (0..data.len())
        .filter(|&k| session.candidates[k].kind == SolitonKind::Riemann && passes_mostly(&solitons[k]))
        .flat_map(|r| (0..data.len()).map(move |q| (r, q)))
        .find(|&(r, q)| session.candidates[q].kind == SolitonKind::Ricci && passes_mostly(&solitons[q]) && same_potential(&data[r], &data[q], 1.0));
    let Some((r, q)) = pair else {
        return b.finish_as(Status::NotApplicable, "no Riemann and Ricci soliton share a potential", pts);
    };
    b.detail(format!("candidates `{}` and `{}`", session.candidates[r].name, session.candidates[q].name));
    for (cp, cq) in data[r].points.iter().zip(&data[q].points) {
        let pv = &prep[cp.pos].pv;
        let n = pv.n();
        let rhs = pv.g().scaled(2.0 * n / (4.0 * n - 1.0) * (2.0 * cq.lambda - cp.lambda));
        b.push(index_of(session, cp), Residual::difference(pv.ricci.clone(), rhs).sample(frame(session, cp)));
    }
    b.finish(pts)
}

/// The closed forms accompanying the simultaneous remark, for collinear
/// potentials.
pub fn simultaneous_closed_forms(session: &Session, prep: &[Prepared], data: &[CandidateData], solitons: &[CheckReport]) -> Vec<CheckReport> {
    let tol = session.tol.soliton;
    let pts = &session.sample_points;
    if session.dim() < 5 || session.structure.is_none() {
        return Vec::new();
    }
    let pair = (0..data.len())
        .filter(|&k| session.candidates[k].kind == SolitonKind::Riemann && session.candidates[k].collinear && passes_mostly(&solitons[k]))
        .flat_map(|r| (0..data.len()).map(move |q| (r, q)))
        .find(|&(r, q)| session.candidates[q].kind == SolitonKind::Ricci && passes_mostly(&solitons[q]) && same_potential(&data[r], &data[q], 1.0));
    let Some((r, q)) = pair else { return Vec::new() };
    let mut lb = CheckBuilder::new("remark", "remark.simultaneous-lambda-bar", tol).claim(Some("λ̄ = ξ(η(V)) + 2n[β² − α² − ξ(α)]"));
    let mut l = CheckBuilder::new("remark", "remark.simultaneous-lambda", tol).claim(Some("λ = 2ξ(η(V)) + β² − α² − ξ(α)"));
    for (cp, cq) in data[r].points.iter().zip(&data[q].points) {
        let (Some(cv), Some(col)) = (&prep[cp.pos].cv, &cp.collinear) else { continue };
        let n = prep[cp.pos].pv.n();
        let f = frame(session, cp);
        let i = index_of(session, cp);
        let k = cv.ricci_xi_factor();
        lb.push(i, Residual::scalar(cq.lambda, col.xi_d + 2.0 * n * k).sample(f));
        l.push(i, Residual::scalar(cp.lambda, 2.0 * col.xi_d + k).sample(f));
    }
    vec![lb.finish(pts), l.finish(pts)]
}

//! Almost contact metric structures: axioms, the `(α, β)` fit of `∇φ`,
//! classification, and the identities every `(α, β)` structure satisfies.

use std::sync::Arc;

use crate::expr::EvalError;
use crate::field::{SeededExpr, SeededTensor};
use crate::geometry::{divergence, PointGeometry};
use crate::jet::{Jet, JetSpace};
use crate::report::{CheckBuilder, CheckReport, Residual, Sample, Status};
use crate::session::{PointData, Session, StructureFields, FIELD_ORDER};
use crate::spec_file::StructureClass;
use crate::tensor::{lie_derivative, Scalar, Tensor, Variance};

use Variance::{Contravariant as Up, Covariant as Down};

/// Threshold for "constant" and "zero" when classifying sampled α, β.
pub const CONSTANCY: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SeededStructure {
    phi: SeededTensor,
    xi: SeededTensor,
    eta: SeededTensor,
    alpha: Option<SeededExpr>,
    beta: Option<SeededExpr>,
}

impl SeededStructure {
    pub fn new(fields: &StructureFields, space: &JetSpace) -> Self {
        SeededStructure {
            phi: SeededTensor::new(&fields.phi, space, FIELD_ORDER),
            xi: SeededTensor::new(&fields.xi, space, FIELD_ORDER),
            eta: SeededTensor::new(&fields.eta, space, FIELD_ORDER),
            alpha: fields.alpha.as_ref().map(|e| SeededExpr::new(e, space, FIELD_ORDER)),
            beta: fields.beta.as_ref().map(|e| SeededExpr::new(e, space, FIELD_ORDER)),
        }
    }
}

/// Least-squares `(α, β)` over every coordinate component of
/// `(∇_X φ)Y = α[g(φX,Y)ξ − η(Y)φX] + β[g(X,Y)ξ − η(Y)X]`, solved on jets so
/// the fitted functions carry their first derivatives.
#[derive(Debug, Clone)]
pub struct AlphaBetaFit {
    pub alpha: Jet,
    pub beta: Jet,
    /// False when the normal equations are singular; the point is then
    /// left out of the fit.
    pub rank_ok: bool,
    pub residual: Residual,
}

#[derive(Debug, Clone)]
pub struct ContactPoint {
    pub phi: Tensor<Jet>,
    pub xi: Tensor<Jet>,
    pub eta: Tensor<Jet>,
    /// `(∇_{∂_d} φ)^i_j` at `(d, i, j)`.
    pub nabla_phi: Tensor<Jet>,
    pub fit: AlphaBetaFit,
    pub declared_alpha: Option<Jet>,
    pub declared_beta: Option<Jet>,
}

fn sum(template: &Jet, terms: impl IntoIterator<Item = Jet>) -> Jet {
    terms.into_iter().fold(template.zero_like(), |acc, t| acc.add(&t))
}

impl ContactPoint {
    pub fn new(seeded: &SeededStructure, geo: &PointGeometry, space: &Arc<JetSpace>, coords: &[f64]) -> Result<Self, EvalError> {
        let phi = seeded.phi.at(space, coords)?;
        let xi = seeded.xi.at(space, coords)?;
        let eta = seeded.eta.at(space, coords)?;
        let declared_alpha = seeded.alpha.as_ref().map(|e| e.jet(space, coords)).transpose()?;
        let declared_beta = seeded.beta.as_ref().map(|e| e.jet(space, coords)).transpose()?;
        let nabla_phi = geo.covariant(&phi);
        let fit = fit_alpha_beta(&phi, &xi, &eta, &nabla_phi, &geo.metric.g.truncate(1));
        Ok(ContactPoint { phi, xi, eta, nabla_phi, fit, declared_alpha, declared_beta })
    }

    /// Declared α when given, otherwise the fitted one (if the fit is regular).
    pub fn alpha(&self) -> Option<&Jet> {
        self.declared_alpha.as_ref().or(self.fit.rank_ok.then_some(&self.fit.alpha))
    }

    pub fn beta(&self) -> Option<&Jet> {
        self.declared_beta.as_ref().or(self.fit.rank_ok.then_some(&self.fit.beta))
    }

    pub fn alpha_beta(&self) -> Option<(&Jet, &Jet)> {
        Some((self.alpha()?, self.beta()?))
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    /// `ξ(f) = ξ^i ∂_i f`.
    pub fn along_xi(&self, f: &Jet) -> f64 {
        (0..self.dim()).map(|i| self.xi.get(&[i]).value() * f.first(i)).sum()
    }
}

/// The two coefficient tensors `A`, `B` of the `(α, β)` condition, layout `(d, i, j)`.
pub fn alpha_beta_basis(phi: &Tensor<Jet>, xi: &Tensor<Jet>, eta: &Tensor<Jet>, g: &Tensor<Jet>) -> (Tensor<Jet>, Tensor<Jet>) {
    let m = xi.dim();
    let t = g.template().truncate(1);
    let g_phi = |d: usize, j: usize| sum(&t, (0..m).map(|a| phi.get(&[a, d]).mul(g.get(&[a, j]))));
    let a = Tensor::from_fn(m, vec![Down, Up, Down], |idx| {
        let (d, i, j) = (idx[0], idx[1], idx[2]);
        g_phi(d, j).mul(xi.get(&[i])).sub(&eta.get(&[j]).mul(phi.get(&[i, d])))
    });
    let b = Tensor::from_fn(m, vec![Down, Up, Down], |idx| {
        let (d, i, j) = (idx[0], idx[1], idx[2]);
        let delta = if i == d { eta.get(&[j]).truncate(1) } else { t.zero_like() };
        g.get(&[d, j]).mul(xi.get(&[i])).sub(&delta)
    });
    (a, b)
}

fn fit_alpha_beta(phi: &Tensor<Jet>, xi: &Tensor<Jet>, eta: &Tensor<Jet>, nabla_phi: &Tensor<Jet>, g: &Tensor<Jet>) -> AlphaBetaFit {
    let (a, b) = alpha_beta_basis(phi, xi, eta, g);
    let t = nabla_phi.template().truncate(1);
    let dot = |u: &Tensor<Jet>, v: &Tensor<Jet>| sum(&t, u.components().iter().zip(v.components()).map(|(x, y)| x.mul(y)));
    let (saa, sab, sbb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
    let (sat, sbt) = (dot(&a, nabla_phi), dot(&b, nabla_phi));
    let det = saa.mul(&sbb).sub(&sab.mul(&sab));
    let rank_ok = det.value().abs() > 1e-12 * saa.value() * sbb.value() && det.value() != 0.0;
    let (alpha, beta) = if rank_ok {
        let inv = det.recip();
        (sbb.mul(&sat).sub(&sab.mul(&sbt)).mul(&inv), saa.mul(&sbt).sub(&sab.mul(&sat)).mul(&inv))
    } else {
        (t.zero_like(), t.zero_like())
    };
    let av = a.values().scaled(alpha.value());
    let bv = b.values().scaled(beta.value());
    let rhs = av.plus(&bv).expect("same shape");
    let residual = Residual::new(nabla_phi.values().minus(&rhs).expect("same shape"), vec![nabla_phi.values(), av, bv]);
    AlphaBetaFit { alpha, beta, rank_ok, residual }
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// The seven axioms of an almost contact metric structure as residuals.
pub fn axiom_residuals(cp: &ContactPoint, g: &Tensor<f64>) -> Vec<(&'static str, &'static str, Residual)> {
    let m = cp.dim();
    let phi = cp.phi.values();
    let xi = cp.xi.values();
    let eta = cp.eta.values();
    let p = |i: usize, j: usize| *phi.get(&[i, j]);
    let x = |i: usize| *xi.get(&[i]);
    let e = |i: usize| *eta.get(&[i]);
    let gg = |i: usize, j: usize| *g.get(&[i, j]);

    let phi2 = Tensor::from_fn(m, vec![Up, Down], |ix| (0..m).map(|a| p(ix[0], a) * p(a, ix[1])).sum());
    let minus_id = Tensor::from_fn(m, vec![Up, Down], |ix| -delta(ix[0], ix[1]));
    let eta_xi = Tensor::from_fn(m, vec![Up, Down], |ix| x(ix[0]) * e(ix[1]));
    let eta_of_xi: f64 = (0..m).map(|i| e(i) * x(i)).sum();
    let phi_xi = Tensor::from_fn(m, vec![Up], |ix| (0..m).map(|a| p(ix[0], a) * x(a)).sum());
    let eta_phi = Tensor::from_fn(m, vec![Down], |ix| (0..m).map(|a| e(a) * p(a, ix[0])).sum());
    let flat_xi = Tensor::from_fn(m, vec![Down], |ix| (0..m).map(|a| gg(a, ix[0]) * x(a)).sum());
    let g_phi_phi = Tensor::from_fn(m, vec![Down, Down], |ix| {
        let mut acc = 0.0;
        for a in 0..m {
            for b in 0..m {
                acc += gg(a, b) * p(a, ix[0]) * p(b, ix[1]);
            }
        }
        acc
    });
    let g_minus_eta = Tensor::from_fn(m, vec![Down, Down], |ix| gg(ix[0], ix[1]) - e(ix[0]) * e(ix[1]));
    let g_phi_x = Tensor::from_fn(m, vec![Down, Down], |ix| (0..m).map(|a| gg(a, ix[1]) * p(a, ix[0])).sum());
    let g_x_phi = Tensor::from_fn(m, vec![Down, Down], |ix| (0..m).map(|a| gg(ix[0], a) * p(a, ix[1])).sum());
    let zero1 = |v: Variance| Tensor::from_fn(m, vec![v], |_| 0.0);

    vec![
        ("phi-squared", "φ² = −Id + η⊗ξ", Residual::difference(phi2, minus_id.plus(&eta_xi).expect("shape"))),
        ("eta-of-xi", "η(ξ) = 1", Residual::scalar(eta_of_xi, 1.0)),
        ("phi-xi", "φξ = 0", Residual::difference(phi_xi, zero1(Up))),
        ("eta-phi", "η∘φ = 0", Residual::difference(eta_phi, zero1(Down))),
        ("xi-dual", "g(ξ, ·) = η", Residual::difference(flat_xi, eta.clone())),
        ("compatible", "g(φX, φY) = g(X, Y) − η(X)η(Y)", Residual::difference(g_phi_phi, g_minus_eta)),
        ("skew", "g(φX, Y) = −g(X, φY)", Residual::difference(g_phi_x, g_x_phi.scaled(-1.0))),
    ]
}

/// `F = αφ + β Id` as jets of the order of α, β.
pub fn f_operator(phi: &Tensor<Jet>, alpha: &Jet, beta: &Jet) -> Tensor<Jet> {
    let m = phi.dim();
    Tensor::from_fn(m, vec![Up, Down], |ix| {
        let t = alpha.mul(phi.get(ix));
        if ix[0] == ix[1] {
            t.add(beta)
        } else {
            t
        }
    })
}

/// The `F_{α,β}` identities and the derivatives of `ξ`, at one point.
pub fn derived_residuals(cp: &ContactPoint, geo: &PointGeometry, alpha: &Jet, beta: &Jet) -> Vec<(&'static str, &'static str, Residual)> {
    let m = cp.dim();
    let n = (m - 1) / 2;
    let g = geo.metric.g.values();
    let phi = cp.phi.values();
    let xi = cp.xi.values();
    let eta = cp.eta.values();
    let (av, bv) = (alpha.value(), beta.value());
    let f_jet = f_operator(&cp.phi.truncate(1), &alpha.truncate(1), &beta.truncate(1));
    let f = f_jet.values();
    let t = cp.nabla_phi.values();

    // (∇_X φ)Y = g(FX, Y)ξ − η(Y)FX
    let rhs = Tensor::from_fn(m, vec![Down, Up, Down], |ix| {
        let (d, i, j) = (ix[0], ix[1], ix[2]);
        let gf: f64 = (0..m).map(|a| f.get(&[a, d]) * g.get(&[a, j])).sum();
        gf * xi.get(&[i]) - eta.get(&[j]) * f.get(&[i, d])
    });
    let f_nabla_phi = Residual::difference(t.clone(), rhs);

    // ∇_X ξ = −F(φX)
    let nabla_xi = geo.covariant(&cp.xi).values();
    let rhs = Tensor::from_fn(m, vec![Down, Up], |ix| -(0..m).map(|a| f.get(&[ix[1], a]) * phi.get(&[a, ix[0]])).sum::<f64>());
    let f_nabla_xi = Residual::difference(nabla_xi.clone(), rhs);

    // (∇_X F)Y = α(∇_X φ)Y + X(α)φY + X(β)Y
    let nabla_f = geo.covariant(&f_jet).values();
    let rhs = Tensor::from_fn(m, vec![Down, Up, Down], |ix| {
        let (d, i, j) = (ix[0], ix[1], ix[2]);
        av * t.get(&[d, i, j]) + alpha.first(d) * phi.get(&[i, j]) + beta.first(d) * delta(i, j)
    });
    let f_nabla_f = Residual::difference(nabla_f, rhs);

    // ∇ξ = −αφ² − βφ
    let rhs = Tensor::from_fn(m, vec![Down, Up], |ix| {
        let (d, i) = (ix[0], ix[1]);
        let phi2: f64 = (0..m).map(|a| phi.get(&[i, a]) * phi.get(&[a, d])).sum();
        -av * phi2 - bv * phi.get(&[i, d])
    });
    let nabla_xi_ab = Residual::difference(nabla_xi, rhs);

    // £_ξ g = 2α(g − η⊗η)
    let lie = lie_derivative(&cp.xi, &geo.metric.g.truncate(2)).expect("vector and (0,2) metric").values();
    let rhs = Tensor::from_fn(m, vec![Down, Down], |ix| 2.0 * av * (g.get(ix) - eta.get(&[ix[0]]) * eta.get(&[ix[1]])));
    let lie_xi = Residual::difference(lie, rhs);

    // div ξ = 2nα
    let div = divergence(&cp.xi.truncate(1), &geo.gamma(0)).value();
    let div_xi = Residual::scalar(div, 2.0 * n as f64 * av);

    vec![
        ("f-operator.nabla-phi", "(∇_X φ)Y = g(FX, Y)ξ − η(Y)FX", f_nabla_phi),
        ("f-operator.nabla-xi", "∇_X ξ = −F(φX)", f_nabla_xi),
        ("f-operator.nabla-f", "(∇_X F)Y = α(∇_X φ)Y + F_{X(α),X(β)}Y", f_nabla_f),
        ("xi.nabla", "∇ξ = −αφ² − βφ", nabla_xi_ab),
        ("xi.lie-metric", "£_ξ g = 2α(g − η⊗η)", lie_xi),
        ("xi.divergence", "div ξ = 2nα", div_xi),
    ]
}

/// `Ric(ξ, ξ)` and `2n[β² − α² − ξ(α)]`.
pub fn ricci_xi_xi(cp: &ContactPoint, geo: &PointGeometry, alpha: &Jet, beta: &Jet) -> (f64, f64) {
    let m = cp.dim();
    let n = ((m - 1) / 2) as f64;
    let ric = geo.ricci.values();
    let xi = cp.xi.values();
    let mut lhs = 0.0;
    for i in 0..m {
        for j in 0..m {
            lhs += ric.get(&[i, j]) * xi.get(&[i]) * xi.get(&[j]);
        }
    }
    let (a, b) = (alpha.value(), beta.value());
    (lhs, 2.0 * n * (b * b - a * a - cp.along_xi(alpha)))
}

/// Classify sampled `(α, β)`.
pub fn classify(alpha: &[f64], beta: &[f64], fit_ok: bool) -> StructureClass {
    if !fit_ok || alpha.is_empty() {
        return StructureClass::NotAlphaBeta;
    }
    let zero = |v: &[f64]| v.iter().all(|x| x.abs() <= CONSTANCY);
    let constant = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        hi - lo <= CONSTANCY * (1.0 + mean.abs())
    };
    let one = |v: &[f64]| v.iter().all(|x| (x - 1.0).abs() <= CONSTANCY);
    match (zero(alpha), zero(beta)) {
        (true, true) => StructureClass::Cosymplectic,
        (true, false) if one(beta) => StructureClass::Sasakian,
        (true, false) if constant(beta) => StructureClass::BetaSasakian,
        (false, true) if one(alpha) => StructureClass::Kenmotsu,
        (false, true) if constant(alpha) => StructureClass::AlphaKenmotsu,
        _ => StructureClass::TransSasakian,
    }
}

pub fn class_label(class: StructureClass) -> &'static str {
    match class {
        StructureClass::Cosymplectic => "cosymplectic",
        StructureClass::BetaSasakian => "beta-sasakian",
        StructureClass::Sasakian => "sasakian",
        StructureClass::AlphaKenmotsu => "alpha-kenmotsu",
        StructureClass::Kenmotsu => "kenmotsu",
        StructureClass::TransSasakian => "trans-sasakian",
        StructureClass::NotAlphaBeta => "not-alpha-beta",
    }
}

/// Sampled `(α, β)` from the fit together with the resulting class.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub max_residual: f64,
    pub fit_ok: bool,
    pub class: StructureClass,
}

pub fn profile(session: &Session) -> Option<Profile> {
    session.structure.as_ref()?;
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut max_residual: f64 = 0.0;
    for pd in &session.points {
        let cp = pd.contact.as_ref()?;
        if !cp.fit.rank_ok {
            continue;
        }
        alpha.push(cp.fit.alpha.value());
        beta.push(cp.fit.beta.value());
        max_residual = max_residual.max(cp.fit.residual.sample(&pd.geo.frame_values).residual);
    }
    let fit_ok = !alpha.is_empty() && max_residual <= session.tol.soliton;
    let class = classify(&alpha, &beta, fit_ok);
    Some(Profile { alpha, beta, max_residual, fit_ok, class })
}

fn contact_points(session: &Session) -> impl Iterator<Item = (&PointData, &ContactPoint)> {
    session.points.iter().filter_map(|pd| pd.contact.as_ref().map(|cp| (pd, cp)))
}

/// Metric symmetry, structure axioms, the `(α, β)` fit and, when declared,
/// agreement of the fit with the declared functions.
pub fn structure_checks(session: &Session) -> Vec<CheckReport> {
    let pts = &session.sample_points;
    let tol = &session.tol;
    let mut out = Vec::new();

    let mut sym = CheckBuilder::new("metric", "metric.symmetric", tol.exact).claim(Some("g_ij = g_ji"));
    for pd in &session.points {
        sym.push(pd.index, Sample::scalar(pd.asymmetry, pd.geo.metric.g.values().max_abs()));
    }
    out.push(sym.finish(pts));

    if session.structure.is_none() {
        out.push(CheckBuilder::new("structure", "structure", tol.exact).finish_as(Status::NotApplicable, "no almost contact structure given", pts));
        return out;
    }

    let names = ["phi-squared", "eta-of-xi", "phi-xi", "eta-phi", "xi-dual", "compatible", "skew"];
    let mut builders: Vec<Option<CheckBuilder>> = vec![None; names.len()];
    for (pd, cp) in contact_points(session) {
        for (k, (name, claim, r)) in axiom_residuals(cp, &pd.geo.metric.g.values()).into_iter().enumerate() {
            let b = builders[k].get_or_insert_with(|| CheckBuilder::new("structure", &format!("structure.{name}"), tol.exact).claim(Some(claim)));
            b.push(pd.index, r.sample(&pd.geo.frame_values));
        }
    }
    for (k, b) in builders.into_iter().enumerate() {
        out.push(b.unwrap_or_else(|| CheckBuilder::new("structure", &format!("structure.{}", names[k]), tol.exact)).finish(pts));
    }

    let mut fit = CheckBuilder::new("alpha-beta", "alpha-beta.fit", tol.soliton).claim(Some("(∇_X φ)Y = α[g(φX,Y)ξ − η(Y)φX] + β[g(X,Y)ξ − η(Y)X]"));
    let mut singular = Vec::new();
    for (pd, cp) in contact_points(session) {
        if cp.fit.rank_ok {
            fit.push(pd.index, cp.fit.residual.sample(&pd.geo.frame_values));
        } else {
            singular.push(pd.index);
        }
    }
    let prof = profile(session).expect("structure present");
    fit.range("alpha", &prof.alpha);
    fit.range("beta", &prof.beta);
    let mut detail = format!("class {}", class_label(prof.class));
    if !singular.is_empty() {
        detail.push_str(&format!("; singular least-squares system at points {singular:?}"));
    }
    fit.detail(detail);
    out.push(fit.finish(pts));

    let declared = session.structure.as_ref().map(|s| (s.alpha.is_some(), s.beta.is_some())).unwrap_or_default();
    if declared.0 || declared.1 {
        let mut b =
            CheckBuilder::new("alpha-beta", "alpha-beta.declared", tol.declared_match).claim(Some("fitted (α, β) equal the declared functions"));
        for (pd, cp) in contact_points(session) {
            if !cp.fit.rank_ok {
                continue;
            }
            let mut worst = Sample::scalar(0.0, 0.0);
            for (decl, fitted) in [(&cp.declared_alpha, &cp.fit.alpha), (&cp.declared_beta, &cp.fit.beta)] {
                if let Some(d) = decl {
                    let s = Sample::scalar(fitted.value() - d.value(), d.value());
                    if s.residual > worst.residual {
                        worst = s;
                    }
                }
            }
            b.push(pd.index, worst);
        }
        out.push(b.finish(pts));
    }
    out
}

/// The `F_{α,β}` identities, the derivatives of `ξ`, and `Ric(ξ, ξ)`.
pub fn identity_checks(session: &Session) -> Vec<CheckReport> {
    let pts = &session.sample_points;
    let tol = &session.tol;
    if session.structure.is_none() {
        return Vec::new();
    }
    let mut builders: Vec<CheckBuilder> = Vec::new();
    let mut ric = CheckBuilder::new("xi", "xi.ricci", tol.ricci_xi).claim(Some("Ric(ξ, ξ) = 2n[β² − α² − ξ(α)]"));
    let mut values = Vec::new();
    for (pd, cp) in contact_points(session) {
        let Some((alpha, beta)) = cp.alpha_beta() else { continue };
        for (k, (name, claim, r)) in derived_residuals(cp, &pd.geo, alpha, beta).into_iter().enumerate() {
            if builders.len() <= k {
                let group = name.split('.').next().unwrap_or(name);
                builders.push(CheckBuilder::new(group, name, tol.soliton).claim(Some(claim)));
            }
            builders[k].push(pd.index, r.sample(&pd.geo.frame_values));
        }
        let (lhs, rhs) = ricci_xi_xi(cp, &pd.geo, alpha, beta);
        values.push(lhs);
        ric.push(pd.index, Residual::scalar(lhs, rhs).sample(&pd.geo.frame_values));
    }
    ric.range("value", &values);
    let mut out: Vec<CheckReport> = builders.into_iter().map(|b| b.finish(pts)).collect();
    out.push(ric.finish(pts));
    out
}

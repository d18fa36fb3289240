//! Curvature identity suite and frame/coordinate component tables.

use crate::geometry::PointGeometry;
use crate::report::{CheckBuilder, CheckReport, Residual, Status, Table, TableEntry};
use crate::session::Session;
use crate::tensor::{multi_indices, Frame, Tensor, Variance};

use Variance::{Contravariant as Up, Covariant as Down};

/// Components smaller than this are left out of tables.
pub const TABLE_ZERO: f64 = 1e-12;

fn permuted(r: &Tensor<f64>, f: impl Fn(usize, usize, usize, usize) -> [usize; 4]) -> Tensor<f64> {
    Tensor::from_fn(r.dim(), r.variance().to_vec(), |ix| *r.get(&f(ix[0], ix[1], ix[2], ix[3])))
}

/// `Σ` of the listed tensors, normalized by each of them.
fn sum_residual(parts: Vec<Tensor<f64>>) -> Residual {
    let total = parts[1..].iter().fold(parts[0].clone(), |acc, t| acc.plus(t).expect("shape"));
    Residual::new(total, parts)
}

fn second_bianchi(nabla_r: &Tensor<f64>) -> Residual {
    // (∇_m R)_ijkl stored at (m, i, j, k, l)
    let m = nabla_r.dim();
    let v = vec![Down; 5];
    let a = Tensor::from_fn(m, v.clone(), |ix| *nabla_r.get(&[ix[0], ix[1], ix[2], ix[3], ix[4]]));
    let b = Tensor::from_fn(m, v.clone(), |ix| *nabla_r.get(&[ix[3], ix[1], ix[2], ix[4], ix[0]]));
    let c = Tensor::from_fn(m, v, |ix| *nabla_r.get(&[ix[4], ix[1], ix[2], ix[0], ix[3]]));
    sum_residual(vec![a, b, c])
}

/// All curvature identities at one point as `(name, claim, tolerance, residual)`.
fn point_identities(session: &Session, geo: &PointGeometry) -> Vec<(&'static str, &'static str, f64, Residual)> {
    let tol = session.tol;
    let m = geo.dim();
    let g1 = geo.metric.g.truncate(1);
    let g = geo.metric.g.values();
    let inv = geo.metric.inv.values();
    let gamma = geo.gamma(0).values();
    let r = geo.riemann.values();
    let r_up = geo.riemann_up.values();
    let ric = geo.ricci.values();
    let q = geo.ricci_op.values();
    let mut out = Vec::new();

    let swapped = Tensor::from_fn(m, vec![Up, Down, Down], |ix| *gamma.get(&[ix[0], ix[2], ix[1]]));
    out.push(("connection.symmetric", "Γ^k_ij = Γ^k_ji", tol.exact, Residual::difference(gamma.clone(), swapped)));
    let nabla_g = geo.covariant(&g1).values();
    let dg = g1.gradient_slot().values();
    out.push(("connection.metric-compatible", "∇g = 0", tol.exact, Residual::new(nabla_g, vec![dg])));
    let product = Tensor::from_fn(m, vec![Up, Down], |ix| (0..m).map(|k| inv.get(&[ix[0], k]) * g.get(&[k, ix[1]])).sum());
    let identity = Tensor::from_fn(m, vec![Up, Down], |ix| if ix[0] == ix[1] { 1.0 } else { 0.0 });
    out.push(("metric.inverse", "g^{ik} g_kj = δ^i_j", tol.exact, Residual::difference(product, identity)));

    let lowered = Tensor::from_fn(m, vec![Down; 4], |ix| (0..m).map(|p| r_up.get(&[p, ix[0], ix[1], ix[2]]) * g.get(&[p, ix[3]])).sum());
    out.push(("riemann.lowered", "R(X,Y,Z,W) = g(R(X,Y)Z, W)", tol.exact, Residual::difference(r.clone(), lowered)));
    let neg = |t: Tensor<f64>| t.scaled(-1.0);
    out.push((
        "riemann.antisymmetric-first-pair",
        "R_ijkl = −R_jikl",
        tol.exact,
        Residual::difference(r.clone(), neg(permuted(&r, |i, j, k, l| [j, i, k, l]))),
    ));
    out.push((
        "riemann.antisymmetric-second-pair",
        "R_ijkl = −R_ijlk",
        tol.exact,
        Residual::difference(r.clone(), neg(permuted(&r, |i, j, k, l| [i, j, l, k]))),
    ));
    out.push(("riemann.pair-symmetric", "R_ijkl = R_klij", tol.exact, Residual::difference(r.clone(), permuted(&r, |i, j, k, l| [k, l, i, j]))));
    out.push((
        "riemann.first-bianchi",
        "R_ijkl + R_iklj + R_iljk = 0",
        tol.exact,
        sum_residual(vec![r.clone(), permuted(&r, |i, j, k, l| [i, k, l, j]), permuted(&r, |i, j, k, l| [i, l, j, k])]),
    ));
    let nabla_r = geo.covariant(&geo.riemann).values();
    out.push(("riemann.second-bianchi", "∇_m R_ijkl + ∇_k R_ijlm + ∇_l R_ijmk = 0", tol.second_bianchi, second_bianchi(&nabla_r)));

    let ric_t = Tensor::from_fn(m, vec![Down, Down], |ix| *ric.get(&[ix[1], ix[0]]));
    out.push(("ricci.symmetric", "Ric_ij = Ric_ji", tol.exact, Residual::difference(ric.clone(), ric_t)));
    let trace: f64 = multi_indices(m, 2).map(|ij| inv.get(&ij) * ric.get(&ij)).sum();
    out.push(("ricci.trace", "scal = tr_g Ric", tol.exact, Residual::scalar(geo.scal.value(), trace)));
    let gq = Tensor::from_fn(m, vec![Down, Down], |ix| (0..m).map(|a| g.get(&[ix[1], a]) * q.get(&[a, ix[0]])).sum());
    let qg = Tensor::from_fn(m, vec![Down, Down], |ix| (0..m).map(|a| g.get(&[ix[0], a]) * q.get(&[a, ix[1]])).sum());
    out.push(("ricci-operator.self-adjoint", "g(QX, Y) = g(X, QY)", tol.exact, Residual::difference(gq, qg)));

    if let Ok(w) = geo.weyl() {
        let w = w.values();
        let trace = w.contract(0, 3, Some(&geo.metric.values())).expect("rank 4");
        out.push(("weyl.trace-free", "W contracted over slots (1,4) vanishes", tol.weyl_trace, Residual::new(trace, vec![ric.clone()])));
        if m == 3 {
            out.push(("weyl.vanishes-in-dimension-3", "W = 0 when m = 3", tol.exact, Residual::new(w, vec![r.clone()])));
        }
    }
    out
}

/// Curvature identities at every sample point.
pub fn curvature_checks(session: &Session) -> Vec<CheckReport> {
    let pts = &session.sample_points;
    let mut builders: Vec<CheckBuilder> = Vec::new();
    for pd in &session.points {
        for (k, (name, claim, tol, res)) in point_identities(session, &pd.geo).into_iter().enumerate() {
            if builders.len() == k {
                builders.push(CheckBuilder::new("curvature", name, tol).claim(Some(claim)));
            }
            builders[k].push(pd.index, res.sample(&pd.geo.frame_values));
        }
    }
    let mut out: Vec<CheckReport> = builders.into_iter().map(|b| b.finish(pts)).collect();
    if session.dim() < 3 {
        out.push(CheckBuilder::new("curvature", "weyl.trace-free", session.tol.weyl_trace).finish_as(
            Status::NotApplicable,
            "Weyl tensor needs m ≥ 3",
            pts,
        ));
    }
    if session.dim() != 3 {
        out.push(CheckBuilder::new("curvature", "weyl.vanishes-in-dimension-3", session.tol.exact).claim(Some("W = 0 when m = 3")).finish_as(
            Status::NotApplicable,
            "dimension is not 3",
            pts,
        ));
    }
    out
}

fn table(name: &str, basis: &str, layout: &str, point: &[f64], t: &Tensor<f64>) -> Table {
    let entries = multi_indices(t.dim(), t.rank())
        .filter_map(|index| {
            let value = *t.get(&index);
            (value.abs() > TABLE_ZERO).then_some(TableEntry { index, value })
        })
        .collect();
    Table { name: name.into(), basis: basis.into(), layout: layout.into(), point: point.to_vec(), entries }
}

/// Γ, R, Ric, scal and W at the first sample point, in the orthonormal
/// frame or in coordinates.
pub fn tables(session: &Session, frame: bool) -> Vec<Table> {
    let Some(pd) = session.points.first() else { return Vec::new() };
    let geo = &pd.geo;
    let p = &pd.coords;
    let identity;
    let (f, basis): (&Frame<f64>, &str) = if frame {
        (&geo.frame_values, "frame")
    } else {
        let m = geo.dim();
        let unit: Vec<Vec<f64>> = (0..m).map(|a| (0..m).map(|i| if a == i { 1.0 } else { 0.0 }).collect()).collect();
        identity = Frame { vectors: unit.clone(), coframe: unit };
        (&identity, "coordinate")
    };
    let mut out = Vec::new();
    if frame {
        out.push(table("connection", basis, "[a, b, c]: ∇_{E_a}E_b = Σ_c value E_c", p, &geo.frame_connection()));
    } else {
        out.push(table("christoffel", basis, "[k, i, j]: Γ^k_ij", p, &geo.gamma(0).values()));
    }
    let r_up = f.project(&geo.riemann_up.values());
    let r_layout = if frame { "[d, a, b, c]: R(E_a,E_b)E_c = Σ_d value E_d" } else { "[l, i, j, k]: R(∂_i,∂_j)∂_k = Σ_l value ∂_l" };
    out.push(table("riemann", basis, r_layout, p, &r_up));
    out.push(table("ricci", basis, "[a, b]: Ric(a, b)", p, &f.project(&geo.ricci.values())));
    out.push(table("scalar", basis, "[]: scal", p, &Tensor::scalar(geo.scal.value())));
    if let Ok(w) = geo.weyl() {
        out.push(table("weyl", basis, "[a, b, c, d]: W(a, b, c, d)", p, &f.project(&w.values())));
    }
    out
}

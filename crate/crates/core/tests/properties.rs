//! Property tests for the expression, tensor, geometry and soliton layers.

#![allow(clippy::needless_range_loop)]

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::Config;

use solitonlab::contact::{ContactPoint, SeededStructure};
use solitonlab::expr::{simplify, ScalarExpr};
use solitonlab::field::SeededTensor;
use solitonlab::geometry::{curvature_action_on_ric, PointGeometry};
use solitonlab::jet::{Jet, JetSpace};
use solitonlab::session::{RunOptions, Session, FIELD_ORDER, METRIC_ORDER};
use solitonlab::soliton::formulas::Equation;
use solitonlab::soliton::{self, prepare, SolitonOptions};
use solitonlab::tensor::{kulkarni_nomizu, lie_derivative, multi_indices, Tensor, Variance};
use solitonlab::{suite, zoo};

use Variance::{Contravariant as Up, Covariant as Down};

// ---- expressions -------------------------------------------------------

/// Bounded random grammar over three coordinates; every node stays finite
/// and smooth on `[−1, 1]³`.
fn expr() -> impl Strategy<Value = ScalarExpr> {
    let leaf = prop_oneof![(0usize..3).prop_map(ScalarExpr::coord), (-2.0f64..2.0).prop_map(ScalarExpr::constant),];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.div(&ScalarExpr::constant(2.0).add(&b.mul(&b)))),
            inner.clone().prop_map(|a| a.sin()),
            inner.clone().prop_map(|a| a.cos()),
            inner.clone().prop_map(|a| a.scale(0.5).sin().exp()),
            inner.clone().prop_map(|a| ScalarExpr::constant(1.5).add(&a.sin()).ln()),
            inner.prop_map(|a| a.powi(2)),
        ]
    })
}

fn point3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3)
}

proptest! {
    #![proptest_config(Config { cases: 1000, ..Config::default() })]

    #[test]
    fn derivative_matches_central_difference(e in expr(), p in point3(), a in 0usize..3) {
        let h = 1e-5;
        let d = e.differentiate(a).evaluate(&p).unwrap();
        let mut plus = p.clone();
        let mut minus = p.clone();
        plus[a] += h;
        minus[a] -= h;
        let fd = (e.evaluate(&plus).unwrap() - e.evaluate(&minus).unwrap()) / (2.0 * h);
        prop_assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "d = {d}, fd = {fd}");
    }
}

proptest! {
    #![proptest_config(Config { cases: 200, ..Config::default() })]

    #[test]
    fn simplify_preserves_value(e in expr(), points in prop::collection::vec(point3(), 100)) {
        let s = simplify(&e);
        for p in &points {
            let (a, b) = (e.evaluate(p).unwrap(), s.evaluate(p).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn differentiation_is_linear(e1 in expr(), e2 in expr(), c in -3.0f64..3.0, p in point3(), a in 0usize..3) {
        let lhs = e1.scale(c).add(&e2).differentiate(a).evaluate(&p).unwrap();
        let rhs = c * e1.differentiate(a).evaluate(&p).unwrap() + e2.differentiate(a).evaluate(&p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())), "{lhs} vs {rhs}");
    }
}

// ---- Kulkarni–Nomizu product ------------------------------------------

fn symmetric(m: usize) -> impl Strategy<Value = Tensor<f64>> {
    prop::collection::vec(-2.0f64..2.0, m * m)
        .prop_map(move |v| Tensor::from_fn(m, vec![Down, Down], |ix| v[ix[0].min(ix[1]) * m + ix[0].max(ix[1])]))
}

fn pairs() -> impl Strategy<Value = (Tensor<f64>, Tensor<f64>, f64)> {
    (2usize..=5).prop_flat_map(|m| (symmetric(m), symmetric(m), -3.0f64..3.0))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(Config { cases: 200, ..Config::default() })]

    #[test]
    fn kulkarni_nomizu_is_commutative((h, k, _) in pairs()) {
        let hk = kulkarni_nomizu(&h, &k).unwrap();
        let kh = kulkarni_nomizu(&k, &h).unwrap();
        for ix in multi_indices(h.dim(), 4) {
            prop_assert!(close(*hk.get(&ix), *kh.get(&ix), 1e-12));
        }
    }

    #[test]
    fn kulkarni_nomizu_has_curvature_symmetries((h, k, _) in pairs()) {
        let t = kulkarni_nomizu(&h, &k).unwrap();
        for ix in multi_indices(h.dim(), 4) {
            let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
            let v = *t.get(&ix);
            prop_assert!(close(v, -t.get(&[j, i, k, l]), 1e-12));
            prop_assert!(close(v, -t.get(&[i, j, l, k]), 1e-12));
            prop_assert!(close(v, *t.get(&[k, l, i, j]), 1e-12));
            let bianchi = v + t.get(&[i, k, l, j]) + t.get(&[i, l, j, k]);
            prop_assert!(bianchi.abs() <= 1e-12 * (1.0 + t.max_abs()));
        }
    }

    #[test]
    fn kulkarni_nomizu_is_bilinear((h, k, c) in pairs()) {
        let scaled = kulkarni_nomizu(&h.scaled(c), &k).unwrap();
        let sum = kulkarni_nomizu(&h.plus(&k).unwrap(), &k).unwrap();
        let hk = kulkarni_nomizu(&h, &k).unwrap();
        let kk = kulkarni_nomizu(&k, &k).unwrap();
        for ix in multi_indices(h.dim(), 4) {
            prop_assert!(close(*scaled.get(&ix), c * hk.get(&ix), 1e-12));
            prop_assert!(close(*sum.get(&ix), hk.get(&ix) + kk.get(&ix), 1e-12));
        }
    }
}

// ---- random metrics ------------------------------------------------------

/// `g = I + ε S` with `S` symmetric and built from bounded smooth terms, so
/// `g` is positive definite on `[−1, 1]^m` for `ε·m < 1`.
fn metric(m: usize) -> impl Strategy<Value = Tensor<ScalarExpr>> {
    let eps = 0.8 / m as f64;
    let term = (0usize..m, 0usize..m, -1.0f64..1.0, 0usize..3).prop_map(move |(a, b, c, shape)| {
        let (xa, xb) = (ScalarExpr::coord(a), ScalarExpr::coord(b));
        let f = match shape {
            0 => xa.mul(&xb).sin(),
            1 => xa.add(&xb.scale(0.5)).cos(),
            _ => xa.scale(c).sin().mul(&xb.cos()),
        };
        f.scale(c * eps)
    });
    prop::collection::vec(term, m * (m + 1) / 2).prop_map(move |terms| {
        let mut it = terms.into_iter();
        let mut upper = vec![vec![ScalarExpr::zero(); m]; m];
        for i in 0..m {
            for j in i..m {
                let t = it.next().unwrap();
                upper[i][j] = if i == j { ScalarExpr::one().add(&t) } else { t.scale(1.0 / m as f64) };
            }
        }
        Tensor::from_fn(m, vec![Down, Down], |ix| upper[ix[0].min(ix[1])][ix[0].max(ix[1])].clone())
    })
}

fn point(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, m)
}

fn geometry_at(g: &Tensor<ScalarExpr>, p: &[f64]) -> (Arc<JetSpace>, PointGeometry) {
    let space = JetSpace::new(g.dim(), METRIC_ORDER);
    let seeded = SeededTensor::new(g, &space, METRIC_ORDER);
    let jets = seeded.at(&space, p).expect("metric evaluates");
    (space.clone(), PointGeometry::new(jets, None).expect("positive definite"))
}

fn metric_and_point(lo: usize, hi: usize) -> impl Strategy<Value = (Tensor<ScalarExpr>, Vec<f64>)> {
    (lo..=hi).prop_flat_map(|m| (metric(m), point(m)))
}

proptest! {
    #![proptest_config(Config { cases: 40, ..Config::default() })]

    #[test]
    fn riemann_symmetries_and_bianchi_identities((g, p) in metric_and_point(2, 4)) {
        let (_, geo) = geometry_at(&g, &p);
        let m = geo.dim();
        let r = geo.riemann.values();
        let scale = 1.0 + r.max_abs();
        for ix in multi_indices(m, 4) {
            let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
            let v = *r.get(&ix);
            prop_assert!((v + r.get(&[j, i, k, l])).abs() <= 1e-10 * scale);
            prop_assert!((v + r.get(&[i, j, l, k])).abs() <= 1e-10 * scale);
            prop_assert!((v - r.get(&[k, l, i, j])).abs() <= 1e-10 * scale);
            prop_assert!((v + r.get(&[i, k, l, j]) + r.get(&[i, l, j, k])).abs() <= 1e-10 * scale);
        }
        // (∇_a R)_ijkl at (a, i, j, k, l)
        let nr = geo.covariant(&geo.riemann).values();
        let nscale = 1.0 + nr.max_abs();
        for ix in multi_indices(m, 5) {
            let (a, i, j, k, l) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
            let cyc = nr.get(&[a, i, j, k, l]) + nr.get(&[k, i, j, l, a]) + nr.get(&[l, i, j, a, k]);
            prop_assert!(cyc.abs() <= 1e-8 * nscale, "second Bianchi {cyc} at {ix:?}");
        }
        let ric = geo.ricci.values();
        let q = geo.ricci_op.values();
        let gv = geo.metric.g.values();
        for ix in multi_indices(m, 2) {
            let (x, y) = (ix[0], ix[1]);
            prop_assert!((ric.get(&[x, y]) - ric.get(&[y, x])).abs() <= 1e-10 * scale);
            let gqxy: f64 = (0..m).map(|a| gv.get(&[a, y]) * q.get(&[a, x])).sum();
            let gxqy: f64 = (0..m).map(|a| gv.get(&[x, a]) * q.get(&[a, y])).sum();
            prop_assert!((gqxy - gxqy).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn christoffel_matches_koszul_differences((g, p) in metric_and_point(2, 4)) {
        let (_, geo) = geometry_at(&g, &p);
        let m = geo.dim();
        let f = |q: &[f64]| nalgebra::DMatrix::from_fn(m, m, |i, j| g.get(&[i, j]).evaluate(q).unwrap());
        let oracle = common::christoffel(&f, &p, 1e-5);
        let gamma = geo.gamma(0).values();
        for ix in multi_indices(m, 3) {
            let got = *gamma.get(&ix);
            let want = oracle[ix[0]][ix[1]][ix[2]];
            prop_assert!((got - want).abs() <= 1e-7 * (1.0 + want.abs()), "Γ{ix:?}: {got} vs {want}");
        }
    }

    #[test]
    fn lie_derivative_is_the_symmetrized_covariant_derivative(
        (g, p, v) in (2usize..=4).prop_flat_map(|m| (metric(m), point(m), prop::collection::vec(expr_in(m), m)))
    ) {
        let (space, geo) = geometry_at(&g, &p);
        let m = geo.dim();
        let vt = Tensor::from_components(m, vec![Up], v);
        let vj = SeededTensor::new(&vt, &space, FIELD_ORDER).at(&space, &p).unwrap();
        let lie = lie_derivative(&vj, &geo.metric.g.truncate(2)).unwrap().values();
        // ∇_a V^k at (a, k)
        let nv = geo.covariant(&vj.truncate(1)).values();
        let gv = geo.metric.g.values();
        let scale = 1.0 + lie.max_abs();
        for ix in multi_indices(m, 2) {
            let (x, y) = (ix[0], ix[1]);
            let koszul: f64 = (0..m).map(|k| gv.get(&[k, y]) * nv.get(&[x, k]) + gv.get(&[x, k]) * nv.get(&[y, k])).sum();
            prop_assert!((lie.get(&ix) - koszul).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn weyl_is_trace_free_in_dimension_five((g, p) in (metric(5), point(5))) {
        let (_, geo) = geometry_at(&g, &p);
        let w = geo.weyl().unwrap().values();
        let trace = w.contract(0, 3, Some(&geo.metric.values())).unwrap();
        let scale = 1.0 + geo.ricci.values().max_abs();
        prop_assert!(trace.max_abs() <= 1e-9 * scale, "trace {}", trace.max_abs());
    }
}

fn expr_in(m: usize) -> impl Strategy<Value = ScalarExpr> {
    (0usize..m, 0usize..m, -1.5f64..1.5, -1.5f64..1.5)
        .prop_map(|(a, b, c, d)| ScalarExpr::coord(a).scale(c).sin().add(&ScalarExpr::coord(b).mul(&ScalarExpr::coord(a)).scale(d)))
}

// ---- curvature action on Ric ------------------------------------------

fn warped(a: f64, eps: f64) -> Tensor<ScalarExpr> {
    // e^{2az}(dx² + (1 + ε x²) dy²) + dz²
    let (x, z) = (ScalarExpr::coord(0), ScalarExpr::coord(2));
    let w = z.scale(2.0 * a).exp();
    let yy = w.mul(&ScalarExpr::one().add(&x.mul(&x).scale(eps)));
    let diag = [w, yy, ScalarExpr::one()];
    Tensor::from_fn(3, vec![Down, Down], |ix| if ix[0] == ix[1] { diag[ix[0]].clone() } else { ScalarExpr::zero() })
}

fn curvature_action(g: &Tensor<ScalarExpr>, p: &[f64]) -> f64 {
    let (_, geo) = geometry_at(g, p);
    let xi = Tensor::from_components(3, vec![Up], vec![0.0, 0.0, 1.0]);
    curvature_action_on_ric(&geo.riemann_up.values(), &geo.ricci.values(), &xi).max_abs()
}

proptest! {
    #![proptest_config(Config { cases: 50, ..Config::default() })]

    #[test]
    fn curvature_action_vanishes_on_einstein_warped_products(a in 0.2f64..2.0, p in point(3)) {
        prop_assert!(curvature_action(&warped(a, 0.0), &p) <= 1e-10);
    }

    #[test]
    fn curvature_action_detects_non_einstein_perturbations(a in 0.2f64..2.0, eps in 0.2f64..1.0, p in point(3)) {
        let d = curvature_action(&warped(a, eps), &[p[0].abs().max(0.3), p[1], p[2]]);
        prop_assert!(d > 1e-4, "D = {d}");
    }
}

// ---- sessions ------------------------------------------------------------

fn opts(seed: u64, samples: usize) -> RunOptions {
    RunOptions { seed: Some(seed), samples: Some(samples), ..RunOptions::default() }
}

proptest! {
    #![proptest_config(Config { cases: 8, ..Config::default() })]

    #[test]
    fn identical_plans_give_identical_reports(seed in any::<u64>(), samples in 1usize..20, entry in 0usize..zoo::ENTRIES.len()) {
        let name = zoo::ENTRIES[entry];
        let a = zoo::load(name, &opts(seed, samples)).unwrap();
        let b = zoo::load(name, &opts(seed, samples)).unwrap();
        prop_assert_eq!(&a.sample_points, &b.sample_points);
        for p in &a.sample_points {
            prop_assert!(a.chart.contains(p));
        }
        let (da, db) = (suite::curvature(&a, true), suite::curvature(&b, true));
        prop_assert_eq!(da.to_json(), db.to_json());
        let (va, vb) = (suite::validate(&a), suite::validate(&b));
        prop_assert_eq!(va.to_json(), vb.to_json());
    }

    #[test]
    fn fit_does_not_depend_on_point_order(seed in any::<u64>(), entry in 0usize..zoo::ENTRIES.len()) {
        let s = zoo::load(zoo::ENTRIES[entry], &opts(seed, 10)).unwrap();
        let seeded = SeededStructure::new(s.structure.as_ref().unwrap(), &s.space);
        let mut order: Vec<usize> = (0..s.points.len()).collect();
        order.reverse();
        order.rotate_left(seed as usize % s.points.len().max(1));
        for k in order {
            let pd = &s.points[k];
            let again = ContactPoint::new(&seeded, &pd.geo, &s.space, &pd.coords).unwrap();
            let fit = &pd.contact.as_ref().unwrap().fit;
            prop_assert!((again.fit.alpha.value() - fit.alpha.value()).abs() <= 1e-12);
            prop_assert!((again.fit.beta.value() - fit.beta.value()).abs() <= 1e-12);
            let (ra, rb) = (again.fit.residual.residual.max_abs(), fit.residual.residual.max_abs());
            prop_assert!((ra - rb).abs() <= 1e-12);
        }
    }

    #[test]
    fn recovered_lambda_reproduces_the_irreducible_residual(seed in any::<u64>(), shift in -2.0f64..2.0) {
        let mut spec = zoo::paper_kenmotsu();
        for c in &mut spec.candidates {
            c.lambda = format!("{} + ({shift})", c.lambda);
        }
        let s = Session::build(spec, &opts(seed, 5)).unwrap();
        let prep = prepare(&s);
        let all: Vec<usize> = (0..s.candidates.len()).collect();
        let reports = soliton::run(&s, &all, SolitonOptions { solve_lambda: true });
        for k in all {
            let c = &s.candidates[k];
            let name = format!("solve-lambda.{}", c.kind.label());
            let report = reports.iter().find(|r| r.name == name && r.subject.as_deref() == Some(c.name.as_str())).unwrap();
            let data = soliton::evaluate_candidate(&s, k);
            for (cp, (&reported, &index)) in data.points.iter().zip(report.residuals.iter().zip(&report.point_indices)) {
                let pd = &s.points[cp.pos];
                prop_assert_eq!(pd.index, index);
                let eq = Equation::new(c.kind, &prep[cp.pos].pv, &cp.lie);
                let f = &pd.geo.frame_values;
                let l = eq.best_lambda(f);
                prop_assert_eq!(eq.residual(l).sample(f).residual, reported);
                // least squares: any other λ leaves a larger frame residual
                let norm = |lambda: f64| {
                    let r = f.project(&eq.residual(lambda).residual);
                    r.frobenius_dot(&r)
                };
                for delta in [-1e-3, 1e-3, shift] {
                    prop_assert!(norm(l + delta) >= norm(l) - 1e-12 * (1.0 + norm(l)));
                }
            }
        }
    }
}

#[test]
fn transfer_holds_whenever_the_riemann_soliton_holds() {
    for name in zoo::ENTRIES {
        let s = zoo::load(name, &RunOptions::default()).unwrap();
        let all: Vec<usize> = (0..s.candidates.len()).collect();
        let reports = soliton::run(&s, &all, SolitonOptions::default());
        for r in reports.iter().filter(|r| r.name == "soliton.riemann" && r.holds()) {
            let transfer = reports
                .iter()
                .find(|t| t.name == "transfer.ricci" && t.subject == r.subject)
                .unwrap_or_else(|| panic!("{name}: no transfer check for {:?}", r.subject));
            assert!(transfer.holds(), "{name} {:?}: {:?}", r.subject, transfer.status);
            assert!(transfer.max_residual.unwrap() <= 10.0 * r.tolerance);
        }
    }
}

#[test]
fn jets_are_shared_between_fields_of_one_space() {
    let space = JetSpace::new(3, 2);
    let x = Jet::variable(&space, 2, 0, 0.5);
    let y = Jet::variable(&space, 2, 1, -0.25);
    assert!(Arc::ptr_eq(x.space(), y.space()));
    assert_eq!(x.mul(&y).derivative(&[1, 1, 0]), 1.0);
}

//! Zoo values checked against finite-difference geometry that shares
//! nothing with the jet engine but the expression evaluator.

mod common;

use nalgebra::DMatrix;
use solitonlab::contact;
use solitonlab::session::RunOptions;
use solitonlab::soliton::evaluate_candidate;
use solitonlab::{suite, zoo};

fn load(name: &str) -> solitonlab::session::Session {
    zoo::load(name, &RunOptions { samples: Some(5), ..RunOptions::default() }).unwrap()
}

#[test]
fn sasakian_scalar_curvature_is_minus_two() {
    let s = load("sasakian-r3");
    let g = common::metric_of(&s);
    for pd in s.points.iter().take(8) {
        let fd = common::scalar_curvature(&g, &pd.coords);
        assert!((fd + 2.0).abs() < 1e-5, "finite differences give {fd} at {:?}", pd.coords);
        assert!((pd.geo.scal.value() + 2.0).abs() < 1e-12);
    }
}

#[test]
fn kenmotsu_christoffel_and_ricci() {
    let s = load("paper-kenmotsu");
    let g = common::metric_of(&s);
    for pd in s.points.iter().take(8) {
        let p = &pd.coords;
        let gamma = common::christoffel(&g, p, 1e-5);
        let want = -(2.0 * p[2]).exp();
        assert!((gamma[2][0][0] - want).abs() < 1e-7 * want.abs());
        assert!((pd.geo.christoffel.get(&[2, 0, 0]).value() - want).abs() < 1e-12 * want.abs());
        // Ric = −2g on the 3-dimensional Kenmotsu example
        let ric = common::ricci(&g, p);
        let target = g(p) * -2.0;
        assert!((&ric - &target).abs().max() < 1e-4 * (1.0 + target.abs().max()), "{ric} vs {target}");
        let engine = DMatrix::from_fn(3, 3, |i, j| pd.geo.ricci.get(&[i, j]).value());
        assert!((&engine - &target).abs().max() < 1e-10 * (1.0 + target.abs().max()));
    }
}

#[test]
fn lie_derivative_matches_finite_differences() {
    for (name, candidate) in [("paper-kenmotsu", "riemann"), ("flat-cosymplectic-3", "fz-ricci"), ("sasakian-r3", "xi-yamabe")] {
        let s = load(name);
        let k = s.candidate(candidate).unwrap();
        let g = common::metric_of(&s);
        let potential = &s.candidates[k].potential;
        let v = |p: &[f64]| (0..s.dim()).map(|i| potential.get(&[i]).evaluate(p).unwrap()).collect::<Vec<_>>();
        let data = evaluate_candidate(&s, k);
        for cp in data.points.iter().take(8) {
            let p = &s.points[cp.pos].coords;
            let fd = common::lie_metric(&g, &v, p, 1e-5);
            let engine = DMatrix::from_fn(s.dim(), s.dim(), |i, j| *cp.lie.get(&[i, j]));
            assert!((&fd - &engine).abs().max() < 1e-6 * (1.0 + engine.abs().max()), "{name}/{candidate}: {fd} vs {engine}");
        }
    }
}

#[test]
fn ricci_along_reeb_field_matches_finite_differences() {
    // Ric(ξ, ξ) = 2n[β² − α² − ξ(α)] with the values each entry declares
    for (name, want) in [("paper-kenmotsu", -2.0), ("flat-cosymplectic-3", 0.0), ("alpha-kenmotsu-2", -8.0), ("kenmotsu-5", -4.0)] {
        let s = load(name);
        let g = common::metric_of(&s);
        for pd in s.points.iter().take(4) {
            let cp = pd.contact.as_ref().unwrap();
            let xi: Vec<f64> = (0..s.dim()).map(|i| cp.xi.get(&[i]).value()).collect();
            let ric = common::ricci(&g, &pd.coords);
            let value: f64 = (0..s.dim()).flat_map(|i| (0..s.dim()).map(move |j| (i, j))).map(|(i, j)| xi[i] * ric[(i, j)] * xi[j]).sum();
            assert!((value - want).abs() < 1e-4, "{name}: {value}");
        }
    }
}

#[test]
fn every_zoo_entry_passes_its_own_suites() {
    for name in zoo::ENTRIES {
        let s = load(name);
        let validate = suite::validate(&s);
        assert!(validate.passed(), "{name}: validate\n{}", validate.claim_table());
        let curvature = suite::curvature(&s, true);
        assert!(curvature.passed(), "{name}: curvature\n{}", curvature.claim_table());
        for c in contact::identity_checks(&s) {
            assert!(!c.status.is_failure(), "{name}: {}", c.display_name());
        }
    }
}

#[test]
fn zoo_classes_agree_with_recomputed_samples() {
    for name in zoo::ENTRIES {
        let s = load(name);
        let profile = contact::profile(&s).unwrap();
        let alpha: Vec<f64> = s.points.iter().map(|pd| pd.contact.as_ref().unwrap().fit.alpha.value()).collect();
        let beta: Vec<f64> = s.points.iter().map(|pd| pd.contact.as_ref().unwrap().fit.beta.value()).collect();
        assert_eq!(contact::classify(&alpha, &beta, true), profile.class, "{name}");
    }
}

//! Finite-difference geometry, independent of the jet engine: metric
//! components are sampled through plain expression evaluation and every
//! derivative is a central difference.

#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use solitonlab::session::Session;

pub type MetricFn<'a> = dyn Fn(&[f64]) -> DMatrix<f64> + 'a;

/// The session's metric as an `f64` matrix function.
pub fn metric_of(session: &Session) -> impl Fn(&[f64]) -> DMatrix<f64> + '_ {
    let m = session.dim();
    move |p: &[f64]| DMatrix::from_fn(m, m, |i, j| session.metric.get(&[i, j]).evaluate(p).expect("metric evaluates"))
}

fn shifted(p: &[f64], a: usize, h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[a] += h;
    q
}

/// `∂_a g_ij` by central differences.
pub fn dg(g: &MetricFn, p: &[f64], h: f64) -> Vec<DMatrix<f64>> {
    (0..p.len()).map(|a| (g(&shifted(p, a, h)) - g(&shifted(p, a, -h))) / (2.0 * h)).collect()
}

/// `Γ^k_ij` as `gamma[k][i][j]` from the Koszul formula.
pub fn christoffel(g: &MetricFn, p: &[f64], h: f64) -> Vec<Vec<Vec<f64>>> {
    let m = p.len();
    let inv = g(p).try_inverse().expect("invertible metric");
    let d = dg(g, p, h);
    (0..m)
        .map(|k| {
            (0..m).map(|i| (0..m).map(|j| (0..m).map(|l| 0.5 * inv[(k, l)] * (d[i][(j, l)] + d[j][(i, l)] - d[l][(i, j)])).sum()).collect()).collect()
        })
        .collect()
}

/// `R^l_ijk` as `r[l][i][j][k]`, with `R(∂_i, ∂_j)∂_k = R^l_ijk ∂_l`.
pub fn riemann_up(g: &MetricFn, p: &[f64], h_metric: f64, h_gamma: f64) -> Vec<Vec<Vec<Vec<f64>>>> {
    let m = p.len();
    let gamma = christoffel(g, p, h_metric);
    let dgamma: Vec<Vec<Vec<Vec<f64>>>> = (0..m)
        .map(|a| {
            let plus = christoffel(g, &shifted(p, a, h_gamma), h_metric);
            let minus = christoffel(g, &shifted(p, a, -h_gamma), h_metric);
            (0..m).map(|k| (0..m).map(|i| (0..m).map(|j| (plus[k][i][j] - minus[k][i][j]) / (2.0 * h_gamma)).collect()).collect()).collect()
        })
        .collect();
    (0..m)
        .map(|l| {
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            (0..m)
                                .map(|k| {
                                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                                    for q in 0..m {
                                        v += gamma[l][i][q] * gamma[q][j][k] - gamma[l][j][q] * gamma[q][i][k];
                                    }
                                    v
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `Ric_jk = R^i_ijk`.
pub fn ricci(g: &MetricFn, p: &[f64]) -> DMatrix<f64> {
    let m = p.len();
    let r = riemann_up(g, p, 1e-4, 1e-3);
    DMatrix::from_fn(m, m, |j, k| (0..m).map(|i| r[i][i][j][k]).sum())
}

pub fn scalar_curvature(g: &MetricFn, p: &[f64]) -> f64 {
    let inv = g(p).try_inverse().expect("invertible metric");
    let ric = ricci(g, p);
    inv.component_mul(&ric).sum()
}

/// `(£_V g)_ij = V^k ∂_k g_ij + g_kj ∂_i V^k + g_ik ∂_j V^k`.
pub fn lie_metric(g: &MetricFn, v: &dyn Fn(&[f64]) -> Vec<f64>, p: &[f64], h: f64) -> DMatrix<f64> {
    let m = p.len();
    let gp = g(p);
    let d = dg(g, p, h);
    let vp = v(p);
    let dv: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            let (plus, minus) = (v(&shifted(p, a, h)), v(&shifted(p, a, -h)));
            (0..m).map(|k| (plus[k] - minus[k]) / (2.0 * h)).collect()
        })
        .collect();
    DMatrix::from_fn(m, m, |i, j| (0..m).map(|k| vp[k] * d[k][(i, j)] + gp[(k, j)] * dv[i][k] + gp[(i, k)] * dv[j][k]).sum())
}

/// `∂_a f` by central differences.
pub fn gradient(f: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    (0..p.len()).map(|a| (f(&shifted(p, a, h)) - f(&shifted(p, a, -h))) / (2.0 * h)).collect()
}

//! Levi-Civita connection and curvature.
//!
//! Conventions:
//! - `Γ^k_ij` is stored at index `(k, i, j)`.
//! - `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`, stored as `R^l_ijk` at
//!   `(l, i, j, k)` with `R(∂_i,∂_j)∂_k = R^l_ijk ∂_l`.
//! - `R(X,Y,Z,W) = g(R(X,Y)Z, W)`, i.e. `R_ijkl = R^p_ijk g_pl`.
//! - `Ric(Y,Z) = trace(X ↦ R(X,Y)Z)`, i.e. `Ric_jk = R^i_ijk`.
//! - `Q^a_x = g^{ay} Ric_xy`, stored at `(a, x)`.
//! - Covariant derivatives put the direction in a new leading slot.

use thiserror::Error;

use crate::jet::Jet;
use crate::tensor::{kulkarni_nomizu, multi_indices, Differentiable, Frame, Metric, Scalar, Tensor, TensorError, Variance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("Weyl tensor needs dimension at least 3, got {0}")]
    DimensionTooSmall(usize),
}

use Variance::{Contravariant as Up, Covariant as Down};

fn sum_terms<S: Scalar>(template: &S, terms: Vec<S>) -> S {
    let mut it = terms.into_iter();
    match it.next() {
        Some(first) => it.fold(first, |acc, t| acc.plus(&t)),
        None => template.zero_like(),
    }
}

/// `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`.
pub fn christoffel<S: Differentiable>(metric: &Metric<S>) -> Tensor<S> {
    let dim = metric.g.dim();
    let dg = metric.g.gradient_slot();
    let d = |a: usize, i: usize, j: usize| dg.get(&[a, i, j]);
    // first-kind symbols Γ_{lij}
    let first = Tensor::from_fn(dim, vec![Down; 3], |idx| {
        let (l, i, j) = (idx[0], idx[1], idx[2]);
        d(i, j, l).plus(d(j, i, l)).minus(d(l, i, j)).scaled(0.5)
    });
    Tensor::from_fn(dim, vec![Up, Down, Down], |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let terms = (0..dim).map(|l| metric.inv.get(&[k, l]).times(first.get(&[l, i, j]))).collect();
        sum_terms(metric.g.template(), terms)
    })
}

/// `∇T` with the direction as the new leading slot: `+Γ` per
/// contravariant index, `−Γ` per covariant index.
pub fn covariant_derivative<S: Differentiable>(t: &Tensor<S>, gamma: &Tensor<S>) -> Tensor<S> {
    let dim = t.dim();
    let dt = t.gradient_slot();
    let mut variance = vec![Down];
    variance.extend_from_slice(t.variance());
    let mut src = vec![0; t.rank()];
    Tensor::from_fn(dim, variance, |idx| {
        let d = idx[0];
        let rest = &idx[1..];
        let mut acc = dt.get(idx).clone();
        for (s, var) in t.variance().iter().enumerate() {
            src.copy_from_slice(rest);
            for p in 0..dim {
                src[s] = p;
                match var {
                    Up => acc = acc.plus(&gamma.get(&[rest[s], d, p]).times(t.get(&src))),
                    Down => acc = acc.minus(&gamma.get(&[p, d, rest[s]]).times(t.get(&src))),
                }
            }
        }
        acc
    })
}

/// `R^l_ijk = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_ip Γ^p_jk − Γ^l_jp Γ^p_ik`.
pub fn riemann_up<S: Differentiable>(gamma: &Tensor<S>) -> Tensor<S> {
    riemann_from_parts(&gamma.gradient_slot(), gamma)
}

/// `dgamma` holds `∂_a Γ^l_jk` at `(a, l, j, k)`; `gamma` may be truncated
/// to the order of `dgamma`.
fn riemann_from_parts<S: Scalar>(dgamma: &Tensor<S>, gamma: &Tensor<S>) -> Tensor<S> {
    let dim = gamma.dim();
    Tensor::from_fn(dim, vec![Up, Down, Down, Down], |idx| {
        let (l, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = dgamma.get(&[i, l, j, k]).minus(dgamma.get(&[j, l, i, k]));
        for p in 0..dim {
            acc = acc.plus(&gamma.get(&[l, i, p]).times(gamma.get(&[p, j, k])));
            acc = acc.minus(&gamma.get(&[l, j, p]).times(gamma.get(&[p, i, k])));
        }
        acc
    })
}

/// `R_ijkl = R^p_ijk g_pl`.
pub fn lower_riemann<S: Scalar>(r_up: &Tensor<S>, g: &Tensor<S>) -> Tensor<S> {
    let dim = g.dim();
    Tensor::from_fn(dim, vec![Down; 4], |idx| {
        let terms = (0..dim).map(|p| r_up.get(&[p, idx[0], idx[1], idx[2]]).times(g.get(&[p, idx[3]]))).collect();
        sum_terms(g.template(), terms)
    })
}

/// `Ric_jk = R^i_ijk`.
pub fn ricci<S: Scalar>(r_up: &Tensor<S>) -> Tensor<S> {
    let dim = r_up.dim();
    Tensor::from_fn(dim, vec![Down; 2], |idx| sum_terms(r_up.template(), (0..dim).map(|i| r_up.get(&[i, i, idx[0], idx[1]]).clone()).collect()))
}

/// `Q^a_x = g^{ay} Ric_xy`.
pub fn ricci_operator<S: Scalar>(ric: &Tensor<S>, metric: &Metric<S>) -> Tensor<S> {
    let dim = ric.dim();
    Tensor::from_fn(dim, vec![Up, Down], |idx| {
        let terms = (0..dim).map(|y| metric.inv.get(&[idx[0], y]).times(ric.get(&[idx[1], y]))).collect();
        sum_terms(ric.template(), terms)
    })
}

pub fn scalar_curvature<S: Scalar>(ric: &Tensor<S>, metric: &Metric<S>) -> S {
    let dim = ric.dim();
    let terms = multi_indices(dim, 2).map(|ij| metric.inv.get(&ij).times(ric.get(&ij))).collect();
    sum_terms(ric.template(), terms)
}

/// `W = R + scal/(2(m−1)(m−2)) g⊙g − 1/(m−2) Ric⊙g`.
pub fn weyl<S: Scalar>(r: &Tensor<S>, ric: &Tensor<S>, scal: &S, g: &Tensor<S>) -> Result<Tensor<S>, GeometryError> {
    let m = g.dim();
    if m < 3 {
        return Err(GeometryError::DimensionTooSmall(m));
    }
    let mf = m as f64;
    let gg = kulkarni_nomizu(g, g)?.times_scalar(&scal.scaled(1.0 / (2.0 * (mf - 1.0) * (mf - 2.0))));
    let rg = kulkarni_nomizu(ric, g)?.scaled(1.0 / (mf - 2.0));
    Ok(r.plus(&gg)?.minus(&rg)?)
}

/// `grad f = g^{ij} ∂_j f ∂_i`.
pub fn gradient<S: Differentiable>(f: &S, metric: &Metric<S>) -> Tensor<S> {
    let dim = metric.g.dim();
    let df: Vec<S> = (0..dim).map(|j| f.partial(j)).collect();
    Tensor::from_fn(dim, vec![Up], |idx| sum_terms(&df[0], (0..dim).map(|j| metric.inv.get(&[idx[0], j]).times(&df[j])).collect()))
}

/// `div V = ∂_i V^i + Γ^i_ik V^k`.
pub fn divergence<S: Differentiable>(v: &Tensor<S>, gamma: &Tensor<S>) -> S {
    let dim = v.dim();
    let mut terms: Vec<S> = (0..dim).map(|i| v.get(&[i]).partial(i)).collect();
    for i in 0..dim {
        for k in 0..dim {
            terms.push(gamma.get(&[i, i, k]).times(v.get(&[k])));
        }
    }
    sum_terms(v.template(), terms)
}

/// `D(X,Y,Z) = Ric(R(ξ,X)Y, Z) + Ric(Y, R(ξ,X)Z)` at index `(X, Y, Z)`.
pub fn curvature_action_on_ric<S: Scalar>(r_up: &Tensor<S>, ric: &Tensor<S>, xi: &Tensor<S>) -> Tensor<S> {
    let dim = ric.dim();
    // s^l_{jk} = ξ^i R^l_{ijk}
    let s = Tensor::from_fn(dim, vec![Up, Down, Down], |idx| {
        let terms = (0..dim).map(|i| xi.get(&[i]).times(r_up.get(&[idx[0], i, idx[1], idx[2]]))).collect();
        sum_terms(ric.template(), terms)
    });
    Tensor::from_fn(dim, vec![Down; 3], |idx| {
        let (x, y, z) = (idx[0], idx[1], idx[2]);
        let mut terms = Vec::with_capacity(2 * dim);
        for l in 0..dim {
            terms.push(s.get(&[l, x, y]).times(ric.get(&[l, z])));
            terms.push(s.get(&[l, x, z]).times(ric.get(&[y, l])));
        }
        sum_terms(ric.template(), terms)
    })
}

/// All curvature data at one sample point, as jets.
///
/// Orders: `g` and `g^{-1}` carry the seeding order (3), Christoffel symbols
/// one less, curvature two less; covariant derivatives of curvature are
/// plain values.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub metric: Metric<Jet>,
    pub christoffel: Tensor<Jet>,
    pub riemann_up: Tensor<Jet>,
    pub riemann: Tensor<Jet>,
    pub ricci: Tensor<Jet>,
    pub ricci_op: Tensor<Jet>,
    pub scal: Jet,
    pub frame: Frame<Jet>,
    pub frame_values: Frame<f64>,
}

impl PointGeometry {
    /// `frame_seed` lists vectors to orthonormalize; `None` uses the coordinate basis.
    pub fn new(g: Tensor<Jet>, frame_seed: Option<Vec<Vec<Jet>>>) -> Result<Self, GeometryError> {
        let metric = Metric::from_jets(g)?;
        let christoffel = christoffel(&metric);
        let riemann_up = riemann_from_parts(&christoffel.gradient_slot(), &christoffel.truncate(1));
        let g1 = metric.g.truncate(1);
        let inv1 = Metric { g: g1.clone(), inv: metric.inv.truncate(1) };
        let riemann = lower_riemann(&riemann_up, &g1);
        let ricci = ricci(&riemann_up);
        let ricci_op = ricci_operator(&ricci, &inv1);
        let scal = scalar_curvature(&ricci, &inv1);
        let frame = Frame::gram_schmidt(&g1, frame_seed.map(|s| s.into_iter().map(|v| v.into_iter().map(|c| c.truncate(1)).collect()).collect()));
        let frame_values = frame.values();
        Ok(PointGeometry { metric, christoffel, riemann_up, riemann, ricci, ricci_op, scal, frame, frame_values })
    }

    pub fn dim(&self) -> usize {
        self.metric.g.dim()
    }

    /// Christoffel symbols truncated to `order` (for products that do not need more).
    pub fn gamma(&self, order: usize) -> Tensor<Jet> {
        self.christoffel.truncate(order)
    }

    pub fn covariant(&self, t: &Tensor<Jet>) -> Tensor<Jet> {
        let order = t.components().iter().map(Jet::order).min().unwrap_or(0);
        covariant_derivative(t, &self.gamma(order.saturating_sub(1)))
    }

    pub fn weyl(&self) -> Result<Tensor<Jet>, GeometryError> {
        weyl(&self.riemann, &self.ricci, &self.scal, &self.metric.g.truncate(1))
    }

    /// `∇_{E_a}E_b = Σ_c ω[a,b,c] E_c`.
    pub fn frame_connection(&self) -> Tensor<f64> {
        let dim = self.dim();
        let gamma = self.gamma(0);
        let e = &self.frame.vectors;
        let theta = &self.frame_values.coframe;
        Tensor::from_fn(dim, vec![Down, Down, Up], |idx| {
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            let mut acc = 0.0;
            for k in 0..dim {
                let mut dk = 0.0;
                for i in 0..dim {
                    let ea = e[a][i].value();
                    dk += ea * e[b][k].first(i);
                    for j in 0..dim {
                        dk += ea * gamma.get(&[k, i, j]).value() * e[b][j].value();
                    }
                }
                acc += theta[c][k] * dk;
            }
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::field::SeededTensor;
    use crate::jet::JetSpace;

    fn geometry(metric: &[&str], names: &[&str], at: &[f64]) -> PointGeometry {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let m = names.len();
        let g = Tensor::from_fn(m, vec![Down; 2], |idx| parse(metric[idx[0] * m + idx[1]], &names).unwrap());
        let space = JetSpace::new(m, 3);
        let seeded = SeededTensor::new(&g, &space, 3);
        PointGeometry::new(seeded.at(&space, at).unwrap(), None).unwrap()
    }

    fn kenmotsu(at: &[f64]) -> PointGeometry {
        geometry(&["exp(2*z)", "0", "0", "0", "exp(2*z)", "0", "0", "0", "1"], &["x", "y", "z"], at)
    }

    #[test]
    fn christoffel_of_warped_metric() {
        let z = 1.4;
        let geo = kenmotsu(&[0.2, -0.3, z]);
        let gamma = geo.gamma(0).values();
        assert!((gamma.get(&[2, 0, 0]) + (2.0 * z).exp()).abs() < 1e-12);
        assert!((gamma.get(&[0, 0, 2]) - 1.0).abs() < 1e-14);
        assert_eq!(gamma.get(&[0, 2, 0]), gamma.get(&[0, 0, 2]));
    }

    #[test]
    fn frame_connection_matches_hand_computation() {
        let geo = kenmotsu(&[0.0, 0.0, 1.7]);
        let w = geo.frame_connection();
        // ∇_{E1}E1 = −E3, ∇_{E1}E3 = E1
        assert!((w.get(&[0, 0, 2]) + 1.0).abs() < 1e-13);
        assert!((w.get(&[0, 2, 0]) - 1.0).abs() < 1e-13);
        assert!(w.get(&[2, 2, 2]).abs() < 1e-13);
    }

    #[test]
    fn warped_metric_has_constant_negative_curvature() {
        let geo = kenmotsu(&[0.5, 0.1, 1.2]);
        let g = geo.metric.g.values();
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        let r = geo.riemann.values();
        for idx in multi_indices(3, 4) {
            let expect = -0.5 * gg.get(&idx);
            assert!((r.get(&idx) - expect).abs() < 1e-10 * (1.0 + expect.abs()), "{idx:?}");
        }
        assert!((geo.scal.value() + 6.0).abs() < 1e-12);
        let w = geo.weyl().unwrap().values();
        assert!(w.max_abs() < 1e-10);
    }

    #[test]
    fn flat_space_is_flat() {
        let geo = geometry(&["1", "0", "0", "1"], &["u", "v"], &[0.3, 0.4]);
        assert_eq!(geo.riemann.values().max_abs(), 0.0);
        assert!(matches!(geo.weyl(), Err(GeometryError::DimensionTooSmall(2))));
    }

    #[test]
    fn divergence_of_conformal_field() {
        let z: f64 = 1.3;
        let geo = kenmotsu(&[0.0, 0.0, z]);
        let space = geo.scal.space().clone();
        let zj = Jet::variable(&space, 2, 2, z);
        let zero = Jet::constant(&space, 2, 0.0);
        let v = Tensor::from_components(3, vec![Up], vec![zero.clone(), zero, zj.exp()]);
        let div = divergence(&v, &geo.gamma(2));
        assert!((div.value() - 3.0 * z.exp()).abs() < 1e-12);
    }

    #[test]
    fn curvature_action_vanishes_on_einstein_metric() {
        let geo = kenmotsu(&[0.1, 0.2, 1.5]);
        let xi = Tensor::from_components(3, vec![Up], vec![0.0, 0.0, 1.0]);
        let d = curvature_action_on_ric(&geo.riemann_up.values(), &geo.ricci.values(), &xi);
        assert!(d.max_abs() < 1e-10);
    }
}

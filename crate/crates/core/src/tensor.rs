//! Dense multi-index tensors in a coordinate frame.
//!
//! Components are generic over [`Scalar`], so the same algebra runs on
//! symbolic fields ([`ScalarExpr`]), pointwise jets ([`Jet`]) and plain
//! numbers. Index order always follows the argument order of the defining
//! formula; nothing is reordered implicitly.

use std::fmt;

use nalgebra::{DMatrix, Dyn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::ScalarExpr;
use crate::jet::Jet;

/// Ring operations shared by every component type.
pub trait Scalar: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: f64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: f64) -> Self;
    fn recip(&self) -> Self;
    fn sqrt(&self) -> Self;

    fn negated(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// Scalars that know their own partial derivatives.
pub trait Differentiable: Scalar {
    fn partial(&self, coord: usize) -> Self;
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn constant_like(&self, c: f64) -> Self {
        c
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: f64) -> Self {
        self * c
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
}

impl Scalar for Jet {
    fn zero_like(&self) -> Self {
        Jet::constant(self.space(), self.order(), 0.0)
    }
    fn constant_like(&self, c: f64) -> Self {
        Jet::constant(self.space(), self.order(), c)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, c: f64) -> Self {
        self.scale(c)
    }
    fn recip(&self) -> Self {
        Jet::recip(self)
    }
    fn sqrt(&self) -> Self {
        Jet::sqrt(self)
    }
}

impl Differentiable for Jet {
    fn partial(&self, coord: usize) -> Self {
        Jet::partial(self, coord)
    }
}

impl Scalar for ScalarExpr {
    fn zero_like(&self) -> Self {
        ScalarExpr::zero()
    }
    fn constant_like(&self, c: f64) -> Self {
        ScalarExpr::constant(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, c: f64) -> Self {
        self.scale(c)
    }
    fn recip(&self) -> Self {
        ScalarExpr::one().div(self)
    }
    fn sqrt(&self) -> Self {
        ScalarExpr::sqrt(self)
    }
}

impl Differentiable for ScalarExpr {
    fn partial(&self, coord: usize) -> Self {
        self.differentiate(coord)
    }
}

fn sum_of<S: Scalar>(template: &S, terms: impl IntoIterator<Item = S>) -> S {
    let mut iter = terms.into_iter();
    match iter.next() {
        Some(first) => iter.fold(first, |acc, t| acc.plus(&t)),
        None => template.zero_like(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variance {
    Contravariant,
    Covariant,
}

impl Variance {
    pub fn flipped(self) -> Self {
        match self {
            Variance::Contravariant => Variance::Covariant,
            Variance::Covariant => Variance::Contravariant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("variance mismatch: expected {expected:?}, got {got:?}")]
    VarianceMismatch { expected: Vec<Variance>, got: Vec<Variance> },
    #[error("invalid slot {slot} for a rank-{rank} tensor")]
    InvalidSlot { slot: usize, rank: usize },
    #[error("contraction over slots of equal variance needs a metric")]
    MissingMetric,
    #[error("metric is not positive definite at this point")]
    NotPositiveDefinite,
    #[error("{0}")]
    Unsupported(String),
}

/// A valence-(r,s) tensor with components in row-major index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    dim: usize,
    variance: Vec<Variance>,
    comps: Vec<S>,
}

/// Every multi-index of length `rank` over `0..dim`, lexicographically.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

impl<S: Scalar> Tensor<S> {
    pub fn from_fn(dim: usize, variance: Vec<Variance>, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let comps = multi_indices(dim, variance.len()).map(|idx| f(&idx)).collect();
        Tensor { dim, variance, comps }
    }

    pub fn from_components(dim: usize, variance: Vec<Variance>, comps: Vec<S>) -> Self {
        assert_eq!(comps.len(), dim.pow(variance.len() as u32), "component count");
        Tensor { dim, variance, comps }
    }

    pub fn scalar(value: S) -> Self {
        Tensor { dim: 1, variance: Vec::new(), comps: vec![value] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.comps[self.offset(idx)]
    }

    pub fn template(&self) -> &S {
        &self.comps[0]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        Tensor { dim: self.dim, variance: self.variance.clone(), comps: self.comps.iter().map(f).collect() }
    }

    fn same_shape(&self, other: &Tensor<S>) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch(self.dim, other.dim));
        }
        if self.variance != other.variance {
            return Err(TensorError::VarianceMismatch { expected: self.variance.clone(), got: other.variance.clone() });
        }
        Ok(())
    }

    pub fn zip_with(&self, other: &Tensor<S>, f: impl Fn(&S, &S) -> S) -> Result<Tensor<S>, TensorError> {
        self.same_shape(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect();
        Ok(Tensor { dim: self.dim, variance: self.variance.clone(), comps })
    }

    pub fn plus(&self, other: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
        self.zip_with(other, |a, b| a.plus(b))
    }

    pub fn minus(&self, other: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
        self.zip_with(other, |a, b| a.minus(b))
    }

    pub fn scaled(&self, c: f64) -> Tensor<S> {
        self.map(|v| v.scaled(c))
    }

    /// Multiply every component by a scalar field.
    pub fn times_scalar(&self, f: &S) -> Tensor<S> {
        self.map(|v| v.times(f))
    }

    pub fn tensor_product(&self, other: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch(self.dim, other.dim));
        }
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let r = self.rank();
        Ok(Tensor::from_fn(self.dim, variance, |idx| self.get(&idx[..r]).times(other.get(&idx[r..]))))
    }

    /// Reorder slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Tensor<S> {
        assert_eq!(perm.len(), self.rank());
        let variance = perm.iter().map(|&p| self.variance[p]).collect();
        Tensor::from_fn(self.dim, variance, |idx| {
            let mut src = vec![0; idx.len()];
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src).clone()
        })
    }

    fn check_slot(&self, slot: usize) -> Result<(), TensorError> {
        if slot >= self.rank() {
            Err(TensorError::InvalidSlot { slot, rank: self.rank() })
        } else {
            Ok(())
        }
    }

    /// Trace over `slot_a` and `slot_b`. Mixed-variance pairs contract
    /// directly; equal-variance pairs go through `g^{ij}` or `g_{ij}`.
    pub fn contract(&self, slot_a: usize, slot_b: usize, metric: Option<&Metric<S>>) -> Result<Tensor<S>, TensorError> {
        self.check_slot(slot_a)?;
        self.check_slot(slot_b)?;
        if slot_a == slot_b {
            return Err(TensorError::InvalidSlot { slot: slot_b, rank: self.rank() });
        }
        let (va, vb) = (self.variance[slot_a], self.variance[slot_b]);
        let weight: Option<&Tensor<S>> = if va != vb {
            None
        } else {
            let metric = metric.ok_or(TensorError::MissingMetric)?;
            Some(match va {
                Variance::Covariant => &metric.inv,
                Variance::Contravariant => &metric.g,
            })
        };
        let kept: Vec<usize> = (0..self.rank()).filter(|&s| s != slot_a && s != slot_b).collect();
        let variance = kept.iter().map(|&s| self.variance[s]).collect();
        let dim = self.dim;
        let mut src = vec![0; self.rank()];
        let result = Tensor::from_fn(dim, variance, |idx| {
            for (k, &s) in kept.iter().enumerate() {
                src[s] = idx[k];
            }
            let mut terms = Vec::new();
            for i in 0..dim {
                src[slot_a] = i;
                match weight {
                    None => {
                        src[slot_b] = i;
                        terms.push(self.get(&src).clone());
                    }
                    Some(w) => {
                        for j in 0..dim {
                            src[slot_b] = j;
                            terms.push(w.get(&[i, j]).times(self.get(&src)));
                        }
                    }
                }
            }
            sum_of(self.template(), terms)
        });
        Ok(result)
    }

    /// Flip the variance of `slot` using the metric.
    pub fn raise_lower(&self, slot: usize, metric: &Metric<S>) -> Result<Tensor<S>, TensorError> {
        self.check_slot(slot)?;
        let w = match self.variance[slot] {
            Variance::Covariant => &metric.inv,
            Variance::Contravariant => &metric.g,
        };
        let mut variance = self.variance.clone();
        variance[slot] = variance[slot].flipped();
        let dim = self.dim;
        let mut src = vec![0; self.rank()];
        Ok(Tensor::from_fn(dim, variance, |idx| {
            src.copy_from_slice(idx);
            let terms = (0..dim).map(|k| {
                src[slot] = k;
                w.get(&[idx[slot], k]).times(self.get(&src))
            });
            sum_of(self.template(), terms.collect::<Vec<_>>())
        }))
    }

    /// Contract every slot against the vector/covector lists in `args`:
    /// evaluates `T(args[0], args[1], ...)` with contravariant slots fed covectors.
    pub fn apply(&self, args: &[&[S]]) -> S {
        assert_eq!(args.len(), self.rank());
        let terms = multi_indices(self.dim, self.rank())
            .map(|idx| idx.iter().enumerate().fold(self.get(&idx).clone(), |acc, (s, &i)| acc.times(&args[s][i])));
        sum_of(self.template(), terms.collect::<Vec<_>>())
    }

    pub fn max_abs_by(&self, value: impl Fn(&S) -> f64) -> f64 {
        self.comps.iter().map(|c| value(c).abs()).fold(0.0, f64::max)
    }
}

impl<S: Differentiable> Tensor<S> {
    /// Coordinate partial derivatives in a new leading covariant slot.
    pub fn gradient_slot(&self) -> Tensor<S> {
        let mut variance = vec![Variance::Covariant];
        variance.extend_from_slice(&self.variance);
        Tensor::from_fn(self.dim, variance, |idx| self.get(&idx[1..]).partial(idx[0]))
    }
}

impl Tensor<Jet> {
    pub fn values(&self) -> Tensor<f64> {
        self.map(|j| j.value())
    }

    pub fn truncate(&self, order: usize) -> Tensor<Jet> {
        self.map(|j| j.truncate(order))
    }
}

impl Tensor<f64> {
    pub fn max_abs(&self) -> f64 {
        self.max_abs_by(|v| *v)
    }

    pub fn frobenius_dot(&self, other: &Tensor<f64>) -> f64 {
        self.comps.iter().zip(&other.comps).map(|(a, b)| a * b).sum()
    }

    /// Index tuple of the largest absolute component.
    pub fn argmax_abs(&self) -> Vec<usize> {
        let mut best = (0, -1.0);
        for (i, v) in self.comps.iter().enumerate() {
            if v.abs() > best.1 {
                best = (i, v.abs());
            }
        }
        multi_indices(self.dim, self.rank()).nth(best.0).unwrap_or_default()
    }
}

fn require_variance<S: Scalar>(t: &Tensor<S>, expected: &[Variance]) -> Result<(), TensorError> {
    if t.variance != expected {
        return Err(TensorError::VarianceMismatch { expected: expected.to_vec(), got: t.variance.clone() });
    }
    Ok(())
}

const CO2: [Variance; 2] = [Variance::Covariant, Variance::Covariant];

/// `(T1⊙T2)(X,Y,Z,W) = T1(X,W)T2(Y,Z) + T1(Y,Z)T2(X,W) − T1(X,Z)T2(Y,W) − T1(Y,W)T2(X,Z)`.
pub fn kulkarni_nomizu<S: Scalar>(t1: &Tensor<S>, t2: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
    require_variance(t1, &CO2)?;
    require_variance(t2, &CO2)?;
    if t1.dim != t2.dim {
        return Err(TensorError::DimensionMismatch(t1.dim, t2.dim));
    }
    let a = |i: usize, j: usize| t1.get(&[i, j]);
    let b = |i: usize, j: usize| t2.get(&[i, j]);
    Ok(Tensor::from_fn(t1.dim, vec![Variance::Covariant; 4], |idx| {
        let (x, y, z, w) = (idx[0], idx[1], idx[2], idx[3]);
        a(x, w).times(b(y, z)).plus(&a(y, z).times(b(x, w))).minus(&a(x, z).times(b(y, w))).minus(&a(y, w).times(b(x, z)))
    }))
}

/// `(£_V T)_{i…} = V^k ∂_k T_{i…} + Σ_slots T_{…k…} ∂_{i_s} V^k` for a
/// fully covariant `T`.
pub fn lie_derivative<S: Differentiable>(v: &Tensor<S>, t: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
    require_variance(v, &[Variance::Contravariant])?;
    if t.variance.iter().any(|&var| var != Variance::Covariant) {
        return Err(TensorError::VarianceMismatch { expected: vec![Variance::Covariant; t.rank()], got: t.variance.clone() });
    }
    if v.dim != t.dim {
        return Err(TensorError::DimensionMismatch(v.dim, t.dim));
    }
    let dim = t.dim;
    let dv: Vec<Vec<S>> = (0..dim).map(|k| (0..dim).map(|i| v.comps[k].partial(i)).collect()).collect();
    let dt = t.gradient_slot();
    let mut src = vec![0; t.rank()];
    let mut dsrc = vec![0; t.rank() + 1];
    Ok(Tensor::from_fn(dim, t.variance.clone(), |idx| {
        let mut terms = Vec::new();
        dsrc[1..].copy_from_slice(idx);
        for k in 0..dim {
            dsrc[0] = k;
            terms.push(v.comps[k].times(dt.get(&dsrc)));
        }
        for s in 0..idx.len() {
            src.copy_from_slice(idx);
            for k in 0..dim {
                src[s] = k;
                terms.push(t.get(&src).times(&dv[k][idx[s]]));
            }
        }
        sum_of(t.template(), terms)
    }))
}

/// A metric together with its inverse.
#[derive(Debug, Clone)]
pub struct Metric<S> {
    pub g: Tensor<S>,
    pub inv: Tensor<S>,
}

fn inverse_spd(values: &Tensor<f64>) -> Result<DMatrix<f64>, TensorError> {
    let m = values.dim();
    let matrix = DMatrix::from_fn(m, m, |i, j| *values.get(&[i, j]));
    let chol = nalgebra::Cholesky::<f64, Dyn>::new(matrix).ok_or(TensorError::NotPositiveDefinite)?;
    Ok(chol.inverse())
}

impl Metric<f64> {
    pub fn from_values(g: Tensor<f64>) -> Result<Self, TensorError> {
        require_variance(&g, &CO2)?;
        let inv = inverse_spd(&g)?;
        let dim = g.dim();
        let inv = Tensor::from_fn(dim, vec![Variance::Contravariant; 2], |idx| inv[(idx[0], idx[1])]);
        Ok(Metric { g, inv })
    }
}

impl Metric<Jet> {
    /// Invert a jet-valued metric: the value part by Cholesky, the
    /// derivative part by the terminating series `Σ_k (−A D)^k A` where
    /// `A = g(p)^{-1}` and `D = g − g(p)` has no constant term.
    pub fn from_jets(g: Tensor<Jet>) -> Result<Self, TensorError> {
        require_variance(&g, &CO2)?;
        let dim = g.dim();
        let order = g.comps.iter().map(Jet::order).min().unwrap_or(0);
        let a = inverse_spd(&g.values())?;
        let template = g.template().truncate(order);
        let konst = |v: f64| template.constant_like(v);
        let d: Vec<Vec<Jet>> =
            (0..dim).map(|i| (0..dim).map(|j| g.get(&[i, j]).truncate(order).add_constant(-g.get(&[i, j]).value())).collect()).collect();
        // step = −A·D
        let step: Vec<Vec<Jet>> = (0..dim)
            .map(|i| (0..dim).map(|j| sum_of(&template, (0..dim).map(|l| d[l][j].scale(-a[(i, l)])).collect::<Vec<_>>())).collect())
            .collect();
        let mut term: Vec<Vec<Jet>> = (0..dim).map(|i| (0..dim).map(|j| konst(a[(i, j)])).collect()).collect();
        let mut total = term.clone();
        for _ in 0..order {
            term = (0..dim)
                .map(|i| (0..dim).map(|j| sum_of(&template, (0..dim).map(|l| step[i][l].mul(&term[l][j])).collect::<Vec<_>>())).collect())
                .collect();
            for i in 0..dim {
                for j in 0..dim {
                    total[i][j] = total[i][j].add(&term[i][j]);
                }
            }
        }
        let inv = Tensor::from_fn(dim, vec![Variance::Contravariant; 2], |idx| total[idx[0]][idx[1]].clone());
        Ok(Metric { g, inv })
    }

    pub fn values(&self) -> Metric<f64> {
        Metric { g: self.g.values(), inv: self.inv.values() }
    }
}

/// An orthonormal frame `E_a = E_a^i ∂_i` with its dual coframe `θ^a = g(E_a, ·)`.
#[derive(Debug, Clone)]
pub struct Frame<S> {
    /// `vectors[a][i] = E_a^i`
    pub vectors: Vec<Vec<S>>,
    /// `coframe[a][i] = θ^a_i`
    pub coframe: Vec<Vec<S>>,
}

impl<S: Scalar> Frame<S> {
    fn with_coframe(vectors: Vec<Vec<S>>, g: &Tensor<S>) -> Self {
        let dim = g.dim();
        let coframe = vectors
            .iter()
            .map(|e| (0..dim).map(|i| sum_of(&e[0], (0..dim).map(|j| g.get(&[i, j]).times(&e[j])).collect::<Vec<_>>())).collect())
            .collect();
        Frame { vectors, coframe }
    }

    /// Gram–Schmidt on the given vectors (or the coordinate basis).
    pub fn gram_schmidt(g: &Tensor<S>, seed: Option<Vec<Vec<S>>>) -> Self {
        let dim = g.dim();
        let t = g.template();
        let inner = |u: &[S], v: &[S]| -> S {
            let terms: Vec<S> = multi_indices(dim, 2).map(|ij| g.get(&ij).times(&u[ij[0]]).times(&v[ij[1]])).collect();
            sum_of(t, terms)
        };
        let start = seed.unwrap_or_else(|| (0..dim).map(|a| (0..dim).map(|i| t.constant_like(if a == i { 1.0 } else { 0.0 })).collect()).collect());
        let mut out: Vec<Vec<S>> = Vec::with_capacity(dim);
        for v in start {
            let mut w = v.clone();
            for e in &out {
                let c = inner(&v, e);
                w = w.iter().zip(e).map(|(wi, ei)| wi.minus(&c.times(ei))).collect();
            }
            let norm = inner(&w, &w).sqrt().recip();
            out.push(w.iter().map(|wi| wi.times(&norm)).collect());
        }
        Frame::with_coframe(out, g)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

impl Frame<Jet> {
    pub fn values(&self) -> Frame<f64> {
        let v = |rows: &Vec<Vec<Jet>>| rows.iter().map(|r| r.iter().map(Jet::value).collect()).collect();
        Frame { vectors: v(&self.vectors), coframe: v(&self.coframe) }
    }
}

impl Frame<f64> {
    /// Frame components `T(E_{a1}, …)`, feeding `θ^a` into contravariant slots.
    pub fn project(&self, t: &Tensor<f64>) -> Tensor<f64> {
        let dim = t.dim();
        let mut current = t.clone();
        for slot in 0..t.rank() {
            let basis = match t.variance[slot] {
                Variance::Covariant => &self.vectors,
                Variance::Contravariant => &self.coframe,
            };
            let prev = current;
            let mut src = vec![0; t.rank()];
            current = Tensor::from_fn(dim, prev.variance.clone(), |idx| {
                src.copy_from_slice(idx);
                let mut acc = 0.0;
                for i in 0..dim {
                    src[slot] = i;
                    acc += basis[idx[slot]][i] * prev.get(&src);
                }
                acc
            });
        }
        current
    }

    /// Largest deviation of `g(E_a, E_b)` from `δ_ab`.
    pub fn orthonormality_defect(&self, g: &Tensor<f64>) -> f64 {
        self.project(g)
            .comps
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let (a, b) = (k / g.dim(), k % g.dim());
                (v - if a == b { 1.0 } else { 0.0 }).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn from_vectors(vectors: Vec<Vec<f64>>, g: &Tensor<f64>) -> Self {
        Frame::with_coframe(vectors, g)
    }
}

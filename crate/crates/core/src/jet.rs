//! Truncated multivariate Taylor polynomials ("jets") at a point.
//!
//! A jet of order `k` stores the Taylor coefficients `∂^α f(p) / α!` for
//! every multi-index with `|α| <= k`. Arithmetic on jets is exact up to the
//! truncation order, which lets quantities built from a numerically inverted
//! metric (Christoffel symbols, curvature and their covariant derivatives)
//! carry exact derivatives without any symbolic inverse.
//!
//! Coefficients are laid out in graded order, so a jet of order `k` is a
//! prefix of the jet of order `k + 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub struct JetSpace {
    nvars: usize,
    max_order: usize,
    monomials: Vec<Vec<u8>>,
    /// `len_by_order[d]` = number of monomials of degree `<= d`.
    len_by_order: Vec<usize>,
    lookup: HashMap<Vec<u8>, usize>,
    /// Product terms `(i, j, k)` with `mono[i] + mono[j] = mono[k]`, sorted by `deg k`.
    mul_terms: Vec<(u32, u32, u32)>,
    mul_len_by_order: Vec<usize>,
    /// `raise[a][i]` = index of `mono[i] + e_a`, present when `deg i < max_order`.
    raise: Vec<Vec<usize>>,
    factorials: Vec<f64>,
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetSpace").field("nvars", &self.nvars).field("max_order", &self.max_order).finish()
    }
}

fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Vec<u8>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials_of_degree(nvars - 1, degree - first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

impl JetSpace {
    pub fn new(nvars: usize, max_order: usize) -> Arc<Self> {
        let mut monomials = Vec::new();
        let mut len_by_order = Vec::new();
        for d in 0..=max_order {
            monomials.extend(monomials_of_degree(nvars, d));
            len_by_order.push(monomials.len());
        }
        let lookup: HashMap<Vec<u8>, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let degree = |m: &Vec<u8>| m.iter().map(|&e| e as usize).sum::<usize>();

        let mut mul_terms = Vec::new();
        let mut mul_len_by_order = Vec::new();
        for d in 0..=max_order {
            for (k, mk) in monomials.iter().enumerate() {
                if degree(mk) != d {
                    continue;
                }
                for (i, mi) in monomials.iter().enumerate() {
                    if mi.iter().zip(mk).any(|(a, b)| a > b) {
                        continue;
                    }
                    let mj: Vec<u8> = mk.iter().zip(mi).map(|(b, a)| b - a).collect();
                    mul_terms.push((i as u32, lookup[&mj] as u32, k as u32));
                }
            }
            mul_len_by_order.push(mul_terms.len());
        }

        let raise = (0..nvars)
            .map(|a| {
                monomials
                    .iter()
                    .map(|m| {
                        if degree(m) < max_order {
                            let mut up = m.clone();
                            up[a] += 1;
                            lookup[&up]
                        } else {
                            usize::MAX
                        }
                    })
                    .collect()
            })
            .collect();

        let factorials = monomials.iter().map(|m| m.iter().map(|&e| (1..=e as u32).product::<u32>() as f64).product()).collect();

        Arc::new(JetSpace { nvars, max_order, monomials, len_by_order, lookup, mul_terms, mul_len_by_order, raise, factorials })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Multi-indices up to `order`, in coefficient order.
    pub fn monomials(&self, order: usize) -> &[Vec<u8>] {
        &self.monomials[..self.len_by_order[order]]
    }

    pub fn len(&self, order: usize) -> usize {
        self.len_by_order[order]
    }

    pub fn index_of(&self, multi: &[u8]) -> Option<usize> {
        self.lookup.get(multi).copied()
    }
}

#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet(order {}, {:?})", self.order, self.coeffs)
    }
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, order: usize, value: f64) -> Self {
        let mut coeffs = vec![0.0; space.len(order)];
        coeffs[0] = value;
        Jet { space: space.clone(), order, coeffs }
    }

    /// The jet of the coordinate function `x_a` at `at`.
    pub fn variable(space: &Arc<JetSpace>, order: usize, a: usize, at: f64) -> Self {
        let mut j = Self::constant(space, order, at);
        if order >= 1 {
            j.coeffs[1 + a] = 1.0;
        }
        j
    }

    /// Build from plain partial derivatives `∂^α f(p)` listed in coefficient order.
    pub fn from_derivatives(space: &Arc<JetSpace>, order: usize, derivatives: &[f64]) -> Self {
        let n = space.len(order);
        assert!(derivatives.len() >= n, "need {n} derivatives, got {}", derivatives.len());
        let coeffs = (0..n).map(|i| derivatives[i] / space.factorials[i]).collect();
        Jet { space: space.clone(), order, coeffs }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `∂^α f(p)` for the multi-index `multi`.
    pub fn derivative(&self, multi: &[u8]) -> f64 {
        let i = self.space.index_of(multi).expect("multi-index outside jet space");
        assert!(i < self.coeffs.len(), "derivative beyond jet order {}", self.order);
        self.coeffs[i] * self.space.factorials[i]
    }

    /// First partial derivative value along coordinate `a`.
    pub fn first(&self, a: usize) -> f64 {
        assert!(self.order >= 1, "first derivative of an order-0 jet");
        self.coeffs[1 + a]
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        Jet { space: self.space.clone(), order, coeffs: self.coeffs[..self.space.len(order)].to_vec() }
    }

    fn binary(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let order = self.order.min(other.order);
        let n = self.space.len(order);
        let coeffs = (0..n).map(|i| f(self.coeffs[i], other.coeffs[i])).collect();
        Jet { space: self.space.clone(), order, coeffs }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.binary(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.binary(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.order.min(other.order);
        let mut coeffs = vec![0.0; self.space.len(order)];
        for &(i, j, k) in &self.space.mul_terms[..self.space.mul_len_by_order[order]] {
            coeffs[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Jet { space: self.space.clone(), order, coeffs }
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet { space: self.space.clone(), order: self.order, coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn add_constant(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Partial derivative along coordinate `a`; the order drops by one.
    pub fn partial(&self, a: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let n = self.space.len(order);
        let raise = &self.space.raise[a];
        let coeffs = (0..n)
            .map(|i| {
                let up = raise[i];
                (self.space.monomials[up][a] as f64) * self.coeffs[up]
            })
            .collect();
        Jet { space: self.space.clone(), order, coeffs }
    }

    /// `f(self)` given `f^{(j)}(value)` for `j = 0..=order`.
    pub fn compose(&self, derivatives: &[f64]) -> Jet {
        assert!(derivatives.len() > self.order);
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let mut out = Jet::constant(&self.space, self.order, derivatives[0]);
        let mut power = Jet::constant(&self.space, self.order, 1.0);
        let mut factorial = 1.0;
        for (j, d) in derivatives.iter().enumerate().take(self.order + 1).skip(1) {
            power = power.mul(&delta);
            factorial *= j as f64;
            out = out.add(&power.scale(d / factorial));
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    pub fn ln(&self) -> Jet {
        let v = self.value();
        let mut d = vec![v.ln()];
        let mut falling = 1.0;
        for j in 1..=self.order {
            // d^j/dv^j ln v = (-1)^{j-1} (j-1)! / v^j
            d.push(falling / v.powi(j as i32));
            falling *= -(j as f64);
        }
        self.compose(&d)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.compose(&(0..=self.order).map(|j| cycle[j % 4]).collect::<Vec<_>>())
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.compose(&(0..=self.order).map(|j| cycle[j % 4]).collect::<Vec<_>>())
    }

    pub fn powf(&self, r: f64) -> Jet {
        let v = self.value();
        let mut d = Vec::with_capacity(self.order + 1);
        let mut coeff = 1.0;
        for j in 0..=self.order {
            d.push(coeff * v.powf(r - j as f64));
            coeff *= r - j as f64;
        }
        self.compose(&d)
    }

    pub fn recip(&self) -> Jet {
        self.powf(-1.0)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self.mul(&other.recip())
    }
}

//! Pointwise closed forms. Everything here works on plain values at one
//! sample point; the callers own the jets.

use crate::report::Residual;
use crate::spec_file::SolitonKind;
use crate::tensor::{kulkarni_nomizu, Metric, Tensor, Variance};

use Variance::{Contravariant as Up, Covariant as Down};

pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub fn covariant2(m: usize, f: impl FnMut(&[usize]) -> f64) -> Tensor<f64> {
    Tensor::from_fn(m, vec![Down, Down], f)
}

pub fn operator(m: usize, f: impl FnMut(&[usize]) -> f64) -> Tensor<f64> {
    Tensor::from_fn(m, vec![Up, Down], f)
}

pub fn kn(a: &Tensor<f64>, b: &Tensor<f64>) -> Tensor<f64> {
    kulkarni_nomizu(a, b).expect("symmetric (0,2) inputs")
}

pub fn zeros_like(t: &Tensor<f64>) -> Tensor<f64> {
    t.map(|_| 0.0)
}

/// `Σ_a A^i_a B^a_j` for (1,1) tensors.
pub fn compose(a: &Tensor<f64>, b: &Tensor<f64>) -> Tensor<f64> {
    let m = a.dim();
    operator(m, |ix| (0..m).map(|k| a.get(&[ix[0], k]) * b.get(&[k, ix[1]])).sum())
}

/// Curvature data at one point, as values.
#[derive(Debug, Clone)]
pub struct PointValues {
    pub m: usize,
    pub metric: Metric<f64>,
    pub riemann: Tensor<f64>,
    pub ricci: Tensor<f64>,
    pub ricci_op: Tensor<f64>,
    pub scal: f64,
}

impl PointValues {
    pub fn g(&self) -> &Tensor<f64> {
        &self.metric.g
    }

    pub fn gg(&self) -> Tensor<f64> {
        kn(self.g(), self.g())
    }

    /// `n` with `m = 2n + 1`.
    pub fn n(&self) -> f64 {
        (self.m as f64 - 1.0) / 2.0
    }
}

/// Contact data at one point, as values.
#[derive(Debug, Clone)]
pub struct ContactValues {
    pub phi: Tensor<f64>,
    pub xi: Tensor<f64>,
    pub eta: Tensor<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub dalpha: Vec<f64>,
    pub dbeta: Vec<f64>,
    /// `ξ(α)`
    pub xi_alpha: f64,
}

impl ContactValues {
    pub fn eta_eta(&self) -> Tensor<f64> {
        let m = self.xi.dim();
        covariant2(m, |ix| self.eta.get(&[ix[0]]) * self.eta.get(&[ix[1]]))
    }

    /// `β² − α² − ξ(α)`
    pub fn ricci_xi_factor(&self) -> f64 {
        self.beta * self.beta - self.alpha * self.alpha - self.xi_alpha
    }
}

/// `η(V)` and its derivatives at one point, for collinear candidates.
#[derive(Debug, Clone)]
pub struct Collinear {
    pub eta_v: f64,
    /// `d(η(V))`
    pub d: Vec<f64>,
    /// `grad(η(V))`
    pub grad: Vec<f64>,
    /// `ξ(η(V))`
    pub xi_d: f64,
}

/// A soliton equation written as `A − λB = 0`.
#[derive(Debug, Clone)]
pub struct Equation {
    pub a: Tensor<f64>,
    pub b: Tensor<f64>,
    /// The terms making up `A`, for normalization.
    pub terms: Vec<Tensor<f64>>,
}

impl Equation {
    /// Riemann: `½(£_V g)⊙g + R − λ·½g⊙g`; Ricci: `½£_V g + Ric − λg`;
    /// Yamabe: `£_V g + scal·g − λg`.
    pub fn new(kind: SolitonKind, pv: &PointValues, lie: &Tensor<f64>) -> Self {
        let g = pv.g();
        match kind {
            SolitonKind::Riemann => {
                let half_lie_g = kn(&lie.scaled(0.5), g);
                Equation { a: half_lie_g.plus(&pv.riemann).expect("shape"), b: pv.gg().scaled(0.5), terms: vec![half_lie_g, pv.riemann.clone()] }
            }
            SolitonKind::Ricci => {
                let half = lie.scaled(0.5);
                Equation { a: half.plus(&pv.ricci).expect("shape"), b: g.clone(), terms: vec![half, pv.ricci.clone()] }
            }
            SolitonKind::Yamabe => {
                let sg = g.scaled(pv.scal);
                Equation { a: lie.plus(&sg).expect("shape"), b: g.clone(), terms: vec![lie.clone(), sg] }
            }
        }
    }

    pub fn residual(&self, lambda: f64) -> Residual {
        let lb = self.b.scaled(lambda);
        let mut terms = self.terms.clone();
        terms.push(lb.clone());
        Residual::new(self.a.minus(&lb).expect("shape"), terms)
    }

    /// Least-squares `λ` over orthonormal frame components.
    pub fn best_lambda(&self, frame: &crate::tensor::Frame<f64>) -> f64 {
        let pa = frame.project(&self.a);
        let pb = frame.project(&self.b);
        pa.frobenius_dot(&pb) / pb.frobenius_dot(&pb)
    }
}

/// The Riemann soliton residual tensor `E`, whatever the candidate's kind.
pub fn riemann_residual(pv: &PointValues, lie: &Tensor<f64>, lambda: f64) -> Residual {
    Equation::new(SolitonKind::Riemann, pv, lie).residual(lambda)
}

/// `½£_V g + Ric/(m−2) − ((m−1)λ − div V)/(m−2)·g`, the trace of `E`
/// divided by `m − 2`.
pub fn traced_riemann(pv: &PointValues, lie: &Tensor<f64>, lambda: f64, div: f64) -> Residual {
    let m = pv.m as f64;
    let half = lie.scaled(0.5);
    let ric = pv.ricci.scaled(1.0 / (m - 2.0));
    let rhs = pv.g().scaled(((m - 1.0) * lambda - div) / (m - 2.0));
    let lhs = half.plus(&ric).expect("shape");
    Residual::new(lhs.minus(&rhs).expect("shape"), vec![half, ric, rhs])
}

/// `scal − (m−1)[mλ − 2 div V]`.
pub fn riemann_scalar(pv: &PointValues, lambda: f64, div: f64) -> Residual {
    let m = pv.m as f64;
    Residual::scalar(pv.scal, (m - 1.0) * (m * lambda - 2.0 * div))
}

/// `scal = mλ − div V` for a Ricci soliton.
pub fn ricci_scalar(pv: &PointValues, lambda: f64, div: f64) -> Residual {
    Residual::scalar(pv.scal, pv.m as f64 * lambda - div)
}

/// `2 div V = m(λ − scal)` for a Yamabe soliton.
pub fn yamabe_trace(pv: &PointValues, lambda: f64, div: f64) -> Residual {
    Residual::scalar(2.0 * div, pv.m as f64 * (lambda - pv.scal))
}

/// `Ric` and `Q` predicted for a collinear soliton of the given kind,
/// plus the predicted scalar curvature.
pub fn collinear_ricci(kind: SolitonKind, pv: &PointValues, cv: &ContactValues, c: &Collinear, lambda: f64) -> (Tensor<f64>, Tensor<f64>, f64) {
    let m = pv.m;
    let n = pv.n();
    let g = pv.g();
    let (a, ev) = (cv.alpha, c.eta_v);
    let eta = |i: usize| *cv.eta.get(&[i]);
    let xi = |i: usize| *cv.xi.get(&[i]);
    let (k, coeff, scal) = match kind {
        SolitonKind::Riemann => (
            (2.0 * n - 1.0) / 2.0,
            2.0 * n * lambda - (4.0 * n - 1.0) * a * ev - c.xi_d,
            2.0 * n * ((2.0 * n + 1.0) * lambda - 4.0 * n * a * ev - 2.0 * c.xi_d),
        ),
        SolitonKind::Ricci => (0.5, lambda - a * ev, (2.0 * n + 1.0) * lambda - 2.0 * n * a * ev - c.xi_d),
        SolitonKind::Yamabe => unreachable!("no collinear Ricci form for Yamabe solitons"),
    };
    // Riemann: −k[dηV⊗η + η⊗dηV − 2αηV η⊗η] + coeff·g
    // Ricci:   −k[dηV⊗η + η⊗dηV] + coeff·g + αηV η⊗η  (same with k = ½)
    let ric = covariant2(m, |ix| {
        let (i, j) = (ix[0], ix[1]);
        -k * (c.d[i] * eta(j) + eta(i) * c.d[j] - 2.0 * a * ev * eta(i) * eta(j)) + coeff * g.get(ix)
    });
    let q = operator(m, |ix| {
        let (p, x) = (ix[0], ix[1]);
        -k * ((c.d[x] - 2.0 * a * ev * eta(x)) * xi(p) + eta(x) * c.grad[p]) + coeff * delta(p, x)
    });
    (ric, q, scal)
}

/// Lemma forms for `V = η(V)ξ`: `∇V` at `(d, i)`, `£_V g`, `div V`.
pub fn lemma_forms(pv: &PointValues, cv: &ContactValues, c: &Collinear) -> (Tensor<f64>, Tensor<f64>, f64) {
    let m = pv.m;
    let g = pv.g();
    let (a, b, ev) = (cv.alpha, cv.beta, c.eta_v);
    let eta = |i: usize| *cv.eta.get(&[i]);
    let nabla = Tensor::from_fn(m, vec![Down, Up], |ix| {
        let (d, i) = (ix[0], ix[1]);
        (c.d[d] - a * ev * eta(d)) * cv.xi.get(&[i]) + ev * (a * delta(i, d) - b * cv.phi.get(&[i, d]))
    });
    let lie = covariant2(m, |ix| {
        let (i, j) = (ix[0], ix[1]);
        c.d[i] * eta(j) + eta(i) * c.d[j] + 2.0 * a * ev * (g.get(ix) - eta(i) * eta(j))
    });
    let div = 2.0 * pv.n() * a * ev + c.xi_d;
    (nabla, lie, div)
}

/// Transfer closed forms `(λ, λ̄)` for a collinear Riemann soliton.
pub fn transfer_closed_forms(pv: &PointValues, cv: &ContactValues, c: &Collinear) -> (f64, f64) {
    let n = pv.n();
    let f = cv.ricci_xi_factor();
    (c.xi_d + cv.alpha * c.eta_v + f, (2.0 * n - 1.0) * c.xi_d + 2.0 * n * f)
}

/// Least-squares `(a, b)` in `Ric ≈ a·g + b·η⊗η` over frame components,
/// and the irreducible residual.
pub fn quasi_einstein(pv: &PointValues, cv: &ContactValues, frame: &crate::tensor::Frame<f64>) -> (f64, f64, Residual) {
    let ee = cv.eta_eta();
    let (pr, pg, ph) = (frame.project(&pv.ricci), frame.project(pv.g()), frame.project(&ee));
    let (gg, gh, hh) = (pg.frobenius_dot(&pg), pg.frobenius_dot(&ph), ph.frobenius_dot(&ph));
    let (rg, rh) = (pr.frobenius_dot(&pg), pr.frobenius_dot(&ph));
    let det = gg * hh - gh * gh;
    let a = (hh * rg - gh * rh) / det;
    let b = (gg * rh - gh * rg) / det;
    let fit = pv.g().scaled(a).plus(&ee.scaled(b)).expect("shape");
    (a, b, Residual::difference(pv.ricci.clone(), fit))
}

/// `R(ξ, Y, Z, W) − (λ − α)[g(Y, Z)η(W) − η(Z)g(Y, W)]` as a (0,3) tensor.
pub fn torse_forming_curvature(pv: &PointValues, cv: &ContactValues, lambda: f64) -> Residual {
    let m = pv.m;
    let g = pv.g();
    let r_xi = Tensor::from_fn(m, vec![Down; 3], |ix| (0..m).map(|p| cv.xi.get(&[p]) * pv.riemann.get(&[p, ix[0], ix[1], ix[2]])).sum());
    let c = lambda - cv.alpha;
    let rhs = Tensor::from_fn(m, vec![Down; 3], |ix| {
        let (y, z, w) = (ix[0], ix[1], ix[2]);
        c * (g.get(&[y, z]) * cv.eta.get(&[w]) - cv.eta.get(&[z]) * g.get(&[y, w]))
    });
    Residual::difference(r_xi, rhs)
}

/// `E(ξ, ·, ·, ·)` for the Riemann residual `E`.
pub fn contract_first_with(e: &Tensor<f64>, xi: &Tensor<f64>) -> Tensor<f64> {
    let m = e.dim();
    Tensor::from_fn(m, vec![Down; 3], |ix| (0..m).map(|p| xi.get(&[p]) * e.get(&[p, ix[0], ix[1], ix[2]])).sum())
}

/// Predicted `(∇_X Ric)(Y, Z)` at `(x, y, z)` for a soliton with `V = ξ`.
pub fn nabla_ricci_form(kind: SolitonKind, pv: &PointValues, cv: &ContactValues, nabla_eta: &Tensor<f64>, dlambda: &[f64]) -> Tensor<f64> {
    let m = pv.m;
    let n = pv.n();
    let g = pv.g();
    let (c_l, c_a, c_e) = match kind {
        SolitonKind::Riemann => (2.0 * n, -(4.0 * n - 1.0), 2.0 * n - 1.0),
        _ => (1.0, -1.0, 1.0),
    };
    let eta = |i: usize| *cv.eta.get(&[i]);
    Tensor::from_fn(m, vec![Down; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        (c_l * dlambda[x] + c_a * cv.dalpha[x]) * g.get(&[y, z])
            + c_e * cv.dalpha[x] * eta(y) * eta(z)
            + c_e * cv.alpha * (nabla_eta.get(&[x, y]) * eta(z) + nabla_eta.get(&[x, z]) * eta(y))
    })
}

//! Symbolic fields seeded into jets at sample points.
//!
//! Every partial derivative up to the requested order is produced by
//! symbolic differentiation once, then evaluated per point; the jet
//! therefore carries exact derivatives of the closed-form input.

use std::sync::Arc;

use crate::expr::{simplify, EvalError, ScalarExpr};
use crate::jet::{Jet, JetSpace};
use crate::tensor::{Tensor, Variance};

/// A scalar field with its derivative table in jet coefficient order.
#[derive(Debug, Clone)]
pub struct SeededExpr {
    order: usize,
    table: Vec<ScalarExpr>,
}

impl SeededExpr {
    pub fn new(expr: &ScalarExpr, space: &JetSpace, order: usize) -> Self {
        let monomials = space.monomials(order);
        let mut table: Vec<ScalarExpr> = Vec::with_capacity(monomials.len());
        for m in monomials {
            let Some(a) = m.iter().position(|&e| e > 0) else {
                table.push(simplify(expr));
                continue;
            };
            let mut parent = m.clone();
            parent[a] -= 1;
            let p = space.index_of(&parent).expect("graded layout is closed under lowering");
            let d = if table[p].is_zero() { ScalarExpr::zero() } else { simplify(&table[p].differentiate(a)) };
            table.push(d);
        }
        SeededExpr { order, table }
    }

    pub fn expr(&self) -> &ScalarExpr {
        &self.table[0]
    }

    pub fn jet(&self, space: &Arc<JetSpace>, coords: &[f64]) -> Result<Jet, EvalError> {
        let values = self.table.iter().map(|e| if e.is_zero() { Ok(0.0) } else { e.evaluate(coords) }).collect::<Result<Vec<_>, _>>()?;
        Ok(Jet::from_derivatives(space, self.order, &values))
    }
}

/// A tensor of seeded components.
#[derive(Debug, Clone)]
pub struct SeededTensor {
    dim: usize,
    variance: Vec<Variance>,
    comps: Vec<SeededExpr>,
}

impl SeededTensor {
    pub fn new(t: &Tensor<ScalarExpr>, space: &JetSpace, order: usize) -> Self {
        SeededTensor {
            dim: t.dim(),
            variance: t.variance().to_vec(),
            comps: t.components().iter().map(|e| SeededExpr::new(e, space, order)).collect(),
        }
    }

    pub fn at(&self, space: &Arc<JetSpace>, coords: &[f64]) -> Result<Tensor<Jet>, EvalError> {
        let comps = self.comps.iter().map(|c| c.jet(space, coords)).collect::<Result<Vec<_>, _>>()?;
        Ok(Tensor::from_components(self.dim, self.variance.clone(), comps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn seeded_jet_matches_closed_form_derivatives() {
        let names: Vec<String> = vec!["x".into(), "z".into()];
        let e = parse("x^2*exp(2*z)", &names).unwrap();
        let space = JetSpace::new(2, 3);
        let seeded = SeededExpr::new(&e, &space, 3);
        let j = seeded.jet(&space, &[0.5, 1.5]).unwrap();
        let e3 = 3f64.exp();
        assert!((j.value() - 0.25 * e3).abs() < 1e-13);
        assert!((j.derivative(&[0, 2]) - 4.0 * 0.25 * e3).abs() < 1e-12);
        assert!((j.derivative(&[1, 2]) - 8.0 * 0.5 * e3).abs() < 1e-12);
        assert!((j.derivative(&[2, 1]) - 2.0 * 2.0 * e3).abs() < 1e-12);
        assert_eq!(j.derivative(&[3, 0]), 0.0);
    }
}

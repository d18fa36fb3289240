//! Closed-form scalar fields over chart coordinates.
//!
//! A [`ScalarExpr`] is an immutable expression tree whose leaves are numeric
//! constants and chart coordinates (stored by index). Differentiation is
//! purely symbolic; evaluation is a straight recursive walk that reports
//! domain problems (division by zero, logarithm of a non-positive number)
//! instead of returning non-finite values.

mod chart;
mod parse;
mod simplify;

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use thiserror::Error;

pub use chart::{Chart, Constraint, Point, Relation};
pub use parse::{parse, ParseError};
pub use simplify::simplify;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogOfNonPositive(f64),
    #[error("fractional power of negative base {0}")]
    NegativeBase(f64),
    #[error("non-finite result")]
    NonFinite,
    #[error("point has {got} coordinates, chart has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point {point:?} violates domain constraint `{constraint}`")]
    DomainViolation { point: Vec<f64>, constraint: String },
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
}

/// Node kinds of the expression tree.
#[derive(Debug, Clone)]
pub enum Node {
    Const(f64),
    Coord(usize),
    Sum(Vec<ScalarExpr>),
    Product(Vec<ScalarExpr>),
    Quotient(ScalarExpr, ScalarExpr),
    Power(ScalarExpr, Rational64),
    Exp(ScalarExpr),
    Log(ScalarExpr),
    Sin(ScalarExpr),
    Cos(ScalarExpr),
    Neg(ScalarExpr),
}

#[derive(Debug, Clone)]
pub struct ScalarExpr(Arc<Node>);

impl ScalarExpr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn wrap(node: Node) -> Self {
        ScalarExpr(Arc::new(node))
    }

    pub fn constant(value: f64) -> Self {
        Self::wrap(Node::Const(value))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn coord(index: usize) -> Self {
        Self::wrap(Node::Coord(index))
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_constant() == Some(1.0)
    }

    /// n-ary sum with flattening, constant folding and zero elimination.
    pub fn sum(terms: Vec<ScalarExpr>) -> Self {
        let mut flat = Vec::with_capacity(terms.len());
        let mut constant = 0.0;
        for t in terms {
            match t.node() {
                Node::Const(c) => constant += c,
                Node::Sum(inner) => {
                    for u in inner {
                        match u.node() {
                            Node::Const(c) => constant += c,
                            _ => flat.push(u.clone()),
                        }
                    }
                }
                _ => flat.push(t),
            }
        }
        if constant != 0.0 {
            flat.push(Self::constant(constant));
        }
        match flat.len() {
            0 => Self::zero(),
            1 => flat.pop().unwrap(),
            _ => Self::wrap(Node::Sum(flat)),
        }
    }

    /// n-ary product with flattening, constant folding and 0/1 elimination.
    pub fn product(factors: Vec<ScalarExpr>) -> Self {
        let mut flat = Vec::with_capacity(factors.len());
        let mut constant = 1.0;
        for f in factors {
            match f.node() {
                Node::Const(c) => constant *= c,
                Node::Product(inner) => {
                    for u in inner {
                        match u.node() {
                            Node::Const(c) => constant *= c,
                            _ => flat.push(u.clone()),
                        }
                    }
                }
                _ => flat.push(f),
            }
        }
        if constant == 0.0 {
            return Self::zero();
        }
        if flat.is_empty() {
            return Self::constant(constant);
        }
        if constant != 1.0 {
            flat.insert(0, Self::constant(constant));
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Self::wrap(Node::Product(flat))
        }
    }

    pub fn add(&self, other: &ScalarExpr) -> Self {
        Self::sum(vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &ScalarExpr) -> Self {
        Self::sum(vec![self.clone(), other.neg()])
    }

    pub fn mul(&self, other: &ScalarExpr) -> Self {
        Self::product(vec![self.clone(), other.clone()])
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::product(vec![Self::constant(c), self.clone()])
    }

    pub fn div(&self, other: &ScalarExpr) -> Self {
        if other.is_one() || self.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_constant(), other.as_constant()) {
            if b != 0.0 {
                return Self::constant(a / b);
            }
        }
        Self::wrap(Node::Quotient(self.clone(), other.clone()))
    }

    pub fn neg(&self) -> Self {
        match self.node() {
            Node::Const(c) => Self::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Self::wrap(Node::Neg(self.clone())),
        }
    }

    pub fn pow(&self, exponent: Rational64) -> Self {
        if *exponent.numer() == 0 {
            return Self::one();
        }
        if exponent == Rational64::from_integer(1) {
            return self.clone();
        }
        if let Some(c) = self.as_constant() {
            if let Ok(v) = eval_power(c, exponent) {
                return Self::constant(v);
            }
        }
        Self::wrap(Node::Power(self.clone(), exponent))
    }

    pub fn powi(&self, exponent: i64) -> Self {
        self.pow(Rational64::from_integer(exponent))
    }

    pub fn sqrt(&self) -> Self {
        self.pow(Rational64::new(1, 2))
    }

    pub fn exp(&self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(c.exp()),
            None => Self::wrap(Node::Exp(self.clone())),
        }
    }

    pub fn ln(&self) -> Self {
        match self.as_constant() {
            Some(c) if c > 0.0 => Self::constant(c.ln()),
            _ => Self::wrap(Node::Log(self.clone())),
        }
    }

    pub fn sin(&self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(c.sin()),
            None => Self::wrap(Node::Sin(self.clone())),
        }
    }

    pub fn cos(&self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(c.cos()),
            None => Self::wrap(Node::Cos(self.clone())),
        }
    }

    /// Exact partial derivative with respect to the coordinate at `index`.
    pub fn differentiate(&self, index: usize) -> ScalarExpr {
        match self.node() {
            Node::Const(_) => Self::zero(),
            Node::Coord(j) => {
                if *j == index {
                    Self::one()
                } else {
                    Self::zero()
                }
            }
            Node::Sum(terms) => Self::sum(terms.iter().map(|t| t.differentiate(index)).collect()),
            Node::Product(factors) => {
                let mut terms = Vec::with_capacity(factors.len());
                for (k, f) in factors.iter().enumerate() {
                    let df = f.differentiate(index);
                    if df.is_zero() {
                        continue;
                    }
                    let mut parts = factors.clone();
                    parts[k] = df;
                    terms.push(Self::product(parts));
                }
                Self::sum(terms)
            }
            Node::Quotient(a, b) => {
                let da = a.differentiate(index);
                let db = b.differentiate(index);
                if db.is_zero() {
                    return da.div(b);
                }
                let numer = da.mul(b).sub(&a.mul(&db));
                numer.div(&b.powi(2))
            }
            Node::Power(base, q) => {
                let db = base.differentiate(index);
                if db.is_zero() {
                    return Self::zero();
                }
                let coeff = *q.numer() as f64 / *q.denom() as f64;
                Self::product(vec![Self::constant(coeff), base.pow(q - Rational64::from_integer(1)), db])
            }
            Node::Exp(a) => {
                let da = a.differentiate(index);
                if da.is_zero() {
                    return Self::zero();
                }
                self.mul(&da)
            }
            Node::Log(a) => a.differentiate(index).div(a),
            Node::Sin(a) => {
                let da = a.differentiate(index);
                if da.is_zero() {
                    return Self::zero();
                }
                a.cos().mul(&da)
            }
            Node::Cos(a) => {
                let da = a.differentiate(index);
                if da.is_zero() {
                    return Self::zero();
                }
                a.sin().mul(&da).neg()
            }
            Node::Neg(a) => a.differentiate(index).neg(),
        }
    }

    /// Numeric value at raw coordinate values (no domain check; see
    /// [`Chart::evaluate`] for the checked variant).
    pub fn evaluate(&self, coords: &[f64]) -> Result<f64, EvalError> {
        let v = self.eval_unchecked(coords)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn eval_unchecked(&self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(match self.node() {
            Node::Const(c) => *c,
            Node::Coord(i) => *x.get(*i).ok_or(EvalError::DimensionMismatch { expected: i + 1, got: x.len() })?,
            Node::Sum(terms) => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.eval_unchecked(x)?;
                }
                acc
            }
            Node::Product(factors) => {
                let mut acc = 1.0;
                for f in factors {
                    acc *= f.eval_unchecked(x)?;
                }
                acc
            }
            Node::Quotient(a, b) => {
                let d = b.eval_unchecked(x)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval_unchecked(x)? / d
            }
            Node::Power(base, q) => eval_power(base.eval_unchecked(x)?, *q)?,
            Node::Exp(a) => a.eval_unchecked(x)?.exp(),
            Node::Log(a) => {
                let v = a.eval_unchecked(x)?;
                if v <= 0.0 {
                    return Err(EvalError::LogOfNonPositive(v));
                }
                v.ln()
            }
            Node::Sin(a) => a.eval_unchecked(x)?.sin(),
            Node::Cos(a) => a.eval_unchecked(x)?.cos(),
            Node::Neg(a) => -a.eval_unchecked(x)?,
        })
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.node() {
            Node::Const(_) => None,
            Node::Coord(i) => Some(*i),
            Node::Sum(v) | Node::Product(v) => v.iter().filter_map(|e| e.max_coord()).max(),
            Node::Quotient(a, b) => a.max_coord().max(b.max_coord()),
            Node::Power(a, _) | Node::Exp(a) | Node::Log(a) | Node::Sin(a) | Node::Cos(a) | Node::Neg(a) => a.max_coord(),
        }
    }

    /// Structural key used for like-term grouping. Two expressions with the
    /// same key are structurally identical.
    pub fn key(&self) -> String {
        let mut s = String::new();
        self.write_key(&mut s);
        s
    }

    fn write_key(&self, s: &mut String) {
        use std::fmt::Write;
        match self.node() {
            Node::Const(c) => {
                let _ = write!(s, "{c:?}");
            }
            Node::Coord(i) => {
                let _ = write!(s, "#{i}");
            }
            Node::Sum(v) => {
                s.push_str("S(");
                for e in v {
                    e.write_key(s);
                    s.push(',');
                }
                s.push(')');
            }
            Node::Product(v) => {
                s.push_str("P(");
                for e in v {
                    e.write_key(s);
                    s.push(',');
                }
                s.push(')');
            }
            Node::Quotient(a, b) => {
                s.push_str("Q(");
                a.write_key(s);
                s.push(',');
                b.write_key(s);
                s.push(')');
            }
            Node::Power(a, q) => {
                s.push_str("W(");
                a.write_key(s);
                let _ = write!(s, ",{q})");
            }
            Node::Exp(a) => {
                s.push_str("exp(");
                a.write_key(s);
                s.push(')');
            }
            Node::Log(a) => {
                s.push_str("log(");
                a.write_key(s);
                s.push(')');
            }
            Node::Sin(a) => {
                s.push_str("sin(");
                a.write_key(s);
                s.push(')');
            }
            Node::Cos(a) => {
                s.push_str("cos(");
                a.write_key(s);
                s.push(')');
            }
            Node::Neg(a) => {
                s.push_str("N(");
                a.write_key(s);
                s.push(')');
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Const(_) | Node::Coord(_) => 0,
            Node::Sum(v) | Node::Product(v) => v.iter().map(|e| e.size()).sum(),
            Node::Quotient(a, b) => a.size() + b.size(),
            Node::Power(a, _) | Node::Exp(a) | Node::Log(a) | Node::Sin(a) | Node::Cos(a) | Node::Neg(a) => a.size(),
        }
    }

    /// Render with the given coordinate names. The output parses back to an
    /// expression with identical values.
    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }
}

pub(crate) fn eval_power(base: f64, q: Rational64) -> Result<f64, EvalError> {
    let (n, d) = (*q.numer(), *q.denom());
    if base == 0.0 && n < 0 {
        return Err(EvalError::DivisionByZero);
    }
    if d == 1 {
        if let Ok(k) = i32::try_from(n) {
            return Ok(base.powi(k));
        }
        return Ok(base.powf(n as f64));
    }
    if base < 0.0 {
        return Err(EvalError::NegativeBase(base));
    }
    Ok(base.powf(n as f64 / d as f64))
}

pub struct ExprDisplay<'a> {
    expr: &'a ScalarExpr,
    names: &'a [String],
}

// Binding strength used to decide where parentheses are needed.
const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &ScalarExpr) -> u8 {
    match e.node() {
        Node::Const(c) if *c < 0.0 => PREC_UNARY,
        Node::Const(_) | Node::Coord(_) => PREC_ATOM,
        Node::Sum(_) => PREC_SUM,
        Node::Product(_) | Node::Quotient(..) => PREC_PRODUCT,
        Node::Neg(_) => PREC_UNARY,
        Node::Power(..) => PREC_POWER,
        Node::Exp(_) | Node::Log(_) | Node::Sin(_) | Node::Cos(_) => PREC_ATOM,
    }
}

impl ExprDisplay<'_> {
    fn sub<'b>(&'b self, e: &'b ScalarExpr) -> ExprDisplay<'b> {
        ExprDisplay { expr: e, names: self.names }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, e: &ScalarExpr, min: u8) -> fmt::Result {
        if precedence(e) < min {
            write!(f, "({})", self.sub(e))
        } else {
            write!(f, "{}", self.sub(e))
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr.node() {
            Node::Const(c) => write!(f, "{c}"),
            Node::Coord(i) => match self.names.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "x{i}"),
            },
            Node::Sum(terms) => {
                for (k, t) in terms.iter().enumerate() {
                    if k == 0 {
                        self.write_operand(f, t, PREC_SUM)?;
                        continue;
                    }
                    match t.node() {
                        Node::Neg(inner) => {
                            f.write_str(" - ")?;
                            self.write_operand(f, inner, PREC_PRODUCT)?;
                        }
                        Node::Const(c) if *c < 0.0 => write!(f, " - {}", -c)?,
                        _ => {
                            f.write_str(" + ")?;
                            self.write_operand(f, t, PREC_PRODUCT)?;
                        }
                    }
                }
                Ok(())
            }
            Node::Product(factors) => {
                for (k, t) in factors.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    // A leading negative constant reads fine as a unary minus.
                    let min = if k == 0 { PREC_UNARY } else { PREC_POWER };
                    self.write_operand(f, t, min)?;
                }
                Ok(())
            }
            Node::Quotient(a, b) => {
                self.write_operand(f, a, PREC_PRODUCT)?;
                f.write_str("/")?;
                self.write_operand(f, b, PREC_POWER)
            }
            Node::Power(base, q) => {
                self.write_operand(f, base, PREC_ATOM)?;
                if *q.denom() == 1 && *q.numer() >= 0 {
                    write!(f, "^{}", q.numer())
                } else {
                    write!(f, "^({}/{})", q.numer(), q.denom())
                }
            }
            Node::Exp(a) => write!(f, "exp({})", self.sub(a)),
            Node::Log(a) => write!(f, "log({})", self.sub(a)),
            Node::Sin(a) => write!(f, "sin({})", self.sub(a)),
            Node::Cos(a) => write!(f, "cos({})", self.sub(a)),
            Node::Neg(a) => {
                f.write_str("-")?;
                self.write_operand(f, a, PREC_UNARY)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_xyz() -> Chart {
        Chart::new(vec!["x".into(), "y".into(), "z".into()], &["z > 1"]).unwrap()
    }

    fn central_difference(e: &ScalarExpr, at: &[f64], index: usize, h: f64) -> f64 {
        let mut plus = at.to_vec();
        let mut minus = at.to_vec();
        plus[index] += h;
        minus[index] -= h;
        (e.evaluate(&plus).unwrap() - e.evaluate(&minus).unwrap()) / (2.0 * h)
    }

    #[test]
    fn chain_rule_on_warped_metric_component() {
        let chart = chart_xyz();
        let g = chart.parse("exp(2*z)").unwrap();
        let dg = chart.differentiate(&g, "z").unwrap();
        let p = [0.3, -0.2, 1.5];
        assert!((dg.evaluate(&p).unwrap() - 2.0 * 3f64.exp()).abs() < 1e-12);
        let expected = chart.parse("2*exp(2*z)").unwrap();
        assert!((dg.evaluate(&p).unwrap() - expected.evaluate(&p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let chart = chart_xyz();
        let c = chart.parse("3.5").unwrap();
        assert!(chart.differentiate(&c, "x").unwrap().is_zero());
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        // Oracle: central differences of e^{2z} applied twice at z = 1.5, step 1e-4.
        let chart = chart_xyz();
        let g = chart.parse("exp(2*z)").unwrap();
        let h = 1e-4;
        let f = |z: f64| g.evaluate(&[0.0, 0.0, z]).unwrap();
        let fd = (f(1.5 + h) - 2.0 * f(1.5) + f(1.5 - h)) / (h * h);
        assert!((fd - 80.342_147_60).abs() < 1e-4, "oracle {fd}");
        let d2 = g.differentiate(2).differentiate(2);
        let exact = d2.evaluate(&[0.0, 0.0, 1.5]).unwrap();
        assert!((exact - 4.0 * 3f64.exp()).abs() < 1e-12);
        assert!((exact - fd).abs() < 1e-4);
    }

    #[test]
    fn third_derivatives_are_supported() {
        let chart = chart_xyz();
        let e = chart.parse("sin(x)*exp(2*z)/(1 + y^2)").unwrap();
        let d3 = e.differentiate(0).differentiate(1).differentiate(2);
        let p = [0.4, 0.7, 1.3];
        let d2 = e.differentiate(0).differentiate(1);
        let fd = central_difference(&d2, &p, 2, 1e-5);
        let v = d3.evaluate(&p).unwrap();
        assert!((v - fd).abs() < 1e-6 * (1.0 + v.abs()));
    }

    #[test]
    fn evaluation_reports_domain_problems() {
        let chart = chart_xyz();
        let e = chart.parse("exp(2*z)").unwrap();
        assert!((chart.evaluate(&e, &Point::new(vec![0.0, 0.0, 1.5])).unwrap() - 3f64.exp()).abs() < 1e-12);
        let eta_v = chart.parse("exp(z)").unwrap();
        assert!((chart.evaluate(&eta_v, &Point::new(vec![0.0, 0.0, 2.0])).unwrap() - 2f64.exp()).abs() < 1e-12);
        assert!(matches!(chart.evaluate(&e, &Point::new(vec![0.0, 0.0, 0.5])), Err(EvalError::DomainViolation { .. })));
        let q = chart.parse("1/(z - 2)").unwrap();
        assert_eq!(q.evaluate(&[0.0, 0.0, 2.0]), Err(EvalError::DivisionByZero));
        let l = chart.parse("log(x)").unwrap();
        assert!(matches!(l.evaluate(&[-1.0, 0.0, 2.0]), Err(EvalError::LogOfNonPositive(_))));
    }

    #[test]
    fn unknown_coordinate_is_rejected() {
        let chart = chart_xyz();
        let e = chart.parse("x").unwrap();
        assert!(matches!(chart.differentiate(&e, "w"), Err(EvalError::UnknownCoordinate(_))));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let chart = chart_xyz();
        for text in ["exp(2*z)", "-(x + y)^2", "2*exp(z) - 1", "x^(1/2)*y - sin(z)/(1 + x^2)", "-3*x^(-2)", "(-2)^3 + cos(-x)"] {
            let e = chart.parse(text).unwrap();
            let printed = e.display(chart.names()).to_string();
            let back = chart.parse(&printed).unwrap();
            let p = [1.3, -0.4, 1.7];
            let (a, b) = (e.evaluate(&p).unwrap(), back.evaluate(&p).unwrap());
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{text} -> {printed}");
        }
    }
}

use serde::{Deserialize, Serialize};

use super::{parse, EvalError, ParseError, ScalarExpr};

/// A point in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    LessEq,
    Greater,
    GreaterEq,
}

impl Relation {
    fn holds(self, a: f64, b: f64) -> bool {
        match self {
            Relation::Less => a < b,
            Relation::LessEq => a <= b,
            Relation::Greater => a > b,
            Relation::GreaterEq => a >= b,
        }
    }
}

/// One domain inequality such as `z > 1`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub lhs: ScalarExpr,
    pub relation: Relation,
    pub rhs: ScalarExpr,
    pub text: String,
}

impl Constraint {
    pub fn parse(text: &str, names: &[String]) -> Result<Self, ParseError> {
        let ops = [(">=", Relation::GreaterEq), ("<=", Relation::LessEq), (">", Relation::Greater), ("<", Relation::Less)];
        for (token, relation) in ops {
            if let Some(at) = text.find(token) {
                let lhs = parse(&text[..at], names)?;
                let rhs = parse(&text[at + token.len()..], names).map_err(|e| e.shifted(at + token.len()))?;
                return Ok(Constraint { lhs, relation, rhs, text: text.trim().to_string() });
            }
        }
        Err(ParseError::new("expected one of <, <=, >, >= in domain constraint", 1))
    }

    pub fn holds(&self, coords: &[f64]) -> bool {
        match (self.lhs.evaluate(coords), self.rhs.evaluate(coords)) {
            (Ok(a), Ok(b)) => self.relation.holds(a, b),
            _ => false,
        }
    }
}

/// Coordinate names plus the open domain the chart covers.
#[derive(Debug, Clone)]
pub struct Chart {
    names: Vec<String>,
    domain: Vec<Constraint>,
}

impl Chart {
    pub fn new(names: Vec<String>, domain: &[&str]) -> Result<Self, ParseError> {
        let domain = domain.iter().map(|text| Constraint::parse(text, &names)).collect::<Result<Vec<_>, _>>()?;
        Ok(Chart { names, domain })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> &[Constraint] {
        &self.domain
    }

    pub fn coord_index(&self, name: &str) -> Result<usize, EvalError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| EvalError::UnknownCoordinate(name.to_string()))
    }

    pub fn parse(&self, text: &str) -> Result<ScalarExpr, ParseError> {
        parse(text, &self.names)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim() && self.domain.iter().all(|c| c.holds(p.coords()))
    }

    pub fn check(&self, p: &Point) -> Result<(), EvalError> {
        if p.dim() != self.dim() {
            return Err(EvalError::DimensionMismatch { expected: self.dim(), got: p.dim() });
        }
        match self.domain.iter().find(|c| !c.holds(p.coords())) {
            Some(c) => Err(EvalError::DomainViolation { point: p.0.clone(), constraint: c.text.clone() }),
            None => Ok(()),
        }
    }

    /// Domain-checked evaluation.
    pub fn evaluate(&self, e: &ScalarExpr, p: &Point) -> Result<f64, EvalError> {
        self.check(p)?;
        e.evaluate(p.coords())
    }

    pub fn differentiate(&self, e: &ScalarExpr, coord: &str) -> Result<ScalarExpr, EvalError> {
        Ok(e.differentiate(self.coord_index(coord)?))
    }
}

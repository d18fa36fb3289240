//! Value-preserving rewriting: constant folding, flattening, 0/1
//! elimination, like-term and like-factor merging. Not a canonical form.

use num_rational::Rational64;

use super::{eval_power, Node, ScalarExpr};

pub fn simplify(e: &ScalarExpr) -> ScalarExpr {
    match e.node() {
        Node::Const(_) | Node::Coord(_) => e.clone(),
        Node::Neg(a) => simplify_product(vec![ScalarExpr::constant(-1.0), simplify(a)]),
        Node::Sum(terms) => simplify_sum(terms.iter().map(simplify).collect()),
        Node::Product(factors) => simplify_product(factors.iter().map(simplify).collect()),
        Node::Quotient(a, b) => {
            let denom = simplify_power(simplify(b), Rational64::from_integer(-1));
            simplify_product(vec![simplify(a), denom])
        }
        Node::Power(a, q) => simplify_power(simplify(a), *q),
        Node::Exp(a) => {
            let a = simplify(a);
            match a.node() {
                Node::Log(inner) => inner.clone(),
                _ => a.exp(),
            }
        }
        Node::Log(a) => {
            let a = simplify(a);
            match a.node() {
                Node::Exp(inner) => inner.clone(),
                _ => a.ln(),
            }
        }
        Node::Sin(a) => simplify(a).sin(),
        Node::Cos(a) => simplify(a).cos(),
    }
}

/// Split a term into a numeric coefficient and the remaining factor.
fn split_coefficient(term: &ScalarExpr) -> (f64, ScalarExpr) {
    match term.node() {
        Node::Const(c) => (*c, ScalarExpr::one()),
        Node::Product(factors) => match factors[0].as_constant() {
            Some(c) => (c, ScalarExpr::product(factors[1..].to_vec())),
            None => (1.0, term.clone()),
        },
        _ => (1.0, term.clone()),
    }
}

fn simplify_sum(terms: Vec<ScalarExpr>) -> ScalarExpr {
    let mut flat = Vec::new();
    for t in terms {
        match t.node() {
            Node::Sum(inner) => flat.extend(inner.iter().cloned()),
            _ => flat.push(t),
        }
    }
    let mut constant = 0.0;
    // (key, coefficient, rest) in first-seen order
    let mut groups: Vec<(String, f64, ScalarExpr)> = Vec::new();
    for t in flat {
        let (c, rest) = split_coefficient(&t);
        if rest.is_one() {
            constant += c;
            continue;
        }
        let key = rest.key();
        match groups.iter_mut().find(|(k, _, _)| *k == key) {
            Some(g) => g.1 += c,
            None => groups.push((key, c, rest)),
        }
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<ScalarExpr> =
        groups.into_iter().filter(|(_, c, _)| *c != 0.0).map(|(_, c, rest)| ScalarExpr::product(vec![ScalarExpr::constant(c), rest])).collect();
    if constant != 0.0 {
        out.push(ScalarExpr::constant(constant));
    }
    ScalarExpr::sum(out)
}

fn simplify_power(base: ScalarExpr, q: Rational64) -> ScalarExpr {
    if *q.numer() == 0 {
        return ScalarExpr::one();
    }
    if let Some(c) = base.as_constant() {
        if let Ok(v) = eval_power(c, q) {
            return ScalarExpr::constant(v);
        }
    }
    let qf = *q.numer() as f64 / *q.denom() as f64;
    match base.node() {
        Node::Exp(u) => simplify(&u.scale(qf)).exp(),
        Node::Power(inner, p) if q.is_integer() => simplify_power(inner.clone(), p * q),
        Node::Product(factors) if q.is_integer() => simplify_product(factors.iter().map(|f| simplify_power(f.clone(), q)).collect()),
        _ => base.pow(q),
    }
}

fn simplify_product(factors: Vec<ScalarExpr>) -> ScalarExpr {
    let mut flat = Vec::new();
    let mut pending = factors;
    while let Some(f) = pending.pop() {
        match f.node() {
            Node::Product(inner) => pending.extend(inner.iter().cloned()),
            Node::Neg(a) => {
                pending.push(ScalarExpr::constant(-1.0));
                pending.push(a.clone());
            }
            _ => flat.push(f),
        }
    }
    flat.reverse();

    let mut coefficient = 1.0;
    let mut exp_args: Vec<ScalarExpr> = Vec::new();
    let mut bases: Vec<(String, ScalarExpr, Rational64)> = Vec::new();
    for f in flat {
        let (base, q) = match f.node() {
            Node::Const(c) => {
                coefficient *= c;
                continue;
            }
            Node::Exp(u) => {
                exp_args.push(u.clone());
                continue;
            }
            Node::Power(b, q) => (b.clone(), *q),
            _ => (f.clone(), Rational64::from_integer(1)),
        };
        let key = base.key();
        match bases.iter_mut().find(|(k, _, _)| *k == key) {
            Some(entry) => entry.2 += q,
            None => bases.push((key, base, q)),
        }
    }
    if coefficient == 0.0 {
        return ScalarExpr::zero();
    }
    bases.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = vec![ScalarExpr::constant(coefficient)];
    for (_, base, q) in bases {
        if *q.numer() != 0 {
            out.push(base.pow(q));
        }
    }
    if !exp_args.is_empty() {
        let arg = simplify_sum(exp_args);
        if !arg.is_zero() {
            out.push(arg.exp());
        }
    }
    ScalarExpr::product(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn simp(text: &str) -> ScalarExpr {
        simplify(&parse(text, &names()).unwrap())
    }

    #[test]
    fn annihilator_and_identity() {
        let e = simp("0*exp(2*z) + x");
        assert_eq!(e.key(), ScalarExpr::coord(0).key());
    }

    #[test]
    fn positive_factor_cancels() {
        assert_eq!(simp("exp(2*z)/exp(2*z)").as_constant(), Some(1.0));
        assert_eq!(simp("x*y/(y*x)").as_constant(), Some(1.0));
    }

    #[test]
    fn like_terms_merge() {
        assert_eq!(simp("(2*exp(z) - 1) - 2*exp(z)").as_constant(), Some(-1.0));
        let e = simp("x + 2*x - 3*x + y*x - x*y");
        assert!(e.is_zero(), "{}", e.display(&names()));
    }

    #[test]
    fn repeated_derivatives_stay_small() {
        let e = parse("exp(2*z)", &names()).unwrap();
        let mut d = e.clone();
        for _ in 0..3 {
            d = simplify(&d.differentiate(2));
        }
        assert!(d.size() <= 6, "{}", d.display(&names()));
        assert!((d.evaluate(&[0.0, 0.0, 1.0]).unwrap() - 8.0 * 2f64.exp()).abs() < 1e-12);
    }
}

//! Infix expression parser.
//!
//! Grammar (lowest to highest binding):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers resolve to chart coordinates first, then to the constant
//! `pi`. Recognised functions: `exp`, `log` (alias `ln`), `sin`, `cos`,
//! `sqrt`. Exponents must fold to a rational constant.

use num_rational::Rational64;
use thiserror::Error;

use super::ScalarExpr;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} (column {column})")]
pub struct ParseError {
    pub message: String,
    /// 1-based character column in the parsed text.
    pub column: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, column: usize) -> Self {
        ParseError { message: message.into(), column }
    }

    pub(crate) fn shifted(mut self, by: usize) -> Self {
        self.column += by;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific notation: 1e-3, 2.5E+4
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal: String = chars[start..i].iter().collect();
            let value = literal.parse::<f64>().map_err(|_| ParseError::new(format!("malformed number `{literal}`"), column))?;
            out.push((Token::Number(value), column));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), column));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Token::Op(c),
                '(' => Token::LParen,
                ')' => Token::RParen,
                _ => return Err(ParseError::new(format!("unexpected character `{c}`"), column)),
            };
            out.push((tok, column));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    names: &'a [String],
    end_column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_column)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        let column = self.column();
        match self.next() {
            Some(Token::RParen) => Ok(()),
            _ => Err(ParseError::new("expected `)`", column)),
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { acc.mul(&rhs) } else { acc.div(&rhs) };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.primary()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let column = self.column();
            let exponent = self.unary()?;
            let value = exponent.as_constant().ok_or_else(|| ParseError::new("exponent must be a constant", column))?;
            let q = to_rational(value).ok_or_else(|| ParseError::new(format!("exponent {value} is not a simple rational"), column))?;
            return Ok(base.pow(q));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ScalarExpr, ParseError> {
        let column = self.column();
        match self.next() {
            Some(Token::Number(v)) => Ok(ScalarExpr::constant(v)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                if let Some(Token::LParen) = self.peek() {
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return match name.as_str() {
                        "exp" => Ok(arg.exp()),
                        "log" | "ln" => Ok(arg.ln()),
                        "sin" => Ok(arg.sin()),
                        "cos" => Ok(arg.cos()),
                        "sqrt" => Ok(arg.sqrt()),
                        _ => Err(ParseError::new(format!("unknown function `{name}`"), column)),
                    };
                }
                if let Some(i) = self.names.iter().position(|n| *n == name) {
                    return Ok(ScalarExpr::coord(i));
                }
                if name == "pi" {
                    return Ok(ScalarExpr::constant(std::f64::consts::PI));
                }
                Err(ParseError::new(format!("unknown identifier `{name}`"), column))
            }
            Some(Token::RParen) => Err(ParseError::new("unexpected `)`", column)),
            Some(Token::Op(c)) => Err(ParseError::new(format!("unexpected operator `{c}`"), column)),
            None => Err(ParseError::new("unexpected end of expression", column)),
        }
    }
}

fn to_rational(value: f64) -> Option<Rational64> {
    let q = Rational64::approximate_float(value)?;
    if *q.denom() > 1000 {
        return None;
    }
    let back = *q.numer() as f64 / *q.denom() as f64;
    ((back - value).abs() <= 1e-12 * value.abs().max(1.0)).then_some(q)
}

/// Parse `text` with the given coordinate names.
pub fn parse(text: &str, names: &[String]) -> Result<ScalarExpr, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::new("empty expression", 1));
    }
    let mut parser = Parser { tokens, pos: 0, names, end_column: text.chars().count() + 1 };
    let e = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(ParseError::new("unexpected trailing input", parser.column()));
    }
    Ok(e)
}

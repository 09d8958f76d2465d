//! Polynomial expressions in the generators of a cohomology ring.
//!
//! Grammar: sums and differences of products, `^` with a nonnegative integer
//! exponent, parentheses, integer literals, and the names `h`, `l`, `lp`,
//! `b<i>`, `bp<m>` (quadrics) or `t<j>` (products, `j` from 1). Juxtaposition
//! multiplies, so `3h^2` is `3*h^2`.

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ring::{CohClass, Ring, RingError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected {found} at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("unknown generator {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Token::Int(s.parse().expect("digits parse"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Token::Name(s)));
        } else if "+-*^()".contains(c) {
            out.push((pos, Token::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::Unexpected {
                found: format!("{c:?}"),
                offset: pos,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn unexpected(&self) -> ExprError {
        match self.tokens.get(self.pos) {
            Some((offset, t)) => ExprError::Unexpected {
                found: match t {
                    Token::Int(v) => v.to_string(),
                    Token::Name(s) => s.clone(),
                    Token::Op(c) => c.to_string(),
                },
                offset: *offset,
            },
            None => ExprError::Unexpected {
                found: "end of input".into(),
                offset: self.len,
            },
        }
    }

    fn expr(&mut self) -> Result<CohClass, ExprError> {
        let mut acc = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CohClass, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Token::Int(_) | Token::Name(_) | Token::Op('(')) => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<CohClass, ExprError> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<CohClass, ExprError> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Token::Int(k)) => {
                    let k: usize = k.try_into().map_err(|_| self.unexpected())?;
                    self.pos += 1;
                    return Ok(base.pow(k));
                }
                _ => return Err(self.unexpected()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<CohClass, ExprError> {
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(CohClass::integer(self.ring, v))
            }
            Some(Token::Name(name)) => {
                self.pos += 1;
                generator(self.ring, &name)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn generator(ring: &Arc<Ring>, name: &str) -> Result<CohClass, ExprError> {
    match name {
        "h" | "H" => Ok(CohClass::hyperplane(ring)),
        "l" => Ok(CohClass::middle_classes(ring)?.0),
        "lp" => Ok(CohClass::middle_classes(ring)?.1),
        _ => {
            if let Some(j) = name.strip_prefix('t').and_then(|s| s.parse::<usize>().ok()) {
                if j == 0 {
                    return Err(ExprError::UnknownName(name.into()));
                }
                return Ok(CohClass::factor_generator(ring, j - 1)?);
            }
            CohClass::from_key(ring, name).map_err(|_| ExprError::UnknownName(name.into()))
        }
    }
}

/// Parses and evaluates `src` in `ring`.
pub fn eval(ring: &Arc<Ring>, src: &str) -> Result<CohClass, ExprError> {
    let mut p = Parser {
        ring,
        tokens: tokenize(src)?,
        pos: 0,
        len: src.len(),
    };
    let value = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.unexpected());
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_expressions() {
        let q10 = Ring::quadric(10).unwrap();
        assert_eq!(eval(&q10, "b5*bp5").unwrap(), CohClass::from_key(&q10, "b10").unwrap());
        assert_eq!(eval(&q10, "h^6").unwrap().to_string(), "2*b6");
        assert_eq!(eval(&q10, "-8h*(-176 b9)").unwrap().integrate(), BigInt::from(1408));
        let q4 = Ring::quadric(4).unwrap();
        assert!(eval(&q4, "l*(h^2-l)").unwrap().is_zero());
    }

    #[test]
    fn product_expressions() {
        let r = Ring::multi(&[2, 2]).unwrap();
        assert_eq!(eval(&r, "(t1+t2)^4").unwrap().integrate(), BigInt::from(6));
        assert_eq!(eval(&r, "(t1 + t2)^3").unwrap(), eval(&r, "3 t1^2 t2 + 3 t1 t2^2").unwrap());
    }

    #[test]
    fn errors() {
        let q = Ring::quadric(5).unwrap();
        assert!(matches!(eval(&q, "l"), Err(ExprError::Ring(_))));
        assert!(matches!(eval(&q, "x"), Err(ExprError::UnknownName(_))));
        assert!(matches!(eval(&q, "h+"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(eval(&q, "(h"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(eval(&q, "h $"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(eval(&q, "t0"), Err(ExprError::UnknownName(_))));
    }
}

//! Recursive-descent parser for the shared coefficient/polynomial grammar:
//! integer literals, `t`, variables `X0..X{M}`, `+ - * / ^` and parentheses.
//! Division is only allowed by expressions free of the `X` variables.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::function_field::RationalFunction;
use num_bigint::BigInt;
use num_rational::BigRational;

/// A parsed polynomial in `num_vars` variables over K, keyed by exponent
/// vectors. Zero coefficients are never stored.
pub(crate) type Terms = BTreeMap<Vec<u32>, RationalFunction>;

pub(crate) fn parse_terms(text: &str, num_vars: usize) -> Result<Terms> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        num_vars,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parses an element of K.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction> {
    let terms = parse_terms(text, 0)?;
    Ok(terms.into_values().next().unwrap_or_else(RationalFunction::zero))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

fn constant(num_vars: usize, c: RationalFunction) -> Terms {
    let mut m = Terms::new();
    if !c.is_zero() {
        m.insert(vec![0; num_vars], c);
    }
    m
}

fn add(a: Terms, b: &Terms, sign: i64) -> Terms {
    let mut out = a;
    for (k, v) in b {
        let v = if sign < 0 { -v } else { v.clone() };
        let sum = match out.remove(k) {
            Some(old) => &old + &v,
            None => v,
        };
        if !sum.is_zero() {
            out.insert(k.clone(), sum);
        }
    }
    out
}

pub(crate) fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let prod = va * vb;
            let sum = match out.remove(&k) {
                Some(old) => &old + &prod,
                None => prod,
            };
            if !sum.is_zero() {
                out.insert(k, sum);
            }
        }
    }
    out
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = add(acc, &rhs, 1);
                }
                b'-' => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = add(acc, &rhs, -1);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = mul_terms(&acc, &rhs);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let zero_key = vec![0; self.num_vars];
                    if rhs.len() > 1 || rhs.keys().any(|k| *k != zero_key) {
                        return Err(Error::Syntax {
                            position: at,
                            message: "division by a polynomial in X".into(),
                        });
                    }
                    let Some(d) = rhs.get(&zero_key) else {
                        return Err(Error::Syntax {
                            position: at,
                            message: "division by zero".into(),
                        });
                    };
                    let inv = d.inv().expect("nonzero");
                    acc = acc.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Terms> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(v.into_iter().map(|(k, c)| (k, -c)).collect())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent too large"))?;
            let mut acc = constant(self.num_vars, RationalFunction::one());
            for _ in 0..e {
                acc = mul_terms(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Terms> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(constant(
                    self.num_vars,
                    RationalFunction::from_rational(BigRational::from_integer(n)),
                ))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(constant(self.num_vars, RationalFunction::t()))
            }
            Some(b'X') | Some(b'x') => {
                let at = self.pos;
                self.pos += 1;
                let idx = self.integer()?;
                let idx: usize = idx.try_into().map_err(|_| self.err("bad variable"))?;
                if idx >= self.num_vars {
                    return Err(Error::Syntax {
                        position: at,
                        message: format!("variable X{idx} out of range (have {} variables)", self.num_vars),
                    });
                }
                let mut k = vec![0; self.num_vars];
                k[idx] = 1;
                let mut m = Terms::new();
                m.insert(k, RationalFunction::one());
                Ok(m)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

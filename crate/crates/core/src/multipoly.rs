//! Sparse multivariate polynomials over K = Q(t) in variables `X0..X{M}`.
//!
//! Monomials are ordered graded-lexicographically with `X0 > X1 > ...`;
//! every basis enumeration and echelon pivot choice downstream depends on
//! this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::function_field::RationalFunction;
use crate::parse::parse_terms;

/// An exponent vector. `Ord` is graded lex: total degree first, then the
/// exponent of `X0`, then `X1`, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn eval(&self, point: &[RationalFunction]) -> RationalFunction {
        self.0
            .iter()
            .zip(point)
            .filter(|(e, _)| **e > 0)
            .fold(RationalFunction::one(), |acc, (&e, x)| &acc * &x.pow(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "X{i}")?;
            } else {
                write!(f, "X{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All monomials of degree `m` in `num_vars` variables, graded-lex
/// descending (`X0^m` first). There are `C(m + num_vars - 1, num_vars - 1)`.
pub fn monomial_basis(num_vars: usize, m: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if num_vars == 0 {
        return if m == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, m, &mut vec![0; num_vars], &mut out);
    out
}

/// A polynomial that need not be homogeneous. Used for dehomogenization and
/// for symbolic work in auxiliary variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Monomial, RationalFunction>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Poly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: RationalFunction) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::one(num_vars), c);
        p
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::var(num_vars, i), RationalFunction::one());
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, RationalFunction)>,
    {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            assert_eq!(m.num_vars(), num_vars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str, num_vars: usize) -> Result<Self> {
        let terms = parse_terms(text, num_vars)?;
        Ok(Self::from_terms(
            num_vars,
            terms.into_iter().map(|(k, v)| (Monomial(k), v)),
        ))
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, RationalFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> RationalFunction {
        self.terms.get(m).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// Maximum total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarCountMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RationalFunction) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.num_vars);
        }
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.num_vars, RationalFunction::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// Exact substitution of a full coordinate vector.
    pub fn eval(&self, point: &[RationalFunction]) -> Result<RationalFunction> {
        if point.len() != self.num_vars {
            return Err(Error::VarCountMismatch {
                expected: self.num_vars,
                found: point.len(),
            });
        }
        // cache powers per variable
        let max_exp: Vec<u32> = (0..self.num_vars)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<RationalFunction>> = point
            .iter()
            .zip(&max_exp)
            .map(|(x, &e)| {
                let mut v = Vec::with_capacity(e as usize + 1);
                v.push(RationalFunction::one());
                for k in 1..=e as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = RationalFunction::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitutes `X_i -> images[i]` (polynomials in a possibly different
    /// variable set).
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.num_vars {
            return Err(Error::VarCountMismatch {
                expected: self.num_vars,
                found: images.len(),
            });
        }
        let target = images.first().map(Poly::num_vars).unwrap_or(0);
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                term = term.mul(&p)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `X_axis -> 1`.
    pub fn set_var_to_one(&self, axis: usize) -> Poly {
        let mut out = Poly::zero(self.num_vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[axis] = 0;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a Monomial, &'a RationalFunction)>,
{
    let mut first = true;
    for (m, c) in terms {
        let negative_const = c.as_constant().is_some_and(|v| v.is_negative());
        let c_abs = if negative_const { -c } else { c.clone() };
        if first {
            if negative_const {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if negative_const { " - " } else { " + " })?;
        }
        first = false;
        let is_one_mono = m.degree() == 0;
        if c_abs.is_one() {
            write!(f, "{m}")?;
            continue;
        }
        let cs = c_abs.to_string();
        let coeff = if c_abs.is_constant() {
            cs
        } else {
            format!("({cs})")
        };
        if is_one_mono {
            write!(f, "{coeff}")?;
        } else {
            write!(f, "{coeff}*{m}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// A homogeneous form of fixed degree in `num_vars` variables over K.
/// The zero form keeps its nominal degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    degree: u32,
    poly: Poly,
}

impl HomogeneousPoly {
    /// Fails with `NotHomogeneous` unless every term has degree `degree`.
    pub fn new(poly: Poly, degree: u32) -> Result<Self> {
        if poly.terms.keys().any(|m| m.degree() != degree) {
            return Err(Error::NotHomogeneous);
        }
        Ok(HomogeneousPoly { degree, poly })
    }

    /// Degree read off the terms; fails on the zero polynomial only if no
    /// degree can be inferred (zero is given degree 0).
    pub fn from_poly(poly: Poly) -> Result<Self> {
        if !poly.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let d = poly.total_degree().unwrap_or(0);
        Self::new(poly, d)
    }

    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomogeneousPoly {
            degree,
            poly: Poly::zero(num_vars),
        }
    }

    pub fn monomial(m: Monomial, c: RationalFunction) -> Self {
        let n = m.num_vars();
        let d = m.degree();
        HomogeneousPoly {
            degree: d,
            poly: Poly::from_terms(n, [(m, c)]),
        }
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(num_vars, i), RationalFunction::one())
    }

    /// Parses the polynomial grammar and validates homogeneity.
    pub fn parse(text: &str, num_vars: usize) -> Result<Self> {
        Self::from_poly(Poly::parse(text, num_vars)?)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars
    }

    pub fn as_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, RationalFunction> {
        &self.poly.terms
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &RationalFunction> {
        self.poly.terms.values()
    }

    pub fn coeff(&self, m: &Monomial) -> RationalFunction {
        self.poly.coeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The graded-lex largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &RationalFunction)> {
        self.poly.terms.iter().next_back()
    }

    pub fn add(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if self.num_vars() != other.num_vars() {
            return Err(Error::VarCountMismatch {
                expected: self.num_vars(),
                found: other.num_vars(),
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(HomogeneousPoly {
            degree: self.degree,
            poly: self.poly.add(&other.poly)?,
        })
    }

    pub fn sub(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree,
            poly: self.poly.neg(),
        }
    }

    pub fn mul(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        Ok(HomogeneousPoly {
            degree: self.degree + other.degree,
            poly: self.poly.mul(&other.poly)?,
        })
    }

    pub fn pow(&self, e: u32) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree * e,
            poly: self.poly.pow(e),
        }
    }

    pub fn scale(&self, c: &RationalFunction) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree,
            poly: self.poly.scale(c),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree + m.degree(),
            poly: self.poly.mul_monomial(m),
        }
    }

    /// `Q(x)` for a coordinate vector; may be zero.
    pub fn eval(&self, coords: &[RationalFunction]) -> Result<RationalFunction> {
        self.poly.eval(coords)
    }

    /// Sets `X_axis = 1`.
    pub fn dehomogenize(&self, axis: usize) -> Poly {
        self.poly.set_var_to_one(axis)
    }

    /// Multiplies each term by the least power of `X_axis` that makes the
    /// result homogeneous of the maximal total degree.
    pub fn homogenize(p: &Poly, axis: usize) -> HomogeneousPoly {
        let d = p.total_degree().unwrap_or(0);
        let mut out = Poly::zero(p.num_vars);
        for (m, c) in &p.terms {
            let mut e = m.0.clone();
            e[axis] += d - m.degree();
            out.add_term(Monomial(e), c.clone());
        }
        HomogeneousPoly {
            degree: d,
            poly: out,
        }
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPoly[d={}]({})", self.degree, self.poly)
    }
}

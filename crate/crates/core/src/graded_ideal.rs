//! Degree-truncated linear algebra on homogeneous ideals over K.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_field::RationalFunction;
use crate::linalg::{rref, IncrementalEchelon, Rref};
use crate::multipoly::{monomial_basis, HomogeneousPoly, Monomial, Poly};

/// Default upper limit on the Nullstellensatz exponent and on the degree
/// scanned by emptiness checks.
pub const DEFAULT_DEGREE_CAP: u32 = 12;

/// Homogeneous generators of an ideal of `K[X0..XM]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGenerators {
    num_vars: usize,
    gens: Vec<HomogeneousPoly>,
}

impl IdealGenerators {
    pub fn new(num_vars: usize, gens: Vec<HomogeneousPoly>) -> Result<Self> {
        for g in &gens {
            if g.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if g.num_vars() != num_vars {
                return Err(Error::VarCountMismatch {
                    expected: num_vars,
                    found: g.num_vars(),
                });
            }
        }
        Ok(IdealGenerators { num_vars, gens })
    }

    /// The zero ideal.
    pub fn zero(num_vars: usize) -> Self {
        IdealGenerators {
            num_vars,
            gens: Vec::new(),
        }
    }

    pub fn parse<S: AsRef<str>>(num_vars: usize, texts: &[S]) -> Result<Self> {
        let gens = texts
            .iter()
            .map(|s| HomogeneousPoly::parse(s.as_ref(), num_vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_vars, gens)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[HomogeneousPoly] {
        &self.gens
    }

    /// The ideal with `extra` appended to the generators.
    pub fn extended(&self, extra: &[HomogeneousPoly]) -> Result<Self> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Self::new(self.num_vars, gens)
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(HomogeneousPoly::degree).max().unwrap_or(0)
    }
}

/// Coefficients of `q` in the given monomial list. Terms outside the list
/// are ignored, so callers pass the full basis of the right degree.
pub fn coefficient_vector(q: &HomogeneousPoly, basis: &[Monomial]) -> Vec<RationalFunction> {
    basis.iter().map(|m| q.coeff(m)).collect()
}

/// Rows `x^g * P_i` spanning the degree-`m` slice, generator by generator,
/// with the multiplier monomials in basis order.
fn slice_rows(gens: &IdealGenerators, m: u32, basis: &[Monomial]) -> Vec<(usize, Monomial, Vec<RationalFunction>)> {
    let mut rows = Vec::new();
    for (i, g) in gens.gens.iter().enumerate() {
        if g.degree() > m {
            continue;
        }
        for mono in monomial_basis(gens.num_vars, m - g.degree()) {
            let prod = g.mul_monomial(&mono);
            rows.push((i, mono, coefficient_vector(&prod, basis)));
        }
    }
    rows
}

/// `(I)_m` as a reduced row-echelon matrix; columns follow
/// `monomial_basis(M+1, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieceBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    pub echelon: Rref,
}

impl GradedPieceBasis {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.monomials.len()
    }

    pub fn contains(&self, q: &HomogeneousPoly) -> bool {
        if q.is_zero() {
            return true;
        }
        q.degree() == self.degree && self.echelon.contains(&coefficient_vector(q, &self.monomials))
    }

    /// Monomials at non-pivot columns.
    pub fn complement(&self) -> Vec<Monomial> {
        let mut pivots = self.echelon.pivots.iter().peekable();
        let mut out = Vec::new();
        for (j, m) in self.monomials.iter().enumerate() {
            if pivots.peek() == Some(&&j) {
                pivots.next();
            } else {
                out.push(m.clone());
            }
        }
        out
    }
}

pub fn graded_piece(gens: &IdealGenerators, m: u32) -> GradedPieceBasis {
    let monomials = monomial_basis(gens.num_vars, m);
    let rows: Vec<Vec<RationalFunction>> = slice_rows(gens, m, &monomials)
        .into_iter()
        .map(|(_, _, r)| r)
        .collect();
    let echelon = rref(&rows, monomials.len());
    GradedPieceBasis {
        degree: m,
        monomials,
        echelon,
    }
}

/// `C(n, k)` as a `u64`; panics on overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let v: BigUint = binomial_big(n, k);
    v.to_u64().expect("binomial fits in u64")
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `H(m) = C(m+M, M) - rank (I)_m`.
pub fn hilbert_function(gens: &IdealGenerators, m: u32) -> u64 {
    let piece = graded_piece(gens, m);
    (piece.dimension() - piece.rank()) as u64
}

/// Monomials whose classes form a basis of `K[X]_m / (I)_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

pub fn quotient_monomial_basis(gens: &IdealGenerators, m: u32) -> QuotientBasis {
    QuotientBasis {
        degree: m,
        monomials: graded_piece(gens, m).complement(),
    }
}

/// `alpha0 * Q = sum alpha_j phi_j` modulo the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub alpha0: RationalFunction,
    pub alphas: Vec<RationalFunction>,
}

impl ReductionResult {
    /// `alpha0 * Q - sum alpha_j phi_j`.
    pub fn residual(&self, q: &HomogeneousPoly, basis: &QuotientBasis) -> Result<HomogeneousPoly> {
        let mut acc = q.scale(&self.alpha0);
        for (a, phi) in self.alphas.iter().zip(&basis.monomials) {
            acc = acc.sub(&HomogeneousPoly::monomial(phi.clone(), a.clone()))?;
        }
        Ok(acc)
    }
}

pub fn reduce_to_quotient_basis(
    q: &HomogeneousPoly,
    gens: &IdealGenerators,
    basis: &QuotientBasis,
) -> Result<ReductionResult> {
    if q.degree() != basis.degree {
        return Err(Error::DegreeMismatch {
            expected: basis.degree,
            found: q.degree(),
        });
    }
    let piece = graded_piece(gens, basis.degree);
    let cols = &piece.monomials;
    let mut ech = IncrementalEchelon::new(cols.len(), true);
    for row in &piece.echelon.rows {
        ech.insert(row);
    }
    let offset = piece.rank();
    for phi in &basis.monomials {
        let v = coefficient_vector(&HomogeneousPoly::monomial(phi.clone(), RationalFunction::one()), cols);
        ech.insert(&v);
    }
    let (res, combo) = ech.reduce(&coefficient_vector(q, cols));
    if res.iter().any(|x| !x.is_zero()) {
        return Err(Error::PreconditionViolated(
            "monomials do not span the quotient".into(),
        ));
    }
    let alphas = (0..basis.len())
        .map(|j| combo.get(&(offset + j)).cloned().unwrap_or_else(RationalFunction::zero))
        .collect();
    let out = ReductionResult {
        alpha0: RationalFunction::one(),
        alphas,
    };
    assert!(piece.contains(&out.residual(q, basis)?), "reduction residual left the ideal");
    Ok(out)
}

/// `a * P0^u = sum A_i P_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullstellensatzCertificate {
    pub u: u32,
    pub a: RationalFunction,
    pub cofactors: Vec<HomogeneousPoly>,
}

impl NullstellensatzCertificate {
    /// Re-expands both sides.
    pub fn verify(&self, p0: &HomogeneousPoly, gens: &IdealGenerators) -> bool {
        let lhs = p0.pow(self.u).scale(&self.a);
        let mut rhs = Poly::zero(gens.num_vars);
        for (a, p) in self.cofactors.iter().zip(&gens.gens) {
            if a.is_zero() {
                continue;
            }
            if a.degree() + p.degree() != self.u * p0.degree() {
                return false;
            }
            match a.mul(p).and_then(|prod| rhs.add(prod.as_poly())) {
                Ok(sum) => rhs = sum,
                Err(_) => return false,
            }
        }
        lhs.as_poly() == &rhs
    }
}

/// `min((4d)^(M+2), limit)` where `d` bounds the generator degrees.
pub fn default_nullstellensatz_cap(max_degree: u32, ambient_dim: usize, limit: u32) -> u32 {
    let base = u64::from(4 * max_degree.max(1));
    let mut bound: u64 = 1;
    for _ in 0..ambient_dim + 2 {
        bound = bound.saturating_mul(base);
    }
    bound.min(u64::from(limit)) as u32
}

/// Least `u <= cap` with `P0^u` in the ideal, solved with `a = 1`.
pub fn nullstellensatz_certificate(
    p0: &HomogeneousPoly,
    gens: &IdealGenerators,
    cap: u32,
) -> Result<NullstellensatzCertificate> {
    if p0.num_vars() != gens.num_vars {
        return Err(Error::VarCountMismatch {
            expected: gens.num_vars,
            found: p0.num_vars(),
        });
    }
    if p0.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    for u in 1..=cap {
        let deg = u * p0.degree();
        let cols = monomial_basis(gens.num_vars, deg);
        let rows = slice_rows(gens, deg, &cols);
        let mut ech = IncrementalEchelon::new(cols.len(), true);
        for (_, _, r) in &rows {
            ech.insert(r);
        }
        let target = coefficient_vector(&p0.pow(u), &cols);
        let (res, combo) = ech.reduce(&target);
        if res.iter().any(|x| !x.is_zero()) {
            continue;
        }
        let mut parts: BTreeMap<usize, Poly> = BTreeMap::new();
        for (k, c) in combo {
            let (i, mono, _) = &rows[k];
            parts
                .entry(*i)
                .or_insert_with(|| Poly::zero(gens.num_vars))
                .add_term(mono.clone(), c);
        }
        let cofactors = gens
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let d = deg.saturating_sub(g.degree());
                match parts.remove(&i) {
                    Some(p) => HomogeneousPoly::new(p, d).expect("cofactor is homogeneous"),
                    None => HomogeneousPoly::zero(gens.num_vars, d),
                }
            })
            .collect();
        let cert = NullstellensatzCertificate {
            u,
            a: RationalFunction::one(),
            cofactors,
        };
        assert!(cert.verify(p0, gens), "certificate failed re-expansion");
        return Ok(cert);
    }
    Err(Error::NoCertificateWithinCap { cap })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroVerdict {
    /// `(I)_m` is everything at this degree, so there is no common zero.
    EmptyCertified(u32),
    /// No full graded piece up to the cap; a common zero may exist.
    NonemptyAtCap,
}

impl ZeroVerdict {
    pub fn is_empty_certified(&self) -> bool {
        matches!(self, ZeroVerdict::EmptyCertified(_))
    }
}

pub fn has_common_projective_zero(gens: &IdealGenerators, cap: u32) -> ZeroVerdict {
    for m in 1..=cap {
        if graded_piece(gens, m).is_full() {
            return ZeroVerdict::EmptyCertified(m);
        }
    }
    ZeroVerdict::NonemptyAtCap
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetVerdict {
    pub indices: Vec<usize>,
    pub verdict: ZeroVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionReport {
    pub n: usize,
    pub in_position: bool,
    pub subsets: Vec<SubsetVerdict>,
}

impl PositionReport {
    /// Subsets without an emptiness certificate.
    pub fn witnesses(&self) -> Vec<&[usize]> {
        self.subsets
            .iter()
            .filter(|s| !s.verdict.is_empty_certified())
            .map(|s| s.indices.as_slice())
            .collect()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Checks every `(N+1)`-subset of the divisors for a common zero on `X`.
pub fn check_subgeneral_position(
    x_gens: &IdealGenerators,
    qs: &[HomogeneousPoly],
    n_sub: usize,
    cap: u32,
) -> Result<PositionReport> {
    let mut out = Vec::new();
    for idx in subsets(qs.len(), n_sub + 1) {
        let extra: Vec<HomogeneousPoly> = idx.iter().map(|&i| qs[i].clone()).collect();
        let gens = x_gens.extended(&extra)?;
        out.push(SubsetVerdict {
            verdict: has_common_projective_zero(&gens, cap),
            indices: idx,
        });
    }
    Ok(PositionReport {
        n: n_sub,
        in_position: out.iter().all(|s| s.verdict.is_empty_certified()),
        subsets: out,
    })
}

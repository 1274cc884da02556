//! Chow forms of linear subvarieties and hypersurfaces, the skew-symmetric
//! substitution `u_i = S^(i) x`, and the height of a Chow form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_field::{family_height, gauss_order, support_of, ProjectivePoint, RationalFunction};
use crate::graded_ideal::binomial_big;
use crate::linalg::rank;
use crate::multipoly::{HomogeneousPoly, Monomial, Poly};

/// A form in `n+1` blocks of `M+1` variables `u_{i,0..M}`, homogeneous of
/// the same degree in every block. Stored as a polynomial in the
/// `(n+1)(M+1)` variables, block-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiHomForm {
    blocks: usize,
    vars_per_block: usize,
    block_degree: u32,
    poly: Poly,
}

impl MultiHomForm {
    /// Validates that every term has degree `block_degree` in each block.
    pub fn new(blocks: usize, vars_per_block: usize, poly: Poly) -> Result<Self> {
        if poly.num_vars() != blocks * vars_per_block {
            return Err(Error::VarCountMismatch {
                expected: blocks * vars_per_block,
                found: poly.num_vars(),
            });
        }
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let degs = |m: &Monomial| -> Vec<u32> {
            m.exponents()
                .chunks(vars_per_block)
                .map(|c| c.iter().sum())
                .collect()
        };
        let first = degs(poly.terms().keys().next().unwrap());
        let block_degree = first[0];
        for m in poly.terms().keys() {
            if degs(m).iter().any(|&d| d != block_degree) {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(MultiHomForm {
            blocks,
            vars_per_block,
            block_degree,
            poly,
        })
    }

    /// Builds a form from `(coefficient, per-block exponent vectors)` terms.
    pub fn from_block_terms(
        blocks: usize,
        vars_per_block: usize,
        terms: &[(RationalFunction, Vec<Vec<u32>>)],
    ) -> Result<Self> {
        let mut poly = Poly::zero(blocks * vars_per_block);
        for (c, exps) in terms {
            if exps.len() != blocks || exps.iter().any(|e| e.len() != vars_per_block) {
                return Err(Error::VarCountMismatch {
                    expected: blocks * vars_per_block,
                    found: exps.iter().map(Vec::len).sum(),
                });
            }
            poly.add_term(Monomial::new(exps.concat()), c.clone());
        }
        Self::new(blocks, vars_per_block, poly)
    }

    /// `n + 1`.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// `M + 1`.
    pub fn vars_per_block(&self) -> usize {
        self.vars_per_block
    }

    /// `Delta`.
    pub fn block_degree(&self) -> u32 {
        self.block_degree
    }

    pub fn as_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &RationalFunction> + Clone {
        self.poly.terms().values()
    }

    /// Degree of each block in every term (all equal by construction).
    pub fn block_degrees(&self) -> Vec<u32> {
        vec![self.block_degree; self.blocks]
    }

    /// `F(u_0, ..., u_n)` for concrete coefficient vectors.
    pub fn eval(&self, u: &[Vec<RationalFunction>]) -> Result<RationalFunction> {
        let flat: Vec<RationalFunction> = u.concat();
        self.poly.eval(&flat)
    }

    /// `e_p(F_X)`.
    pub fn gauss_order(&self, p: &crate::function_field::Place) -> i64 {
        gauss_order(p, self.coefficients()).expect("nonzero form")
    }

    /// Multiplies all coefficients by `alpha`.
    pub fn scale(&self, alpha: &RationalFunction) -> MultiHomForm {
        MultiHomForm {
            poly: self.poly.scale(alpha),
            ..self.clone()
        }
    }
}

impl fmt::Display for MultiHomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.poly.terms().iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if !c.is_one() {
                write!(f, "({c})*")?;
            }
            let mut parts = Vec::new();
            for (idx, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (i, j) = (idx / self.vars_per_block, idx % self.vars_per_block);
                parts.push(if e == 1 { format!("u{i}_{j}") } else { format!("u{i}_{j}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiHomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiHomForm[{}x{}, deg {}]({self})", self.blocks, self.vars_per_block, self.block_degree)
    }
}

fn u_var(blocks: usize, vpb: usize, i: usize, j: usize) -> Poly {
    Poly::var(blocks * vpb, i * vpb + j)
}

/// Leibniz determinant of a small square matrix of polynomials.
fn det(mat: &[Vec<Poly>], num_vars: usize) -> Poly {
    let n = mat.len();
    let mut out = Poly::zero(num_vars);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let sign = permutation_sign(p);
        let mut term = Poly::constant(num_vars, RationalFunction::from_int(sign));
        for (row, &col) in p.iter().enumerate() {
            term = term.mul(&mat[row][col]).expect("same ring");
            if term.is_zero() {
                return;
            }
        }
        out = out.add(&term).expect("same ring");
    });
    out
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Chow form of the linear span of `n+1` points: `det(u_i . b_j)`.
pub fn chow_of_linear(span: &[ProjectivePoint]) -> Result<MultiHomForm> {
    let Some(first) = span.first() else {
        return Err(Error::DependentSpan);
    };
    let vpb = first.len();
    for p in span {
        if p.len() != vpb {
            return Err(Error::VarCountMismatch {
                expected: vpb,
                found: p.len(),
            });
        }
    }
    let rows: Vec<Vec<RationalFunction>> = span.iter().map(|p| p.coords().to_vec()).collect();
    if span.len() > vpb || rank(&rows, vpb) < span.len() {
        return Err(Error::DependentSpan);
    }
    let blocks = span.len();
    let nv = blocks * vpb;
    let mat: Vec<Vec<Poly>> = (0..blocks)
        .map(|i| {
            span.iter()
                .map(|b| {
                    let mut acc = Poly::zero(nv);
                    for (j, c) in b.coords().iter().enumerate() {
                        acc = acc.add(&u_var(blocks, vpb, i, j).scale(c)).unwrap();
                    }
                    acc
                })
                .collect()
        })
        .collect();
    MultiHomForm::new(blocks, vpb, det(&mat, nv))
}

/// The generalized cross product of `M` coefficient blocks in `M+1`
/// variables: `w_k = (-1)^k` times the minor with column `k` removed. It is
/// orthogonal to every block.
pub fn generalized_cross_product(blocks: usize, vpb: usize) -> Vec<Poly> {
    assert_eq!(blocks + 1, vpb, "need M blocks of M+1 variables");
    let nv = blocks * vpb;
    (0..vpb)
        .map(|k| {
            let mat: Vec<Vec<Poly>> = (0..blocks)
                .map(|i| {
                    (0..vpb)
                        .filter(|&j| j != k)
                        .map(|j| u_var(blocks, vpb, i, j))
                        .collect()
                })
                .collect();
            let d = det(&mat, nv);
            if k % 2 == 0 {
                d
            } else {
                d.neg()
            }
        })
        .collect()
}

/// Chow form of the hypersurface `{F = 0}` in `P^M` (`M >= 2`):
/// `F(u_0 x ... x u_{M-1})`. Irreducibility of `F` is the caller's claim.
pub fn chow_of_hypersurface(f: &HomogeneousPoly) -> Result<MultiHomForm> {
    let vpb = f.num_vars();
    if vpb < 3 {
        return Err(Error::PreconditionViolated("hypersurface Chow form needs M >= 2".into()));
    }
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let blocks = vpb - 1;
    let w = generalized_cross_product(blocks, vpb);
    MultiHomForm::new(blocks, vpb, f.as_poly().compose(&w)?)
}

/// `F_X(S^(0) x, ..., S^(n) x) = sum_sigma P_sigma(x) sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewExpansion {
    pub blocks: usize,
    pub ambient_vars: usize,
    pub block_degree: u32,
    /// Keyed by the skew monomial; variables are ordered block-major and
    /// within a block by [`skew_pairs`].
    pub entries: BTreeMap<Monomial, HomogeneousPoly>,
}

/// Index pairs `(j, k)`, `0 <= j < k <= M`, of the skew variables of one
/// block.
pub fn skew_pairs(vpb: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..vpb {
        for k in j + 1..vpb {
            out.push((j, k));
        }
    }
    out
}

/// `S x` for a skew-symmetric matrix given by its upper entries in
/// [`skew_pairs`] order.
pub fn skew_apply(s: &[RationalFunction], x: &[RationalFunction]) -> Vec<RationalFunction> {
    let vpb = x.len();
    let mut out = vec![RationalFunction::zero(); vpb];
    for ((j, k), v) in skew_pairs(vpb).into_iter().zip(s) {
        out[j] = &out[j] + &(v * &x[k]);
        out[k] = &out[k] - &(v * &x[j]);
    }
    out
}

pub fn expand_skew(form: &MultiHomForm) -> Result<SkewExpansion> {
    let vpb = form.vars_per_block;
    let pairs = skew_pairs(vpb);
    let per_block = pairs.len();
    let n_s = form.blocks * per_block;
    let nv = n_s + vpb;
    let s_var = |i: usize, p: usize| Poly::var(nv, i * per_block + p);
    let x_var = |k: usize| Poly::var(nv, n_s + k);
    // u_{i,a} = sum_{k>a} s_{ak} x_k - sum_{j<a} s_{ja} x_j
    let mut images = Vec::with_capacity(form.blocks * vpb);
    for i in 0..form.blocks {
        for a in 0..vpb {
            let mut acc = Poly::zero(nv);
            for (p, &(j, k)) in pairs.iter().enumerate() {
                if j == a {
                    acc = acc.add(&s_var(i, p).mul(&x_var(k))?)?;
                } else if k == a {
                    acc = acc.sub(&s_var(i, p).mul(&x_var(j))?)?;
                }
            }
            images.push(acc);
        }
    }
    let full = form.poly.compose(&images)?;
    let mut collected: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in full.terms() {
        let (s_part, x_part) = m.exponents().split_at(n_s);
        collected
            .entry(Monomial::new(s_part.to_vec()))
            .or_insert_with(|| Poly::zero(vpb))
            .add_term(Monomial::new(x_part.to_vec()), c.clone());
    }
    let deg = (form.blocks as u32) * form.block_degree;
    let mut entries = BTreeMap::new();
    for (sigma, p) in collected {
        if p.is_zero() {
            continue;
        }
        entries.insert(sigma, HomogeneousPoly::new(p, deg)?);
    }
    let out = SkewExpansion {
        blocks: form.blocks,
        ambient_vars: vpb,
        block_degree: form.block_degree,
        entries,
    };
    for p in support_of(form.coefficients()) {
        let e_f = form.gauss_order(&p);
        for q in out.entries.values() {
            let e_q = gauss_order(&p, q.coefficients()).expect("nonzero");
            assert!(e_q >= e_f, "coefficient valuation bound fails at {p}");
        }
    }
    Ok(out)
}

impl SkewExpansion {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &HomogeneousPoly> {
        self.entries.values()
    }

    /// `sum_sigma P_sigma(x) sigma(s)` for concrete skew entries `s`
    /// (block-major, [`skew_pairs`] order within a block).
    pub fn evaluate(&self, s: &[RationalFunction], x: &[RationalFunction]) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero();
        for (sigma, p) in &self.entries {
            let px = p.eval(x)?;
            if px.is_zero() {
                continue;
            }
            acc = &acc + &(&px * &sigma.eval(s));
        }
        Ok(acc)
    }

    /// True when every `P_sigma` vanishes at `x`.
    pub fn vanishes_at(&self, x: &[RationalFunction]) -> Result<bool> {
        for p in self.entries.values() {
            if !p.eval(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The `P_sigma` as an ideal-generator list (deterministic order).
    pub fn generators(&self) -> Vec<HomogeneousPoly> {
        self.entries.values().cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsigmaCount {
    pub actual: usize,
    #[serde(with = "crate::serialize::bigint")]
    pub paper_bound: BigInt,
    #[serde(with = "crate::serialize::bigint")]
    pub monomial_count: BigInt,
}

/// Nonzero `P_sigma` count next to the closed form
/// `C((n+1)Delta + M(M-1)/2, (n+1)Delta)^{n+1}` and the number of skew
/// monomials of block degree `Delta`, `C(Delta + M(M+1)/2 - 1, Delta)^{n+1}`.
/// Neither closed form is treated as a bound on the other.
pub fn psigma_count_report(exp: &SkewExpansion) -> PsigmaCount {
    let blocks = exp.blocks as u32;
    let m = (exp.ambient_vars - 1) as u64;
    let nd = u64::from(blocks) * u64::from(exp.block_degree);
    let paper = BigInt::from(binomial_big(nd + m * (m.saturating_sub(1)) / 2, nd)).pow(blocks);
    let delta = u64::from(exp.block_degree);
    let mono = BigInt::from(binomial_big(delta + m * (m + 1) / 2 - 1, delta)).pow(blocks);
    PsigmaCount {
        actual: exp.len(),
        paper_bound: paper,
        monomial_count: mono,
    }
}

/// `h(X) := h(F_X)`, the height of the coefficient family.
pub fn chow_height(form: &MultiHomForm) -> BigRational {
    family_height(form.coefficients())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational_function as rf;

    fn hp(s: &str, n: usize) -> HomogeneousPoly {
        HomogeneousPoly::parse(s, n).unwrap()
    }
    fn pt(v: &[&str]) -> ProjectivePoint {
        ProjectivePoint::parse(v).unwrap()
    }
    fn vec_rf(v: &[&str]) -> Vec<RationalFunction> {
        v.iter().map(|s| rf(s).unwrap()).collect()
    }

    #[test]
    fn linear_examples() {
        let f = chow_of_linear(&[pt(&["1", "0", "0"])]).unwrap();
        assert_eq!(f.as_poly(), &Poly::var(3, 0));
        let f = chow_of_linear(&[pt(&["1", "0", "0"]), pt(&["0", "1", "0"])]).unwrap();
        assert_eq!(f.as_poly(), &Poly::parse("X0*X4 - X1*X3", 6).unwrap());
        let f = chow_of_linear(&[pt(&["1", "0"]), pt(&["0", "1"])]).unwrap();
        assert_eq!(f.as_poly(), &Poly::parse("X0*X3 - X1*X2", 4).unwrap());
        assert_eq!(f.block_degrees(), vec![1, 1]);
        assert_eq!(
            chow_of_linear(&[pt(&["1", "t"]), pt(&["2", "2*t"])]),
            Err(Error::DependentSpan)
        );
    }

    #[test]
    fn hypersurface_examples() {
        let conic = chow_of_hypersurface(&hp("X0*X2 - X1^2", 3)).unwrap();
        assert_eq!(conic.block_degrees(), vec![2, 2]);
        let line = chow_of_hypersurface(&hp("X0", 3)).unwrap();
        let lin = chow_of_linear(&[pt(&["0", "1", "0"]), pt(&["0", "0", "1"])]).unwrap();
        assert_eq!(line, lin);
        let plane = chow_of_hypersurface(&hp("X0", 4)).unwrap();
        assert_eq!(plane.block_degrees(), vec![1, 1, 1]);
        // hyperplanes through [1:s:s^2] make the conic form vanish
        let s = rf("t+3").unwrap();
        let x = vec![RationalFunction::one(), s.clone(), &s * &s];
        let u0 = vec_rf(&["0", "t", "-1"]);
        let u1 = vec![&s * &s, RationalFunction::zero(), -&RationalFunction::one()];
        let dot = |u: &[RationalFunction]| -> RationalFunction {
            u.iter().zip(&x).fold(RationalFunction::zero(), |a, (p, q)| &a + &(p * q))
        };
        let u0 = vec![-&dot(&u0), u0[1].clone(), u0[2].clone()];
        assert!(dot(&u0).is_zero() && dot(&u1).is_zero());
        assert!(conic.eval(&[u0, u1]).unwrap().is_zero());
    }

    #[test]
    fn skew_expansion_of_conic() {
        let form = chow_of_hypersurface(&hp("X0*X2 - X1^2", 3)).unwrap();
        let exp = expand_skew(&form).unwrap();
        assert!(exp.len() <= 36);
        for k in 0..25 {
            let s = rf(&format!("t+{k}")).unwrap();
            assert!(exp.vanishes_at(&[RationalFunction::one(), s.clone(), &s * &s]).unwrap());
        }
        assert!(!exp.vanishes_at(&vec_rf(&["1", "0", "1"])).unwrap());
        let c = psigma_count_report(&exp);
        assert_eq!(c.paper_bound, BigInt::from(25));
        assert_eq!(c.monomial_count, BigInt::from(36));
        for p in exp.polys() {
            assert_eq!(p.degree(), 4);
        }
    }

    #[test]
    fn skew_reconstruction() {
        let form = chow_of_hypersurface(&hp("X0*X2 - X1^2", 3)).unwrap();
        let exp = expand_skew(&form).unwrap();
        let s = vec_rf(&["1", "t", "2", "-3", "t^2", "1/2"]);
        let x = vec_rf(&["t", "1", "t-5"]);
        let u: Vec<Vec<RationalFunction>> = s.chunks(3).map(|b| skew_apply(b, &x)).collect();
        assert_eq!(exp.evaluate(&s, &x).unwrap(), form.eval(&u).unwrap());
    }

    #[test]
    fn point_in_p1_recovers_defining_form() {
        let f = chow_of_linear(&[pt(&["1", "0"])]).unwrap();
        let exp = expand_skew(&f).unwrap();
        assert_eq!(exp.len(), 1);
        let p = exp.polys().next().unwrap();
        // u_00 -> s_01 x_1
        assert_eq!(p, &hp("X1", 2));
        let c = psigma_count_report(&exp);
        assert_eq!(c.paper_bound, BigInt::from(1));
    }

    #[test]
    fn heights() {
        let f = chow_of_hypersurface(&hp("X0*X2 - X1^2", 3)).unwrap();
        assert_eq!(chow_height(&f), BigRational::from_integer(0.into()));
        let g = chow_of_hypersurface(&hp("t*X0*X2 - X1^2", 3)).unwrap();
        assert_eq!(chow_height(&g), BigRational::from_integer(1.into()));
        let alpha = rf("(t^2+1)/(t-2)").unwrap();
        assert_eq!(chow_height(&g.scale(&alpha)), chow_height(&g));
    }
}

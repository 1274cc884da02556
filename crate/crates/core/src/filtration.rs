//! The filtration `W_i` of `K[X]_m / (I)_m` by powers of a divisor `Q`, its
//! compatible basis `psi_j = Q^{i_j} g_j`, and the monomial map `Phi`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_field::{gauss_order_point, height_point, order_at, Place, ProjectivePoint, RationalFunction};
use crate::graded_ideal::{coefficient_vector, graded_piece, hilbert_function, IdealGenerators, QuotientBasis};
use crate::hilbert_bounds::{s_sum, HilbertTable};
use crate::linalg::IncrementalEchelon;
use crate::multipoly::{monomial_basis, HomogeneousPoly, Monomial};

/// Divisor indices sorted by nonincreasing `ord_p(Q_i(x))`, ties by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingOrderPermutation {
    pub place: Place,
    pub order: Vec<usize>,
    /// `ord_p(Q_i(x))` in original index order.
    pub orders: Vec<i64>,
}

pub fn order_by_vanishing(p: &Place, qs: &[HomogeneousPoly], x: &ProjectivePoint) -> Result<VanishingOrderPermutation> {
    let mut orders = Vec::with_capacity(qs.len());
    for (i, q) in qs.iter().enumerate() {
        let v = q.eval(x.coords())?;
        if v.is_zero() {
            return Err(Error::PointOnDivisor { index: i });
        }
        orders.push(order_at(&v, p)?);
    }
    let mut order: Vec<usize> = (0..qs.len()).collect();
    order.sort_by(|&a, &b| orders[b].cmp(&orders[a]));
    Ok(VanishingOrderPermutation {
        place: p.clone(),
        order,
        orders,
    })
}

/// A basis `Q^{i_j} g_j` of the degree-`m` quotient compatible with the
/// filtration by powers of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationBasis {
    pub m: u32,
    pub d: u32,
    pub q: HomogeneousPoly,
    /// `(i_j, g_j)`, top level first.
    pub entries: Vec<(u32, Monomial)>,
    /// `dim W_i` for `i = 0..=m/d`.
    pub level_dims: Vec<u64>,
}

impl FiltrationBasis {
    /// `psi_j = Q^{i_j} g_j`.
    pub fn psi(&self) -> Vec<HomogeneousPoly> {
        self.entries
            .iter()
            .map(|(i, g)| self.q.pow(*i).mul_monomial(g))
            .collect()
    }

    /// Number of entries with `i_j = i`.
    pub fn level_count(&self, i: u32) -> usize {
        self.entries.iter().filter(|(k, _)| *k == i).count()
    }
}

/// Greedy top-down construction: at level `i = m/d, ..., 0` the monomials
/// `g` of degree `m - i d` are tried in graded-lex order and kept when
/// `Q^i g` is independent of `(I)_m` and the entries already kept.
pub fn build_filtration(x_gens: &IdealGenerators, m: u32, q: &HomogeneousPoly, d: u32) -> Result<FiltrationBasis> {
    if q.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: q.degree(),
        });
    }
    if q.num_vars() != x_gens.num_vars() {
        return Err(Error::VarCountMismatch {
            expected: x_gens.num_vars(),
            found: q.num_vars(),
        });
    }
    if d == 0 || m % d != 0 {
        return Err(Error::PreconditionViolated(format!("{d} does not divide {m}")));
    }
    if q.is_zero() || graded_piece(x_gens, d).contains(q) {
        return Err(Error::DivisorInIdeal);
    }
    let nv = x_gens.num_vars();
    let cols = monomial_basis(nv, m);
    let piece = graded_piece(x_gens, m);
    let mut ech = IncrementalEchelon::new(cols.len(), false);
    for row in &piece.echelon.rows {
        ech.insert(row);
    }
    let base = ech.rank();
    let top = m / d;
    let mut entries = Vec::new();
    let mut level_dims = vec![0u64; top as usize + 1];
    for i in (0..=top).rev() {
        let qi = q.pow(i);
        for g in monomial_basis(nv, m - i * d) {
            let v = coefficient_vector(&qi.mul_monomial(&g), &cols);
            if ech.insert(&v) {
                entries.push((i, g));
            }
        }
        let dim = (ech.rank() - base) as u64;
        let expected = hilbert_function(x_gens, m - i * d);
        if dim != expected {
            return Err(Error::PreconditionViolated(format!(
                "dim W_{i} = {dim} but H({}) = {expected}; Q is a zero divisor modulo the ideal",
                m - i * d
            )));
        }
        level_dims[i as usize] = dim;
    }
    Ok(FiltrationBasis {
        m,
        d,
        q: q.clone(),
        entries,
        level_dims,
    })
}

/// Hilbert values `H(k)` for `0 <= k <= m`, by echelon rank.
pub fn hilbert_table(x_gens: &IdealGenerators, m: u32) -> HilbertTable {
    (0..=m)
        .map(|k| (u64::from(k), BigInt::from(hilbert_function(x_gens, k))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentSum {
    /// `sum_j i_j`.
    pub sum: u64,
    /// `sum_{i=1}^{m/d} H(m - i d)`, equal to `sum`.
    pub level_sum: u64,
    /// `S(m/d - 1) = sum_{i=1}^{m/d-1} H(i d)` as stated in the source.
    pub stated: u64,
    /// `sum - stated`; equals `H(0) = 1` for every tested variety.
    pub difference: i64,
}

pub fn exponent_sum(basis: &FiltrationBasis, x_gens: &IdealGenerators) -> ExponentSum {
    let sum: u64 = basis.entries.iter().map(|(i, _)| u64::from(*i)).sum();
    let top = basis.m / basis.d;
    let level_sum: u64 = (1..=top).map(|i| hilbert_function(x_gens, basis.m - i * basis.d)).sum();
    assert_eq!(sum, level_sum, "exponent sum differs from the level sum");
    let stated: u64 = (1..top).map(|i| hilbert_function(x_gens, i * basis.d)).sum();
    ExponentSum {
        sum,
        level_sum,
        stated,
        difference: sum as i64 - stated as i64,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationInequality {
    /// `sum_j (ord_p psi_j(x) - m e_p(x))`; `None` when some `psi_j(x) = 0`
    /// (infinite order).
    pub lhs: Option<i64>,
    /// `S(m/d - 1) (ord_p Q(x) - d e_p(x))`.
    pub rhs: i64,
    pub ok: bool,
}

pub fn filtration_inequality_check(
    p: &Place,
    x: &ProjectivePoint,
    basis: &FiltrationBasis,
    x_gens: &IdealGenerators,
) -> Result<FiltrationInequality> {
    let qx = basis.q.eval(x.coords())?;
    if qx.is_zero() {
        return Err(Error::PointOnDivisor { index: 0 });
    }
    let e = gauss_order_point(p, x);
    let mut lhs = Some(0i64);
    for psi in basis.psi() {
        let v = psi.eval(x.coords())?;
        if v.is_zero() {
            lhs = None;
            break;
        }
        if let Some(acc) = lhs.as_mut() {
            *acc += order_at(&v, p)? - i64::from(basis.m) * e;
        }
    }
    let table = hilbert_table(x_gens, basis.m);
    let s = s_sum(&table, u64::from(basis.m), u64::from(basis.d))?;
    let s: i64 = s.try_into().expect("S fits in i64");
    let rhs = s * (order_at(&qx, p)? - i64::from(basis.d) * e);
    let ok = lhs.is_none_or(|l| l >= rhs);
    Ok(FiltrationInequality { lhs, rhs, ok })
}

/// `Phi(x) = [phi_1(x) : ... : phi_H(x)]`.
pub fn phi_map(basis: &QuotientBasis, x: &ProjectivePoint) -> Result<ProjectivePoint> {
    let coords: Vec<RationalFunction> = basis.monomials.iter().map(|m| m.eval(x.coords())).collect();
    if coords.iter().all(RationalFunction::is_zero) {
        return Err(Error::BaseLocusPoint);
    }
    ProjectivePoint::new(coords)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceSandwich {
    pub place: Place,
    /// `m e_p(x) deg p`.
    pub scaled_point_order: i64,
    /// `e_p(Phi(x)) deg p`.
    pub image_order: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightSandwichReport {
    #[serde(with = "crate::serialize::rational")]
    pub h_x: BigRational,
    #[serde(with = "crate::serialize::rational")]
    pub h_phi: BigRational,
    #[serde(with = "crate::serialize::rational")]
    pub lower: BigRational,
    #[serde(with = "crate::serialize::rational")]
    pub upper: BigRational,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub places: Vec<PlaceSandwich>,
}

/// Height sandwich `m h(x) - (M+2) b h(F_X) <= h(Phi(x)) <= m h(x)` and the
/// per-place bounds `m e_p(x) <= e_p(Phi(x)) <= m e_p(x) + b h(F_X)`
/// (weighted by `deg p`).
pub fn lemma_c_check(basis: &QuotientBasis, x: &ProjectivePoint, b: &BigInt, h_fx: &BigRational) -> Result<HeightSandwichReport> {
    let image = phi_map(basis, x)?;
    let m = i64::from(basis.degree);
    let mm = BigRational::from_integer(m.into());
    let h_x = height_point(x);
    let h_phi = height_point(&image);
    let big_m = BigRational::from_integer(BigInt::from(x.len() as i64 + 1));
    let slack = BigRational::from_integer(b.clone()) * h_fx;
    let upper = &mm * &h_x;
    let lower = &upper - &big_m * &slack;
    let support = crate::function_field::support_of(x.coords().iter().chain(image.coords()));
    let places = support
        .into_iter()
        .map(|p| {
            let s = m * gauss_order_point(&p, x) * p.degree();
            let t = gauss_order_point(&p, &image) * p.degree();
            let top = BigRational::from_integer(s.into()) + &slack;
            PlaceSandwich {
                ok: s <= t && BigRational::from_integer(t.into()) <= top,
                place: p,
                scaled_point_order: s,
                image_order: t,
            }
        })
        .collect();
    Ok(HeightSandwichReport {
        lower_ok: lower <= h_phi,
        upper_ok: h_phi <= upper,
        h_x,
        h_phi,
        lower,
        upper,
        places,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_ideal::quotient_monomial_basis;

    fn hp(s: &str, n: usize) -> HomogeneousPoly {
        HomogeneousPoly::parse(s, n).unwrap()
    }
    fn pt(v: &[&str]) -> ProjectivePoint {
        ProjectivePoint::parse(v).unwrap()
    }
    fn place(s: &str) -> Place {
        Place::parse(s).unwrap()
    }

    #[test]
    fn vanishing_order_examples() {
        let qs = [hp("X0", 3), hp("X1", 3), hp("X2", 3)];
        let x = pt(&["1", "t", "t^2"]);
        assert_eq!(order_by_vanishing(&place("t"), &qs, &x).unwrap().order, vec![2, 1, 0]);
        assert_eq!(order_by_vanishing(&Place::Infinity, &qs, &x).unwrap().order, vec![0, 1, 2]);
        let same = pt(&["1", "1", "1"]);
        assert_eq!(order_by_vanishing(&place("t"), &qs, &same).unwrap().order, vec![0, 1, 2]);
        assert_eq!(
            order_by_vanishing(&place("t"), &qs, &pt(&["1", "0", "1"])),
            Err(Error::PointOnDivisor { index: 1 })
        );
    }

    #[test]
    fn p1_filtration() {
        let p1 = IdealGenerators::zero(2);
        let f = build_filtration(&p1, 4, &hp("X0", 2), 1).unwrap();
        let expect: Vec<(u32, String)> = (0..=4u32)
            .rev()
            .map(|i| (i, if i == 4 { "1".to_string() } else if i == 3 { "X1".into() } else { format!("X1^{}", 4 - i) }))
            .collect();
        let got: Vec<(u32, String)> = f.entries.iter().map(|(i, g)| (*i, g.to_string())).collect();
        assert_eq!(got, expect);
        let es = exponent_sum(&f, &p1);
        assert_eq!((es.sum, es.stated, es.difference), (10, 9, 1));
        let c = filtration_inequality_check(&place("t"), &pt(&["t", "1"]), &f, &p1).unwrap();
        assert_eq!((c.lhs, c.rhs, c.ok), (Some(10), 9, true));
        let c = filtration_inequality_check(&place("t-1"), &pt(&["t", "1"]), &f, &p1).unwrap();
        assert_eq!((c.lhs, c.rhs, c.ok), (Some(0), 0, true));
    }

    #[test]
    fn conic_filtration() {
        let conic = IdealGenerators::parse(3, &["X0*X2 - X1^2"]).unwrap();
        let f = build_filtration(&conic, 2, &hp("X0", 3), 1).unwrap();
        assert_eq!(f.entries.len(), 5);
        assert_eq!(f.level_dims, vec![5, 3, 1]);
        let es = exponent_sum(&f, &conic);
        assert_eq!((es.sum, es.stated), (4, 3));
        let c = filtration_inequality_check(&place("t"), &pt(&["1", "t", "t^2"]), &f, &conic).unwrap();
        assert!(c.ok);
        // m = d: two levels and W_1 is spanned by Q
        let f = build_filtration(&conic, 2, &hp("X0^2 + X1*X2", 3), 2).unwrap();
        assert_eq!(f.level_dims[1], 1);
        assert_eq!(exponent_sum(&f, &conic).sum, 1);
    }

    #[test]
    fn filtration_errors() {
        let conic = IdealGenerators::parse(3, &["X0*X2 - X1^2"]).unwrap();
        assert!(matches!(
            build_filtration(&conic, 2, &hp("X0^2", 3), 1),
            Err(Error::DegreeMismatch { .. })
        ));
        assert_eq!(
            build_filtration(&conic, 4, &hp("X0*X2 - X1^2", 3), 2),
            Err(Error::DivisorInIdeal)
        );
    }

    #[test]
    fn phi_examples() {
        let b = quotient_monomial_basis(&IdealGenerators::zero(2), 2);
        let img = phi_map(&b, &pt(&["t", "1"])).unwrap();
        assert_eq!(img, pt(&["t^2", "t", "1"]));
        assert_eq!(height_point(&img), BigRational::from_integer(2.into()));
        let conic = IdealGenerators::parse(3, &["X0*X2 - X1^2"]).unwrap();
        let b1 = quotient_monomial_basis(&conic, 1);
        let x = pt(&["1", "t", "t^2"]);
        assert_eq!(phi_map(&b1, &x).unwrap(), x);
        let r = lemma_c_check(&b, &pt(&["t", "1"]), &BigInt::from(10), &BigRational::from_integer(0.into())).unwrap();
        assert!(r.lower_ok && r.upper_ok && r.places.iter().all(|p| p.ok));
        let only_x0 = QuotientBasis {
            degree: 1,
            monomials: vec![Monomial::var(2, 0)],
        };
        assert_eq!(phi_map(&only_x0, &pt(&["0", "1"])), Err(Error::BaseLocusPoint));
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::place::{order_at, support_of, Place};
use super::rational::{denominator_lcm, RationalFunction};
use crate::error::{Error, Result};
use crate::multipoly::HomogeneousPoly;
use crate::parse::parse_rational_function;

/// `[x0 : ... : xM]` with coordinates in K, not all zero. Coordinates are
/// kept as given; heights and Weil values do not depend on the scaling.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<RationalFunction>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<RationalFunction>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("no coordinates".into()));
        }
        if coords.iter().all(RationalFunction::is_zero) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        let v = coords
            .iter()
            .map(|s| parse_rational_function(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    /// Number of coordinates, `M + 1`.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multiplies every coordinate by `alpha`; panics if `alpha` is zero.
    /// The same point with polynomial coordinates.
    pub fn integral(&self) -> Self {
        let l = denominator_lcm(&self.coords);
        if l.is_one() {
            return self.clone();
        }
        self.scale(&RationalFunction::from_poly(l))
    }

    pub fn scale(&self, alpha: &RationalFunction) -> Self {
        assert!(!alpha.is_zero(), "scaling by zero");
        ProjectivePoint {
            coords: self.coords.iter().map(|c| c * alpha).collect(),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjectivePoint{self}")
    }
}

/// Minimum order at `p` over the nonzero members of a family. `None` if every
/// member is zero.
pub fn gauss_order<'a, I>(p: &Place, elements: I) -> Option<i64>
where
    I: IntoIterator<Item = &'a RationalFunction>,
{
    elements
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| order_at(f, p).expect("nonzero"))
        .min()
}

/// `e_p(x)`. Depends on the coordinates chosen for `x`.
pub fn gauss_order_point(p: &Place, x: &ProjectivePoint) -> i64 {
    gauss_order(p, x.coords()).expect("valid point has a nonzero coordinate")
}

/// `e_p(Q_1, ..., Q_q)`: minimum order over all coefficients of all members.
pub fn gauss_order_poly(p: &Place, qs: &[HomogeneousPoly]) -> Result<i64> {
    if qs.is_empty() || qs.iter().any(HomogeneousPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    Ok(gauss_order(p, qs.iter().flat_map(|q| q.coefficients())).unwrap())
}

/// `-sum_p e_p(family) deg p` over the places where some member has nonzero
/// order. Zero members are ignored; an all-zero family has height 0.
pub fn family_height<'a, I>(elements: I) -> BigRational
where
    I: IntoIterator<Item = &'a RationalFunction> + Clone,
{
    let mut total: i64 = 0;
    for p in support_of(elements.clone()) {
        if let Some(e) = gauss_order(&p, elements.clone()) {
            total -= e * p.degree();
        }
    }
    BigRational::from_integer(BigInt::from(total))
}

pub fn height_point(x: &ProjectivePoint) -> BigRational {
    family_height(x.coords())
}

/// `h(f) = sum max(0, ord_p f) deg p`; the dual formula with `min` is
/// evaluated as well and must agree.
pub fn height_elem(f: &RationalFunction) -> Result<BigRational> {
    if f.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut pos = 0i64;
    let mut neg = 0i64;
    for p in support_of([f]) {
        let o = order_at(f, &p)?;
        pos += o.max(0) * p.degree();
        neg -= o.min(0) * p.degree();
    }
    assert_eq!(pos, neg, "height formulas disagree for {f}");
    Ok(BigRational::from_integer(BigInt::from(pos)))
}

pub fn height_poly_family(qs: &[HomogeneousPoly]) -> Result<BigRational> {
    if qs.is_empty() || qs.iter().any(HomogeneousPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs: Vec<&RationalFunction> = qs.iter().flat_map(|q| q.coefficients()).collect();
    Ok(family_height(coeffs.iter().copied()))
}

/// `lambda_{p,Q}(x) = (ord_p Q(x) - d e_p(x) - e_p(Q)) deg p`.
pub fn weil(p: &Place, q: &HomogeneousPoly, x: &ProjectivePoint) -> Result<BigRational> {
    // Both sides are invariant under scaling, so work with polynomial
    // coordinates and coefficients.
    let x = &x.integral();
    let q = &q.scale(&RationalFunction::from_poly(denominator_lcm(q.coefficients())));
    let qx = q.eval(x.coords())?;
    if qx.is_zero() {
        return Err(Error::PointOnDivisor { index: 0 });
    }
    let e_x = gauss_order_point(p, x);
    let e_q = gauss_order_poly(p, std::slice::from_ref(q))?;
    let v = (order_at(&qx, p)? - i64::from(q.degree()) * e_x - e_q) * p.degree();
    debug_assert!(v >= 0);
    let v = BigRational::from_integer(BigInt::from(v));
    debug_assert!(!v.is_zero() || v >= BigRational::zero());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational_function as rf;

    fn pt(v: &[&str]) -> ProjectivePoint {
        ProjectivePoint::parse(v).unwrap()
    }
    fn hp(s: &str, n: usize) -> HomogeneousPoly {
        HomogeneousPoly::parse(s, n).unwrap()
    }
    fn place(s: &str) -> Place {
        Place::parse(s).unwrap()
    }
    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn gauss_orders() {
        assert_eq!(gauss_order_point(&place("t"), &pt(&["t", "1"])), 0);
        assert_eq!(gauss_order_point(&Place::Infinity, &pt(&["t^2", "t", "1"])), -2);
        assert_eq!(gauss_order_point(&place("t-1"), &pt(&["(t-1)^2", "(t-1)^3"])), 2);
        assert_eq!(gauss_order_poly(&place("t"), &[hp("X0 - X1", 2)]).unwrap(), 0);
        assert_eq!(gauss_order_poly(&Place::Infinity, &[hp("t*X0^2 + X1^2", 2)]).unwrap(), -1);
        assert_eq!(gauss_order_poly(&place("t"), &[hp("t*X0", 2), hp("t^2*X1", 2)]).unwrap(), 1);
        assert_eq!(
            gauss_order_poly(&place("t"), &[HomogeneousPoly::zero(2, 1)]),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn heights() {
        assert_eq!(height_point(&pt(&["t", "1"])), r(1));
        assert_eq!(height_point(&pt(&["t^2", "t", "1"])), r(2));
        assert_eq!(height_point(&pt(&["1", "1", "1"])), r(0));
        assert_eq!(height_elem(&rf("t^2/(t-1)").unwrap()).unwrap(), r(2));
        assert_eq!(height_elem(&rf("3").unwrap()).unwrap(), r(0));
        assert_eq!(height_elem(&rf("t").unwrap()).unwrap(), r(1));
        assert_eq!(height_poly_family(&[hp("X0 + X1", 2)]).unwrap(), r(0));
        assert_eq!(height_poly_family(&[hp("t*X0", 2)]).unwrap(), r(0));
        assert_eq!(height_poly_family(&[hp("X0", 2), hp("t*X1", 2)]).unwrap(), r(1));
    }

    #[test]
    fn weil_examples() {
        let q = hp("X0 - X1", 2);
        let x = pt(&["t", "1"]);
        assert_eq!(weil(&place("t-1"), &q, &x).unwrap(), r(1));
        assert_eq!(weil(&place("t"), &q, &x).unwrap(), r(0));
        assert_eq!(weil(&Place::Infinity, &hp("X0", 2), &pt(&["1", "t"])).unwrap(), r(1));
        assert!(matches!(
            weil(&place("t"), &q, &pt(&["1", "1"])),
            Err(Error::PointOnDivisor { .. })
        ));
    }

    #[test]
    fn point_validation() {
        assert!(ProjectivePoint::parse(&["0", "0"]).is_err());
        assert!(ProjectivePoint::parse::<&str>(&[]).is_err());
    }
}

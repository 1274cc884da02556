use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::{factor, is_irreducible};
use super::qpoly::QPoly;
use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::parse::parse_rational_function;

/// A place of Q(t): a monic irreducible polynomial of Q[t], or infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(QPoly),
    Infinity,
}

impl Place {
    /// Checks that `p` is monic and irreducible over Q.
    pub fn finite(p: QPoly) -> Result<Place> {
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidPlace(format!("{p} is constant")));
        }
        if !num_traits::One::is_one(&p.leading()) {
            return Err(Error::InvalidPlace(format!("{p} is not monic")));
        }
        if !is_irreducible(&p) {
            return Err(Error::InvalidPlace(format!("{p} is reducible over Q")));
        }
        Ok(Place::Finite(p))
    }

    /// Parses `"inf"` or a monic irreducible polynomial such as `"t^2+2"`.
    pub fn parse(text: &str) -> Result<Place> {
        let trimmed = text.trim();
        if trimmed == "inf" || trimmed == "infinity" {
            return Ok(Place::Infinity);
        }
        let f = parse_rational_function(trimmed)?;
        if !f.denominator().is_one() {
            return Err(Error::InvalidPlace(format!("{trimmed} is not a polynomial")));
        }
        Place::finite(f.numerator().clone())
    }

    pub fn degree(&self) -> i64 {
        match self {
            Place::Finite(p) => p.degree().unwrap() as i64,
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Place::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn multiplicity(f: &QPoly, p: &QPoly) -> i64 {
    let mut k = 0;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        cur = q;
        k += 1;
    }
}

/// `ord_p(f)`; additive under multiplication.
pub fn order_at(f: &RationalFunction, p: &Place) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(match p {
        Place::Finite(g) => multiplicity(f.numerator(), g) - multiplicity(f.denominator(), g),
        Place::Infinity => {
            f.denominator().degree().unwrap() as i64 - f.numerator().degree().unwrap() as i64
        }
    })
}

/// The principal divisor of `f`: places with nonzero order. Panics if the
/// sum formula `sum ord_p(f) deg p = 0` fails, which would indicate a
/// factorization bug.
pub fn divisor(f: &RationalFunction) -> Result<BTreeMap<Place, i64>> {
    if f.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut div = BTreeMap::new();
    for (g, e) in factor(f.numerator()) {
        *div.entry(Place::Finite(g)).or_insert(0) += e as i64;
    }
    for (g, e) in factor(f.denominator()) {
        *div.entry(Place::Finite(g)).or_insert(0) -= e as i64;
    }
    let inf = order_at(f, &Place::Infinity)?;
    if inf != 0 {
        div.insert(Place::Infinity, inf);
    }
    div.retain(|_, v| *v != 0);
    let total: i64 = div.iter().map(|(p, o)| o * p.degree()).sum();
    assert_eq!(total, 0, "sum formula violated for {f}");
    Ok(div)
}

/// Places where some element of the family has nonzero order, plus infinity.
pub fn support_of<'a, I>(elements: I) -> BTreeSet<Place>
where
    I: IntoIterator<Item = &'a RationalFunction>,
{
    let mut out = BTreeSet::new();
    out.insert(Place::Infinity);
    let mut seen_polys = BTreeSet::new();
    for f in elements {
        if f.is_zero() || f.is_constant() {
            continue;
        }
        for part in [f.numerator(), f.denominator()] {
            if part.is_constant() || !seen_polys.insert(part.clone()) {
                continue;
            }
            for (g, _) in factor(part) {
                out.insert(Place::Finite(g));
            }
        }
    }
    out
}

/// A finite set S of places.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaceSet {
    places: BTreeSet<Place>,
}

impl PlaceSet {
    /// Rejects duplicates.
    pub fn new<I: IntoIterator<Item = Place>>(places: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in places {
            if !set.insert(p.clone()) {
                return Err(Error::InvalidPlace(format!("duplicate place {p}")));
            }
        }
        Ok(PlaceSet { places: set })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.places.iter()
    }

    pub fn cardinality(&self) -> usize {
        self.places.len()
    }

    /// `sum deg p` over the set.
    pub fn degree(&self) -> i64 {
        self.places.iter().map(Place::degree).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational_function as rf;

    fn place(s: &str) -> Place {
        Place::parse(s).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_at(&rf("(t-1)^2/(t+2)").unwrap(), &place("t-1")).unwrap(), 2);
        assert_eq!(order_at(&rf("t^3+1").unwrap(), &Place::Infinity).unwrap(), -3);
        assert_eq!(order_at(&rf("5").unwrap(), &place("t")).unwrap(), 0);
        assert_eq!(order_at(&rf("0").unwrap(), &place("t")), Err(Error::ZeroElement));
    }

    #[test]
    fn divisor_examples() {
        let d = divisor(&rf("(t^2-1)/t").unwrap()).unwrap();
        let expected: BTreeMap<Place, i64> = [
            (place("t-1"), 1),
            (place("t+1"), 1),
            (place("t"), -1),
            (Place::Infinity, -1),
        ]
        .into_iter()
        .collect();
        assert_eq!(d, expected);
        assert!(divisor(&rf("7").unwrap()).unwrap().is_empty());
        let d = divisor(&rf("t").unwrap()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&place("t")], 1);
        assert_eq!(d[&Place::Infinity], -1);
    }

    #[test]
    fn place_validation() {
        assert!(Place::parse("t^2+2").is_ok());
        assert_eq!(Place::parse("t^2+2").unwrap().degree(), 2);
        assert!(matches!(Place::parse("t^2-1"), Err(Error::InvalidPlace(_))));
        assert!(matches!(Place::parse("2*t+1"), Err(Error::InvalidPlace(_))));
        assert!(matches!(Place::parse("3"), Err(Error::InvalidPlace(_))));
        assert_eq!(Place::parse(" inf "), Ok(Place::Infinity));
    }

    #[test]
    fn place_set_rejects_duplicates() {
        assert!(PlaceSet::new([place("t"), place("t")]).is_err());
        let s = PlaceSet::new([place("t"), place("t^2+1"), Place::Infinity]).unwrap();
        assert_eq!(s.cardinality(), 3);
        assert_eq!(s.degree(), 4);
    }
}

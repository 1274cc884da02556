//! Exact linear algebra over K = Q(t).
//!
//! Ranks and pivot columns come from fraction-free (Bareiss) elimination
//! over `Z[t]` after clearing denominators row by row; the reduced
//! row-echelon form is then finished over K. [`IncrementalEchelon`] is a
//! semi-echelon over K used for greedy independence tests and for solving
//! membership problems with combination tracking.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::function_field::{QPoly, RationalFunction, ZPoly};

/// Reduced row-echelon form of a matrix over K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    /// Pivot columns, strictly increasing.
    pub pivots: Vec<usize>,
    /// One row per pivot; entry `pivots[k]` of row `k` is 1 and every other
    /// row is zero there.
    pub rows: Vec<Vec<RationalFunction>>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `v` minus its projection on the row space along pivot coordinates;
    /// the result is supported on non-pivot columns.
    pub fn reduce(&self, v: &[RationalFunction]) -> Vec<RationalFunction> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            axpy(&mut out, &-&c, row);
        }
        out
    }

    pub fn contains(&self, v: &[RationalFunction]) -> bool {
        self.reduce(v).iter().all(RationalFunction::is_zero)
    }
}

/// `y += a * x`.
fn axpy(y: &mut [RationalFunction], a: &RationalFunction, x: &[RationalFunction]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = &*yi + &(a * xi);
        }
    }
}

/// Multiplies a row over K by a common denominator so every entry lies in
/// `Z[t]`.
fn clear_denominators(row: &[RationalFunction]) -> Vec<ZPoly> {
    let mut den = QPoly::one();
    for x in row.iter().filter(|x| !x.is_zero()) {
        let d = x.denominator();
        if !d.is_one() {
            let g = den.gcd(d);
            den = &den * &d.exact_div(&g);
        }
    }
    let polys: Vec<QPoly> = row
        .iter()
        .map(|x| {
            if x.is_zero() {
                QPoly::zero()
            } else {
                x.numerator() * &den.exact_div(x.denominator())
            }
        })
        .collect();
    let coeff_den = polys
        .iter()
        .flat_map(|p| p.coeffs())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = BigRational::from_integer(coeff_den);
    polys
        .iter()
        .map(|p| {
            ZPoly::new(
                p.coeffs()
                    .iter()
                    .map(|c| (c * &scale).to_integer())
                    .collect(),
            )
        })
        .collect()
}

fn to_k(z: &ZPoly) -> RationalFunction {
    RationalFunction::from_poly(QPoly::from_bigints(&z.0))
}

/// Fraction-free forward elimination. Pivot rule: columns left to right;
/// within a column the first remaining row (in input order) with a nonzero
/// entry. Returns the pivot columns and the echelon rows over `Z[t]`.
pub fn bareiss_echelon(rows: &[Vec<RationalFunction>], ncols: usize) -> (Vec<usize>, Vec<Vec<ZPoly>>) {
    let mut a: Vec<Vec<ZPoly>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "row length");
            clear_denominators(r)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let nrows = a.len();
    let mut prev = ZPoly::new(vec![BigInt::one()]);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        // keep the remaining rows in input order
        let row = a.remove(p);
        a.insert(r, row);
        let (head, tail) = a.split_at_mut(r + 1);
        let piv_row = &head[r];
        let piv = &piv_row[c];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let mut v = piv.mul(&row[j]);
                if !lead.is_zero() && !piv_row[j].is_zero() {
                    v = v.sub(&lead.mul(&piv_row[j]));
                }
                row[j] = if v.is_zero() {
                    v
                } else {
                    v.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (pivots, a)
}

/// Reduced row-echelon form over K with the Bareiss pivot choice.
pub fn rref(rows: &[Vec<RationalFunction>], ncols: usize) -> Rref {
    let (pivots, zrows) = bareiss_echelon(rows, ncols);
    let mut out: Vec<Vec<RationalFunction>> = zrows
        .iter()
        .map(|r| r.iter().map(to_k).collect())
        .collect();
    for k in (0..out.len()).rev() {
        let p = pivots[k];
        let inv = out[k][p].inv().expect("pivot nonzero");
        for x in out[k].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = out[k].clone();
        for row in out.iter_mut().take(k) {
            let c = row[p].clone();
            if !c.is_zero() {
                axpy(row, &-&c, &pivot_row);
            }
        }
    }
    Rref {
        ncols,
        pivots,
        rows: out,
    }
}

pub fn rank(rows: &[Vec<RationalFunction>], ncols: usize) -> usize {
    bareiss_echelon(rows, ncols).0.len()
}

/// A growing set of independent vectors kept in semi-echelon form: each
/// stored row has a pivot column at which all later rows vanish.
///
/// With tracking enabled every stored row remembers its expression as a
/// combination of the inserted input vectors (by insertion index).
#[derive(Clone, Debug)]
pub struct IncrementalEchelon {
    ncols: usize,
    rows: Vec<(usize, Vec<RationalFunction>)>,
    combos: Option<Vec<BTreeMap<usize, RationalFunction>>>,
    inserted: usize,
}

impl IncrementalEchelon {
    pub fn new(ncols: usize, track: bool) -> Self {
        IncrementalEchelon {
            ncols,
            rows: Vec::new(),
            combos: track.then(Vec::new),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Residual of `v` after elimination and, when tracking, the combination
    /// `c` of inserted inputs with `v = residual + sum c_k input_k`.
    pub fn reduce(&self, v: &[RationalFunction]) -> (Vec<RationalFunction>, BTreeMap<usize, RationalFunction>) {
        assert_eq!(v.len(), self.ncols, "vector length");
        let mut out = v.to_vec();
        let mut combo: BTreeMap<usize, RationalFunction> = BTreeMap::new();
        for (k, (p, row)) in self.rows.iter().enumerate() {
            if out[*p].is_zero() {
                continue;
            }
            let f = &out[*p] / &row[*p];
            axpy(&mut out, &-&f, row);
            if let Some(combos) = &self.combos {
                for (idx, c) in &combos[k] {
                    let e = combo.entry(*idx).or_insert_with(RationalFunction::zero);
                    *e = &*e + &(&f * c);
                }
            }
        }
        combo.retain(|_, c| !c.is_zero());
        (out, combo)
    }

    pub fn is_independent(&self, v: &[RationalFunction]) -> bool {
        self.reduce(v).0.iter().any(|x| !x.is_zero())
    }

    /// Inserts `v`; returns whether it enlarged the span. Every call consumes
    /// one input index, accepted or not.
    pub fn insert(&mut self, v: &[RationalFunction]) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (res, combo) = self.reduce(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if let Some(combos) = &mut self.combos {
            // res = v - sum combo_k input_k
            let mut c: BTreeMap<usize, RationalFunction> =
                combo.into_iter().map(|(k, x)| (k, -x)).collect();
            c.insert(idx, RationalFunction::one());
            combos.push(c);
        }
        self.rows.push((p, res));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational_function as rf;

    fn m(rows: &[&[&str]]) -> Vec<Vec<RationalFunction>> {
        rows.iter()
            .map(|r| r.iter().map(|s| rf(s).unwrap()).collect())
            .collect()
    }

    #[test]
    fn rank_and_pivots() {
        let a = m(&[&["1", "2", "3"], &["2", "4", "6"], &["0", "1", "t"]]);
        let e = rref(&a, 3);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rows[0], m(&[&["1", "0", "3-2*t"]])[0]);
        assert_eq!(rank(&m(&[&["t", "1"], &["t^2", "t"]]), 2), 1);
        assert_eq!(rank(&m(&[&["1/t", "1"], &["1", "1/(t+1)"]]), 2), 2);
    }

    #[test]
    fn rref_matches_incremental_span() {
        let a = m(&[
            &["0", "t", "1", "0"],
            &["1/2", "0", "t-1", "3"],
            &["1", "2*t", "2*t", "6"],
            &["0", "0", "1", "1/t"],
        ]);
        let e = rref(&a, 4);
        let mut inc = IncrementalEchelon::new(4, false);
        for r in &a {
            inc.insert(r);
        }
        assert_eq!(e.rank(), inc.rank());
        for r in &a {
            assert!(e.contains(r));
        }
    }

    #[test]
    fn tracking_recovers_combinations() {
        let a = m(&[&["1", "t", "0"], &["0", "1", "1"], &["1", "0", "1"]]);
        let mut inc = IncrementalEchelon::new(3, true);
        for r in &a {
            inc.insert(r);
        }
        let target = m(&[&["2", "t+1", "1"]])[0].clone();
        let (res, combo) = inc.reduce(&target);
        assert!(res.iter().all(|x| x.is_zero()));
        let mut sum = vec![RationalFunction::zero(); 3];
        for (k, c) in &combo {
            axpy(&mut sum, c, &a[*k]);
        }
        assert_eq!(sum, target);
    }
}

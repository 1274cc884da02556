//! Upper and lower bounds for Hilbert functions, power sums, and the
//! effective degree threshold for the ratio inequality
//! `m (H(m) + 1) / sum_{i=1}^{m/d-1} H(id) <= d (n + 1 + eps)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded_ideal::binomial_big;

/// Hilbert values by degree.
pub type HilbertTable = BTreeMap<u64, BigInt>;

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `C(a, b)` with `C(a, b) = 0` for `a < b`, including negative `a`.
pub fn binom_signed(a: i64, b: u64) -> BigInt {
    if a < 0 || (a as u64) < b {
        return BigInt::zero();
    }
    BigInt::from(binomial_big(a as u64, b))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * big(i))
}

/// `Delta * C(m + n, n)`.
pub fn chardin_upper(m: u64, n: u64, delta: u64) -> BigInt {
    big(delta) * binom_signed((m + n) as i64, n)
}

/// `C(m+n+1, n+1) - C(m-Delta+n+1, n+1)`; exact for hypersurfaces of degree
/// `Delta` in `P^{n+1}`.
pub fn sombra_lower(m: u64, n: u64, delta: u64) -> BigInt {
    binom_signed((m + n + 1) as i64, n + 1) - binom_signed(m as i64 - delta as i64 + n as i64 + 1, n + 1)
}

/// `1^k + ... + l^k`.
pub fn power_sum(k: u32, l: u64) -> BigInt {
    (1..=l).map(|i| big(i).pow(k)).sum()
}

/// `((l+1)^{k+1}/(k+1) - (l+1)^k/2, (l+1)^{k+1}/(k+1))`; both are checked
/// against the exact sum.
pub fn power_sum_bounds(k: u32, l: u64) -> (BigRational, BigRational) {
    let base = big(l + 1);
    let upper = BigRational::new(base.pow(k + 1), big(u64::from(k) + 1));
    let lower = &upper - BigRational::new(base.pow(k), big(2));
    let s = rat(power_sum(k, l));
    assert!(lower <= s && s <= upper, "power-sum bounds fail at k={k}, l={l}");
    (lower, upper)
}

/// `G(z) = C(z+n+1, n+1) - C(z-Delta+n+1, n+1)`.
pub fn g_value(z: u64, n: u64, delta: u64) -> BigInt {
    sombra_lower(z, n, delta)
}

/// `T(t) = sum_{i=1}^t G(i d)`; `T(0) = 0`.
pub fn t_value(t: u64, n: u64, delta: u64, d: u64) -> BigInt {
    (1..=t).map(|i| g_value(i * d, n, delta)).sum()
}

/// The explicit lower bound for `d T(m/d - 1)`:
/// `Delta/(n+1)! m^{n+1} - (Delta d + Delta |n+2-Delta|)/(2 n!) m^n - (n+1)^3 (2 Delta)^{n+1} m^{n-1}`.
pub fn t_lower_bound(m: u64, n: u64, delta: u64, d: u64) -> BigRational {
    let [c2, c1, c0] = t_lower_coeffs(n, delta, d);
    let mm = rat(big(m));
    let pow = |e: u64| -> BigRational {
        let mut acc = BigRational::one();
        for _ in 0..e {
            acc = &acc * &mm;
        }
        acc
    };
    c2 * pow(n + 1) + c1 * pow(n) + c0 * pow(n - 1)
}

/// Coefficients of `m^{n+1}`, `m^n`, `m^{n-1}` in [`t_lower_bound`].
fn t_lower_coeffs(n: u64, delta: u64, d: u64) -> [BigRational; 3] {
    let dl = big(delta);
    let lead = BigRational::new(dl.clone(), factorial(n + 1));
    let gap = (n as i64 + 2 - delta as i64).abs() as u64;
    let second = -BigRational::new(&dl * big(d) + &dl * big(gap), big(2) * factorial(n));
    let third = -rat(big(n + 1).pow(3) * (big(2) * &dl).pow((n + 1) as u32));
    [lead, second, third]
}

/// Dense coefficient list (index = power of m) of a polynomial in m.
type Dense = Vec<BigRational>;

fn add_at(p: &mut Dense, e: usize, c: &BigRational) {
    if p.len() <= e {
        p.resize(e + 1, BigRational::zero());
    }
    p[e] = &p[e] + c;
}

/// `1 + max |a_i / a_lead|`: every real root is below this value.
fn cauchy_bound(p: &Dense) -> BigRational {
    let mut p = p.clone();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let lead = p.last().expect("nonzero polynomial").clone();
    assert!(lead.is_positive(), "leading coefficient must be positive");
    let max = p[..p.len() - 1]
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    BigRational::one() + max
}

/// Smallest multiple of `d` that is at least `a_eps`, where `a_eps` makes the
/// ratio inequality hold for every variety of dimension `n` and degree
/// `Delta` at every `m >= a_eps` with `d | m`.
///
/// Certificate: `H(m) + 1 <= Delta (m+n)^n / n! + 1` and
/// `d sum H(id) >= d T(m/d-1) >= T_lower(m)`, so it suffices that
/// `(n+1+eps) T_lower(m) - m (Delta (m+n)^n / n! + 1)` and `T_lower(m)` are
/// positive. Both are polynomials in `m` with positive leading coefficient;
/// past their Cauchy root bounds they stay positive.
pub fn threshold_a_eps(n: u64, delta: u64, d: u64, eps: &BigRational) -> u64 {
    assert!(n >= 1 && delta >= 1 && d >= 1 && eps.is_positive(), "invalid bound inputs");
    let [c2, c1, c0] = t_lower_coeffs(n, delta, d);
    let n_us = n as usize;
    let mut t_low: Dense = Vec::new();
    add_at(&mut t_low, n_us + 1, &c2);
    add_at(&mut t_low, n_us, &c1);
    add_at(&mut t_low, n_us - 1, &c0);

    let factor = rat(big(n + 1)) + eps;
    let mut p: Dense = t_low.iter().map(|c| c * &factor).collect();
    // subtract m * (Delta/n! * (m+n)^n + 1)
    let scale = BigRational::new(big(delta), factorial(n));
    for k in 0..=n {
        let c = rat(BigInt::from(binomial_big(n, k)) * big(n).pow((n - k) as u32)) * &scale;
        add_at(&mut p, k as usize + 1, &-c);
    }
    add_at(&mut p, 1, &-BigRational::one());

    let bound = std::cmp::max(cauchy_bound(&p), cauchy_bound(&t_low));
    // strictly above the bound
    let b = bound.floor().to_integer() + BigInt::one();
    let b = b.to_u64().expect("threshold fits in u64");
    let a = b.div_ceil(d) * d;
    a.max(2 * d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioCheck {
    #[serde(with = "crate::serialize::rational")]
    pub lhs: BigRational,
    #[serde(with = "crate::serialize::rational")]
    pub rhs: BigRational,
    pub ok: bool,
}

fn lookup(h: &HilbertTable, k: u64) -> Result<&BigInt> {
    h.get(&k).ok_or(Error::MissingTableEntry(k))
}

/// `S(m/d - 1) = sum_{i=1}^{m/d-1} H(id)`.
pub fn s_sum(h: &HilbertTable, m: u64, d: u64) -> Result<BigInt> {
    let top = m / d;
    let mut acc = BigInt::zero();
    for i in 1..top {
        acc += lookup(h, i * d)?;
    }
    Ok(acc)
}

/// Exact comparison of `m (H(m)+1) / S(m/d-1)` with `d (n+1+eps)`.
pub fn ratio_check(h: &HilbertTable, m: u64, d: u64, n: u64, eps: &BigRational) -> Result<RatioCheck> {
    if d == 0 || m % d != 0 || m < 2 * d {
        return Err(Error::PreconditionViolated(format!(
            "ratio check needs d | m and m >= 2d (m={m}, d={d})"
        )));
    }
    let num = big(m) * (lookup(h, m)? + BigInt::one());
    let den = s_sum(h, m, d)?;
    if den.is_zero() {
        return Err(Error::PreconditionViolated("zero denominator sum".into()));
    }
    let lhs = BigRational::new(num, den);
    let rhs = rat(big(d)) * (rat(big(n + 1)) + eps);
    let ok = lhs <= rhs;
    Ok(RatioCheck { lhs, rhs, ok })
}

/// Table of `G(k)` (the exact Hilbert function of a degree-`Delta`
/// hypersurface of dimension `n`) for `0 <= k <= max`.
pub fn hypersurface_table(n: u64, delta: u64, max: u64) -> HilbertTable {
    (0..=max).map(|k| (k, sombra_lower(k, n, delta))).collect()
}

/// Runs [`ratio_check`] with the hypersurface table at every multiple of
/// `d` in `[from, from + width]`. Returns the first failing degree, if any.
pub fn scan_ratio(n: u64, delta: u64, d: u64, eps: &BigRational, from: u64, width: u64) -> Option<u64> {
    let table = hypersurface_table(n, delta, from + width);
    let start = from.div_ceil(d).max(2) * d;
    (start..=from + width)
        .step_by(d as usize)
        .find(|&m| !ratio_check(&table, m, d, n, eps).expect("table covers scan").ok)
}
